//! Shortest and randomized confidence intervals for a weighted sum of two
//! binomial proportions, `vartheta = w1 theta1 + w2 theta2`, based on the
//! estimator `w1 k1/n1 + w2 k2/n2` and its law averaged over all
//! `(theta1, theta2)` sharing the same `vartheta`.

pub mod binom;
pub mod ci;
pub mod coverage;
pub mod error;
pub mod law;
pub mod mixture;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod solve;

pub use ci::{
    classify_sidedness, compute_interval, compute_interval_with, reflect, shortest_ci,
    shortest_randomized_ci, standard_ci, Interval, IntervalEngine, IntervalRequest, Method, Sidedness,
    Sides, SolverConfig, TailParams,
};
pub use coverage::{sweep, CoveragePoint, IntervalTable, SweepConfig};
pub use error::{Error, Result};
pub use law::{Law, QuadratureLaw, TabulatedLaw};
pub use mixture::QuadratureConfig;
pub use model::{Model, SupportGrid};
