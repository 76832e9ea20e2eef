//! Slow, independent reference computations for the test suite.
//!
//! Nothing here shares numerical code with [`crate::mixture`]: the Monte
//! Carlo estimator simulates the averaged experiment directly, and the
//! brute-force masses use naive binomial coefficients with a fixed composite
//! Simpson rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::coverage::{IntervalTable, SweepConfig};
use crate::error::{Error, Result};
use crate::law::TabulatedLaw;
use crate::model::Model;

/// Largest `(n1 + 1)(n2 + 1)` accepted by the brute-force oracle.
pub const BRUTE_FORCE_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(seed: u64) -> Self {
        Self { samples: 200_000, seed }
    }
}

fn theta1_bounds(w1: f64, vartheta: f64) -> (f64, f64) {
    let w2 = 1.0 - w1;
    (((vartheta - w2) / w1).max(0.0), (vartheta / w1).min(1.0))
}

/// Simulated `P{estimator <= u}` at `vartheta` with its binomial standard
/// error.
pub fn mc_cdf(model: &Model, u: f64, vartheta: f64, cfg: &McConfig) -> (f64, f64) {
    if u >= 1.0 {
        return (1.0, 0.0);
    }
    let (n1, n2, w1) = (model.n1(), model.n2(), model.w1());
    let w2 = 1.0 - w1;
    let (a, b) = theta1_bounds(w1, vartheta);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut hits = 0usize;
    for _ in 0..cfg.samples {
        let theta1: f64 = a + (b - a) * rng.random::<f64>();
        let theta2 = ((vartheta - w1 * theta1) / w2).clamp(0.0, 1.0);
        let k1 = Binomial::new(n1 as u64, theta1.clamp(0.0, 1.0)).unwrap().sample(&mut rng);
        let k2 = Binomial::new(n2 as u64, theta2).unwrap().sample(&mut rng);
        let est = w1 * k1 as f64 / n1 as f64 + w2 * k2 as f64 / n2 as f64;
        if est <= u + 1e-12 {
            hits += 1;
        }
    }
    let n = cfg.samples as f64;
    let p = hits as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn choose(n: u32, k: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

fn naive_pmf(n: u32, k: u32, p: f64) -> f64 {
    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Atom masses at `vartheta` from a composite Simpson rule with `panels`
/// panels over the `theta1` range, indexed like the support grid.
pub fn brute_masses(model: &Model, vartheta: f64, panels: usize) -> Result<Vec<f64>> {
    let (n1, n2, w1) = (model.n1(), model.n2(), model.w1());
    let cells = (n1 as usize + 1) * (n2 as usize + 1);
    if cells > BRUTE_FORCE_LIMIT {
        return Err(Error::DesignTooLarge {
            cells,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let w2 = 1.0 - w1;
    let (a, b) = theta1_bounds(w1, vartheta);
    let panels = panels.max(2) + panels % 2;
    let h = (b - a) / panels as f64;

    let grid = model.grid();
    let mut masses = vec![0.0; grid.len()];
    for k1 in 0..=n1 {
        for k2 in 0..=n2 {
            let mut sum = 0.0;
            for i in 0..=panels {
                let theta1 = a + h * i as f64;
                let theta2 = ((vartheta - w1 * theta1) / w2).clamp(0.0, 1.0);
                let f = naive_pmf(n1, k1, theta1.clamp(0.0, 1.0)) * naive_pmf(n2, k2, theta2);
                let weight = if i == 0 || i == panels {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                sum += weight * f;
            }
            // average over the range: (h/3) sum / (b - a)
            let mass = sum / (3.0 * panels as f64);
            let value = w1 * k1 as f64 / n1 as f64 + w2 * k2 as f64 / n2 as f64;
            let idx = grid.index_of(value)?;
            masses[idx] += mass;
        }
    }
    Ok(masses)
}

/// Coverage at `vartheta` with the production intervals and brute-force
/// masses.
pub fn brute_coverage(model: &Model, vartheta: f64, cfg: &SweepConfig, panels: usize) -> Result<f64> {
    let masses = brute_masses(model, vartheta, panels)?;
    let law = TabulatedLaw::build(model.clone(), &cfg.quad)?;
    let table = IntervalTable::build(&law, cfg)?;
    let mut covered = 0.0;
    for (idx, mass) in masses.iter().enumerate() {
        for j in 0..table.y_count() {
            let (lo, hi) = table.bounds(idx, j);
            if lo < vartheta && vartheta < hi {
                covered += mass;
            }
        }
    }
    Ok(covered / table.y_count() as f64)
}
