//! Confidence intervals for `vartheta = w1 theta1 + w2 theta2`.
//!
//! For an observed support point `u` and upper-tail mass `gamma1`, the upper
//! end solves `F_u(vartheta) = gamma1` and the lower end solves
//! `G_u(vartheta) = gamma + gamma1`, where `G_u = F_{u-}` is the strict CDF.
//! Both are monotone in `vartheta`, so each equation has a single root.
//! The standard interval fixes `gamma1 = (1 - gamma)/2`; the shortest one
//! chooses `gamma1` in `[0, 1 - gamma]` by golden-section search on the
//! length. The randomized variant blends the neighboring atom in with an
//! auxiliary uniform `y`:
//!
//! ```text
//! lower:  F_{u-}(vartheta) + y g(u;  vartheta) = gamma + gamma1
//! upper:  F_u(vartheta)    + y g(u+; vartheta) = gamma1
//! ```
//!
//! Points above one half are handled by exchanging successes and failures
//! (`u -> 1 - u`, `gamma1 -> 1 - gamma - gamma1`, `y -> 1 - y`) and
//! complementing the resulting interval.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::law::{Law, QuadratureLaw};
use crate::mixture::QuadratureConfig;
use crate::model::{Model, GRID_TOL};
use crate::solve::{brent, golden_section};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// bracket width at which endpoint refinement stops
    pub root_tol: f64,
    /// bracket width at which the tail-split search stops
    pub golden_tol: f64,
    /// endpoints are searched on `[bracket_eps, 1 - bracket_eps]`
    pub bracket_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            root_tol: 1e-12,
            golden_tol: 1e-10,
            bracket_eps: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// equal tails, `gamma1 = (1 - gamma)/2`
    Standard,
    /// tail split minimizing the length
    Shortest,
    /// shortest randomized interval
    Randomized,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Shortest => "shortest",
            Method::Randomized => "randomized",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Method::Standard),
            "shortest" => Ok(Method::Shortest),
            "randomized" => Ok(Method::Randomized),
            other => Err(Error::InvalidRequest(format!("unknown method {other:?}"))),
        }
    }
}

/// Which ends of a computed interval carry information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sides {
    TwoSided,
    /// lower end only; the upper end is 1
    LowerOnly,
    /// upper end only; the lower end is 0
    UpperOnly,
}

impl Sides {
    pub fn as_str(self) -> &'static str {
        match self {
            Sides::TwoSided => "two_sided",
            Sides::LowerOnly => "lower_only",
            Sides::UpperOnly => "upper_only",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Sides::TwoSided => Sides::TwoSided,
            Sides::LowerOnly => Sides::UpperOnly,
            Sides::UpperOnly => Sides::LowerOnly,
        }
    }
}

/// Predicted shape of the shortest interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// upper-tail mass, in `[0, 1 - gamma]`
    pub gamma1: f64,
    pub length: f64,
    pub sides: Sides,
    pub method: Method,
    /// computed at `1 - u` and complemented
    pub reflected: bool,
    /// auxiliary uniform, randomized intervals only
    pub y: Option<f64>,
}

impl Interval {
    fn new(lower: f64, upper: f64, gamma1: f64, method: Method, y: Option<f64>) -> Self {
        let sides = if lower <= 0.0 {
            Sides::UpperOnly
        } else if upper >= 1.0 {
            Sides::LowerOnly
        } else {
            Sides::TwoSided
        };
        Self {
            lower,
            upper,
            gamma1,
            length: upper - lower,
            sides,
            method,
            reflected: false,
            y,
        }
    }

    /// Open-interval membership.
    pub fn contains(&self, vartheta: f64) -> bool {
        self.lower < vartheta && vartheta < self.upper
    }

    /// The interval for the relabeled problem (successes and failures
    /// exchanged). `y` is left for the caller to map.
    fn reflected(self, gamma: f64) -> Self {
        Self {
            lower: 1.0 - self.upper,
            upper: 1.0 - self.lower,
            gamma1: ((1.0 - gamma) - self.gamma1).max(0.0),
            length: self.length,
            sides: self.sides.flipped(),
            method: self.method,
            reflected: !self.reflected,
            y: self.y,
        }
    }
}

/// Solves the endpoint equations against a [`Law`].
pub struct IntervalEngine<'a, L: Law + ?Sized> {
    law: &'a L,
    cfg: SolverConfig,
}

impl<'a, L: Law + ?Sized> IntervalEngine<'a, L> {
    pub fn new(law: &'a L, cfg: SolverConfig) -> Self {
        Self { law, cfg }
    }

    pub fn law(&self) -> &L {
        self.law
    }

    fn last(&self) -> usize {
        self.law.model().grid().len() - 1
    }

    /// Root of the decreasing `f(vartheta) = target`; collapses to 1 when
    /// the root lies above the search bracket.
    fn solve_upper<F>(&self, stage: &'static str, target: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if target <= 0.0 {
            return Ok(1.0);
        }
        let (lo, hi) = (self.cfg.bracket_eps, 1.0 - self.cfg.bracket_eps);
        let f_lo = f(lo)? - target;
        let f_hi = f(hi)? - target;
        if f_lo < 0.0 {
            return Err(Error::RootBracketFailure {
                stage,
                target,
                lo,
                hi,
                f_lo: f_lo + target,
                f_hi: f_hi + target,
            });
        }
        if f_hi >= 0.0 {
            return Ok(1.0);
        }
        brent(|t| Ok(f(t)? - target), lo, hi, f_lo, f_hi, self.cfg.root_tol)
    }

    /// Root of the decreasing `f(vartheta) = target`; collapses to 0 when
    /// the target is not attained above the search bracket.
    fn solve_lower<F>(&self, stage: &'static str, target: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if target >= 1.0 {
            return Ok(0.0);
        }
        let (lo, hi) = (self.cfg.bracket_eps, 1.0 - self.cfg.bracket_eps);
        let f_lo = f(lo)? - target;
        if f_lo <= 0.0 {
            return Ok(0.0);
        }
        let f_hi = f(hi)? - target;
        if f_hi > 0.0 {
            return Err(Error::RootBracketFailure {
                stage,
                target,
                lo,
                hi,
                f_lo: f_lo + target,
                f_hi: f_hi + target,
            });
        }
        brent(|t| Ok(f(t)? - target), lo, hi, f_lo, f_hi, self.cfg.root_tol)
    }

    /// Upper end at atom `idx`: `F_u(vartheta) = gamma1`.
    pub fn endpoint_upper(&self, idx: usize, gamma1: f64) -> Result<f64> {
        if idx == self.last() {
            return Ok(1.0);
        }
        self.solve_upper("upper endpoint", gamma1, |t| self.law.cdf_at(idx, t))
    }

    /// Lower end at atom `idx`: `G_u(vartheta) = gamma2`.
    pub fn endpoint_lower(&self, idx: usize, gamma2: f64) -> Result<f64> {
        if idx == 0 {
            return Ok(0.0);
        }
        self.solve_lower("lower endpoint", gamma2, |t| self.law.cdf_at(idx - 1, t))
    }

    /// Randomized upper end: `F_u + y g(u+) = gamma1`.
    pub fn randomized_upper(&self, idx: usize, y: f64, gamma1: f64) -> Result<f64> {
        if idx == self.last() {
            return Ok(1.0);
        }
        let next = Some(idx + 1);
        self.solve_upper("randomized upper endpoint", gamma1, |t| {
            self.law.blend(Some(idx), next, y, t)
        })
    }

    /// Randomized lower end: `F_{u-} + y g(u) = gamma2`.
    pub fn randomized_lower(&self, idx: usize, y: f64, gamma2: f64) -> Result<f64> {
        if idx == 0 {
            return Ok(0.0);
        }
        self.solve_lower("randomized lower endpoint", gamma2, |t| {
            self.law.blend(Some(idx - 1), Some(idx), y, t)
        })
    }

    /// `(lower, upper)` at atom `idx` for the split `gamma1`; randomized when
    /// `y` is given. No reflection is applied.
    pub fn endpoints(&self, idx: usize, gamma: f64, gamma1: f64, y: Option<f64>) -> Result<(f64, f64)> {
        let span = 1.0 - gamma;
        let gamma2 = if gamma1 >= span { 1.0 } else { gamma + gamma1 };
        match y {
            None => Ok((self.endpoint_lower(idx, gamma2)?, self.endpoint_upper(idx, gamma1)?)),
            Some(y) => Ok((
                self.randomized_lower(idx, y, gamma2)?,
                self.randomized_upper(idx, y, gamma1)?,
            )),
        }
    }

    fn reflects(&self, idx: usize) -> bool {
        self.law.model().grid().value(idx) > 0.5 + GRID_TOL
    }

    /// Equal tails. With `y`, the endpoints solve the randomized equations,
    /// which is the natural baseline for a randomized shortest interval.
    pub fn standard(&self, idx: usize, gamma: f64, y: Option<f64>) -> Result<Interval> {
        let gamma1 = 0.5 * (1.0 - gamma);
        if let Some(y) = y {
            if self.reflects(idx) {
                let mirror = self.law.model().grid().mirror(idx);
                let (lower, upper) = self.endpoints(mirror, gamma, gamma1, Some(1.0 - y))?;
                let iv = Interval::new(lower, upper, gamma1, Method::Standard, None).reflected(gamma);
                return Ok(Interval { y: Some(y), ..iv });
            }
        }
        let (lower, upper) = self.endpoints(idx, gamma, gamma1, y)?;
        Ok(Interval::new(lower, upper, gamma1, Method::Standard, y))
    }

    pub fn shortest(&self, idx: usize, gamma: f64) -> Result<Interval> {
        if self.reflects(idx) {
            let mirror = self.law.model().grid().mirror(idx);
            return Ok(self.optimized(mirror, gamma, None)?.reflected(gamma));
        }
        self.optimized(idx, gamma, None)
    }

    pub fn randomized(&self, idx: usize, gamma: f64, y: f64) -> Result<Interval> {
        if self.reflects(idx) {
            let mirror = self.law.model().grid().mirror(idx);
            let iv = self.optimized(mirror, gamma, Some(1.0 - y))?.reflected(gamma);
            return Ok(Interval { y: Some(y), ..iv });
        }
        self.optimized(idx, gamma, Some(y))
    }

    /// Minimizes the length over `gamma1 in [0, 1 - gamma]` at atom `idx`
    /// as given, without reflecting points above one half. The golden
    /// section result is compared against both ends of the range, and a
    /// result within `golden_tol` of an end is moved onto it, so one-sided
    /// optima come out with an exact 0 or 1 endpoint.
    pub fn optimized(&self, idx: usize, gamma: f64, y: Option<f64>) -> Result<Interval> {
        let span = 1.0 - gamma;
        let length = |g1: f64| self.endpoints(idx, gamma, g1, y).map(|(l, u)| u - l);
        let found = golden_section(length, 0.0, span, self.cfg.golden_tol)?;
        let mut best = found;
        let mut best_len = length(found)?;
        for edge in [0.0, span] {
            let edge_len = length(edge)?;
            if edge_len < best_len || (found - edge).abs() <= self.cfg.golden_tol {
                best = edge;
                best_len = edge_len;
            }
        }
        let (lower, upper) = self.endpoints(idx, gamma, best, y)?;
        let method = if y.is_some() {
            Method::Randomized
        } else {
            Method::Shortest
        };
        Ok(Interval::new(lower, upper, best, method, y))
    }

    pub fn interval(&self, idx: usize, gamma: f64, method: Method, y: Option<f64>) -> Result<Interval> {
        match method {
            Method::Standard => self.standard(idx, gamma, y),
            Method::Shortest => self.shortest(idx, gamma),
            Method::Randomized => {
                let y = y.ok_or_else(|| {
                    Error::InvalidRequest("randomized interval needs an auxiliary uniform y".into())
                })?;
                self.randomized(idx, gamma, y)
            }
        }
    }
}

/// An observed outcome and what to compute from it. Counts are in the
/// user's labeling of the samples.
#[derive(Debug, Clone)]
pub struct IntervalRequest {
    pub model: Model,
    pub k1: u32,
    pub k2: u32,
    /// confidence level, in `(0.5, 1)`
    pub gamma: f64,
    pub method: Method,
    pub y: Option<f64>,
    pub seed: Option<u64>,
}

impl IntervalRequest {
    pub fn new(model: Model, k1: u32, k2: u32, gamma: f64, method: Method) -> Self {
        Self {
            model,
            k1,
            k2,
            gamma,
            method,
            y: None,
            seed: None,
        }
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (n1, n2, _) = self.model.user_design();
        if self.k1 > n1 {
            return Err(Error::InvalidRequest(format!("k1 = {} exceeds n1 = {n1}", self.k1)));
        }
        if self.k2 > n2 {
            return Err(Error::InvalidRequest(format!("k2 = {} exceeds n2 = {n2}", self.k2)));
        }
        if !(self.gamma > 0.5 && self.gamma < 1.0) {
            return Err(Error::InvalidRequest(format!(
                "gamma = {} must lie in (0.5, 1)",
                self.gamma
            )));
        }
        if let Some(y) = self.y {
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::InvalidRequest(format!("y = {y} must lie in [0, 1]")));
            }
        }
        Ok(())
    }

    /// Observed value of the estimator.
    pub fn estimate(&self) -> f64 {
        let (k1, k2) = self.model.canonical_counts(self.k1, self.k2);
        self.model.estimate(k1, k2)
    }

    pub fn atom(&self) -> Result<usize> {
        self.model.grid().index_of(self.estimate())
    }

    /// The given `y`, or one drawn from the seeded generator.
    pub fn resolve_y(&self) -> Result<f64> {
        match (self.y, self.seed) {
            (Some(y), _) => Ok(y),
            (None, Some(seed)) => Ok(draw_uniform(seed)),
            (None, None) => Err(Error::InvalidRequest(
                "randomized interval needs y or a seed".into(),
            )),
        }
    }
}

/// First `U(0, 1)` draw of the ChaCha8 stream seeded with `seed`.
pub fn draw_uniform(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).random::<f64>()
}

/// Computes the requested interval using `law`.
pub fn compute_interval_with<L: Law + ?Sized>(
    law: &L,
    req: &IntervalRequest,
    cfg: &SolverConfig,
) -> Result<Interval> {
    req.validate()?;
    let idx = req.atom()?;
    let engine = IntervalEngine::new(law, *cfg);
    let y = match req.method {
        Method::Randomized => Some(req.resolve_y()?),
        Method::Standard if req.y.is_some() || req.seed.is_some() => Some(req.resolve_y()?),
        Method::Shortest => None,
        Method::Standard => None,
    };
    engine.interval(idx, req.gamma, req.method, y)
}

/// Computes the requested interval by direct quadrature.
pub fn compute_interval(req: &IntervalRequest, cfg: &SolverConfig) -> Result<Interval> {
    let law = QuadratureLaw::new(req.model.clone(), QuadratureConfig::default());
    compute_interval_with(&law, req, cfg)
}

pub fn standard_ci(req: &IntervalRequest, cfg: &SolverConfig) -> Result<Interval> {
    compute_interval(&IntervalRequest { method: Method::Standard, ..req.clone() }, cfg)
}

pub fn shortest_ci(req: &IntervalRequest, cfg: &SolverConfig) -> Result<Interval> {
    compute_interval(&IntervalRequest { method: Method::Shortest, ..req.clone() }, cfg)
}

pub fn shortest_randomized_ci(req: &IntervalRequest, cfg: &SolverConfig) -> Result<Interval> {
    compute_interval(&IntervalRequest { method: Method::Randomized, ..req.clone() }, cfg)
}

/// One-sided exactly when `u` (or `1 - u` above one half) does not exceed
/// the largest single-success increment `max{w1/n1, w2/n2}`.
pub fn classify_sidedness(model: &Model, u: f64) -> Sidedness {
    let u = if u > 0.5 { 1.0 - u } else { u };
    if u <= model.one_sided_threshold() + 1e-12 {
        Sidedness::OneSided
    } else {
        Sidedness::TwoSided
    }
}

/// Parameters of one interval computation, in the user's labeling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams {
    pub u: f64,
    pub k1: u32,
    pub k2: u32,
    pub gamma1: f64,
    pub y: Option<f64>,
}

/// Exchanges successes and failures: `u -> 1 - u`, `k -> n - k`,
/// `gamma1 -> (1 - gamma) - gamma1`, `y -> 1 - y`. The interval for the
/// original parameters is the complement `(1 - upper', 1 - lower')` of the
/// interval for the reflected ones.
pub fn reflect(model: &Model, gamma: f64, p: &TailParams) -> TailParams {
    let (n1, n2, _) = model.user_design();
    TailParams {
        u: 1.0 - p.u,
        k1: n1 - p.k1,
        k2: n2 - p.k2,
        gamma1: (1.0 - gamma) - p.gamma1,
        y: p.y.map(|y| 1.0 - y),
    }
}
