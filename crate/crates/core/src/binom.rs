//! Binomial probability primitives.
//!
//! Probabilities are assembled in log space so that large trial counts do not
//! underflow. A success probability of exactly 0 or 1 is a point mass and is
//! handled without touching `ln(0)`.

use statrs::function::factorial::ln_binomial;

/// Absolute tolerance used to decide whether a real argument is an integer.
pub const INTEGER_TOL: f64 = 1e-9;

/// Returns `Some(k)` when `t` lies within [`INTEGER_TOL`] of the integer `k`.
pub fn as_integer(t: f64) -> Option<i64> {
    let r = t.round();
    ((t - r).abs() <= INTEGER_TOL).then_some(r as i64)
}

/// Largest integer `k` with `k <= t`, treating values within tolerance of an
/// integer as that integer.
pub fn floor_tol(t: f64) -> i64 {
    (t + INTEGER_TOL).floor() as i64
}

/// `P{X = k}` for `X ~ Bin(n, p)`. Zero outside `0..=n`.
pub fn binom_pmf(k: i64, n: u32, p: f64) -> f64 {
    if k < 0 || k > n as i64 {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n as i64 { 1.0 } else { 0.0 };
    }
    let k = k as u64;
    let n = n as u64;
    let log_pmf = ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p();
    log_pmf.exp()
}

/// `P{X <= t}` for real `t`.
pub fn binom_cdf(t: f64, n: u32, p: f64) -> f64 {
    cdf_through(floor_tol(t), n, p)
}

/// `P{X < t}` for real `t`: `P{X <= t - 1}` when `t` is an integer, otherwise
/// `P{X <= t}`.
pub fn binom_cdf_strict(t: f64, n: u32, p: f64) -> f64 {
    match as_integer(t) {
        Some(k) => cdf_through(k - 1, n, p),
        None => cdf_through(t.floor() as i64, n, p),
    }
}

fn cdf_through(k_max: i64, n: u32, p: f64) -> f64 {
    if k_max < 0 {
        return 0.0;
    }
    if k_max >= n as i64 {
        return 1.0;
    }
    let s: f64 = (0..=k_max).map(|k| binom_pmf(k, n, p)).sum();
    s.min(1.0)
}

/// Table of `ln C(n, k)` for `k = 0..=n`, used to fill whole PMF vectors.
#[derive(Debug, Clone)]
pub struct LnChoose {
    n: u32,
    table: Vec<f64>,
}

impl LnChoose {
    pub fn new(n: u32) -> Self {
        let table = (0..=n as u64).map(|k| ln_binomial(n as u64, k)).collect();
        Self { n, table }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Writes `P{X = k}` for every `k` in `0..=n` into `out`.
    pub fn pmf_into(&self, p: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.table.len());
        let n = self.n as usize;
        if p <= 0.0 || p >= 1.0 {
            out.fill(0.0);
            out[if p <= 0.0 { 0 } else { n }] = 1.0;
            return;
        }
        let lp = p.ln();
        let lq = (-p).ln_1p();
        for (k, (o, lc)) in out.iter_mut().zip(&self.table).enumerate() {
            *o = (lc + k as f64 * lp + (n - k) as f64 * lq).exp();
        }
    }
}
