//! Adaptive Gauss-Legendre quadrature on `[0, 1]`.
//!
//! A panel is accepted when the `m`-point rule on the panel and the same rule
//! on its two halves agree to within the panel's share of the tolerance;
//! otherwise the halves are pushed back for refinement. The integrand may be
//! vector-valued, in which case the error is measured in the max norm.

use crate::error::{Error, Result};

/// Tolerances for the mixture integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 200,
        }
    }
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_m.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(m, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[m - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[m - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Accumulates `scale * sum_i w_i f(lo + (hi - lo) x_i)` into `acc`.
    fn apply<F>(&self, f: &mut F, lo: f64, hi: f64, acc: &mut [f64], scratch: &mut [f64])
    where
        F: FnMut(f64, &mut [f64]),
    {
        acc.fill(0.0);
        let h = hi - lo;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            f(lo + h * x, scratch);
            for (a, s) in acc.iter_mut().zip(scratch.iter()) {
                *a += w * h * s;
            }
        }
    }
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates the `dim`-valued function `f` over `[0, 1]`.
///
/// `f(s, out)` must write the integrand at `s` into `out`.
pub fn integrate_unit<F>(
    rule: &GaussLegendre,
    dim: usize,
    cfg: &QuadratureConfig,
    mut f: F,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut total = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut coarse = vec![0.0; dim];
    let mut left = vec![0.0; dim];
    let mut right = vec![0.0; dim];

    rule.apply(&mut f, 0.0, 1.0, &mut coarse, &mut scratch);
    let mut stack = vec![(0.0f64, 1.0f64, coarse.clone())];
    let mut splits = 0usize;
    let mut worst = 0.0f64;

    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        rule.apply(&mut f, lo, mid, &mut left, &mut scratch);
        rule.apply(&mut f, mid, hi, &mut right, &mut scratch);
        let mut err = 0.0f64;
        let mut mag = 0.0f64;
        for i in 0..dim {
            let fine = left[i] + right[i];
            err = err.max((fine - coarse[i]).abs());
            mag = mag.max(fine.abs());
        }
        let allowed = cfg.abs_tol.max(cfg.rel_tol * mag) * (hi - lo);
        if err <= allowed || hi - lo < 1e-12 {
            for i in 0..dim {
                total[i] += left[i] + right[i];
            }
            continue;
        }
        splits += 1;
        if splits > cfg.max_subdivisions {
            worst = worst.max(err);
            return Err(Error::QuadratureFailure {
                max_subdivisions: cfg.max_subdivisions,
                estimate: worst,
            });
        }
        stack.push((lo, mid, left.clone()));
        stack.push((mid, hi, right.clone()));
    }
    Ok(total)
}

/// Scalar convenience wrapper around [`integrate_unit`].
pub fn integrate_unit_scalar<F>(rule: &GaussLegendre, cfg: &QuadratureConfig, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_unit(rule, 1, cfg, |s, out| out[0] = f(s)).map(|v| v[0])
}
