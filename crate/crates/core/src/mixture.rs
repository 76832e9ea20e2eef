//! The averaged law of the weighted estimator.
//!
//! For a fixed `vartheta`, `theta1` is averaged uniformly over the range of
//! values compatible with `vartheta` (`theta2 = (vartheta - w1 theta1) / w2`).
//! Every quantity here is such an average, evaluated by adaptive quadrature
//! over the normalized variable `s in [0, 1]`, `theta1 = a + s (b - a)`.

use crate::binom::{as_integer, floor_tol};
use crate::error::Result;
use crate::model::{theta1_range, Model, GRID_TOL};
use crate::quad::{integrate_unit, integrate_unit_scalar};

pub use crate::quad::QuadratureConfig;

/// Sentinel below the smallest support point.
pub const BELOW_SUPPORT: f64 = -1.0;
/// Sentinel above the largest support point.
pub const ABOVE_SUPPORT: f64 = 2.0;

/// Scratch space holding the two binomial PMF vectors at one `theta1` node.
struct Pmfs {
    first: Vec<f64>,
    second: Vec<f64>,
}

impl Pmfs {
    fn new(model: &Model) -> Self {
        Self {
            first: vec![0.0; model.n1() as usize + 1],
            second: vec![0.0; model.n2() as usize + 1],
        }
    }

    fn fill(&mut self, model: &Model, vartheta: f64, theta1: f64) {
        let theta2 = ((vartheta - model.w1() * theta1) / model.w2()).clamp(0.0, 1.0);
        model.ln_choose1().pmf_into(theta1.clamp(0.0, 1.0), &mut self.first);
        model.ln_choose2().pmf_into(theta2, &mut self.second);
    }
}

/// Averages `integrand(pmfs)` over the admissible `theta1` range.
fn average<F>(model: &Model, vartheta: f64, cfg: &QuadratureConfig, mut integrand: F) -> Result<f64>
where
    F: FnMut(&Pmfs) -> f64,
{
    let range = theta1_range(model, vartheta)?;
    let mut pmfs = Pmfs::new(model);
    integrate_unit_scalar(model.rule(), cfg, |s| {
        pmfs.fill(model, vartheta, range.a + s * range.len);
        integrand(&pmfs)
    })
}

/// The `xi1` argument `(n1/w1)(u - w2 i2 / n2)` for each `i2`.
fn first_sample_arguments(model: &Model, u: f64) -> impl Iterator<Item = f64> + '_ {
    let scale = model.n1() as f64 / model.w1();
    let step = model.w2() / model.n2() as f64;
    (0..=model.n2()).map(move |i2| scale * (u - step * i2 as f64))
}

/// Exact values at `vartheta = 0` (all failures) and `vartheta = 1` (all
/// successes), where the estimator is a point mass at 0 or 1.
fn boundary_law(vartheta: f64) -> Option<f64> {
    if vartheta <= 0.0 {
        Some(0.0)
    } else if vartheta >= 1.0 {
        Some(1.0)
    } else {
        None
    }
}

fn cdf_with<G>(model: &Model, u: f64, vartheta: f64, cfg: &QuadratureConfig, cutoff: G) -> Result<f64>
where
    G: Fn(f64) -> i64,
{
    let n1 = model.n1() as i64;
    // highest xi1 count included for each i2, -1 meaning none
    let k_max: Vec<i64> = first_sample_arguments(model, u)
        .map(|t| cutoff(t).clamp(-1, n1))
        .collect();
    let mut cum = vec![0.0; model.n1() as usize + 1];
    let v = average(model, vartheta, cfg, |p| {
        let mut acc = 0.0;
        for (c, x) in cum.iter_mut().zip(&p.first) {
            acc += x;
            *c = acc;
        }
        k_max
            .iter()
            .zip(&p.second)
            .filter(|(&k, _)| k >= 0)
            .map(|(&k, q)| cum[k as usize] * q)
            .sum()
    })?;
    Ok(v.clamp(0.0, 1.0))
}

/// `F_u(vartheta) = P{estimator <= u}`.
pub fn cdf(model: &Model, u: f64, vartheta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if u < -GRID_TOL {
        return Ok(0.0);
    }
    if u >= 1.0 - GRID_TOL {
        return Ok(1.0);
    }
    if let Some(top) = boundary_law(vartheta) {
        // point mass at `top`; u < 1 here
        return Ok(if top == 0.0 { 1.0 } else { 0.0 });
    }
    cdf_with(model, u, vartheta, cfg, floor_tol)
}

/// `G_u(vartheta) = P{estimator < u}`, using `P{xi1 < t}` in the integrand.
pub fn cdf_strict(model: &Model, u: f64, vartheta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if u <= GRID_TOL {
        return Ok(0.0);
    }
    if u > 1.0 + GRID_TOL {
        return Ok(1.0);
    }
    if let Some(top) = boundary_law(vartheta) {
        // u > 0: strictly above 0; strictly above 1 is impossible for u <= 1
        return Ok(if top == 0.0 { 1.0 } else { 0.0 });
    }
    cdf_with(model, u, vartheta, cfg, |t| match as_integer(t) {
        Some(k) => k - 1,
        None => t.floor() as i64,
    })
}

/// `g(u; vartheta) = P{estimator = u}`. Only integral `xi1` arguments
/// contribute, so points off the support have probability zero.
pub fn pmf(model: &Model, u: f64, vartheta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if let Some(top) = boundary_law(vartheta) {
        return Ok(if (u - top).abs() <= GRID_TOL { 1.0 } else { 0.0 });
    }
    let n1 = model.n1() as i64;
    let hits: Vec<(usize, usize)> = first_sample_arguments(model, u)
        .enumerate()
        .filter_map(|(i2, t)| as_integer(t).filter(|k| (0..=n1).contains(k)).map(|k| (k as usize, i2)))
        .collect();
    if hits.is_empty() {
        return Ok(0.0);
    }
    let v = average(model, vartheta, cfg, |p| {
        hits.iter().map(|&(k1, i2)| p.first[k1] * p.second[i2]).sum()
    })?;
    Ok(v.clamp(0.0, 1.0))
}

/// Probabilities of every support atom at `vartheta`, indexed like
/// [`crate::model::SupportGrid::values`]. Sums to one.
pub fn atom_masses(model: &Model, vartheta: f64, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let grid = model.grid();
    if let Some(top) = boundary_law(vartheta) {
        let mut v = vec![0.0; grid.len()];
        v[if top == 0.0 { 0 } else { grid.len() - 1 }] = 1.0;
        return Ok(v);
    }
    let range = theta1_range(model, vartheta)?;
    let cells = grid.cell_atoms();
    let mut pmfs = Pmfs::new(model);
    let n2 = model.n2() as usize + 1;
    integrate_unit(model.rule(), grid.len(), cfg, |s, out| {
        pmfs.fill(model, vartheta, range.a + s * range.len);
        out.fill(0.0);
        for (k1, &p1) in pmfs.first.iter().enumerate() {
            let row = &cells[k1 * n2..(k1 + 1) * n2];
            for (&atom, &p2) in row.iter().zip(&pmfs.second) {
                out[atom as usize] += p1 * p2;
            }
        }
    })
}

/// `cdf(x) + y pmf(v)`: the left-hand side of the randomized endpoint
/// equations. Sentinel `x = -1` contributes nothing, as does `v = 2`.
pub fn randomized_cdf(
    model: &Model,
    x: f64,
    v: f64,
    y: f64,
    vartheta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let base = if x <= BELOW_SUPPORT + GRID_TOL {
        0.0
    } else {
        cdf(model, x, vartheta, cfg)?
    };
    let atom = if v >= ABOVE_SUPPORT - GRID_TOL || y == 0.0 {
        0.0
    } else {
        pmf(model, v, vartheta, cfg)?
    };
    Ok(base + y * atom)
}

/// Bracketing support points `(floor, floor-, floor+)` of `t`, with the
/// sentinels at the ends.
fn bracket(model: &Model, t: f64) -> (f64, f64, f64) {
    let values = model.grid().values();
    let pos = values.partition_point(|&v| v <= t + GRID_TOL);
    if pos == 0 {
        return (BELOW_SUPPORT, BELOW_SUPPORT, values[0]);
    }
    let floor = values[pos - 1];
    let below = if pos >= 2 { values[pos - 2] } else { BELOW_SUPPORT };
    let above = values.get(pos).copied().unwrap_or(ABOVE_SUPPORT);
    (floor, below, above)
}

/// CDF of the estimator smoothed upward, `estimator + U(0, u+ - u)`: each
/// atom is spread uniformly over the gap to the next support point.
pub fn smoothed_cdf_up(model: &Model, t: f64, vartheta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (floor, below, above) = bracket(model, t);
    if floor == BELOW_SUPPORT {
        return Ok(0.0);
    }
    let frac = ((t - floor) / (above - floor)).clamp(0.0, 1.0);
    randomized_cdf(model, below, floor, frac, vartheta, cfg)
}

/// CDF of the estimator smoothed downward, `estimator - U(0, u - u-)`: each
/// atom is spread uniformly over the gap to the previous support point.
/// Agrees with [`cdf`] at support points.
pub fn smoothed_cdf_down(model: &Model, t: f64, vartheta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (floor, _, above) = bracket(model, t);
    if floor == BELOW_SUPPORT {
        // inside the spread of the first atom, which covers [-1, 0]
        let frac = ((t - BELOW_SUPPORT) / (above - BELOW_SUPPORT)).clamp(0.0, 1.0);
        return randomized_cdf(model, BELOW_SUPPORT, above, frac, vartheta, cfg);
    }
    let frac = ((t - floor) / (above - floor)).clamp(0.0, 1.0);
    randomized_cdf(model, floor, above, frac, vartheta, cfg)
}
