//! Scalar root refinement and golden-section minimization.

use crate::error::Result;

/// Brent's method on a bracket `[lo, hi]` where `f(lo)` and `f(hi)` have
/// opposite signs (or one is zero). Inverse quadratic and secant steps are
/// used when they stay inside the bracket and shrink it fast enough;
/// otherwise the step is a bisection, so the bracket width halves at least
/// every other iteration. Stops when the bracket is narrower than `xtol`.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    debug_assert!(fa.signum() != fb.signum(), "root not bracketed");
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`; returns the bracket midpoint.
///
/// Ties between the two probes keep the left part, favoring smaller
/// arguments.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x_left = b - ratio * (b - a);
    let mut x_right = a + ratio * (b - a);
    let mut f_left = f(x_left)?;
    let mut f_right = f(x_right)?;
    while b - a > tol {
        if f_left <= f_right {
            b = x_right;
            x_right = x_left;
            f_right = f_left;
            x_left = b - ratio * (b - a);
            f_left = f(x_left)?;
        } else {
            a = x_left;
            x_left = x_right;
            f_left = f_right;
            x_right = a + ratio * (b - a);
            f_right = f(x_right)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_roots() {
        let f = |x: f64| Ok(x * x * x - 2.0 * x - 5.0);
        let r = brent(f, 2.0, 3.0, -1.0, 16.0, 1e-14).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-13);

        // steep decreasing function, as the endpoint equations are
        let g = |x: f64| Ok((-40.0 * x).exp() - 0.025);
        let r = brent(g, 1e-13, 1.0 - 1e-13, g(1e-13).unwrap(), g(1.0 - 1e-13).unwrap(), 1e-12).unwrap();
        assert!((r - (0.025f64).ln() / -40.0).abs() < 1e-12);
    }

    #[test]
    fn brent_counts_are_modest() {
        let mut calls = 0;
        let g = |x: f64| {
            calls += 1;
            Ok(1.0 / (1.0 + (30.0 * (x - 0.3)).exp()) - 0.9)
        };
        brent(g, 0.0, 1.0, 1.0 / (1.0 + (-9.0f64).exp()) - 0.9, -0.9, 1e-12).unwrap();
        assert!(calls < 40, "{calls}");
    }

    #[test]
    fn golden_section_minimizes() {
        let x = golden_section(|x| Ok((x - 0.0137).powi(2)), 0.0, 0.05, 1e-10).unwrap();
        assert!((x - 0.0137).abs() < 1e-9);
        // monotone: converges onto the boundary
        let x = golden_section(|x| Ok(-x), 0.0, 0.05, 1e-10).unwrap();
        assert!(0.05 - x < 1e-10);
    }
}
