//! Evaluators of the averaged law at support points.
//!
//! Interval construction only ever needs `F` and `g` at support atoms, as
//! functions of `vartheta`. [`QuadratureLaw`] evaluates them directly from
//! the mixture integrals. [`TabulatedLaw`] exploits the fact that on each of
//! the pieces `[0, w1]`, `[w1, w2]` and `[w2, 1]` every atom probability is a
//! polynomial in `vartheta` of degree at most `n1 + n2`: interpolating at
//! `n1 + n2 + 1` Chebyshev points per piece reproduces it up to rounding, and
//! evaluation then costs one Clenshaw recurrence instead of a quadrature.

use crate::error::Result;
use crate::mixture::{self, QuadratureConfig};
use crate::model::Model;

/// Atom-indexed view of the averaged law.
pub trait Law: Sync {
    fn model(&self) -> &Model;

    /// `P{estimator <= value(idx)}` at `vartheta`.
    fn cdf_at(&self, idx: usize, vartheta: f64) -> Result<f64>;

    /// `P{estimator = value(idx)}` at `vartheta`.
    fn pmf_at(&self, idx: usize, vartheta: f64) -> Result<f64>;

    /// `P{estimator <= value(x)} + y P{estimator = value(v)}`, where `None`
    /// stands for the sentinel beyond either end of the support.
    fn blend(&self, x: Option<usize>, v: Option<usize>, y: f64, vartheta: f64) -> Result<f64> {
        let base = match x {
            Some(i) => self.cdf_at(i, vartheta)?,
            None => 0.0,
        };
        let atom = match v {
            Some(i) if y != 0.0 => self.pmf_at(i, vartheta)?,
            _ => 0.0,
        };
        Ok(base + y * atom)
    }
}

/// Evaluates every request by adaptive quadrature.
#[derive(Debug, Clone)]
pub struct QuadratureLaw {
    model: Model,
    cfg: QuadratureConfig,
}

impl QuadratureLaw {
    pub fn new(model: Model, cfg: QuadratureConfig) -> Self {
        Self { model, cfg }
    }
}

impl Law for QuadratureLaw {
    fn model(&self) -> &Model {
        &self.model
    }

    fn cdf_at(&self, idx: usize, vartheta: f64) -> Result<f64> {
        if idx + 1 == self.model.grid().len() {
            return Ok(1.0);
        }
        mixture::cdf(&self.model, self.model.grid().value(idx), vartheta, &self.cfg)
    }

    fn pmf_at(&self, idx: usize, vartheta: f64) -> Result<f64> {
        mixture::pmf(&self.model, self.model.grid().value(idx), vartheta, &self.cfg)
    }
}

#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    /// `terms` Chebyshev coefficients per atom, atom-major
    coeffs: Vec<f64>,
}

/// Piecewise-polynomial representation of all atom CDFs.
///
/// Building costs `3 (n1 + n2 + 1)` vector quadratures over all
/// `(n1 + 1)(n2 + 1)` cells, so it pays off only when many evaluations
/// follow (optimizing many intervals, coverage sweeps).
#[derive(Debug, Clone)]
pub struct TabulatedLaw {
    model: Model,
    terms: usize,
    pieces: Vec<Piece>,
}

impl TabulatedLaw {
    pub fn build(model: Model, cfg: &QuadratureConfig) -> Result<Self> {
        let terms = (model.n1() + model.n2()) as usize + 1;
        let atoms = model.grid().len();
        let mut breaks = vec![0.0, model.w1(), model.w2(), 1.0];
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

        let nodes: Vec<f64> = (0..terms)
            .map(|k| (std::f64::consts::PI * (k as f64 + 0.5) / terms as f64).cos())
            .collect();
        // cos(j * angle_k) for the discrete cosine transform
        let basis: Vec<f64> = (0..terms)
            .flat_map(|j| {
                (0..terms).map(move |k| (std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / terms as f64).cos())
            })
            .collect();

        let mut pieces = Vec::with_capacity(3);
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            // cumulative atom probabilities at each node, node-major
            let mut values = vec![0.0; terms * atoms];
            for (k, &x) in nodes.iter().enumerate() {
                let vartheta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                let masses = mixture::atom_masses(&model, vartheta, cfg)?;
                let row = &mut values[k * atoms..(k + 1) * atoms];
                let mut acc = 0.0;
                for (r, m) in row.iter_mut().zip(&masses) {
                    acc += m;
                    *r = acc;
                }
            }
            let mut coeffs = vec![0.0; atoms * terms];
            let scale = 2.0 / terms as f64;
            for atom in 0..atoms {
                let c = &mut coeffs[atom * terms..(atom + 1) * terms];
                for (j, cj) in c.iter_mut().enumerate() {
                    let b = &basis[j * terms..(j + 1) * terms];
                    let s: f64 = (0..terms).map(|k| b[k] * values[k * atoms + atom]).sum();
                    *cj = scale * s;
                }
                c[0] *= 0.5;
            }
            pieces.push(Piece { lo, hi, coeffs });
        }
        Ok(Self { model, terms, pieces })
    }

    fn eval(&self, idx: usize, vartheta: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| vartheta <= p.hi)
            .unwrap_or_else(|| self.pieces.last().unwrap());
        let x = ((2.0 * vartheta - piece.lo - piece.hi) / (piece.hi - piece.lo)).clamp(-1.0, 1.0);
        let c = &piece.coeffs[idx * self.terms..(idx + 1) * self.terms];
        // Clenshaw
        let (mut b1, mut b2) = (0.0, 0.0);
        for &cj in c[1..].iter().rev() {
            let b0 = 2.0 * x * b1 - b2 + cj;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + c[0]
    }
}

impl Law for TabulatedLaw {
    fn model(&self) -> &Model {
        &self.model
    }

    fn cdf_at(&self, idx: usize, vartheta: f64) -> Result<f64> {
        let last = self.model.grid().len() - 1;
        if idx == last {
            return Ok(1.0);
        }
        if vartheta <= 0.0 {
            return Ok(1.0);
        }
        if vartheta >= 1.0 {
            return Ok(0.0);
        }
        Ok(self.eval(idx, vartheta).clamp(0.0, 1.0))
    }

    fn pmf_at(&self, idx: usize, vartheta: f64) -> Result<f64> {
        let hi = self.cdf_at(idx, vartheta)?;
        let lo = if idx == 0 { 0.0 } else { self.cdf_at(idx - 1, vartheta)? };
        Ok((hi - lo).max(0.0))
    }
}
