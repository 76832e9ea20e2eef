//! The two-sample design and the support of the weighted estimator.

use std::sync::Arc;

use crate::binom::LnChoose;
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Values of the estimator closer than this are treated as one support point.
pub const GRID_TOL: f64 = 1e-9;

/// Fixed design `(n1, n2, w1)`.
///
/// Internally the samples are ordered so that `w1 <= w2`; the original
/// labeling is remembered so counts and preimages can be translated back.
/// The distribution of the estimator does not depend on that ordering.
#[derive(Debug, Clone)]
pub struct Model {
    n1: u32,
    n2: u32,
    w1: f64,
    w2: f64,
    swapped: bool,
    grid: Arc<SupportGrid>,
    ln_choose1: Arc<LnChoose>,
    ln_choose2: Arc<LnChoose>,
    rule: Arc<GaussLegendre>,
}

impl Model {
    /// Builds a model from the user's labeling. `w1` is the weight of the
    /// first sample; the second gets `1 - w1`.
    pub fn new(n1: u32, n2: u32, w1: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidModel(format!(
                "sample sizes must be positive (n1 = {n1}, n2 = {n2})"
            )));
        }
        if !(w1 > 0.0 && w1 < 1.0) {
            return Err(Error::InvalidModel(format!("w1 = {w1} must lie in (0, 1)")));
        }
        let w2 = 1.0 - w1;
        let (n1, n2, w1, w2, swapped) = if w1 > w2 {
            (n2, n1, w2, w1, true)
        } else {
            (n1, n2, w1, w2, false)
        };
        let grid = Arc::new(SupportGrid::build(n1, n2, w1, w2));
        Ok(Self {
            n1,
            n2,
            w1,
            w2,
            swapped,
            grid,
            ln_choose1: Arc::new(LnChoose::new(n1)),
            ln_choose2: Arc::new(LnChoose::new(n2)),
            // the averaged integrands are polynomials of degree n1 + n2 in theta1
            rule: Arc::new(GaussLegendre::new(((n1 + n2) as usize / 2 + 1).max(8))),
        })
    }

    /// Size of the (canonical) first sample.
    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// Weight of the (canonical) first sample; never exceeds `w2`.
    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    /// True when the user's first sample carries the larger weight and the
    /// samples were exchanged internally.
    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    /// `(n1, n2, w1)` as the user supplied them.
    pub fn user_design(&self) -> (u32, u32, f64) {
        if self.swapped {
            (self.n2, self.n1, self.w2)
        } else {
            (self.n1, self.n2, self.w1)
        }
    }

    /// Maps user-labeled counts to canonical labels (and back: the map is an
    /// involution).
    pub fn canonical_counts(&self, k1: u32, k2: u32) -> (u32, u32) {
        if self.swapped {
            (k2, k1)
        } else {
            (k1, k2)
        }
    }

    /// `w1 k1 / n1 + w2 k2 / n2` for canonical counts.
    pub fn estimate(&self, k1: u32, k2: u32) -> f64 {
        if k1 == 0 && k2 == 0 {
            return 0.0;
        }
        if k1 == self.n1 && k2 == self.n2 {
            return 1.0;
        }
        self.w1 * k1 as f64 / self.n1 as f64 + self.w2 * k2 as f64 / self.n2 as f64
    }

    pub fn grid(&self) -> &SupportGrid {
        &self.grid
    }

    pub(crate) fn ln_choose1(&self) -> &LnChoose {
        &self.ln_choose1
    }

    pub(crate) fn ln_choose2(&self) -> &LnChoose {
        &self.ln_choose2
    }

    pub(crate) fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    /// `max{w1/n1, w2/n2}`: the largest single-success increment.
    pub fn one_sided_threshold(&self) -> f64 {
        (self.w1 / self.n1 as f64).max(self.w2 / self.n2 as f64)
    }
}

/// Sorted distinct values of the estimator with their `(k1, k2)` preimages
/// (canonical labels).
#[derive(Debug, Clone)]
pub struct SupportGrid {
    values: Vec<f64>,
    preimages: Vec<Vec<(u32, u32)>>,
    /// atom index of cell `k1 * (n2 + 1) + k2`
    cell_atom: Vec<u32>,
    mirror: Vec<usize>,
}

impl SupportGrid {
    fn build(n1: u32, n2: u32, w1: f64, w2: f64) -> Self {
        let mut cells: Vec<(f64, u32, u32)> = Vec::with_capacity((n1 as usize + 1) * (n2 as usize + 1));
        for k1 in 0..=n1 {
            for k2 in 0..=n2 {
                let v = if k1 == 0 && k2 == 0 {
                    0.0
                } else if k1 == n1 && k2 == n2 {
                    1.0
                } else {
                    w1 * k1 as f64 / n1 as f64 + w2 * k2 as f64 / n2 as f64
                };
                cells.push((v, k1, k2));
            }
        }
        cells.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut values: Vec<f64> = Vec::new();
        let mut preimages: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut cell_atom = vec![0u32; cells.len()];
        for &(v, k1, k2) in &cells {
            match values.last() {
                Some(&last) if v - last <= GRID_TOL => {
                    preimages.last_mut().unwrap().push((k1, k2));
                }
                _ => {
                    values.push(v);
                    preimages.push(vec![(k1, k2)]);
                }
            }
            cell_atom[(k1 * (n2 + 1) + k2) as usize] = (values.len() - 1) as u32;
        }
        // The top atom holds (n1, n2) and is pinned to exactly 1.
        if let Some(last) = values.last_mut() {
            *last = 1.0;
        }
        for p in &mut preimages {
            p.sort_unstable();
        }

        let mut grid = Self {
            values,
            preimages,
            cell_atom,
            mirror: Vec::new(),
        };
        let len = grid.values.len();
        grid.mirror = (0..len)
            .map(|i| grid.find(1.0 - grid.values[i]).unwrap_or(len - 1 - i))
            .collect();
        grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn preimages(&self, idx: usize) -> &[(u32, u32)] {
        &self.preimages[idx]
    }

    pub(crate) fn cell_atoms(&self) -> &[u32] {
        &self.cell_atom
    }

    /// Index of the atom at `1 - value(idx)`.
    pub fn mirror(&self, idx: usize) -> usize {
        self.mirror[idx]
    }

    /// Index of the grid value within [`GRID_TOL`] of `u`, if any.
    pub fn find(&self, u: f64) -> Option<usize> {
        let pos = self.values.partition_point(|&v| v < u);
        [pos.checked_sub(1), Some(pos)]
            .into_iter()
            .flatten()
            .filter(|&i| i < self.values.len())
            .min_by(|&a, &b| (self.values[a] - u).abs().total_cmp(&(self.values[b] - u).abs()))
            .filter(|&i| (self.values[i] - u).abs() <= GRID_TOL)
    }

    pub fn index_of(&self, u: f64) -> Result<usize> {
        self.find(u).ok_or(Error::NotASupportPoint { u })
    }

    /// `(u-, u+)` for the support point `u`, with sentinels `-1` below the
    /// first point and `2` above the last.
    pub fn neighbors(&self, u: f64) -> Result<(f64, f64)> {
        let idx = self.index_of(u)?;
        let lo = if idx == 0 { -1.0 } else { self.values[idx - 1] };
        let hi = if idx + 1 == self.values.len() {
            2.0
        } else {
            self.values[idx + 1]
        };
        Ok((lo, hi))
    }
}

/// Interval of `theta1` values compatible with a given `vartheta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRange {
    pub a: f64,
    pub b: f64,
    pub len: f64,
}

/// `a = max{0, (vartheta - w2)/w1}`, `b = min{1, vartheta/w1}`.
pub fn theta1_range(model: &Model, vartheta: f64) -> Result<ThetaRange> {
    if !(vartheta > 0.0 && vartheta < 1.0) {
        return Err(Error::DegenerateRange { vartheta });
    }
    let a = ((vartheta - model.w2) / model.w1).max(0.0);
    let b = (vartheta / model.w1).min(1.0);
    Ok(ThetaRange { a, b, len: b - a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_distinct(n1: u32, n2: u32, w1: f64) -> Vec<f64> {
        let mut v: Vec<f64> = (0..=n1)
            .flat_map(|k1| (0..=n2).map(move |k2| w1 * k1 as f64 / n1 as f64 + (1.0 - w1) * k2 as f64 / n2 as f64))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
        v
    }

    #[test]
    fn symmetric_collision() {
        let m = Model::new(1, 1, 0.5).unwrap();
        assert_eq!(m.grid().values(), &[0.0, 0.5, 1.0]);
        assert_eq!(m.grid().preimages(1), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn worked_example_point() {
        let m = Model::new(20, 30, 0.3).unwrap();
        let idx = m.grid().index_of(0.03).unwrap();
        assert_eq!(m.grid().preimages(idx), &[(2, 0)]);
    }

    #[test]
    fn distinct_count_matches_enumeration() {
        // 0.4 k1/2 + 0.6 k2/3 = 0.2 (k1 + k2): many collisions
        let m = Model::new(2, 3, 0.4).unwrap();
        assert_eq!(brute_distinct(2, 3, 0.4).len(), 6);
        assert_eq!(m.grid().len(), 6);
        let m = Model::new(2, 3, 0.3).unwrap();
        assert_eq!(brute_distinct(2, 3, 0.3).len(), 12);
        assert_eq!(m.grid().len(), 12);
        let m = Model::new(20, 30, 0.3).unwrap();
        assert_eq!(m.grid().len(), brute_distinct(20, 30, 0.3).len());
    }

    #[test]
    fn grid_endpoints_and_order() {
        let m = Model::new(7, 4, 0.35).unwrap();
        let g = m.grid();
        assert_eq!(g.value(0), 0.0);
        assert_eq!(g.preimages(0), &[(0, 0)]);
        assert_eq!(g.value(g.len() - 1), 1.0);
        assert_eq!(g.preimages(g.len() - 1), &[(7, 4)]);
        assert!(g.values().windows(2).all(|w| w[1] - w[0] > GRID_TOL));
        let total: usize = (0..g.len()).map(|i| g.preimages(i).len()).sum();
        assert_eq!(total, 8 * 5);
        for i in 0..g.len() {
            assert!((g.value(g.mirror(i)) - (1.0 - g.value(i))).abs() < 1e-9);
        }
    }

    #[test]
    fn neighbors_with_sentinels() {
        let m = Model::new(20, 30, 0.3).unwrap();
        let g = m.grid();
        let (lo, hi) = g.neighbors(0.03).unwrap();
        assert!((lo - 0.7 / 30.0).abs() < 1e-12);
        assert!((hi - (0.3 / 20.0 + 0.7 / 30.0)).abs() < 1e-12);
        assert_eq!(g.neighbors(0.0).unwrap(), (-1.0, 0.015));
        let (lo, hi) = g.neighbors(1.0).unwrap();
        assert!((lo - (1.0 - 0.015)).abs() < 1e-12);
        assert_eq!(hi, 2.0);
        assert!(matches!(g.neighbors(0.031), Err(Error::NotASupportPoint { .. })));
    }

    #[test]
    fn swapped_orientation() {
        let m = Model::new(30, 20, 0.7).unwrap();
        assert!(m.is_swapped());
        assert_eq!((m.n1(), m.n2()), (20, 30));
        assert!((m.w1() - 0.3).abs() < 1e-15);
        assert_eq!(m.user_design(), (30, 20, 0.7));
        assert_eq!(m.canonical_counts(0, 2), (2, 0));
        let plain = Model::new(20, 30, 0.3).unwrap();
        assert_eq!(m.grid().len(), plain.grid().len());
    }

    #[test]
    fn theta_ranges() {
        let m = Model::new(20, 30, 0.3).unwrap();
        let r = theta1_range(&m, 0.5).unwrap();
        assert_eq!((r.a, r.b, r.len), (0.0, 1.0, 1.0));
        let r = theta1_range(&m, 0.1).unwrap();
        assert!((r.a).abs() < 1e-15 && (r.b - 1.0 / 3.0).abs() < 1e-15 && (r.len - 1.0 / 3.0).abs() < 1e-15);
        let r = theta1_range(&m, 0.8).unwrap();
        assert!((r.a - 1.0 / 3.0).abs() < 1e-12 && r.b == 1.0 && (r.len - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(theta1_range(&m, 0.0), Err(Error::DegenerateRange { .. })));
        assert!(matches!(theta1_range(&m, 1.0), Err(Error::DegenerateRange { .. })));
    }

    #[test]
    fn rejects_bad_designs() {
        assert!(Model::new(0, 3, 0.5).is_err());
        assert!(Model::new(3, 3, 0.0).is_err());
        assert!(Model::new(3, 3, 1.0).is_err());
        assert!(Model::new(3, 3, f64::NAN).is_err());
    }
}
