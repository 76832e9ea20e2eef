//! Coverage probability and expected length as functions of the true
//! `vartheta`.
//!
//! Intervals depend only on the observed atom (and on `y` for the randomized
//! method), so they are computed once per sweep into an [`IntervalTable`].
//! Each `vartheta` then needs one vector of atom masses.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::ci::{IntervalEngine, Method, SolverConfig};
use crate::error::{Error, Result};
use crate::law::{Law, TabulatedLaw};
use crate::mixture::{self, QuadratureConfig};
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    pub vartheta: f64,
    pub coverage: f64,
    pub expected_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// number of equally spaced interior points `i / (grid_points + 1)`
    pub grid_points: usize,
    /// midpoint nodes on `[0, 1]` for averaging over `y`
    pub y_nodes: usize,
    pub method: Method,
    pub gamma: f64,
    pub solver: SolverConfig,
    pub quad: QuadratureConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid_points: 99,
            y_nodes: 64,
            method: Method::Shortest,
            gamma: 0.95,
            solver: SolverConfig::default(),
            quad: QuadratureConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_points == 0 {
            return Err(Error::InvalidRequest("grid_points must be at least 1".into()));
        }
        if self.y_nodes == 0 {
            return Err(Error::InvalidRequest("y_nodes must be at least 1".into()));
        }
        if !(self.gamma > 0.5 && self.gamma < 1.0) {
            return Err(Error::InvalidRequest(format!(
                "gamma = {} must lie in (0.5, 1)",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `y` values averaged over: the midpoints `(j + 1/2) / y_nodes`, or
    /// nothing for non-randomized methods.
    pub fn y_values(&self) -> Vec<Option<f64>> {
        match self.method {
            Method::Randomized => (0..self.y_nodes)
                .map(|j| Some((j as f64 + 0.5) / self.y_nodes as f64))
                .collect(),
            _ => vec![None],
        }
    }

    pub fn vartheta_grid(&self) -> Vec<f64> {
        let g = self.grid_points as f64 + 1.0;
        (1..=self.grid_points).map(|i| i as f64 / g).collect()
    }
}

/// Interval endpoints for every atom and `y` node.
#[derive(Debug, Clone)]
pub struct IntervalTable {
    model: Model,
    ys: usize,
    /// `(lower, upper)`, atom-major
    bounds: Vec<(f64, f64)>,
}

impl IntervalTable {
    pub fn build<L: Law + ?Sized>(law: &L, cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        let engine = IntervalEngine::new(law, cfg.solver);
        let ys = cfg.y_values();
        let atoms = law.model().grid().len();
        let rows: Vec<Vec<(f64, f64)>> = (0..atoms)
            .into_par_iter()
            .map(|idx| {
                ys.iter()
                    .map(|&y| {
                        engine
                            .interval(idx, cfg.gamma, cfg.method, y)
                            .map(|iv| (iv.lower, iv.upper))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            model: law.model().clone(),
            ys: ys.len(),
            bounds: rows.into_iter().flatten().collect(),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Endpoints for atom `idx` at the `j`-th `y` node.
    pub fn bounds(&self, idx: usize, j: usize) -> (f64, f64) {
        self.bounds[idx * self.ys + j]
    }

    pub fn y_count(&self) -> usize {
        self.ys
    }

    /// Coverage and expected length given the atom masses at `vartheta`.
    pub fn evaluate(&self, vartheta: f64, masses: &[f64]) -> CoveragePoint {
        let mut coverage = 0.0;
        let mut expected_length = 0.0;
        for (idx, &mass) in masses.iter().enumerate() {
            for j in 0..self.ys {
                let (lo, hi) = self.bounds(idx, j);
                if lo < vartheta && vartheta < hi {
                    coverage += mass;
                    expected_length += mass * (hi - lo);
                }
            }
        }
        let scale = 1.0 / self.ys as f64;
        CoveragePoint {
            vartheta,
            coverage: (coverage * scale).clamp(0.0, 1.0),
            expected_length: (expected_length * scale).clamp(0.0, 1.0),
        }
    }

    pub fn coverage_at(&self, vartheta: f64, quad: &QuadratureConfig) -> Result<CoveragePoint> {
        let masses = mixture::atom_masses(&self.model, vartheta, quad)?;
        Ok(self.evaluate(vartheta, &masses))
    }
}

/// Coverage at a single `vartheta`. Builds the full interval table, so
/// prefer [`sweep`] or a reused [`IntervalTable`] for many points.
pub fn coverage_at(model: &Model, vartheta: f64, cfg: &SweepConfig) -> Result<CoveragePoint> {
    if !(vartheta > 0.0 && vartheta < 1.0) {
        return Err(Error::InvalidRequest(format!("vartheta = {vartheta} must lie in (0, 1)")));
    }
    let law = TabulatedLaw::build(model.clone(), &cfg.quad)?;
    IntervalTable::build(&law, cfg)?.coverage_at(vartheta, &cfg.quad)
}

/// Coverage curve over the configured grid, ascending in `vartheta`.
pub fn sweep(model: &Model, cfg: &SweepConfig) -> Result<Vec<CoveragePoint>> {
    cfg.validate()?;
    let law = TabulatedLaw::build(model.clone(), &cfg.quad)?;
    let table = IntervalTable::build(&law, cfg)?;
    sweep_table(&table, cfg)
}

/// As [`sweep`], reusing a table.
pub fn sweep_table(table: &IntervalTable, cfg: &SweepConfig) -> Result<Vec<CoveragePoint>> {
    cfg.vartheta_grid()
        .into_par_iter()
        .map(|t| {
            table.coverage_at(t, &cfg.quad).map_err(|e| Error::SweepPoint {
                vartheta: t,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Decimal rendering with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_csv<W: Write>(points: &[CoveragePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "vartheta,coverage,expected_length")?;
    for p in points {
        writeln!(
            out,
            "{},{},{}",
            format_sig(p.vartheta, 9),
            format_sig(p.coverage, 9),
            format_sig(p.expected_length, 9)
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let cfg = SweepConfig {
            grid_points: 1,
            ..SweepConfig::default()
        };
        assert_eq!(cfg.vartheta_grid(), vec![0.5]);
        let cfg = SweepConfig::default();
        let g = cfg.vartheta_grid();
        assert_eq!(g.len(), 99);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[98] - 0.99).abs() < 1e-15);
        assert_eq!(cfg.y_values(), vec![None]);
        let cfg = SweepConfig {
            y_nodes: 4,
            method: Method::Randomized,
            ..SweepConfig::default()
        };
        assert_eq!(
            cfg.y_values(),
            vec![Some(0.125), Some(0.375), Some(0.625), Some(0.875)]
        );
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.5, 9), "0.500000000");
        assert_eq!(format_sig(0.0123456789123, 9), "0.0123456789");
        assert_eq!(format_sig(0.951234567891, 9), "0.951234568");
        assert_eq!(format_sig(0.0, 9), "0");
    }

    #[test]
    fn csv_layout() {
        let pts = [CoveragePoint {
            vartheta: 0.5,
            coverage: 0.96,
            expected_length: 0.25,
        }];
        let mut buf = Vec::new();
        write_csv(&pts, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "vartheta,coverage,expected_length\n0.500000000,0.960000000,0.250000000\n"
        );
    }

    #[test]
    fn standard_coverage_is_conservative() {
        let model = Model::new(4, 6, 0.35).unwrap();
        let cfg = SweepConfig {
            grid_points: 9,
            method: Method::Standard,
            ..SweepConfig::default()
        };
        for p in sweep(&model, &cfg).unwrap() {
            assert!(p.coverage >= 0.95 - 5e-3, "{p:?}");
            assert!(p.expected_length <= 1.0);
        }
    }

    #[test]
    fn bad_configs() {
        let model = Model::new(2, 3, 0.4).unwrap();
        let cfg = SweepConfig {
            grid_points: 0,
            ..SweepConfig::default()
        };
        assert!(sweep(&model, &cfg).is_err());
        assert!(coverage_at(&model, 1.0, &SweepConfig::default()).is_err());
    }
}
