use std::io::{self, Write};

use serde::Serialize;

use wsumci::coverage::{format_sig, CoveragePoint};
use wsumci::{Interval, IntervalRequest, Method};

pub fn sig(x: f64) -> String {
    format_sig(x, 9)
}

/// `x` rounded to 9 significant digits.
fn round9(x: f64) -> f64 {
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Flat record of one interval computation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub w1: f64,
    pub n1: u32,
    pub n2: u32,
    pub k1: u32,
    pub k2: u32,
    pub gamma: f64,
    pub method: &'static str,
    pub estimate: f64,
    pub y: Option<f64>,
    pub seed: Option<u64>,
    pub gamma1: f64,
    pub lower: f64,
    pub upper: f64,
    pub length: f64,
    pub sides: &'static str,
    pub reflected: bool,
}

impl Report {
    pub fn new(req: &IntervalRequest, iv: &Interval) -> Self {
        let (n1, n2, w1) = req.model.user_design();
        Self {
            w1,
            n1,
            n2,
            k1: req.k1,
            k2: req.k2,
            gamma: req.gamma,
            method: iv.method.as_str(),
            estimate: round9(req.estimate()),
            y: iv.y.map(round9),
            seed: if iv.y.is_some() && req.y.is_none() { req.seed } else { None },
            gamma1: round9(iv.gamma1),
            lower: round9(iv.lower),
            upper: round9(iv.upper),
            length: round9(iv.length),
            sides: iv.sides.as_str(),
            reflected: iv.reflected,
        }
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "weight of stratum 1: {}", self.w1)?;
        writeln!(out, "sample sizes: n1 = {}, n2 = {}", self.n1, self.n2)?;
        writeln!(out, "successes: k1 = {}, k2 = {}", self.k1, self.k2)?;
        writeln!(out, "estimate: {}", sig(self.estimate))?;
        if let Some(y) = self.y {
            match self.seed {
                Some(seed) => writeln!(out, "random number y: {} (seed {seed})", sig(y))?,
                None => writeln!(out, "random number y: {}", sig(y))?,
            }
        }
        writeln!(out, "confidence level: {}", self.gamma)?;
        writeln!(out, "method: {}", self.method)?;
        writeln!(out, "upper tail gamma1: {}", sig(self.gamma1))?;
        writeln!(out, "interval: ({}, {})", sig(self.lower), sig(self.upper))?;
        writeln!(out, "length: {}", sig(self.length))?;
        writeln!(out, "sides: {}", self.sides)?;
        if self.reflected {
            writeln!(
                out,
                "note: estimate above 0.5, computed for the relabeled outcome 1 - u and complemented"
            )?;
        }
        writeln!(out)?;
        let mut echo = format!(
            "w1={}, n1={}, n2={}, estimate={}",
            self.w1,
            self.n1,
            self.n2,
            sig(self.estimate)
        );
        if let Some(y) = self.y {
            echo.push_str(&format!(", y={}", sig(y)));
        }
        echo.push_str(&format!(", gamma={}", self.gamma));
        writeln!(out, "{echo}")?;
        writeln!(out, "vartheta in ({}, {})", sig(self.lower), sig(self.upper))
    }

    pub fn write_json<W: Write>(&self, out: &mut W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }
}

pub fn coverage_summary(points: &[CoveragePoint], method: Method) -> String {
    let min = points.iter().min_by(|a, b| a.coverage.total_cmp(&b.coverage));
    let max = points.iter().max_by(|a, b| a.coverage.total_cmp(&b.coverage));
    match (min, max) {
        (Some(min), Some(max)) => format!(
            "method: {method}\nrows: {}\nmin coverage: {} at vartheta {}\nmax coverage: {} at vartheta {}\n",
            points.len(),
            sig(min.coverage),
            sig(min.vartheta),
            sig(max.coverage),
            sig(max.vartheta)
        ),
        _ => format!("method: {method}\nrows: 0\n"),
    }
}
