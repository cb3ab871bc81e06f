//! Ratio-versus-bound scatter for random entangled generalized Werner states.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::Result;
use crate::localmodels::model_gen_werner;

use super::sampling::sample_entangled_gw;

pub const HEADER: [&str; 13] = [
    "x", "theta", "a_x", "a_y", "a_z", "b_x", "b_y", "b_z", "concurrence", "p_q", "p_l", "ratio",
    "bound",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterRow {
    pub x: f64,
    pub theta: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub concurrence: f64,
    pub p_q: f64,
    pub p_l: f64,
    pub ratio: f64,
    /// `1 − C`
    pub bound: f64,
}

impl ScatterRow {
    pub fn gap(&self) -> f64 {
        self.ratio - self.bound
    }

    fn record(&self) -> Vec<String> {
        let f = |v: f64| format!("{v:.16e}");
        let mut r = vec![f(self.x), f(self.theta)];
        r.extend(self.a.iter().map(|v| f(*v)));
        r.extend(self.b.iter().map(|v| f(*v)));
        r.extend([self.concurrence, self.p_q, self.p_l, self.ratio, self.bound].map(f));
        r
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScatterSummary {
    pub rows: usize,
    /// `min(ratio − bound)`; `+∞` for an empty run.
    pub min_gap: f64,
    pub argmin: Option<usize>,
}

impl ScatterSummary {
    pub fn claim_holds(&self, tol: f64) -> bool {
        self.min_gap >= -tol
    }
}

pub fn scatter_rows(seed: u64, count: usize) -> Result<Vec<ScatterRow>> {
    sample_entangled_gw(seed, count)
        .into_par_iter()
        .map(|s| {
            let split = model_gen_werner(s.x, s.theta)?;
            let p_q = split.quantum(&s.a, &s.b);
            let p_l = split.local(&s.a, &s.b);
            let concurrence = 1.0 - split.p_local;
            Ok(ScatterRow {
                x: s.x,
                theta: s.theta,
                a: s.a.as_array(),
                b: s.b.as_array(),
                concurrence,
                p_q,
                p_l,
                ratio: p_q / p_l,
                bound: split.p_local,
            })
        })
        .collect()
}

pub fn summarize(rows: &[ScatterRow]) -> ScatterSummary {
    let mut summary = ScatterSummary { rows: rows.len(), min_gap: f64::INFINITY, argmin: None };
    for (i, r) in rows.iter().enumerate() {
        if r.gap() < summary.min_gap {
            summary.min_gap = r.gap();
            summary.argmin = Some(i);
        }
    }
    summary
}

pub fn write_csv<W: Write>(rows: &[ScatterRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Samples `count` rows, writes them as CSV to `out_path` and summarizes.
pub fn scatter_to_csv(seed: u64, count: usize, out_path: impl AsRef<Path>) -> Result<ScatterSummary> {
    let rows = scatter_rows(seed, count)?;
    let file = std::fs::File::create(out_path)?;
    write_csv(&rows, std::io::BufWriter::new(file))?;
    Ok(summarize(&rows))
}
