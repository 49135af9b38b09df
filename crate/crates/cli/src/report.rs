//! `report`: entropy monotonicity verdict for a finished run.

use std::path::Path;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::output::{read_trace, Trace};
use crate::run::{ENTROPY_TRACE, OUTFLOW_TRACE};

/// Largest allowed single-step increase relative to `max |Σℰ|`.
pub const MONOTONE_TOLERANCE: f64 = 1e-10;

pub const SERIES: &str = "entropy_series.txt";
pub const REPORT: &str = "entropy_report.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub samples: usize,
    pub initial: f64,
    pub last: f64,
    /// Largest increase between consecutive samples of the entropy plus the
    /// entropy that has left through the boundary.
    pub max_step_increase: f64,
    pub relative_max_step_increase: f64,
    /// `(last - initial) / |initial|`
    pub relative_drift: f64,
    pub monotone: bool,
}

/// Verdict over a time-ordered `(t, Σℰ)` series.
pub fn entropy_verdict(series: &[(f64, f64)]) -> Result<EntropyReport> {
    let Some((&(_, initial), &(_, last))) = series.first().zip(series.last()) else {
        bail!("entropy trace is empty");
    };
    if series.windows(2).any(|w| w[1].0 < w[0].0) {
        bail!("entropy trace is not time-ordered");
    }
    let max_step_increase = series.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    let max_step_increase = if series.len() > 1 { max_step_increase } else { 0.0 };
    let scale = series.iter().map(|s| s.1.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let relative = max_step_increase / scale;
    Ok(EntropyReport {
        samples: series.len(),
        initial,
        last,
        max_step_increase,
        relative_max_step_increase: relative,
        relative_drift: (last - initial) / initial.abs().max(f64::MIN_POSITIVE),
        monotone: relative <= MONOTONE_TOLERANCE,
    })
}

/// Reads the entropy trace of the run in `dir`, adds the boundary outflow
/// when it was recorded, writes the combined two-column series and the
/// verdict next to it, and returns the verdict.
pub fn entropy_trace_report(dir: &Path) -> Result<EntropyReport> {
    let mut series = read_trace(&dir.join(ENTROPY_TRACE))?;
    let outflow_path = dir.join(OUTFLOW_TRACE);
    if outflow_path.exists() {
        let outflow = read_trace(&outflow_path)?;
        if outflow.len() != series.len() || outflow.iter().zip(&series).any(|(a, b)| a.0 != b.0) {
            bail!("{OUTFLOW_TRACE} does not match {ENTROPY_TRACE}");
        }
        for (s, o) in series.iter_mut().zip(&outflow) {
            s.1 += o.1;
        }
    }
    let report = entropy_verdict(&series)?;
    let mut out = Trace::create(&dir.join(SERIES), ["time", "entropy_plus_outflow"])?;
    for (t, e) in &series {
        out.push(*t, *e)?;
    }
    out.finish()?;
    std::fs::write(dir.join(REPORT), serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(entropy_verdict(&[]).is_err());
        let r = entropy_verdict(&[(0.0, -2.0), (0.1, -2.5), (0.2, -2.6)]).unwrap();
        assert!(r.monotone);
        assert!((r.max_step_increase + 0.1).abs() < 1e-15);
        assert!((r.relative_drift + 0.3).abs() < 1e-15);
        let r = entropy_verdict(&[(0.0, -2.0), (0.1, -1.0)]).unwrap();
        assert!(!r.monotone);
        assert!(entropy_verdict(&[(0.1, -2.0), (0.0, -2.0)]).is_err());
        assert!(entropy_verdict(&[(0.0, 1.0)]).unwrap().monotone);
    }
}
