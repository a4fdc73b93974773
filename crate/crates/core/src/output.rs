//! CSV and manifest writers. Floats are printed with 17 significant digits
//! (`{:.16e}`), `\n` line endings, and no timestamps outside the manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::grid::GridFunction;
use crate::harness::{OrderFit, RateStudyResult};
use crate::solver::StepDiagnostics;

pub const TIMESERIES_HEADER: &str =
    "step,time,mass,energy,l2_norm,grad_l2,mu_l2,grad_mu_l2,gamma_l2,newton_iters";
pub const FIELD_HEADER: &str = "x,u,mu";
pub const RATE_HEADER: &str = "lambda,error_l2l2,error_hminus1,pairwise_ratio";
pub const SUMMARY_HEADER: &str = "slope,intercept,r_squared,pass";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn timeseries_csv(diagnostics: &[StepDiagnostics]) -> String {
    let mut out = String::with_capacity(200 * (diagnostics.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for d in diagnostics {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            d.step,
            fmt_f64(d.time),
            fmt_f64(d.mass),
            fmt_f64(d.energy),
            fmt_f64(d.l2_norm),
            fmt_f64(d.grad_l2),
            fmt_f64(d.mu_l2),
            fmt_f64(d.grad_mu_l2),
            fmt_f64(d.gamma_l2),
            d.newton_iters
        );
    }
    out
}

pub fn field_csv(u: &GridFunction, mu: &GridFunction) -> String {
    let grid = u.grid();
    let mut out = String::new();
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for i in 0..grid.n() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(grid.x(i)),
            fmt_f64(u.values()[i]),
            fmt_f64(mu.values()[i])
        );
    }
    out
}

/// One row per λ; the pairwise column pairs each λ with the next one and is
/// empty on the last row.
pub fn rate_csv(result: &RateStudyResult) -> String {
    let mut out = String::new();
    out.push_str(RATE_HEADER);
    out.push('\n');
    for i in 0..result.lambdas.len() {
        let pair = result
            .pairwise_ratios
            .get(i)
            .map(|&p| fmt_f64(p))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(result.lambdas[i]),
            fmt_f64(result.errors_l2l2[i]),
            fmt_f64(result.errors_hminus1[i]),
            pair
        );
    }
    out
}

pub fn summary_csv(fit: Option<OrderFit>, pass: bool) -> String {
    let (s, i, r) = match fit {
        Some(f) => (fmt_f64(f.slope), fmt_f64(f.intercept), fmt_f64(f.r_squared)),
        None => (String::new(), String::new(), String::new()),
    };
    format!("{SUMMARY_HEADER}\n{s},{i},{r},{pass}\n")
}

/// Reproducibility record written next to every output set.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
}

pub fn unix_time() -> f64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
