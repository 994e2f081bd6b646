use std::io::Write;

use ghostlab_core::spectral::bilinear;

use super::{say, Context};
use crate::config::output_name;
use crate::error::{LabError, Result};
use crate::export::{fmt_f64, Table};
use crate::identities::{run_suite, BilinearFn, SuiteParams, SuiteReport};

pub fn run(ctx: &Context, log: &mut dyn Write) -> Result<SuiteReport> {
    run_with(ctx, log, &bilinear)
}

/// Runs the suite against `b` instead of the kernel's bilinear map.
pub fn run_with(ctx: &Context, log: &mut dyn Write, b: BilinearFn<'_>) -> Result<SuiteReport> {
    let c = &ctx.config;
    let samples = c.samples.unwrap_or(1000);
    if samples == 0 {
        return Err(LabError::config("`samples` must be at least 1"));
    }
    let mut params = SuiteParams::new(samples, ctx.seed_or(0));
    params.oracle_samples = c.oracle_samples.unwrap_or(samples);
    params.oracle_grid = c.oracle_grid.unwrap_or(params.oracle_grid);
    if params.oracle_grid < 4 * (params.radius_sq as f64).sqrt().ceil() as usize + 1 {
        return Err(LabError::config(format!("`oracle_grid` = {} aliases radius^2 {}", params.oracle_grid, params.radius_sq)));
    }
    let report = run_suite(&params, b);

    let mut t = Table::new(&["identity", "samples", "max_residual", "tolerance", "status"]);
    for r in &report.results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        t.push(vec![r.name.into(), r.samples.to_string(), fmt_f64(r.max_residual), fmt_f64(r.tolerance), status.into()]);
        say(log, format!("{:<28} {:>6} samples  max {}  tol {}  {status}", r.name, r.samples, fmt_f64(r.max_residual), fmt_f64(r.tolerance)));
    }
    t.write(&ctx.out, output_name(&c.outputs.identities, "identities.tsv"))?;
    let mut e = Table::new(&["sample", "enstrophy_invariance_residual"]);
    for (i, x) in report.enstrophy_per_sample.iter().enumerate() {
        e.push(vec![i.to_string(), fmt_f64(*x)]);
    }
    e.write(&ctx.out, output_name(&c.outputs.enstrophy, "enstrophy_invariance.tsv"))?;

    let failed: Vec<&str> = report.failures().iter().map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(LabError::Verification(format!("identities failed: {}", failed.join(", "))))
    }
}
