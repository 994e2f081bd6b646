use std::io::Write;

use ghostlab_core::dynamics::{integrate, RhsKind, Trajectory};
use ghostlab_core::geometry::{chained_coefficients_raw, chained_residual, diagnostics};
use ghostlab_core::spectral::{norm_as_sq, SpectralField};

use super::{say, Context};
use crate::config::{output_name, positive, RunConfig, SystemKind};
use crate::error::{LabError, Result};
use crate::export::{fmt_f64, Table};
use crate::fieldio::field_table;

pub const COLUMNS: [&str; 7] = ["t", "e", "E", "P", "A32", "eta", "chained_residual"];

/// One row per sample; `eta = E / G^2`, and the chained residual is `nan` where
/// the coefficients are singular (for instance at a stationary state).
pub fn trajectory_table(traj: &Trajectory, g: &SpectralField, lambda: i64) -> Table {
    let g_sq = norm_as_sq(g, 0.0);
    let mut t = Table::new(&COLUMNS);
    for ((&time, u), udot) in traj.times.iter().zip(&traj.states).zip(&traj.derivatives) {
        let d = diagnostics(u, udot, g, lambda);
        let r = chained_coefficients_raw(&d).map_or(f64::NAN, |c| chained_residual(u, g, &c));
        t.push_floats(&[time, d.e, d.big_e, d.p, d.a32_sq, d.big_e / g_sq, r]);
    }
    t
}

#[derive(Clone, Debug)]
pub struct SimulateSummary {
    pub trajectory: Trajectory,
    pub final_e: f64,
    pub final_big_e: f64,
    pub final_p: f64,
}

pub fn run(ctx: &Context, log: &mut dyn Write) -> Result<SimulateSummary> {
    let c = &ctx.config;
    let p = c.problem()?;
    let dt = positive("dt", RunConfig::require(c.dt, "dt")?)?;
    let t_end = positive("T", RunConfig::require(c.t_end, "T")?)?;
    let sample_every = c.sample_every.unwrap_or(1);
    if sample_every == 0 {
        return Err(LabError::config("`sample_every` must be at least 1"));
    }
    let u0 = c.initial_state(&p, ctx.seed_or(0), &ctx.base)?;
    let system = c.system.unwrap_or_default();
    let trajectory = match system {
        SystemKind::Full => {
            let radius = c.radius_sq.unwrap_or(*p.shells.iter().next_back().expect("nonempty"));
            if radius < p.lambda {
                return Err(LabError::config(format!("`radius_sq` = {radius} is below lambda")));
            }
            let u0 = u0.with_radius(radius).map_err(|e| LabError::config(format!("u0: {e}")))?;
            integrate(&u0, RhsKind::Full(&p.force), t_end, dt, sample_every)?
        }
        SystemKind::Compressed => integrate(&u0, RhsKind::Compressed(&p.spec), t_end, dt, sample_every)?,
    };
    trajectory_table(&trajectory, &p.force, p.lambda).write(&ctx.out, output_name(&c.outputs.trajectory, "trajectory.tsv"))?;
    let last = trajectory.states.last().expect("at least one sample");
    field_table(last).write(&ctx.out, output_name(&c.outputs.final_state, "final_state.tsv"))?;
    let (final_e, final_big_e, final_p) = (norm_as_sq(last, 0.0), norm_as_sq(last, 0.5), norm_as_sq(last, 1.0));
    say(
        log,
        format!(
            "final t={} e={} E={} P={}",
            fmt_f64(*trajectory.times.last().expect("nonempty")),
            fmt_f64(final_e),
            fmt_f64(final_big_e),
            fmt_f64(final_p)
        ),
    );
    Ok(SimulateSummary {
        trajectory,
        final_e,
        final_big_e,
        final_p,
    })
}
