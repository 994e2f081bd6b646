use std::io::Write;

use ghostlab_core::dynamics::{analyze_trajectory, ghost_check, GhostCheckParams, GhostCheckReport, Trajectory, Verdict};
use ghostlab_core::sampling::random_on_shells;
use ghostlab_core::spectral::{ScalarAmplitudeField, SpectralField};
use ghostlab_core::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{say, Context};
use crate::config::{output_name, positive, InitialData, Problem, RunConfig};
use crate::error::{LabError, Result};
use crate::export::{fmt_f64, fmt_opt, Table};

pub fn params(c: &RunConfig, g_sq: f64) -> Result<GhostCheckParams> {
    let d = GhostCheckParams::defaults(g_sq);
    let p = GhostCheckParams {
        t_end: positive("T", c.t_end.unwrap_or(d.t_end))?,
        dt: positive("dt", c.dt.unwrap_or(d.dt))?,
        sample_every: c.sample_every.unwrap_or(d.sample_every),
        eps_eta: positive("eps_eta", c.eps_eta.unwrap_or(d.eps_eta))?,
        eps_chained: positive("eps_chained", c.eps_chained.unwrap_or(d.eps_chained))?,
        transient_fraction: c.transient_fraction.unwrap_or(d.transient_fraction),
    };
    if p.sample_every == 0 {
        return Err(LabError::config("`sample_every` must be at least 1"));
    }
    if !(0.0..1.0).contains(&p.transient_fraction) {
        return Err(LabError::config("`transient_fraction` must lie in [0, 1)"));
    }
    Ok(p)
}

/// `eta g + (u - eta g)(t)` with every mode of `u - eta g` turning at frequency
/// `omega`. Norms and pairings with `g` stay fixed, so a chained `u` gives a
/// trajectory with constant diagnostics that passes every smallness test
/// without solving the equations.
pub fn manufactured_chained_trajectory(u: &SpectralField, g: &SpectralField, eta: f64, omega: f64, times: &[f64]) -> Result<Trajectory> {
    let rest = u.lin_comb(1.0, g, -eta).to_scalar();
    let radius = u.radius_sq();
    let turned = |t: f64, factor: Complex64| -> Result<SpectralField> {
        let phase = Complex64::new(0.0, omega * t).exp() * factor;
        let amps = ScalarAmplitudeField::new(rest.iter().filter(|(k, _)| *k > -*k).map(|(k, a)| (k, a * phase)))
            .map_err(|e| LabError::Numeric(e.to_string()))?;
        SpectralField::from_scalar(&amps, radius).map_err(|e| LabError::Numeric(e.to_string()))
    };
    let mut states = Vec::with_capacity(times.len());
    let mut derivatives = Vec::with_capacity(times.len());
    for &t in times {
        states.push(turned(t, Complex64::new(1.0, 0.0))?.lin_comb(1.0, g, eta));
        derivatives.push(turned(t, Complex64::new(0.0, omega))?);
    }
    Ok(Trajectory::new(times.to_vec(), states, derivatives)?)
}

fn report_table(r: &GhostCheckReport) -> Table {
    let mut t = Table::new(&["key", "value"]);
    let rows = [
        ("verdict", r.verdict.as_str().to_string()),
        ("eta_derivative_max", fmt_f64(r.eta_derivative_max)),
        ("max_chained_residual", fmt_f64(r.max_chained_residual)),
        ("outside_defect_max", fmt_f64(r.outside_defect_max)),
        ("passes_compressed_tests", r.passes_compressed_tests.to_string()),
        ("final_udot_norm", fmt_f64(r.final_udot_norm)),
        ("set_quantity", fmt_f64(r.set_quantity)),
        ("transient_end", fmt_f64(r.transient_end)),
    ];
    for (k, v) in rows {
        t.push(vec![k.into(), v]);
    }
    t
}

fn series_table(r: &GhostCheckReport) -> Table {
    let mut t = Table::new(&["t", "eta", "chained_residual"]);
    for (&(time, eta), &(_, res)) in r.eta_series.iter().zip(&r.chained_residual_series) {
        t.push(vec![fmt_f64(time), fmt_f64(eta), fmt_opt(res)]);
    }
    t
}

pub const ENSEMBLE_COLUMNS: [&str; 7] = [
    "seed",
    "verdict",
    "eta_derivative_max",
    "max_chained_residual",
    "outside_defect_max",
    "final_udot_norm",
    "set_quantity",
];

#[derive(Clone, Debug)]
pub enum GhostSummary {
    Single(GhostCheckReport),
    /// `(seed, report)` in seed order.
    Ensemble(Vec<(u64, GhostCheckReport)>),
}

impl GhostSummary {
    pub fn verdicts(&self) -> Vec<Verdict> {
        match self {
            GhostSummary::Single(r) => vec![r.verdict],
            GhostSummary::Ensemble(v) => v.iter().map(|(_, r)| r.verdict).collect(),
        }
    }
}

fn single(ctx: &Context, p: &Problem, params: &GhostCheckParams) -> Result<GhostCheckReport> {
    let c = &ctx.config;
    if let Some(InitialData::Chained { eta, omega, seed }) = &c.u0 {
        let u = c.chained_state(p, *eta, seed.unwrap_or(ctx.seed_or(0)))?;
        let spacing = params.dt * params.sample_every as f64;
        let n = (params.t_end / spacing).round() as usize + 1;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * spacing).collect();
        let traj = manufactured_chained_trajectory(&u, &p.force, *eta, omega.unwrap_or(1.0), &times)?;
        return Ok(analyze_trajectory(&traj, &p.spec, params)?);
    }
    let u0 = c.initial_state(p, ctx.seed_or(0), &ctx.base)?;
    Ok(ghost_check(&u0, &p.spec, params)?.report)
}

fn ensemble(ctx: &Context, p: &Problem, params: &GhostCheckParams, runs: usize) -> Result<Vec<(u64, GhostCheckReport)>> {
    let (first, scale) = match &ctx.config.u0 {
        None => (ctx.seed_or(0), p.g),
        Some(InitialData::Random { seed, scale }) => (seed.unwrap_or(ctx.seed_or(0)), positive("u0.scale", scale.unwrap_or(p.g))?),
        Some(_) => return Err(LabError::config("an ensemble needs random initial data (`u0.kind = \"random\"`)")),
    };
    let shells: Vec<i64> = p.shells.iter().copied().collect();
    let seeds: Vec<u64> = (0..runs as u64).map(|i| first.wrapping_add(i)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.max(1))
        .build()
        .map_err(|e| LabError::config(format!("thread pool: {e}")))?;
    let results: Vec<Result<(u64, GhostCheckReport)>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&s| {
                let u0 = random_on_shells(&mut ChaCha8Rng::seed_from_u64(s), &shells, scale);
                ghost_check(&u0, &p.spec, params)
                    .map(|run| (s, run.report))
                    .map_err(|e| match LabError::from(e) {
                        LabError::Numeric(m) => LabError::Numeric(format!("seed {s}: {m}")),
                        other => other,
                    })
            })
            .collect()
    });
    results.into_iter().collect()
}

pub fn run(ctx: &Context, log: &mut dyn Write) -> Result<GhostSummary> {
    let c = &ctx.config;
    let p = c.problem()?;
    let params = params(c, p.g * p.g)?;
    match c.ensemble {
        None => {
            let r = single(ctx, &p, &params)?;
            report_table(&r).write(&ctx.out, output_name(&c.outputs.report, "ghost_check_report.tsv"))?;
            series_table(&r).write(&ctx.out, output_name(&c.outputs.series, "ghost_check_series.tsv"))?;
            say(log, format!("verdict: {}", r.verdict.as_str()));
            Ok(GhostSummary::Single(r))
        }
        Some(0) => Err(LabError::config("`ensemble` must be at least 1")),
        Some(runs) => {
            let reports = ensemble(ctx, &p, &params, runs)?;
            let mut t = Table::new(&ENSEMBLE_COLUMNS);
            for (s, r) in &reports {
                t.push(vec![
                    s.to_string(),
                    r.verdict.as_str().into(),
                    fmt_f64(r.eta_derivative_max),
                    fmt_f64(r.max_chained_residual),
                    fmt_f64(r.outside_defect_max),
                    fmt_f64(r.final_udot_norm),
                    fmt_f64(r.set_quantity),
                ]);
            }
            t.write(&ctx.out, output_name(&c.outputs.ensemble, "ghost_check_ensemble.tsv"))?;
            for v in [Verdict::CandidateChainedGhost, Verdict::NotGhost, Verdict::ConvergedToSteadyState] {
                let n = reports.iter().filter(|(_, r)| r.verdict == v).count();
                say(log, format!("{}: {n}", v.as_str()));
            }
            Ok(GhostSummary::Ensemble(reports))
        }
    }
}
