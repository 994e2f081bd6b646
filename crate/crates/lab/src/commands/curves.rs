use std::io::Write;
use std::path::PathBuf;

use ghostlab_core::geometry::{overlay_rows, OverlayRow};

use super::{say, Context};
use crate::config::output_name;
use crate::error::{LabError, Result};
use crate::export::{fmt_f64, fmt_opt, Table};

/// `E_curve` is the chained-ghost curve for the given `mu_+`; the others are the
/// overlays `G sqrt(e)`, `e`, `2e`, the lower branch of `E^2 - G^2 E + e G^2 = 0`
/// and the logarithmic lower bound. Missing values print as `nan`.
pub const COLUMNS: [&str; 7] = ["e", "E_curve", "E_sqrt_e", "E_eq_e", "E_2e", "E_boundary_parabola", "E_lower_bound"];

pub fn curve_table(rows: &[OverlayRow]) -> Table {
    let mut t = Table::new(&COLUMNS);
    for r in rows {
        t.push(vec![
            fmt_f64(r.e),
            fmt_opt(r.curve),
            fmt_f64(r.sqrt_e),
            fmt_f64(r.eq_e),
            fmt_f64(r.two_e),
            fmt_opt(r.boundary_parabola),
            fmt_opt(r.lower_bound),
        ]);
    }
    t
}

#[derive(Clone, Debug)]
pub struct CurveSet {
    pub mu_plus: f64,
    pub rows: Vec<OverlayRow>,
    pub path: PathBuf,
}

pub fn run(ctx: &Context, log: &mut dyn Write) -> Result<Vec<CurveSet>> {
    let c = &ctx.config;
    let g = c.g_value()?;
    let mus = c.mu_plus.clone().ok_or(LabError::MissingKey("mu_plus"))?;
    if mus.is_empty() {
        return Err(LabError::config("`mu_plus` must be nonempty"));
    }
    if let Some(m) = mus.iter().find(|m| !(**m > 2.0 && m.is_finite())) {
        return Err(LabError::config(format!("mu_plus = {m} must exceed lambda = 2")));
    }
    let c_bg = c.c_bg.unwrap_or(1.0);
    if !(c_bg >= 0.0 && c_bg.is_finite()) {
        return Err(LabError::config("`c_bg` must be nonnegative"));
    }
    let e_grid = c.e_values(g)?;
    let prefix = output_name(&c.outputs.curve_prefix, "curve_mu");
    let mut out = Vec::new();
    for &mu in &mus {
        let rows = overlay_rows(mu, g, c_bg, &e_grid).map_err(LabError::config)?;
        let path = curve_table(&rows).write(&ctx.out, &format!("{prefix}{mu}.tsv"))?;
        let last = rows.iter().rev().find_map(|r| r.curve.map(|e_big| (r.e, e_big)));
        if let Some((e, e_big)) = last {
            say(log, format!("mu_plus={mu}: {} points, last (e, E) = ({}, {}) -> {}", rows.len(), fmt_f64(e), fmt_f64(e_big), path.display()));
        }
        out.push(CurveSet { mu_plus: mu, rows, path });
    }
    Ok(out)
}

