use alloc::vec::Vec;

use crate::geometry::{chained_coefficients_raw, chained_residual, diagnostics};
use crate::spectral::{norm_as, norm_as_sq, project_shells, truncate, SpectralField};

use super::balance::finite_difference;
use super::integrate::{integrate, Trajectory};
use super::system::RhsKind;
use super::rhs::outside_shell_defect;
use super::{DynamicsError, GalerkinSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostCheckParams {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    /// Threshold on `|eta'|` after the transient, and on the final `|du/dt|`.
    pub eps_eta: f64,
    /// Threshold on the chained residual and on `|(1 - E) B(u,u)|` after the transient.
    pub eps_chained: f64,
    /// Fraction of `[0, T]` discarded before the smallness tests.
    pub transient_fraction: f64,
}

impl GhostCheckParams {
    /// `dt = 1e-3`, `T = 100`, every 10th step, `eps_eta = 1e-6 G^2`, `eps_chained = 1e-3`,
    /// first half discarded.
    pub fn defaults(g_sq: f64) -> Self {
        Self {
            t_end: 100.0,
            dt: 1e-3,
            sample_every: 10,
            eps_eta: 1e-6 * g_sq,
            eps_chained: 1e-3,
            transient_fraction: 0.5,
        }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        let checks = [
            ("eps_eta", self.eps_eta, self.eps_eta > 0.0),
            ("eps_chained", self.eps_chained, self.eps_chained > 0.0),
            (
                "transient_fraction",
                self.transient_fraction,
                (0.0..1.0).contains(&self.transient_fraction),
            ),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(DynamicsError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    CandidateChainedGhost,
    NotGhost,
    ConvergedToSteadyState,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CandidateChainedGhost => "CandidateChainedGhost",
            Verdict::NotGhost => "NotGhost",
            Verdict::ConvergedToSteadyState => "ConvergedToSteadyState",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GhostCheckReport {
    /// `(t, ||u||^2 / G^2)`
    pub eta_series: Vec<(f64, f64)>,
    /// `max |eta'|` after the transient.
    pub eta_derivative_max: f64,
    /// `(t, |A^2 u - gamma g - beta u - alpha Au|)`, `None` where a coefficient denominator vanishes.
    pub chained_residual_series: Vec<(f64, Option<f64>)>,
    /// Maximum after the transient (infinite if any sample there is singular).
    pub max_chained_residual: f64,
    /// `max |(1 - E) B(u,u)|` after the transient: the transfer out of the
    /// Galerkin shells that the compressed system drops.
    pub outside_defect_max: f64,
    /// The `eta'` and chained tests pass, whatever the outside transfer.
    pub passes_compressed_tests: bool,
    pub final_udot_norm: f64,
    /// `(lambda e - E)(E / e)` at the final sample.
    pub set_quantity: f64,
    pub transient_end: f64,
    pub verdict: Verdict,
}

/// Applies the smallness tests to a trajectory on the Galerkin shells of `spec`.
///
/// A candidate needs small `|eta'|`, a small chained residual and a small
/// outside transfer `(1 - E) B(u,u)`; without the last one a trajectory of the
/// compressed system need not solve the full equations.
pub fn analyze_trajectory(traj: &Trajectory, spec: &GalerkinSpec, params: &GhostCheckParams) -> Result<GhostCheckReport, DynamicsError> {
    params.validate()?;
    let (g, lambda) = (spec.force(), spec.lambda());
    let n = traj.len();
    if n < 3 {
        return Err(DynamicsError::TooFewSamples { needed: 3, got: n });
    }
    let g_sq = norm_as_sq(g, 0.0);
    if g_sq == 0.0 {
        return Err(DynamicsError::ZeroForce);
    }
    let eta: Vec<f64> = traj.states.iter().map(|u| norm_as_sq(u, 0.5) / g_sq).collect();
    let d_eta = finite_difference(&traj.times, &eta, 3)?;
    let chained: Vec<(f64, Option<f64>)> = traj
        .times
        .iter()
        .zip(traj.states.iter().zip(&traj.derivatives))
        .map(|(&t, (u, udot))| {
            let d = diagnostics(u, udot, g, lambda);
            (t, chained_coefficients_raw(&d).ok().map(|c| chained_residual(u, g, &c)))
        })
        .collect();

    let t0 = traj.times[0];
    let transient_end = t0 + params.transient_fraction * (traj.times[n - 1] - t0);
    let after = |t: f64| t >= transient_end;
    let eta_derivative_max = traj
        .times
        .iter()
        .zip(&d_eta)
        .filter(|(&t, _)| after(t))
        .fold(0.0f64, |m, (_, d)| m.max(d.abs()));
    let mut max_chained_residual = 0.0f64;
    let mut first_singular = None;
    for &(t, r) in chained.iter().filter(|(t, _)| after(*t)) {
        match r {
            Some(r) => max_chained_residual = max_chained_residual.max(r),
            None => {
                first_singular.get_or_insert(t);
                max_chained_residual = f64::INFINITY;
            }
        }
    }

    let mut outside_defect_max = 0.0f64;
    for (t, u) in traj.times.iter().zip(&traj.states) {
        if after(*t) {
            outside_defect_max = outside_defect_max.max(outside_shell_defect(u, spec)?);
        }
    }
    let passes_compressed_tests = eta_derivative_max < params.eps_eta && max_chained_residual < params.eps_chained;

    let u_last = &traj.states[n - 1];
    let final_udot_norm = norm_as(&traj.derivatives[n - 1], 0.0);
    let (e, big_e) = (norm_as_sq(u_last, 0.0), norm_as_sq(u_last, 0.5));
    let set_quantity = if e > 0.0 {
        (lambda as f64 * e - big_e) * (big_e / e)
    } else {
        0.0
    };

    let verdict = if final_udot_norm < params.eps_eta {
        Verdict::ConvergedToSteadyState
    } else if let Some(t) = first_singular {
        return Err(DynamicsError::DegenerateDiagnostics { t });
    } else if passes_compressed_tests && outside_defect_max < params.eps_chained {
        Verdict::CandidateChainedGhost
    } else {
        Verdict::NotGhost
    };

    Ok(GhostCheckReport {
        eta_series: traj.times.iter().copied().zip(eta).collect(),
        eta_derivative_max,
        chained_residual_series: chained,
        max_chained_residual,
        outside_defect_max,
        passes_compressed_tests,
        final_udot_norm,
        set_quantity,
        transient_end,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GhostCheckRun {
    pub trajectory: Trajectory,
    pub report: GhostCheckReport,
}

/// Integrates the compressed system from the projection of `u0` onto the
/// Galerkin shells and analyses the trajectory.
pub fn ghost_check(u0: &SpectralField, spec: &GalerkinSpec, params: &GhostCheckParams) -> Result<GhostCheckRun, DynamicsError> {
    params.validate()?;
    let start = truncate(&project_shells(u0, spec.mode_shells()), spec.radius_sq());
    let trajectory = integrate(&start, RhsKind::Compressed(spec), params.t_end, params.dt, params.sample_every)?;
    let report = analyze_trajectory(&trajectory, spec, params)?;
    Ok(GhostCheckRun { trajectory, report })
}
