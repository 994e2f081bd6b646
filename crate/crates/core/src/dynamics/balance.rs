use alloc::vec::Vec;

use crate::spectral::{apply_stokes_power, bilinear, inner, norm_as_sq, SpectralField};

use super::{DynamicsError, Trajectory};

/// Derivative at `x` of the Lagrange interpolant through `(xs, ys)`.
fn lagrange_derivative(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let mut acc = 0.0;
    for m in 0..n {
        let mut wm = 0.0;
        for l in 0..n {
            if l == m {
                continue;
            }
            let mut p = 1.0 / (xs[m] - xs[l]);
            for q in 0..n {
                if q != m && q != l {
                    p *= (x - xs[q]) / (xs[m] - xs[q]);
                }
            }
            wm += p;
        }
        acc += wm * ys[m];
    }
    acc
}

/// Finite-difference derivative of a sampled series using a `width`-point
/// stencil, centred where possible and one-sided near the ends.
pub fn finite_difference(times: &[f64], values: &[f64], width: usize) -> Result<Vec<f64>, DynamicsError> {
    let n = times.len();
    if n < width || width < 2 {
        return Err(DynamicsError::TooFewSamples { needed: width.max(2), got: n });
    }
    let half = width / 2;
    Ok((0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - width);
            let r = start..start + width;
            lagrange_derivative(&times[r.clone()], &values[r], times[i])
        })
        .collect())
}

/// Residuals of `1/2 d|u|^2/dt + ||u||^2 - (g,u)` and
/// `1/2 d||u||^2/dt + |Au|^2 - lambda (g,u)` at every sample,
/// with time derivatives from 5-point finite differences.
pub fn balance_residuals(traj: &Trajectory, g: &SpectralField, lambda: i64) -> Result<Vec<(f64, f64, f64)>, DynamicsError> {
    let e: Vec<f64> = traj.states.iter().map(|u| norm_as_sq(u, 0.0)).collect();
    let big_e: Vec<f64> = traj.states.iter().map(|u| norm_as_sq(u, 0.5)).collect();
    let de = finite_difference(&traj.times, &e, 5)?;
    let d_big_e = finite_difference(&traj.times, &big_e, 5)?;
    Ok(traj
        .states
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let gu = inner(g, u);
            let p = norm_as_sq(u, 1.0);
            let r1 = 0.5 * de[i] + big_e[i] - gu;
            let r2 = 0.5 * d_big_e[i] + p - lambda as f64 * gu;
            (traj.times[i], r1, r2)
        })
        .collect())
}

/// Identities satisfied by `u` on a solution with constant energy and enstrophy.
/// Each entry is the signed residual; all vanish for a ghost state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostIdentityResiduals {
    /// `(du/dt, g)`
    pub udot_g: f64,
    /// `(du/dt, u)`
    pub udot_u: f64,
    /// `(du/dt, Au)`
    pub udot_au: f64,
    /// `|B(u,u)|^2 + |Au|^2 - |du/dt|^2 - |g|^2`
    pub b_norm: f64,
    /// `(B(u,u), du/dt) + |du/dt|^2`
    pub b_udot: f64,
}

impl GhostIdentityResiduals {
    pub fn max_abs(&self) -> f64 {
        [self.udot_g, self.udot_u, self.udot_au, self.b_norm, self.b_udot]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn ghost_identity_residuals(u: &SpectralField, udot: &SpectralField, g: &SpectralField) -> GhostIdentityResiduals {
    let au = apply_stokes_power(u, 1.0);
    let b = bilinear(u, u, u.radius_sq().max(g.radius_sq()));
    let udot_sq = norm_as_sq(udot, 0.0);
    GhostIdentityResiduals {
        udot_g: inner(udot, g),
        udot_u: inner(udot, u),
        udot_au: inner(udot, &au),
        b_norm: norm_as_sq(&b, 0.0) + norm_as_sq(&au, 0.0) - udot_sq - norm_as_sq(g, 0.0),
        b_udot: inner(&b, udot) + udot_sq,
    }
}
