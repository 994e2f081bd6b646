use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::Trajectory;
use crate::spectral::{apply_stokes_power, bilinear, eigenspace_project, inner, norm_as, norm_as_sq, SpectralField};

use super::{GeometryError, GhostDiagnostics};

/// Relative cutoff for the denominators `G^2 - P`, `lambda e - E` and `E`.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// `(gamma, beta, alpha)` of the relation `A^2 u = gamma g + beta u + alpha Au`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawCoefficients {
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainedCoefficients {
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
    /// `E / G^2`
    pub eta: f64,
}

impl ChainedCoefficients {
    pub fn discriminant(&self) -> f64 {
        self.alpha * self.alpha + 4.0 * self.beta
    }

    pub fn raw(&self) -> RawCoefficients {
        RawCoefficients {
            gamma: self.gamma,
            beta: self.beta,
            alpha: self.alpha,
        }
    }
}

/// The coefficient formulas evaluated on any diagnostics, without checking
/// that the ghost relations hold:
/// `gamma = rho/(G^2-P)`, `beta = rho/(lambda e - E)`, `alpha = P/E - gamma - (e/E) beta`
/// with `rho = lambda P - |A^{3/2}u|^2`.
pub fn chained_coefficients_raw(d: &GhostDiagnostics) -> Result<RawCoefficients, GeometryError> {
    let lam = d.lam();
    let tol = DENOMINATOR_TOL * d.g_sq;
    let dg = d.g_sq - d.p;
    let de = lam * d.e - d.big_e;
    if !(dg.abs() > tol) {
        return Err(GeometryError::DegenerateDiagnostics { which: "G^2 - P" });
    }
    if !(de.abs() > tol) {
        return Err(GeometryError::DegenerateDiagnostics { which: "lambda e - E" });
    }
    if !(d.big_e.abs() > tol) {
        return Err(GeometryError::DegenerateDiagnostics { which: "E" });
    }
    let rho = lam * d.p - d.a32_sq;
    let gamma = rho / dg;
    let beta = rho / de;
    let alpha = d.p / d.big_e - gamma - d.e / d.big_e * beta;
    Ok(RawCoefficients { gamma, beta, alpha })
}

/// Chained coefficients of a ghost state with the roots `mu_-/+` of
/// `mu^2 - alpha mu - beta = 0`. Enforces `gamma < 0`, `beta < 0`,
/// `alpha > lambda`, a positive discriminant and `lambda` not a root.
pub fn chained_coefficients(d: &GhostDiagnostics) -> Result<ChainedCoefficients, GeometryError> {
    let RawCoefficients { gamma, beta, alpha } = chained_coefficients_raw(d)?;
    let lam = d.lam();
    if !(gamma < 0.0) {
        return Err(GeometryError::InvariantViolation { what: "gamma < 0" });
    }
    if !(beta < 0.0) {
        return Err(GeometryError::InvariantViolation { what: "beta < 0" });
    }
    if !(alpha > lam) {
        return Err(GeometryError::InvariantViolation { what: "alpha > lambda" });
    }
    let disc = alpha * alpha + 4.0 * beta;
    if !(disc > 0.0) {
        return Err(GeometryError::NegativeDiscriminant { value: disc });
    }
    let sq = disc.sqrt();
    let mu_plus = 0.5 * (alpha + sq);
    // mu_- mu_+ = -beta, stable when alpha and sqrt(disc) nearly cancel
    let mu_minus = -beta / mu_plus;
    for mu in [mu_minus, mu_plus] {
        if (mu - lam).abs() <= 1e-12 * lam {
            return Err(GeometryError::InvariantViolation {
                what: "lambda is a root of mu^2 - alpha mu - beta",
            });
        }
    }
    Ok(ChainedCoefficients {
        gamma,
        beta,
        alpha,
        mu_minus,
        mu_plus,
        eta: d.big_e / d.g_sq,
    })
}

/// `|A^2 u - gamma g - beta u - alpha Au|`.
pub fn chained_residual(u: &SpectralField, g: &SpectralField, c: &RawCoefficients) -> f64 {
    let a2u = apply_stokes_power(u, 2.0);
    let au = apply_stokes_power(u, 1.0);
    let r = a2u.lin_comb(1.0, g, -c.gamma).lin_comb(1.0, u, -c.beta).lin_comb(1.0, &au, -c.alpha);
    norm_as(&r, 0.0)
}

/// Split `u = u_+ + u_- + eta g` of a chained state, with the predicted shell
/// energies and the weighted balance.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainedDecomposition {
    pub u_plus: SpectralField,
    pub u_minus: SpectralField,
    /// `(g, u) / G^2`
    pub eta: f64,
    /// `E / G^2 - eta`, zero under the ghost relations.
    pub eta_check: f64,
    /// `|u - u_+ - u_- - eta g|`
    pub residual: f64,
    pub u_plus_sq: f64,
    pub u_minus_sq: f64,
    /// `(lambda - mu_-) / (mu_+ (mu_+ - mu_-)) E (1 - P/G^2)`
    pub u_plus_sq_predicted: f64,
    /// `(lambda - mu_+) / (mu_- (mu_- - mu_+)) E (1 - P/G^2)`
    pub u_minus_sq_predicted: f64,
    /// `mu_+ |u_+|^2 (lambda - mu_+) + mu_- |u_-|^2 (lambda - mu_-)`
    pub balance: f64,
}

impl ChainedDecomposition {
    /// `u_+` vanishes, which by the predicted norm forces `P = G^2`, i.e. the stationary state.
    pub fn forces_stationary(&self) -> bool {
        self.u_plus_sq == 0.0
    }
}

fn nearest_shell(mu: f64) -> Option<i64> {
    let r = mu.round();
    if r >= 1.0 && (mu - r).abs() <= 1e-8 * mu.abs() {
        Some(r as i64)
    } else {
        None
    }
}

/// Fails with `DecompositionResidual` when `u` has energy outside the shells
/// `mu_-`, `lambda`, `mu_+` or its `lambda` part is not `eta g`.
pub fn decompose_chained(u: &SpectralField, g: &SpectralField, lambda: i64, c: &ChainedCoefficients) -> Result<ChainedDecomposition, GeometryError> {
    let project = |mu: f64| match nearest_shell(mu) {
        Some(m) => eigenspace_project(u, m),
        None => SpectralField::zero(u.radius_sq()),
    };
    let u_plus = project(c.mu_plus);
    let u_minus = project(c.mu_minus);
    let g_sq = norm_as_sq(g, 0.0);
    let big_e = norm_as_sq(u, 0.5);
    let p = norm_as_sq(u, 1.0);
    let eta = inner(g, u) / g_sq;
    let rest = u.lin_comb(1.0, &u_plus, -1.0).lin_comb(1.0, &u_minus, -1.0).lin_comb(1.0, g, -eta);
    let residual = norm_as(&rest, 0.0);
    let scale = norm_as(u, 0.0).max(g_sq.sqrt());
    if residual > 1e-10 * scale {
        return Err(GeometryError::DecompositionResidual { residual });
    }
    let (mp, mm, lam) = (c.mu_plus, c.mu_minus, lambda as f64);
    let common = big_e * (1.0 - p / g_sq);
    let u_plus_sq = norm_as_sq(&u_plus, 0.0);
    let u_minus_sq = norm_as_sq(&u_minus, 0.0);
    Ok(ChainedDecomposition {
        u_plus,
        u_minus,
        eta,
        eta_check: big_e / g_sq - eta,
        residual,
        u_plus_sq,
        u_minus_sq,
        u_plus_sq_predicted: (lam - mm) / (mp * (mp - mm)) * common,
        u_minus_sq_predicted: (lam - mp) / (mm * (mm - mp)) * common,
        balance: mp * u_plus_sq * (lam - mp) + mm * u_minus_sq * (lam - mm),
    })
}

/// Both sides of `2P - |A^{3/2}u|^2 = -1 / ((1 - e/E)/(2e - E) - 1/(G^2 - P))`,
/// valid for chained states forced on shell 2.
pub fn lambda_two_a32_identity(d: &GhostDiagnostics) -> (f64, f64) {
    let lhs = 2.0 * d.p - d.a32_sq;
    let rhs = -1.0 / ((1.0 - d.e / d.big_e) / (2.0 * d.e - d.big_e) - 1.0 / (d.g_sq - d.p));
    (lhs, rhs)
}

/// `beta = -1 / (1 - e/E - (2e - E)/(G^2 - P))` for chained states forced on
/// shell 2; then `mu_+ = -beta` and `mu_- = 1`.
pub fn lambda_two_beta(d: &GhostDiagnostics) -> f64 {
    -1.0 / (1.0 - d.e / d.big_e - (2.0 * d.e - d.big_e) / (d.g_sq - d.p))
}

/// Time variation of `|A^s u|` and `(A^{2s} u, B(u,u))` along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerConstancy {
    pub s: f64,
    /// `max_t | |A^s u(t)| - |A^s u(0)| |`
    pub norm_deviation: f64,
    /// `max_t | (A^{2s}u(t), B(u(t),u(t))) - (A^{2s}u(0), B(u(0),u(0))) |`
    pub pairing_deviation: f64,
}

pub fn powers_constancy_check(traj: &Trajectory, s_values: &[f64]) -> Vec<PowerConstancy> {
    let bs: Vec<SpectralField> = traj.states.iter().map(|u| bilinear(u, u, u.radius_sq())).collect();
    s_values
        .iter()
        .map(|&s| {
            let norms: Vec<f64> = traj.states.iter().map(|u| norm_as(u, s)).collect();
            let pairs: Vec<f64> = traj
                .states
                .iter()
                .zip(&bs)
                .map(|(u, b)| inner(&apply_stokes_power(u, 2.0 * s), b))
                .collect();
            let dev = |v: &[f64]| v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max);
            PowerConstancy {
                s,
                norm_deviation: if norms.is_empty() { 0.0 } else { dev(&norms) },
                pairing_deviation: if pairs.is_empty() { 0.0 } else { dev(&pairs) },
            }
        })
        .collect()
}
