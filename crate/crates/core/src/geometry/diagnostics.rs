#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{inner, norm_as_sq, SpectralField};

use super::GeometryError;

/// Scalar state of `u` relative to the force `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostDiagnostics {
    /// `|u|^2`
    pub e: f64,
    /// `||u||^2 = |A^{1/2} u|^2`
    pub big_e: f64,
    /// `|Au|^2`
    pub p: f64,
    /// `|g|^2`
    pub g_sq: f64,
    /// `|A^{3/2} u|^2`
    pub a32_sq: f64,
    /// `|du/dt|^2`
    pub udot_sq: f64,
    /// `(g, u)`
    pub gu: f64,
    pub lambda: i64,
}

impl GhostDiagnostics {
    /// Diagnostics with the ghost relations `(g,u) = E`, `P = lambda E` imposed.
    pub fn ghost(e: f64, big_e: f64, g_sq: f64, a32_sq: f64, udot_sq: f64, lambda: i64) -> Self {
        Self {
            e,
            big_e,
            p: lambda as f64 * big_e,
            g_sq,
            a32_sq,
            udot_sq,
            gu: big_e,
            lambda,
        }
    }

    pub fn lam(&self) -> f64 {
        self.lambda as f64
    }

    /// `(E - (g,u), P - lambda E)`.
    pub fn ghost_relation_defects(&self) -> (f64, f64) {
        (self.big_e - self.gu, self.p - self.lam() * self.big_e)
    }

    /// Whether both ghost relations hold to `tol * |g|^2`.
    pub fn satisfies_ghost_relations(&self, tol: f64) -> bool {
        let (a, b) = self.ghost_relation_defects();
        let scale = tol * self.g_sq.max(f64::MIN_POSITIVE);
        a.abs() <= scale && b.abs() <= scale
    }
}

pub fn diagnostics(u: &SpectralField, udot: &SpectralField, g: &SpectralField, lambda: i64) -> GhostDiagnostics {
    GhostDiagnostics {
        e: norm_as_sq(u, 0.0),
        big_e: norm_as_sq(u, 0.5),
        p: norm_as_sq(u, 1.0),
        g_sq: norm_as_sq(g, 0.0),
        a32_sq: norm_as_sq(u, 1.5),
        udot_sq: norm_as_sq(udot, 0.0),
        gu: inner(g, u),
        lambda,
    }
}

/// The four equivalent strict inequalities for a nonstationary state, the
/// corresponding equalities, and the bounds `E <= lambda e <= lambda E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    /// `P < G^2`
    pub p_below_g_sq: bool,
    /// `E < lambda e`
    pub enstrophy_below_lambda_e: bool,
    /// `E^2 < e G^2`
    pub enstrophy_sq_below_e_g_sq: bool,
    /// `E^2 < e P`
    pub enstrophy_sq_below_e_p: bool,
    /// All four hold with equality (to rounding): the stationary state.
    pub all_equal: bool,
    /// The four strict inequalities agree, as they must for any state with the ghost relations.
    pub consistent: bool,
    /// `E <= lambda e`
    pub lower_bound: bool,
    /// `lambda e <= lambda E`
    pub upper_bound: bool,
}

impl InequalityReport {
    pub fn all_strict(&self) -> bool {
        self.p_below_g_sq && self.enstrophy_below_lambda_e && self.enstrophy_sq_below_e_g_sq && self.enstrophy_sq_below_e_p
    }
}

const EQ_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn inequality_report(d: &GhostDiagnostics) -> InequalityReport {
    let lam = d.lam();
    let pairs = [
        (d.p, d.g_sq),
        (d.big_e, lam * d.e),
        (d.big_e * d.big_e, d.e * d.g_sq),
        (d.big_e * d.big_e, d.e * d.p),
    ];
    let strict = pairs.map(|(a, b)| a < b && !close(a, b));
    let equal = pairs.map(|(a, b)| close(a, b));
    let all_strict = strict.iter().all(|&s| s);
    let all_equal = equal.iter().all(|&s| s);
    InequalityReport {
        p_below_g_sq: strict[0],
        enstrophy_below_lambda_e: strict[1],
        enstrophy_sq_below_e_g_sq: strict[2],
        enstrophy_sq_below_e_p: strict[3],
        all_equal,
        consistent: all_strict || all_equal,
        lower_bound: d.big_e <= lam * d.e || close(d.big_e, lam * d.e),
        upper_bound: d.e <= d.big_e || close(d.e, d.big_e),
    }
}

/// `(sqrt(G^2 - P), sqrt(lambda (lambda e - E)))`: the distances `|A(u - u*)|`
/// and `|Au - lambda u|` of a state with the ghost relations.
pub fn perturbation_bounds(d: &GhostDiagnostics) -> Result<(f64, f64), GeometryError> {
    let lam = d.lam();
    let a = d.g_sq - d.p;
    let b = lam * d.e - d.big_e;
    let tol = 1e-12 * d.g_sq.max(lam * d.e);
    if a < -tol {
        return Err(GeometryError::DomainError { what: "P exceeds G^2" });
    }
    if b < -tol {
        return Err(GeometryError::DomainError { what: "E exceeds lambda e" });
    }
    Ok((a.max(0.0).sqrt(), (lam * b.max(0.0)).sqrt()))
}

/// `G^2 / (lambda + c_bg G sqrt(ln(e lambda)))`.
pub fn enstrophy_lower_bound(e: f64, lambda: i64, g: f64, c_bg: f64) -> Result<f64, GeometryError> {
    let x = e * lambda as f64;
    if !(x > 1.0) {
        return Err(GeometryError::DomainError { what: "e lambda must exceed 1" });
    }
    if !(c_bg >= 0.0) {
        return Err(GeometryError::InvalidParameter { name: "c_bg", value: c_bg });
    }
    Ok(g * g / (lambda as f64 + c_bg * g * x.ln().sqrt()))
}
