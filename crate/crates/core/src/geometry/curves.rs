use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{enstrophy_lower_bound, GeometryError};

/// A point `(e, E)` on the curve `(2 - mu) E^2 + (mu - 1) G^2 E - mu G^2 e = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub e: f64,
    pub big_e: f64,
    /// Strictly inside `E^2 - G^2 E + e G^2 < 0` and below `E = G sqrt(e)`.
    pub inside: bool,
    /// One of the two points `(0, 0)` and `(G^2/4, G^2/2)` shared with the boundary parabola.
    pub endpoint: bool,
}

fn check_params(mu_plus: f64, g: f64) -> Result<(), GeometryError> {
    if !(mu_plus > 2.0) {
        return Err(GeometryError::InvalidParameter { name: "mu_plus", value: mu_plus });
    }
    if !(g > 0.0) {
        return Err(GeometryError::InvalidParameter { name: "G", value: g });
    }
    Ok(())
}

/// The admissible (smaller) root `E` for a given `e`, in the cancellation-free form
/// `E = 2 mu G^2 e / (b + sqrt(b^2 + 4 (2 - mu) mu G^2 e))`, `b = (mu - 1) G^2`.
pub fn parabola_point(mu_plus: f64, g: f64, e: f64) -> Result<f64, GeometryError> {
    check_params(mu_plus, g)?;
    let g2 = g * g;
    if !(e >= 0.0 && e <= 0.25 * g2) {
        return Err(GeometryError::NoAdmissibleBranch { e });
    }
    let b = (mu_plus - 1.0) * g2;
    let disc = b * b + 4.0 * (2.0 - mu_plus) * mu_plus * g2 * e;
    Ok(2.0 * mu_plus * g2 * e / (b + disc.max(0.0).sqrt()))
}

pub fn parabola_curve(mu_plus: f64, g: f64, e_grid: &[f64]) -> Result<Vec<CurvePoint>, GeometryError> {
    let g2 = g * g;
    e_grid
        .iter()
        .map(|&e| {
            let big_e = parabola_point(mu_plus, g, e)?;
            let endpoint = e == 0.0 || e == 0.25 * g2;
            let inside = big_e * big_e - g2 * big_e + e * g2 < 0.0 && big_e < g * e.sqrt();
            Ok(CurvePoint {
                e,
                big_e,
                inside,
                endpoint,
            })
        })
        .collect()
}

/// Lower branch `E = (G^2 - sqrt(G^4 - 4 e G^2)) / 2` of `E^2 - G^2 E + e G^2 = 0`,
/// or `None` for `e > G^2/4`.
pub fn boundary_parabola_lower(g: f64, e: f64) -> Option<f64> {
    let g2 = g * g;
    let d = g2 * g2 - 4.0 * e * g2;
    if d < 0.0 || e < 0.0 {
        return None;
    }
    // (G^2 - sqrt(d)) / 2 = 2 e G^2 / (G^2 + sqrt(d))
    Some(2.0 * e * g2 / (g2 + d.sqrt()))
}

/// Reference curves drawn with each chained-ghost curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlayRow {
    pub e: f64,
    pub curve: Option<f64>,
    /// `G sqrt(e)`
    pub sqrt_e: f64,
    /// `e`
    pub eq_e: f64,
    /// `lambda e` with `lambda = 2`
    pub two_e: f64,
    pub boundary_parabola: Option<f64>,
    pub lower_bound: Option<f64>,
}

/// One row per grid value for the shell-2 forcing.
pub fn overlay_rows(mu_plus: f64, g: f64, c_bg: f64, e_grid: &[f64]) -> Result<Vec<OverlayRow>, GeometryError> {
    check_params(mu_plus, g)?;
    Ok(e_grid
        .iter()
        .map(|&e| OverlayRow {
            e,
            curve: parabola_point(mu_plus, g, e).ok(),
            sqrt_e: g * e.max(0.0).sqrt(),
            eq_e: e,
            two_e: 2.0 * e,
            boundary_parabola: boundary_parabola_lower(g, e),
            lower_bound: enstrophy_lower_bound(e, 2, g, c_bg).ok(),
        })
        .collect())
}
