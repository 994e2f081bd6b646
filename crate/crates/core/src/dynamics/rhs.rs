use crate::spectral::{apply_stokes_power, bilinear, bilinear_filtered, norm_as, truncate, SpectralField};

use super::{DynamicsError, GalerkinSpec};

/// `g - Au - B(u, u)` on the truncation ball of `u`.
pub fn rhs_full(u: &SpectralField, g: &SpectralField) -> SpectralField {
    let r = u.radius_sq().max(g.radius_sq());
    let b = bilinear(u, u, r);
    let au = apply_stokes_power(u, 1.0);
    let out = &(&truncate(g, r) - &au) - &b;
    truncate(&out, r)
}

/// `g - Au - E B(u, u)` with `E` the projection onto the Galerkin shells.
pub fn rhs_compressed(u: &SpectralField, spec: &GalerkinSpec) -> Result<SpectralField, DynamicsError> {
    spec.check_support(u)?;
    let r = spec.radius_sq();
    let shells = spec.mode_shells();
    let u = truncate(u, r);
    let b = bilinear_filtered(&u, &u, r, |k| shells.contains(&k.norm_sq()));
    let au = apply_stokes_power(&u, 1.0);
    Ok(&(spec.force() - &au) - &b)
}

/// `|(1 - E) B(u, u)|` for `u` on the Galerkin shells: the part of the
/// nonlinear transfer that the compressed system discards.
pub fn outside_shell_defect(u: &SpectralField, spec: &GalerkinSpec) -> Result<f64, DynamicsError> {
    spec.check_support(u)?;
    let shells = spec.mode_shells();
    let r = 4 * spec.radius_sq();
    let b = bilinear_filtered(u, u, r, |k| !shells.contains(&k.norm_sq()));
    Ok(norm_as(&b, 0.0))
}
