//! Truncated Fourier representation of divergence-free periodic fields and the
//! operators `A^s` and `B(., .)`.

mod field;
mod force;
mod ops;
pub mod wavevector;

pub use field::{Coeff, FieldError, ScalarAmplitudeField, SpectralField, DIVERGENCE_TOL, REALITY_TOL};
pub use force::{make_eigenforce, EigenforceSpec, ForceError};
pub use ops::{
    apply_stokes_power, bilinear, bilinear_filtered, eigenspace_project, inner, norm_as, norm_as_sq,
    project_shells, truncate,
};
pub use wavevector::{ball, is_stokes_eigenvalue, shell, stokes_eigenvalues, WaveVector};

pub(crate) use field::scalar_to_coeff;
