use core::fmt;

use num_complex::Complex64;
use super::wavevector::{is_stokes_eigenvalue, shell};
use super::{norm_as, FieldError, ScalarAmplitudeField, SpectralField};

#[derive(Clone, Debug, PartialEq)]
pub enum ForceError {
    NotAnEigenvalue { lambda: i64 },
    ShellViolation { k: super::WaveVector, lambda: i64 },
    EmptyPattern,
    NonPositiveMagnitude,
    Field(FieldError),
}

impl fmt::Display for ForceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForceError::NotAnEigenvalue { lambda } => {
                write!(f, "{lambda} is not a sum of two squares, so not a Stokes eigenvalue")
            }
            ForceError::ShellViolation { k, lambda } => {
                write!(f, "force pattern mode {k} is not on the shell |k|^2 = {lambda}")
            }
            ForceError::EmptyPattern => write!(f, "force pattern is identically zero"),
            ForceError::NonPositiveMagnitude => write!(f, "force magnitude must be positive"),
            ForceError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ForceError {}

impl From<FieldError> for ForceError {
    fn from(e: FieldError) -> Self {
        ForceError::Field(e)
    }
}

/// Eigenvector force `g` with `Ag = lambda g` and `|g| = magnitude`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenforceSpec {
    pub lambda: i64,
    /// Scalar amplitudes on the shell `|k|^2 = lambda`; rescaled to the magnitude.
    pub pattern: ScalarAmplitudeField,
    pub magnitude: f64,
}

impl EigenforceSpec {
    /// Unit amplitude on every mode of the shell.
    pub fn uniform(lambda: i64, magnitude: f64) -> Result<Self, ForceError> {
        if !is_stokes_eigenvalue(lambda) {
            return Err(ForceError::NotAnEigenvalue { lambda });
        }
        let pattern = ScalarAmplitudeField::new(shell(lambda).into_iter().map(|k| (k, Complex64::new(1.0, 0.0))))?;
        Ok(Self {
            lambda,
            pattern,
            magnitude,
        })
    }
}

pub fn make_eigenforce(spec: &EigenforceSpec) -> Result<SpectralField, ForceError> {
    if !is_stokes_eigenvalue(spec.lambda) {
        return Err(ForceError::NotAnEigenvalue { lambda: spec.lambda });
    }
    if !(spec.magnitude > 0.0) {
        return Err(ForceError::NonPositiveMagnitude);
    }
    if let Some((k, _)) = spec.pattern.iter().find(|(k, _)| k.norm_sq() != spec.lambda) {
        return Err(ForceError::ShellViolation { k, lambda: spec.lambda });
    }
    let raw = SpectralField::from_scalar(&spec.pattern, spec.lambda)?;
    let n = norm_as(&raw, 0.0);
    if n == 0.0 {
        return Err(ForceError::EmptyPattern);
    }
    Ok((spec.magnitude / n) * &raw)
}
