use alloc::collections::BTreeSet;
use core::fmt;

use crate::spectral::{shell, SpectralField, WaveVector};

#[derive(Clone, Debug, PartialEq)]
pub enum DynamicsError {
    /// `lambda` is not one of the mode shells.
    LambdaNotInShells { lambda: i64 },
    EmptyShell { mu: i64 },
    ForceOffShell { k: WaveVector, lambda: i64 },
    ZeroForce,
    /// The state carries a mode outside the Galerkin shells.
    SupportViolation { k: WaveVector },
    /// The state carries a mode outside the truncation ball.
    TruncationViolation { k: WaveVector, radius_sq: i64 },
    InvalidParameter { name: &'static str, value: f64 },
    NonFinite { t: f64 },
    BlowUp { t: f64, norm: f64 },
    /// A chained-coefficient denominator vanished on a non-converged run.
    DegenerateDiagnostics { t: f64 },
    TooFewSamples { needed: usize, got: usize },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::LambdaNotInShells { lambda } => write!(f, "lambda = {lambda} is not among the mode shells"),
            DynamicsError::EmptyShell { mu } => write!(f, "shell |k|^2 = {mu} contains no lattice vector"),
            DynamicsError::ForceOffShell { k, lambda } => write!(f, "force mode {k} is not on shell {lambda}"),
            DynamicsError::ZeroForce => write!(f, "force is identically zero"),
            DynamicsError::SupportViolation { k } => write!(f, "state mode {k} lies outside the Galerkin shells"),
            DynamicsError::TruncationViolation { k, radius_sq } => {
                write!(f, "state mode {k} lies outside |k|^2 <= {radius_sq}")
            }
            DynamicsError::InvalidParameter { name, value } => write!(f, "invalid {name} = {value}"),
            DynamicsError::NonFinite { t } => write!(f, "non-finite coefficient at t = {t}"),
            DynamicsError::BlowUp { t, norm } => write!(f, "|u| = {norm:e} exceeds the blow-up guard at t = {t}"),
            DynamicsError::DegenerateDiagnostics { t } => {
                write!(f, "chained coefficients are singular at t = {t} and the run has not converged")
            }
            DynamicsError::TooFewSamples { needed, got } => write!(f, "need at least {needed} samples, got {got}"),
        }
    }
}

impl core::error::Error for DynamicsError {}

/// Galerkin system on a union of eigen-shells, forced on shell `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct GalerkinSpec {
    mode_shells: BTreeSet<i64>,
    force: SpectralField,
    lambda: i64,
}

impl GalerkinSpec {
    pub fn new(mode_shells: BTreeSet<i64>, force: SpectralField, lambda: i64) -> Result<Self, DynamicsError> {
        if !mode_shells.contains(&lambda) {
            return Err(DynamicsError::LambdaNotInShells { lambda });
        }
        if let Some(&mu) = mode_shells.iter().find(|&&m| shell(m).is_empty()) {
            return Err(DynamicsError::EmptyShell { mu });
        }
        if let Some((k, _)) = force.iter().find(|(k, _)| k.norm_sq() != lambda) {
            return Err(DynamicsError::ForceOffShell { k, lambda });
        }
        if crate::spectral::norm_as_sq(&force, 0.0) == 0.0 {
            return Err(DynamicsError::ZeroForce);
        }
        let radius = *mode_shells.iter().next_back().expect("contains lambda");
        let force = force.with_radius(radius).expect("force lies on a mode shell");
        Ok(Self {
            mode_shells,
            force,
            lambda,
        })
    }

    pub fn mode_shells(&self) -> &BTreeSet<i64> {
        &self.mode_shells
    }

    pub fn force(&self) -> &SpectralField {
        &self.force
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn radius_sq(&self) -> i64 {
        *self.mode_shells.iter().next_back().expect("nonempty")
    }

    pub fn check_support(&self, u: &SpectralField) -> Result<(), DynamicsError> {
        match u
            .iter()
            .find(|(k, c)| !self.mode_shells.contains(&k.norm_sq()) && (c[0].norm_sqr() + c[1].norm_sqr()) > 0.0)
        {
            Some((k, _)) => Err(DynamicsError::SupportViolation { k }),
            None => Ok(()),
        }
    }
}
