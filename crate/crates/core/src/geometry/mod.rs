//! Scalar diagnostics of a state, reference frames built from `(g, u, du/dt, Au, A^2 u)`,
//! the finite-dimensional models of `A` and `B`, chained coefficients and the `e`-`E` curves.

mod chained;
mod curves;
mod diagnostics;
mod frames;
mod matrices;

use core::fmt;

pub use chained::{
    chained_coefficients, chained_coefficients_raw, chained_residual, decompose_chained, lambda_two_a32_identity,
    lambda_two_beta, powers_constancy_check, ChainedCoefficients, ChainedDecomposition, PowerConstancy,
    RawCoefficients, DENOMINATOR_TOL,
};
pub use curves::{boundary_parabola_lower, overlay_rows, parabola_curve, parabola_point, CurvePoint, OverlayRow};
pub use diagnostics::{diagnostics, enstrophy_lower_bound, inequality_report, perturbation_bounds, GhostDiagnostics, InequalityReport};
pub use frames::{
    fit_chained, frame_transport, new_frame, old_frame, old_frame_closed_forms, Frame, FrameCoordinates, FrameKind,
    FrameTransport, FRAME_TOL,
};
pub use matrices::{gram_matrix, nonlinear_tensor, project_b_onto_h012, stokes_matrix, NonlinearTensor};

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    /// A denominator of the closed forms vanished; the state is (numerically) stationary.
    DegenerateDiagnostics { which: &'static str },
    /// Gram-Schmidt failed at vector `index`. For the new frame at index 3 this is
    /// the chained relation and `fit` holds `(gamma, beta, alpha)`.
    FrameDegenerate { index: usize, fit: Option<[f64; 3]> },
    NotPositiveDefinite { minors: [f64; 4] },
    DegenerateCoordinates,
    SingularGram { det: f64 },
    DomainError { what: &'static str },
    NoAdmissibleBranch { e: f64 },
    InvalidParameter { name: &'static str, value: f64 },
    InvariantViolation { what: &'static str },
    NegativeDiscriminant { value: f64 },
    DecompositionResidual { residual: f64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DegenerateDiagnostics { which } => write!(f, "degenerate diagnostics: {which} vanishes"),
            GeometryError::FrameDegenerate { index, fit } => {
                write!(f, "frame vector {index} lies in the span of the previous ones")?;
                if let Some([g, b, a]) = fit {
                    write!(f, " (gamma = {g}, beta = {b}, alpha = {a})")?;
                }
                Ok(())
            }
            GeometryError::NotPositiveDefinite { minors } => write!(f, "matrix not positive definite, leading minors {minors:?}"),
            GeometryError::DegenerateCoordinates => write!(f, "frame coordinates eta_0, eta_1 must be nonzero"),
            GeometryError::SingularGram { det } => write!(f, "Gram matrix is singular (det = {det})"),
            GeometryError::DomainError { what } => write!(f, "domain error: {what}"),
            GeometryError::NoAdmissibleBranch { e } => write!(f, "no admissible curve point at e = {e}"),
            GeometryError::InvalidParameter { name, value } => write!(f, "invalid {name} = {value}"),
            GeometryError::InvariantViolation { what } => write!(f, "invariant violated: {what}"),
            GeometryError::NegativeDiscriminant { value } => write!(f, "alpha^2 + 4 beta = {value} is not positive"),
            GeometryError::DecompositionResidual { residual } => {
                write!(f, "state is not supported on the three chained shells (residual {residual})")
            }
        }
    }
}

impl core::error::Error for GeometryError {}
