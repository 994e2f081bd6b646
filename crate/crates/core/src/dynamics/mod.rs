//! Time integration of the truncated equations `du/dt + Au + B(u,u) = g` and of
//! the Galerkin system compressed onto a few eigen-shells, with the energy and
//! enstrophy balances and the chained-ghost check.

mod balance;
mod check;
mod integrate;
mod rhs;
mod spec;
mod system;

pub use balance::{balance_residuals, finite_difference, ghost_identity_residuals, GhostIdentityResiduals};
pub use check::{analyze_trajectory, ghost_check, GhostCheckParams, GhostCheckReport, GhostCheckRun, Verdict};
pub use integrate::{integrate, Trajectory};
pub use rhs::{outside_shell_defect, rhs_compressed, rhs_full};
pub use spec::{DynamicsError, GalerkinSpec};
pub use system::{step_etdrk4, Etdrk4, GalerkinSystem, RhsKind};
