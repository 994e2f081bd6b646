//! The bilinear constraints on the 16 active amplitudes when the force lives on
//! `|k|^2 = 2` and the state on the shells `1, 2, 5`, and the support argument
//! that rules out chained ghost states there.

mod modes;
mod propagate;
mod report;
mod system;

use alloc::string::String;
use core::fmt;

use crate::spectral::WaveVector;

pub use modes::{build_active_sets, ModeIndex, ModeSet, MODES};
pub use propagate::{propagate, replay, Inference, PropagationState};
pub use report::{
    enumerate_supports, mu_plus_elimination_check, nonexistence_report, support_is_admissible, verify_nonexistence,
    MuPlusElimination, NonexistenceReport, NonexistenceVerdict, PropagationCase, SupportEnumeration,
};
pub use system::{
    compare_systems, evaluate_constraints, generate_constraints, transcribed_constraints, BilinearConstraint,
    GeneratedSystem, Term,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintError {
    GenerationMismatch { detail: String },
    SupportViolation { k: WaveVector },
    NotInS3 { mode: ModeIndex },
    PropagationStall { seed: ModeIndex, undecided: ModeSet },
    /// A product of two known-nonzero amplitudes was forced to vanish.
    Contradiction { constraint: u32, seed: ModeIndex },
    ReplayFailure { step: usize, detail: String },
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::GenerationMismatch { detail } => write!(f, "GenerationMismatch: {detail}"),
            ConstraintError::SupportViolation { k } => write!(f, "amplitude at {k} outside the active shells 1, 2, 5"),
            ConstraintError::NotInS3 { mode } => write!(f, "{mode} is not on the shell |k|^2 = 5"),
            ConstraintError::PropagationStall { seed, undecided } => {
                write!(f, "propagation from {seed} stalled with")?;
                for m in undecided.iter() {
                    write!(f, " {m}")?;
                }
                write!(f, " undecided")
            }
            ConstraintError::Contradiction { constraint, seed } => {
                write!(f, "constraint {constraint} contradicts {seed} != 0")
            }
            ConstraintError::ReplayFailure { step, detail } => write!(f, "replay failed at step {step}: {detail}"),
        }
    }
}

impl core::error::Error for ConstraintError {}
