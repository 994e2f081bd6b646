use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::spectral::{is_stokes_eigenvalue, WaveVector};

use super::modes::{ModeIndex, ModeSet, MODES};
use super::propagate::{propagate, replay, PropagationState};
use super::system::{compare_systems, generate_constraints, transcribed_constraints, BilinearConstraint, GeneratedSystem};
use super::ConstraintError;

/// Conjugate-closed supports on the 16 modes that violate no constraint
/// outright (no constraint is left with exactly one product of nonzero factors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportEnumeration {
    pub candidates: usize,
    pub admissible: Vec<ModeSet>,
    /// Admissible supports meeting both `S_3` and `S_1 u S_2`.
    pub mixed: Vec<ModeSet>,
}

pub fn enumerate_supports(constraints: &[BilinearConstraint]) -> SupportEnumeration {
    let pairs = ModeIndex::COUNT / 2;
    let low = ModeSet::S1.union(ModeSet::S2);
    let mut admissible = Vec::new();
    let mut mixed = Vec::new();
    for mask in 0u32..(1 << pairs) {
        let support: ModeSet = (0..pairs)
            .filter(|b| mask >> b & 1 == 1)
            .flat_map(|b| {
                let m = ModeIndex::new(2 * b).unwrap();
                [m, m.conj()]
            })
            .collect();
        if !support_is_admissible(support, constraints) {
            continue;
        }
        admissible.push(support);
        if !support.intersection(ModeSet::S3).is_empty() && !support.intersection(low).is_empty() {
            mixed.push(support);
        }
    }
    SupportEnumeration {
        candidates: 1 << pairs,
        admissible,
        mixed,
    }
}

/// No constraint has exactly one product with both factors in `support`.
pub fn support_is_admissible(support: ModeSet, constraints: &[BilinearConstraint]) -> bool {
    constraints
        .iter()
        .all(|c| c.terms.iter().filter(|t| support.contains(t.a) && support.contains(t.b)).count() != 1)
}

/// Shells reached by `k = -h - j` with `h` in `S_1` and `j` in `S_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuPlusElimination {
    /// `(shell, number of (h, j) pairs landing on it)` for every eigenvalue up
    /// to the range limit, shells 1 and 2 included.
    pub hits: BTreeMap<i64, usize>,
    pub max_shell: i64,
}

impl MuPlusElimination {
    /// Candidate `mu_+` shells (eigenvalues other than 1 and 2) that receive input.
    pub fn coupled_candidates(&self) -> Vec<i64> {
        self.hits.iter().filter(|(&n, &c)| n > 2 && c > 0).map(|(&n, _)| n).collect()
    }

    pub fn only_shell_five(&self) -> bool {
        self.coupled_candidates() == [5]
    }
}

pub fn mu_plus_elimination_check(max_shell: i64) -> MuPlusElimination {
    let mut hits: BTreeMap<i64, usize> = (1..=max_shell).filter(|&n| is_stokes_eigenvalue(n)).map(|n| (n, 0)).collect();
    for &h in &MODES[0..4] {
        for &j in &MODES[4..8] {
            let k: WaveVector = -(h + j);
            if let Some(c) = hits.get_mut(&k.norm_sq()) {
                *c += 1;
            }
        }
    }
    MuPlusElimination { hits, max_shell }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationCase {
    pub state: PropagationState,
    /// The log re-derived against the generated constraints gives the same zero set.
    pub replays_on_generated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonexistenceVerdict {
    Nonexistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonexistenceReport {
    pub generated: GeneratedSystem,
    /// Generated constraints renumbered to the transcribed ids.
    pub matched: Vec<BilinearConstraint>,
    pub cases: Vec<PropagationCase>,
    pub mu_plus: MuPlusElimination,
    pub supports: SupportEnumeration,
    /// `(lambda - mu_-) / (mu_+ (mu_+ - mu_-))` for `lambda = 2`, `mu_- = 1`, `mu_+ = 5`.
    pub u_plus_coefficient: f64,
    pub verdict: NonexistenceVerdict,
    pub transcript: Vec<String>,
}

fn shell_list(shells: impl IntoIterator<Item = i64>) -> String {
    shells.into_iter().map(|s| format!("{s}")).collect::<Vec<_>>().join(" ")
}

/// Full mechanised argument for `lambda = 2` against the given reference list.
pub fn verify_nonexistence(transcribed: &[BilinearConstraint]) -> Result<NonexistenceReport, ConstraintError> {
    let generated = generate_constraints()?;
    let matched = compare_systems(&generated.constraints, transcribed)?;
    let mut t = Vec::new();
    t.push(format!(
        "generation: {} constraints on shells {}",
        generated.constraints.len(),
        shell_list(generated.constraints.iter().map(|c| c.source_shell).collect::<alloc::collections::BTreeSet<_>>())
    ));
    t.push(format!("generation: shells {} cancel identically", shell_list(generated.annihilated_shells.iter().copied())));
    t.push(format!("generation: matches the {} transcribed constraints after normalisation", transcribed.len()));
    for c in &matched {
        t.push(format!("{c}"));
    }

    let mut cases = Vec::new();
    for seed in ModeSet::S3.iter() {
        let state = propagate(seed, transcribed)?;
        let replays_on_generated = replay(seed, &state.log, &matched).map(|z| z == state.known_zero).unwrap_or(false);
        t.push(format!("case {seed} nonzero:"));
        t.extend(state.transcript());
        t.push(format!(
            "case {seed}: S1 and S2 forced zero by constraints {}; replay on generated list {}",
            state.chain().iter().map(|i| format!("{i}")).collect::<Vec<_>>().join(", "),
            if replays_on_generated { "agrees" } else { "DISAGREES" }
        ));
        cases.push(PropagationCase {
            state,
            replays_on_generated,
        });
    }

    let mu_plus = mu_plus_elimination_check(100);
    t.push(format!(
        "mu_plus: (S1, S2) pairs reach shells {}; candidates above 2 receiving input: {}",
        mu_plus
            .hits
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(n, c)| format!("{n} ({c} pairs)"))
            .collect::<Vec<_>>()
            .join(", "),
        shell_list(mu_plus.coupled_candidates())
    ));

    let supports = enumerate_supports(transcribed);
    t.push(format!(
        "supports: {} conjugate-closed candidates, {} admissible, {} mixing S3 with S1 or S2",
        supports.candidates,
        supports.admissible.len(),
        supports.mixed.len()
    ));

    let (lam, mm, mp) = (2.0, 1.0, 5.0);
    let u_plus_coefficient = (lam - mm) / (mp * (mp - mm));
    t.push("branch: some S3 amplitude nonzero forces g = 0 on S2, impossible since g != 0; hence u_+ = 0".into());
    t.push(format!(
        "energy: |u_+|^2 = c E (1 - P/G^2) with c = (2 - 1)/(5 (5 - 1)) = 1/20 = {u_plus_coefficient} > 0; u_+ = 0 forces P = G^2, the stationary state"
    ));

    let ok = cases.iter().all(|c| c.state.zeroes_s1_s2() && c.replays_on_generated)
        && supports.mixed.is_empty()
        && mu_plus.only_shell_five()
        && generated.annihilated_shells.contains(&18)
        && generated.annihilated_shells.contains(&20)
        && u_plus_coefficient > 0.0;
    let verdict = if ok {
        NonexistenceVerdict::Nonexistent
    } else {
        NonexistenceVerdict::Inconclusive
    };
    t.push(match verdict {
        NonexistenceVerdict::Nonexistent => "verdict: NONEXISTENT (no chained ghost solutions for lambda = 2)".into(),
        NonexistenceVerdict::Inconclusive => "verdict: INCONCLUSIVE".into(),
    });
    Ok(NonexistenceReport {
        generated,
        matched,
        cases,
        mu_plus,
        supports,
        u_plus_coefficient,
        verdict,
        transcript: t,
    })
}

pub fn nonexistence_report() -> Result<NonexistenceReport, ConstraintError> {
    verify_nonexistence(&transcribed_constraints())
}
