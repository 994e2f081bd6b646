use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::modes::{ModeIndex, ModeSet};
use super::system::{BilinearConstraint, Term};
use super::ConstraintError;

/// One zero conclusion. `constraint` is `None` for the conjugate closure step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inference {
    pub constraint: Option<u32>,
    pub zeroed: ModeIndex,
    /// The nonzero partner factor, or the mode whose conjugate was zeroed.
    pub witness: ModeIndex,
}

impl Inference {
    pub fn line(&self) -> String {
        match self.constraint {
            Some(id) => format!("constraint {id}: {} forced zero (other factor {} nonzero)", self.zeroed, self.witness),
            None => format!("reality: {} forced zero (conjugate of {})", self.zeroed, self.witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationState {
    pub seed: ModeIndex,
    pub known_zero: ModeSet,
    pub known_nonzero: ModeSet,
    pub log: Vec<Inference>,
}

impl PropagationState {
    fn new(seed: ModeIndex) -> Self {
        Self {
            seed,
            known_zero: ModeSet::EMPTY,
            known_nonzero: [seed, seed.conj()].into_iter().collect(),
            log: Vec::new(),
        }
    }

    pub fn transcript(&self) -> Vec<String> {
        self.log.iter().map(Inference::line).collect()
    }

    /// Constraint ids in the order they first produced a conclusion.
    pub fn chain(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = Vec::new();
        for id in self.log.iter().filter_map(|i| i.constraint) {
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        ids
    }

    pub fn zeroes_s1_s2(&self) -> bool {
        self.known_zero.is_superset(ModeSet::S1.union(ModeSet::S2))
    }

    fn zero(&mut self, m: ModeIndex, constraint: u32, witness: ModeIndex) -> Result<(), ConstraintError> {
        for (z, w, c) in [(m, witness, Some(constraint)), (m.conj(), m, None)] {
            if self.known_nonzero.contains(z) {
                return Err(ConstraintError::Contradiction { constraint, seed: self.seed });
            }
            if self.known_zero.insert(z) {
                self.log.push(Inference {
                    constraint: c,
                    zeroed: z,
                    witness: w,
                });
            }
        }
        Ok(())
    }
}

/// Terms whose factors are both not known to be zero.
fn live_terms(c: &BilinearConstraint, zero: ModeSet) -> impl Iterator<Item = &Term> {
    c.terms.iter().filter(move |t| !zero.contains(t.a) && !zero.contains(t.b))
}

/// Zero/nonzero propagation from `alpha(seed) != 0`. Constraints are swept in
/// slice order and each conclusion is applied immediately; sweeps repeat until
/// nothing changes. A constraint acts once it has a single live product.
pub fn propagate(seed: ModeIndex, constraints: &[BilinearConstraint]) -> Result<PropagationState, ConstraintError> {
    if seed.set() != 3 {
        return Err(ConstraintError::NotInS3 { mode: seed });
    }
    let mut st = PropagationState::new(seed);
    loop {
        let before = st.known_zero;
        for c in constraints {
            let mut live = live_terms(c, st.known_zero);
            let (Some(t), None) = (live.next(), live.next()) else {
                continue;
            };
            let (a, b) = (t.a, t.b);
            match (st.known_nonzero.contains(a), st.known_nonzero.contains(b)) {
                (true, true) => return Err(ConstraintError::Contradiction { constraint: c.id, seed }),
                (true, false) => st.zero(b, c.id, a)?,
                (false, true) => st.zero(a, c.id, b)?,
                (false, false) => {}
            }
        }
        if st.known_zero == before {
            break;
        }
    }
    if !st.zeroes_s1_s2() {
        let undecided = ModeSet::from_bits((ModeSet::S1.union(ModeSet::S2)).bits() & !st.known_zero.bits());
        return Err(ConstraintError::PropagationStall { seed, undecided });
    }
    Ok(st)
}

/// Re-derives the steps of `log` against another constraint list (matched by
/// id) and returns the resulting zero set.
pub fn replay(seed: ModeIndex, log: &[Inference], constraints: &[BilinearConstraint]) -> Result<ModeSet, ConstraintError> {
    let nonzero: ModeSet = [seed, seed.conj()].into_iter().collect();
    let mut zero = ModeSet::EMPTY;
    for (step, inf) in log.iter().enumerate() {
        let fail = |detail: String| ConstraintError::ReplayFailure { step, detail };
        match inf.constraint {
            None => {
                if inf.zeroed != inf.witness.conj() || !zero.contains(inf.witness) {
                    return Err(fail(format!("{} is not the conjugate of a zeroed mode", inf.zeroed)));
                }
            }
            Some(id) => {
                let c = constraints
                    .iter()
                    .find(|c| c.id == id)
                    .ok_or_else(|| fail(format!("no constraint {id}")))?;
                let live: Vec<&Term> = live_terms(c, zero).collect();
                let pair = Term::new(1, inf.zeroed, inf.witness);
                if live.len() != 1 || (live[0].a, live[0].b) != (pair.a, pair.b) {
                    return Err(fail(format!("constraint {id} does not reduce to {}{}", inf.zeroed, inf.witness)));
                }
                if !nonzero.contains(inf.witness) {
                    return Err(fail(format!("{} is not known nonzero", inf.witness)));
                }
            }
        }
        zero.insert(inf.zeroed);
    }
    Ok(zero)
}
