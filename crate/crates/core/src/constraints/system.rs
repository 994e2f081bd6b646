use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::spectral::{ScalarAmplitudeField, WaveVector};

use super::modes::{ModeIndex, MODES};
use super::ConstraintError;

/// `coef * alpha(a) * alpha(b)` with `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub a: ModeIndex,
    pub b: ModeIndex,
    pub coef: i64,
}

impl Term {
    pub fn new(coef: i64, x: ModeIndex, y: ModeIndex) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        Self { a, b, coef }
    }
}

/// `sum coef * alpha(a) alpha(b) = 0`, integer coefficients with the common
/// irrational prefactor removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearConstraint {
    pub id: u32,
    pub terms: Vec<Term>,
    pub source_shell: i64,
    pub target_k: WaveVector,
}

impl BilinearConstraint {
    /// Canonical term list: merged, nonzero, divided by the gcd, sorted,
    /// first coefficient positive.
    pub fn normalized_terms(terms: &[Term]) -> Vec<Term> {
        let mut merged: BTreeMap<(ModeIndex, ModeIndex), i64> = BTreeMap::new();
        for t in terms {
            let t = Term::new(t.coef, t.a, t.b);
            *merged.entry((t.a, t.b)).or_insert(0) += t.coef;
        }
        let mut out: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((a, b), coef)| Term { a, b, coef })
            .collect();
        let g = out.iter().fold(0, |g, t| gcd(g, t.coef.abs()));
        if g > 1 {
            for t in &mut out {
                t.coef /= g;
            }
        }
        if out.first().is_some_and(|t| t.coef < 0) {
            for t in &mut out {
                t.coef = -t.coef;
            }
        }
        out
    }

    pub fn normalized(&self) -> Vec<Term> {
        Self::normalized_terms(&self.terms)
    }

    /// Single product `alpha(a) alpha(b) = 0`.
    pub fn is_pure_product(&self) -> bool {
        self.terms.len() == 1
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for BilinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constraint {} [|k|^2={}, k={}]:", self.id, self.source_shell, self.target_k)?;
        for t in &self.terms {
            let sign = if t.coef < 0 { '-' } else { '+' };
            let mag = t.coef.abs();
            if mag == 1 {
                write!(f, " {sign}{}{}", t.a, t.b)?;
            } else {
                write!(f, " {sign}{mag}{}{}", t.a, t.b)?;
            }
        }
        write!(f, " = 0")
    }
}

/// Output of [`generate_constraints`].
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedSystem {
    /// Nontrivial constraints, numbered by generation order (shell, then `k`).
    pub constraints: Vec<BilinearConstraint>,
    /// Every `|k|^2` outside `{1, 2, 5}` reached by a sum of two active modes.
    pub shells_examined: BTreeSet<i64>,
    /// Shells whose constraints all cancel identically.
    pub annihilated_shells: BTreeSet<i64>,
}

/// Expands `R_k = sum_{h+j=k} alpha(h) alpha(j) (h_perp . j)(k . j) / (|h||j||k|)`
/// for every `k = h + j` with `h, j` active and `|k|^2` not in `{1, 2, 5}`.
pub fn generate_constraints() -> Result<GeneratedSystem, ConstraintError> {
    // per target k: unordered pair -> (summed weight, |h|^2 |j|^2 |k|^2)
    let mut per_k: BTreeMap<WaveVector, BTreeMap<(ModeIndex, ModeIndex), (i64, i64)>> = BTreeMap::new();
    for (hi, &h) in MODES.iter().enumerate() {
        for (ji, &j) in MODES.iter().enumerate() {
            let k = h + j;
            if k.is_zero() || matches!(k.norm_sq(), 1 | 2 | 5) {
                continue;
            }
            let w = h.perp().dot(j) * k.dot(j);
            let m = h.norm_sq() * j.norm_sq() * k.norm_sq();
            let t = Term::new(w, ModeIndex::new(hi).unwrap(), ModeIndex::new(ji).unwrap());
            per_k.entry(k).or_default().entry((t.a, t.b)).or_insert((0, m)).0 += w;
        }
    }
    let mut constraints = Vec::new();
    let mut shells_examined = BTreeSet::new();
    let mut live_shells = BTreeSet::new();
    let mut ordered: Vec<_> = per_k.into_iter().collect();
    ordered.sort_by_key(|(k, _)| (k.norm_sq(), *k));
    for (k, pairs) in ordered {
        shells_examined.insert(k.norm_sq());
        let live: Vec<_> = pairs.into_iter().filter(|(_, (w, _))| *w != 0).collect();
        let Some(&(_, (_, m0))) = live.first() else {
            continue;
        };
        if live.iter().any(|(_, (_, m))| *m != m0) {
            return Err(ConstraintError::GenerationMismatch {
                detail: format!("products at k = {k} carry different norm factors"),
            });
        }
        let terms: Vec<Term> = live.into_iter().map(|((a, b), (w, _))| Term { a, b, coef: w }).collect();
        live_shells.insert(k.norm_sq());
        constraints.push(BilinearConstraint {
            id: constraints.len() as u32 + 1,
            terms: BilinearConstraint::normalized_terms(&terms),
            source_shell: k.norm_sq(),
            target_k: k,
        });
    }
    let annihilated_shells = shells_examined.difference(&live_shells).copied().collect();
    Ok(GeneratedSystem {
        constraints,
        shells_examined,
        annihilated_shells,
    })
}

type Row = (i32, i32, &'static [(i64, (i32, i32), (i32, i32))]);

/// The hand-transcribed system: target `k` and signed products.
const TRANSCRIBED: [Row; 28] = [
    (2, 0, &[(1, (0, -1), (2, 1)), (-1, (0, 1), (2, -1))]),
    (0, 2, &[(1, (1, 0), (-1, 2)), (-1, (-1, 0), (1, 2))]),
    (-2, 0, &[(1, (0, 1), (-2, -1)), (-1, (0, -1), (-2, 1))]),
    (0, -2, &[(1, (-1, 0), (1, -2)), (-1, (1, 0), (-1, -2))]),
    (2, 2, &[(1, (1, 0), (1, 2)), (-1, (0, 1), (2, 1))]),
    (-2, 2, &[(1, (0, 1), (-2, 1)), (-1, (-1, 0), (-1, 2))]),
    (2, -2, &[(1, (0, -1), (2, -1)), (-1, (1, 0), (1, -2))]),
    (-2, -2, &[(1, (-1, 0), (-1, -2)), (-1, (0, -1), (-2, -1))]),
    (3, 0, &[(1, (2, 1), (1, -1)), (-1, (2, -1), (1, 1))]),
    (0, 3, &[(1, (-1, 2), (1, 1)), (-1, (1, 2), (-1, 1))]),
    (-3, 0, &[(1, (-2, -1), (-1, 1)), (-1, (-2, 1), (-1, -1))]),
    (0, -3, &[(1, (1, -2), (-1, -1)), (-1, (-1, -2), (1, -1))]),
    (1, 3, &[(1, (0, 1), (1, 2))]),
    (3, 1, &[(1, (1, 0), (2, 1))]),
    (-1, 3, &[(1, (0, 1), (-1, 2))]),
    (-3, 1, &[(1, (-1, 0), (-2, 1))]),
    (1, -3, &[(1, (0, -1), (1, -2))]),
    (-1, -3, &[(1, (0, -1), (-1, -2))]),
    (3, -1, &[(1, (1, 0), (2, -1))]),
    (-3, -1, &[(1, (-1, 0), (-2, -1))]),
    (2, 3, &[(1, (1, 2), (1, 1))]),
    (3, 2, &[(1, (2, 1), (1, 1))]),
    (-2, 3, &[(1, (-1, 2), (-1, 1))]),
    (-3, 2, &[(1, (-2, 1), (-1, 1))]),
    (-2, -3, &[(1, (-1, -2), (-1, -1))]),
    (2, -3, &[(1, (1, -2), (1, -1))]),
    (3, -2, &[(1, (1, -1), (2, -1))]),
    (-3, -2, &[(1, (-2, -1), (-1, -1))]),
];

/// The 28 constraints as written out by hand, numbered 1 to 28.
pub fn transcribed_constraints() -> Vec<BilinearConstraint> {
    TRANSCRIBED
        .iter()
        .enumerate()
        .map(|(i, &(k1, k2, terms))| {
            let k = WaveVector::new(k1, k2);
            let terms = terms
                .iter()
                .map(|&(c, a, b)| {
                    let a = ModeIndex::from_vector(a.into()).expect("active mode");
                    let b = ModeIndex::from_vector(b.into()).expect("active mode");
                    Term::new(c, a, b)
                })
                .collect();
            BilinearConstraint {
                id: i as u32 + 1,
                terms,
                source_shell: k.norm_sq(),
                target_k: k,
            }
        })
        .collect()
}

fn describe(terms: &[Term]) -> String {
    let mut s = String::new();
    for t in terms {
        s.push_str(&format!(" {:+}{}{}", t.coef, t.a, t.b));
    }
    s
}

/// Matches the generated system against a reference list by normalised term
/// lists. On success returns the generated constraints renumbered with the
/// reference ids, in id order.
pub fn compare_systems(generated: &[BilinearConstraint], reference: &[BilinearConstraint]) -> Result<Vec<BilinearConstraint>, ConstraintError> {
    if generated.len() != reference.len() {
        return Err(ConstraintError::GenerationMismatch {
            detail: format!("{} generated constraints, {} in the reference list", generated.len(), reference.len()),
        });
    }
    let mut pool: Vec<Option<&BilinearConstraint>> = generated.iter().map(Some).collect();
    let mut out = Vec::with_capacity(reference.len());
    for r in reference {
        let want = r.normalized();
        let pos = pool.iter().position(|g| g.is_some_and(|g| g.normalized() == want));
        match pos {
            Some(p) => {
                let g = pool[p].take().unwrap();
                out.push(BilinearConstraint {
                    id: r.id,
                    terms: g.normalized(),
                    source_shell: g.source_shell,
                    target_k: g.target_k,
                });
            }
            None => {
                return Err(ConstraintError::GenerationMismatch {
                    detail: format!("reference constraint {} ({} ) has no generated counterpart", r.id, describe(&want)),
                })
            }
        }
    }
    out.sort_by_key(|c| c.id);
    Ok(out)
}

/// Residual `sum coef alpha(a) alpha(b)` of every constraint.
pub fn evaluate_constraints(amps: &ScalarAmplitudeField, constraints: &[BilinearConstraint]) -> Result<Vec<(u32, Complex64)>, ConstraintError> {
    if let Some((k, _)) = amps.iter().find(|(k, a)| ModeIndex::from_vector(*k).is_none() && a.norm_sqr() > 0.0) {
        return Err(ConstraintError::SupportViolation { k });
    }
    Ok(constraints
        .iter()
        .map(|c| {
            let r = c.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
                acc + amps.get(t.a.vector()) * amps.get(t.b.vector()) * t.coef as f64
            });
            (c.id, r)
        })
        .collect())
}
