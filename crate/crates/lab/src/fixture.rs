//! Constraint list files: `id k1 k2 source_shell terms`, where `terms` is a
//! space-separated list of `coef*(a1,a2)*(b1,b2)`, each meaning
//! `coef * alpha(a) * alpha(b)`.

use ghostlab_core::constraints::{BilinearConstraint, ModeIndex, Term};
use ghostlab_core::spectral::WaveVector;

use crate::error::{LabError, Result};
use crate::export::{parse_table, Table};

pub const HEADER: [&str; 5] = ["id", "k1", "k2", "source_shell", "terms"];

fn term_text(t: &Term) -> String {
    let (a, b) = (t.a.vector(), t.b.vector());
    format!("{:+}*({},{})*({},{})", t.coef, a.k1, a.k2, b.k1, b.k2)
}

pub fn constraint_table(cs: &[BilinearConstraint]) -> Table {
    let mut t = Table::new(&HEADER);
    for c in cs {
        t.push(vec![
            c.id.to_string(),
            c.target_k.k1.to_string(),
            c.target_k.k2.to_string(),
            c.source_shell.to_string(),
            c.terms.iter().map(term_text).collect::<Vec<_>>().join(" "),
        ]);
    }
    t
}

fn parse_vector(s: &str) -> Option<WaveVector> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some(WaveVector::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_term(s: &str) -> Option<Term> {
    let mut parts = s.split('*');
    let coef: i64 = parts.next()?.trim_start_matches('+').parse().ok()?;
    let a = ModeIndex::from_vector(parse_vector(parts.next()?)?)?;
    let b = ModeIndex::from_vector(parse_vector(parts.next()?)?)?;
    if parts.next().is_some() {
        return None;
    }
    Some(Term::new(coef, a, b))
}

pub fn parse_constraints(text: &str) -> Result<Vec<BilinearConstraint>> {
    let bad = |line: usize, what: &str| LabError::config(format!("constraint file line {line}: {what}"));
    let (header, rows) = parse_table(text).ok_or_else(|| LabError::config("constraint file is empty"))?;
    if header != HEADER {
        return Err(LabError::config(format!("constraint file header must be `{}`", HEADER.join("\t"))));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        if r.len() != HEADER.len() {
            return Err(bad(line, "expected 5 columns"));
        }
        let id = r[0].trim().parse().map_err(|_| bad(line, "bad id"))?;
        let k1 = r[1].trim().parse().map_err(|_| bad(line, "bad k1"))?;
        let k2 = r[2].trim().parse().map_err(|_| bad(line, "bad k2"))?;
        let source_shell = r[3].trim().parse().map_err(|_| bad(line, "bad source_shell"))?;
        let terms = r[4]
            .split_whitespace()
            .map(|s| parse_term(s).ok_or_else(|| bad(line, &format!("bad term `{s}` (modes must be active)"))))
            .collect::<Result<Vec<_>>>()?;
        if terms.is_empty() {
            return Err(bad(line, "no terms"));
        }
        out.push(BilinearConstraint {
            id,
            terms,
            source_shell,
            target_k: WaveVector::new(k1, k2),
        });
    }
    Ok(out)
}
