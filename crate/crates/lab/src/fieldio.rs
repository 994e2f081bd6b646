//! Text format for divergence-free fields: one row `k1 k2 re im` per mode
//! pair, holding the scalar amplitude `alpha(k)` of `u(k) = i alpha(k) k_perp / |k|`.
//! The partner `-k` is implied; listing it as well is allowed if it is the conjugate.

use ghostlab_core::spectral::{ScalarAmplitudeField, SpectralField, WaveVector};
use ghostlab_core::Complex64;

use crate::error::{LabError, Result};
use crate::export::{fmt_f64, parse_table, Table};

pub const HEADER: [&str; 4] = ["k1", "k2", "re", "im"];

pub fn field_table(u: &SpectralField) -> Table {
    let mut t = Table::new(&HEADER);
    for (k, a) in u.to_scalar().iter().filter(|(k, _)| *k > -*k) {
        t.push(vec![k.k1.to_string(), k.k2.to_string(), fmt_f64(a.re), fmt_f64(a.im)]);
    }
    t
}

pub fn parse_amplitudes(text: &str) -> Result<ScalarAmplitudeField> {
    let (header, rows) = parse_table(text).ok_or_else(|| LabError::config("field file is empty"))?;
    if header != HEADER {
        return Err(LabError::config(format!("field file header must be `{}`", HEADER.join("\t"))));
    }
    let mut seen = std::collections::BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        if r.len() != 4 {
            return Err(LabError::config(format!("field file line {line}: expected 4 columns")));
        }
        let int = |s: &str| s.trim().parse::<i32>().map_err(|_| LabError::config(format!("field file line {line}: bad integer `{s}`")));
        let float = |s: &str| s.trim().parse::<f64>().map_err(|_| LabError::config(format!("field file line {line}: bad number `{s}`")));
        let k = WaveVector::new(int(r[0])?, int(r[1])?);
        seen.insert(k, Complex64::new(float(r[2])?, float(r[3])?));
    }
    ScalarAmplitudeField::new(seen).map_err(|e| LabError::config(format!("field file: {e}")))
}

/// Reads a field; the truncation radius is the larger of `min_radius_sq` and the largest `|k|^2` present.
pub fn parse_field(text: &str, min_radius_sq: i64) -> Result<SpectralField> {
    let amps = parse_amplitudes(text)?;
    let radius = amps.max_norm_sq().max(min_radius_sq);
    SpectralField::from_scalar(&amps, radius).map_err(|e| LabError::config(format!("field file: {e}")))
}
