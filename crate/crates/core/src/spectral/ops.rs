use alloc::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::field::Coeff;
use super::{SpectralField, WaveVector};

/// `A^s u`, i.e. multiplication of mode `k` by `|k|^(2s)`.
pub fn apply_stokes_power(u: &SpectralField, s: f64) -> SpectralField {
    u.map_coeffs(|k, c| {
        let w = stokes_weight(k, s);
        [c[0] * w, c[1] * w]
    })
}

pub(crate) fn stokes_weight(k: WaveVector, s: f64) -> f64 {
    let n = k.norm_sq() as f64;
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        n
    } else if s == 2.0 {
        n * n
    } else if s == 0.5 {
        n.sqrt()
    } else {
        n.powf(s)
    }
}

/// `(u, v) = sum_k u(k) . conj(v(k))`; real by the reality condition.
pub fn inner(u: &SpectralField, v: &SpectralField) -> f64 {
    let (small, large) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    let mut acc = 0.0;
    for (k, a) in small.iter() {
        let b = large.get(k);
        // Re(a . conj(b)) is symmetric in a and b.
        acc += (a[0] * b[0].conj() + a[1] * b[1].conj()).re;
    }
    acc
}

/// `|A^s u|`.
pub fn norm_as(u: &SpectralField, s: f64) -> f64 {
    norm_as_sq(u, s).sqrt()
}

/// `|A^s u|^2`, summed directly from the coefficients.
pub fn norm_as_sq(u: &SpectralField, s: f64) -> f64 {
    u.iter()
        .map(|(k, c)| {
            let w = stokes_weight(k, 2.0 * s);
            w * (c[0].norm_sqr() + c[1].norm_sqr())
        })
        .sum()
}

/// `B(u, v)` on every output mode with `|k|^2 <= out_radius_sq`.
pub fn bilinear(u: &SpectralField, v: &SpectralField, out_radius_sq: i64) -> SpectralField {
    bilinear_filtered(u, v, out_radius_sq, |_| true)
}

/// `B(u, v)` restricted to output modes accepted by `keep`.
///
/// Direct convolution over the stored modes:
/// `B(u,v)(k) = i sum_j [ (u(k-j).j) v(j) - (u(k-j).j)(v(j).k) k / |k|^2 ]`.
/// The result is symmetrised so that `B(-k) = conj(B(k))` holds exactly.
pub fn bilinear_filtered<F>(u: &SpectralField, v: &SpectralField, out_radius_sq: i64, mut keep: F) -> SpectralField
where
    F: FnMut(WaveVector) -> bool,
{
    let zero = Complex64::new(0.0, 0.0);
    let mut acc: BTreeMap<WaveVector, Coeff> = BTreeMap::new();
    for (j, vj) in v.iter() {
        for (h, uh) in u.iter() {
            let k = h + j;
            if k.is_zero() || k.norm_sq() > out_radius_sq || !keep(k) {
                continue;
            }
            let uh_dot_j = uh[0] * j.k1 as f64 + uh[1] * j.k2 as f64;
            if uh_dot_j == zero {
                continue;
            }
            let vj_dot_k = vj[0] * k.k1 as f64 + vj[1] * k.k2 as f64;
            let ksq = k.norm_sq() as f64;
            let lon = uh_dot_j * vj_dot_k / ksq;
            let t0 = uh_dot_j * vj[0] - lon * k.k1 as f64;
            let t1 = uh_dot_j * vj[1] - lon * k.k2 as f64;
            let e = acc.entry(k).or_insert([zero, zero]);
            // multiply by i
            e[0] += Complex64::new(-t0.im, t0.re);
            e[1] += Complex64::new(-t1.im, t1.re);
        }
    }
    let mut out = BTreeMap::new();
    for (&k, c) in &acc {
        let p = acc.get(&-k).copied().unwrap_or([zero, zero]);
        out.insert(k, [(c[0] + p[0].conj()) * 0.5, (c[1] + p[1].conj()) * 0.5]);
    }
    SpectralField::from_map(out_radius_sq, out)
}

/// `E_mu u`: keeps exactly the modes with `|k|^2 = mu`.
pub fn eigenspace_project(u: &SpectralField, mu: i64) -> SpectralField {
    u.filter_modes(|k| k.norm_sq() == mu)
}

/// Projection onto the union of the given shells.
pub fn project_shells(u: &SpectralField, shells: &BTreeSet<i64>) -> SpectralField {
    u.filter_modes(|k| shells.contains(&k.norm_sq()))
}

/// Projection onto `|k|^2 <= radius_sq`; the result carries the new radius.
pub fn truncate(u: &SpectralField, radius_sq: i64) -> SpectralField {
    let f = u.filter_modes(|k| k.norm_sq() <= radius_sq);
    SpectralField::from_map(radius_sq, f.iter().map(|(k, c)| (k, *c)).collect())
}
