#![allow(dead_code)]

use std::collections::BTreeSet;

use ghostlab_core::dynamics::GalerkinSpec;
use ghostlab_core::sampling::random_field;
use ghostlab_core::spectral::{ball, inner, make_eigenforce, EigenforceSpec, SpectralField, WaveVector};
use ghostlab_core::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(seed: u64, radius_sq: i64) -> SpectralField {
    random_field(&mut rng(seed), radius_sq, 0.7, 1.0)
}

pub fn force(lambda: i64, magnitude: f64) -> SpectralField {
    make_eigenforce(&EigenforceSpec::uniform(lambda, magnitude).unwrap()).unwrap()
}

pub fn spec(shells: &[i64], lambda: i64, magnitude: f64) -> GalerkinSpec {
    let set: BTreeSet<i64> = shells.iter().copied().collect();
    GalerkinSpec::new(set, force(lambda, magnitude), lambda).unwrap()
}

pub fn norm(u: &SpectralField) -> f64 {
    inner(u, u).sqrt()
}

pub fn dist(u: &SpectralField, v: &SpectralField) -> f64 {
    norm(&(u - v))
}

/// Values of a field on an `n x n` grid over `[0, 2 pi)^2`, by direct summation.
/// `weight(k)` multiplies each coefficient, e.g. `i k_j` for a derivative.
pub fn to_grid<F>(u: &SpectralField, n: usize, weight: F) -> Vec<[f64; 2]>
where
    F: Fn(WaveVector) -> Complex64,
{
    let h = std::f64::consts::TAU / n as f64;
    let mut out = vec![[0.0; 2]; n * n];
    for (k, c) in u.iter() {
        let w = weight(k);
        let c = [c[0] * w, c[1] * w];
        for (ix, row) in out.chunks_mut(n).enumerate() {
            for (iy, v) in row.iter_mut().enumerate() {
                let phase = h * (k.k1 as f64 * ix as f64 + k.k2 as f64 * iy as f64);
                let e = Complex64::new(phase.cos(), phase.sin());
                v[0] += (c[0] * e).re;
                v[1] += (c[1] * e).re;
            }
        }
    }
    out
}

/// Fourier coefficients of a grid vector field on every `|k|^2 <= radius_sq`.
pub fn from_grid(values: &[[f64; 2]], n: usize, radius_sq: i64) -> Vec<(WaveVector, [Complex64; 2])> {
    let h = std::f64::consts::TAU / n as f64;
    let scale = 1.0 / (n * n) as f64;
    ball(radius_sq)
        .into_iter()
        .map(|k| {
            let mut acc = [Complex64::new(0.0, 0.0); 2];
            for (ix, row) in values.chunks(n).enumerate() {
                for (iy, v) in row.iter().enumerate() {
                    let phase = -h * (k.k1 as f64 * ix as f64 + k.k2 as f64 * iy as f64);
                    let e = Complex64::new(phase.cos(), phase.sin());
                    acc[0] += e * v[0];
                    acc[1] += e * v[1];
                }
            }
            (k, [acc[0] * scale, acc[1] * scale])
        })
        .collect()
}

/// `P[(u . grad) v]` computed pointwise on a grid fine enough to avoid aliasing.
pub fn grid_bilinear(u: &SpectralField, v: &SpectralField, n: usize, out_radius_sq: i64) -> Vec<(WaveVector, [Complex64; 2])> {
    let uu = to_grid(u, n, |_| Complex64::new(1.0, 0.0));
    let dx = to_grid(v, n, |k| Complex64::new(0.0, k.k1 as f64));
    let dy = to_grid(v, n, |k| Complex64::new(0.0, k.k2 as f64));
    let w: Vec<[f64; 2]> = (0..n * n)
        .map(|p| {
            let [a, b] = uu[p];
            [a * dx[p][0] + b * dy[p][0], a * dx[p][1] + b * dy[p][1]]
        })
        .collect();
    from_grid(&w, n, out_radius_sq)
        .into_iter()
        .map(|(k, c)| {
            let ksq = k.norm_sq() as f64;
            let l = (c[0] * k.k1 as f64 + c[1] * k.k2 as f64) / ksq;
            (k, [c[0] - l * k.k1 as f64, c[1] - l * k.k2 as f64])
        })
        .collect()
}
