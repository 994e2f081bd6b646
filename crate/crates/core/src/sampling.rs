//! Random and synthetic fields for experiments and tests.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;

#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{ball, inner, norm_as, shell, ScalarAmplitudeField, SpectralField, WaveVector};

#[derive(Clone, Debug, PartialEq)]
pub enum SamplingError {
    /// The energy fraction must satisfy `0 < eta < 1 / lambda`.
    EtaOutOfRange { eta: f64 },
    /// Ghost relations need at least one shell below and one above `lambda`.
    ShellsDoNotStraddle,
    EmptyShell { mu: i64 },
}

impl fmt::Display for SamplingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingError::EtaOutOfRange { eta } => write!(f, "eta = {eta} outside (0, 1/lambda)"),
            SamplingError::ShellsDoNotStraddle => write!(f, "need shells on both sides of lambda"),
            SamplingError::EmptyShell { mu } => write!(f, "no lattice vector with |k|^2 = {mu}"),
        }
    }
}

impl core::error::Error for SamplingError {}

fn random_amplitude<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        if re * re + im * im <= 1.0 && re * re + im * im > 1e-6 {
            return Complex64::new(re, im);
        }
    }
}

/// `k` is the representative of the pair `{k, -k}`.
fn is_canonical(k: WaveVector) -> bool {
    k > -k
}

fn amplitudes_on<R: Rng + ?Sized>(rng: &mut R, modes: &[WaveVector]) -> ScalarAmplitudeField {
    let entries: Vec<_> = modes
        .iter()
        .filter(|k| is_canonical(**k))
        .map(|&k| (k, random_amplitude(rng)))
        .collect();
    ScalarAmplitudeField::new(entries).expect("canonical representatives are distinct")
}

fn normalise(u: SpectralField, scale: f64) -> SpectralField {
    let n = norm_as(&u, 0.0);
    if n == 0.0 {
        u
    } else {
        (scale / n) * &u
    }
}

/// Random field on the ball `|k|^2 <= radius_sq`; each conjugate pair is
/// present with probability `density`. Normalised to `|u| = scale` when nonempty.
pub fn random_field<R: Rng + ?Sized>(rng: &mut R, radius_sq: i64, density: f64, scale: f64) -> SpectralField {
    let modes: Vec<_> = ball(radius_sq)
        .into_iter()
        .filter(|k| is_canonical(*k))
        .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
        .collect();
    let amps = amplitudes_on(rng, &modes);
    let u = SpectralField::from_scalar(&amps, radius_sq).expect("modes lie in the ball");
    normalise(u, scale)
}

/// Random field populating every mode of the given shells, with `|u| = scale`.
pub fn random_on_shells<R: Rng + ?Sized>(rng: &mut R, shells: &[i64], scale: f64) -> SpectralField {
    let modes: Vec<_> = shells.iter().flat_map(|&m| shell(m)).collect();
    let radius = shells.iter().copied().max().unwrap_or(0);
    let amps = amplitudes_on(rng, &modes);
    let u = SpectralField::from_scalar(&amps, radius).expect("modes lie in the ball");
    normalise(u, scale)
}

/// A state `u = eta g + sum_mu u_mu` satisfying `E = (g, u)` and `|Au|^2 = lambda E`
/// exactly, with random directions inside each shell.
///
/// The shell energies are a random convex mixture of the two-shell solutions
/// `x_a = mu_b (mu_b - lambda) t`, `x_b = mu_a (lambda - mu_a) t` for every
/// pair `mu_a < lambda < mu_b`. With exactly one shell on each side the state
/// is also chained.
pub fn synthetic_ghost_state<R: Rng + ?Sized>(
    rng: &mut R,
    g: &SpectralField,
    lambda: i64,
    eta: f64,
    shells: &[i64],
) -> Result<SpectralField, SamplingError> {
    let lam = lambda as f64;
    if !(eta > 0.0 && eta * lam < 1.0) {
        return Err(SamplingError::EtaOutOfRange { eta });
    }
    let g_sq = inner(g, g);
    let c1 = eta * g_sq * (1.0 - lam * eta);
    let below: Vec<i64> = shells.iter().copied().filter(|&m| m < lambda).collect();
    let above: Vec<i64> = shells.iter().copied().filter(|&m| m > lambda).collect();
    if below.is_empty() || above.is_empty() {
        return Err(SamplingError::ShellsDoNotStraddle);
    }
    let mut energy: Vec<(i64, f64)> = below.iter().chain(above.iter()).map(|&m| (m, 0.0)).collect();
    let mut weights = Vec::new();
    for _ in 0..below.len() * above.len() {
        weights.push(rng.gen_range(0.2..1.0));
    }
    let total: f64 = weights.iter().sum();
    let mut w = weights.iter();
    for &a in &below {
        for &b in &above {
            let share = w.next().copied().unwrap_or(1.0) / total;
            let (fa, fb) = (a as f64, b as f64);
            let t = share * c1 / (fa * fb * (fb - fa));
            for (m, x) in energy.iter_mut() {
                if *m == a {
                    *x += fb * (fb - lam) * t;
                } else if *m == b {
                    *x += fa * (lam - fa) * t;
                }
            }
        }
    }
    let radius = shells.iter().copied().chain([lambda]).max().unwrap_or(lambda);
    let mut u = eta * g;
    u = u.with_radius(radius).expect("force shell is inside the radius");
    for (mu, x) in energy {
        let modes = shell(mu);
        if modes.is_empty() {
            return Err(SamplingError::EmptyShell { mu });
        }
        let part = SpectralField::from_scalar(&amplitudes_on(rng, &modes), radius).expect("shell inside radius");
        u = &u + &normalise(part, x.sqrt());
    }
    Ok(u)
}

/// Component of `v` orthogonal to the span of `basis`. The basis is
/// orthonormalised first (modified Gram-Schmidt, two passes); members that
/// are dependent on earlier ones are skipped.
pub fn orthogonalise(v: &SpectralField, basis: &[&SpectralField]) -> SpectralField {
    let mut ortho: Vec<SpectralField> = Vec::new();
    for b in basis {
        let scale = norm_as(b, 0.0);
        let mut w = (*b).clone();
        for _ in 0..2 {
            for q in &ortho {
                let c = inner(&w, q);
                w = w.lin_comb(1.0, q, -c);
            }
        }
        let n = norm_as(&w, 0.0);
        if n > 1e-12 * scale {
            ortho.push((1.0 / n) * &w);
        }
    }
    let mut out = v.clone();
    for _ in 0..2 {
        for q in &ortho {
            let c = inner(&out, q);
            out = out.lin_comb(1.0, q, -c);
        }
    }
    out
}
