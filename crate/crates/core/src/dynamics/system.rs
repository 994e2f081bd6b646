use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{ball, scalar_to_coeff, shell, SpectralField, WaveVector};

use super::{DynamicsError, GalerkinSpec};

/// Which right-hand side to integrate.
#[derive(Clone, Copy, Debug)]
pub enum RhsKind<'a> {
    /// Full truncated system on the ball of the state, forced by `g`.
    Full(&'a SpectralField),
    /// Shell-compressed system.
    Compressed(&'a GalerkinSpec),
}

#[derive(Clone, Copy, Debug)]
struct Triad {
    k: usize,
    h: usize,
    j: usize,
    coef: f64,
}

/// Dense scalar-amplitude form of a Galerkin system:
/// `d alpha_k/dt = gamma_k - |k|^2 alpha_k + sum_{h+j=k} c(h, j) alpha_h alpha_j`.
#[derive(Clone, Debug)]
pub struct GalerkinSystem {
    modes: Vec<WaveVector>,
    index: BTreeMap<WaveVector, usize>,
    partner: Vec<usize>,
    decay: Vec<f64>,
    forcing: Vec<Complex64>,
    triads: Vec<Triad>,
    radius_sq: i64,
    compressed: bool,
}

impl GalerkinSystem {
    pub fn new(kind: RhsKind<'_>, radius_sq: i64) -> Result<Self, DynamicsError> {
        match kind {
            RhsKind::Full(g) => Self::full(g, radius_sq),
            RhsKind::Compressed(spec) => Ok(Self::compressed(spec)),
        }
    }

    pub fn full(g: &SpectralField, radius_sq: i64) -> Result<Self, DynamicsError> {
        if let Some((k, _)) = g.iter().find(|(k, _)| k.norm_sq() > radius_sq) {
            return Err(DynamicsError::TruncationViolation { k, radius_sq });
        }
        Ok(Self::build(ball(radius_sq), g, radius_sq, false))
    }

    pub fn compressed(spec: &GalerkinSpec) -> Self {
        let modes: Vec<_> = spec.mode_shells().iter().flat_map(|&m| shell(m)).collect();
        Self::build(modes, spec.force(), spec.radius_sq(), true)
    }

    fn build(mut modes: Vec<WaveVector>, g: &SpectralField, radius_sq: i64, compressed: bool) -> Self {
        modes.sort();
        let index: BTreeMap<_, _> = modes.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let partner = modes.iter().map(|k| index[&-*k]).collect();
        let decay = modes.iter().map(|k| k.norm_sq() as f64).collect();
        let gs = g.to_scalar();
        let forcing = modes.iter().map(|&k| gs.get(k)).collect();
        let mut triads = Vec::new();
        for (ki, &k) in modes.iter().enumerate() {
            for (hi, &h) in modes.iter().enumerate() {
                let j = k - h;
                let Some(&ji) = index.get(&j) else { continue };
                if hi >= ji {
                    continue;
                }
                // c(h,j) + c(j,h) = (h_perp . j)(|j|^2 - |h|^2) / (|h||j||k|)
                let cross = h.perp().dot(j);
                let diff = j.norm_sq() - h.norm_sq();
                if cross == 0 || diff == 0 {
                    continue;
                }
                let coef = (cross * diff) as f64 / (h.norm() * j.norm() * k.norm());
                triads.push(Triad { k: ki, h: hi, j: ji, coef });
            }
        }
        Self {
            modes,
            index,
            partner,
            decay,
            forcing,
            triads,
            radius_sq,
            compressed,
        }
    }

    pub fn modes(&self) -> &[WaveVector] {
        &self.modes
    }

    pub fn radius_sq(&self) -> i64 {
        self.radius_sq
    }

    pub fn triad_count(&self) -> usize {
        self.triads.len()
    }

    pub fn to_state(&self, u: &SpectralField) -> Result<Vec<Complex64>, DynamicsError> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.modes.len()];
        for (k, a) in u.to_scalar().iter() {
            match self.index.get(&k) {
                Some(&i) => out[i] = a,
                None if a.norm_sqr() == 0.0 => {}
                None if self.compressed => return Err(DynamicsError::SupportViolation { k }),
                None => {
                    return Err(DynamicsError::TruncationViolation {
                        k,
                        radius_sq: self.radius_sq,
                    })
                }
            }
        }
        Ok(out)
    }

    pub fn to_field(&self, state: &[Complex64]) -> SpectralField {
        let coeffs = self
            .modes
            .iter()
            .zip(state)
            .map(|(&k, &a)| (k, scalar_to_coeff(k, a)))
            .collect();
        SpectralField::from_map(self.radius_sq, coeffs)
    }

    /// Forcing plus quadratic transfer; the linear decay is excluded.
    pub fn nonlinear(&self, state: &[Complex64], out: &mut [Complex64]) {
        out.copy_from_slice(&self.forcing);
        for t in &self.triads {
            out[t.k] += state[t.h] * state[t.j] * t.coef;
        }
    }

    pub fn rhs(&self, state: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        self.nonlinear(state, &mut out);
        for ((o, s), d) in out.iter_mut().zip(state).zip(&self.decay) {
            *o -= *s * *d;
        }
        out
    }

    /// Enforces `alpha(-k) = conj(alpha(k))` by averaging each pair.
    pub fn symmetrise(&self, state: &mut [Complex64]) {
        for (i, &p) in self.partner.iter().enumerate() {
            if i < p {
                let avg = (state[i] + state[p].conj()) * 0.5;
                state[i] = avg;
                state[p] = avg.conj();
            }
        }
    }
}

/// `phi_1, phi_2, phi_3` of the exponential integrator.
pub(crate) fn phi123(z: f64) -> (f64, f64, f64) {
    if z.abs() < 1.0 {
        // phi_n(z) = sum_m z^m / (m + n)!
        let (mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0);
        let mut zm = 1.0;
        let mut fact = 1.0; // (m+1)!
        for m in 0..25 {
            fact *= (m + 1) as f64;
            let t1 = zm / fact;
            let t2 = t1 / (m + 2) as f64;
            let t3 = t2 / (m + 3) as f64;
            p1 += t1;
            p2 += t2;
            p3 += t3;
            zm *= z;
        }
        (p1, p2, p3)
    } else {
        let ez = z.exp();
        let p1 = (ez - 1.0) / z;
        let p2 = (ez - 1.0 - z) / (z * z);
        let p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
        (p1, p2, p3)
    }
}

/// Cox-Matthews exponential RK4 coefficients for a fixed step.
#[derive(Clone, Debug)]
pub struct Etdrk4 {
    dt: f64,
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl Etdrk4 {
    pub fn new(system: &GalerkinSystem, dt: f64) -> Result<Self, DynamicsError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DynamicsError::InvalidParameter { name: "dt", value: dt });
        }
        let n = system.decay.len();
        let mut s = Self {
            dt,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &d in &system.decay {
            let z = -dt * d;
            let (p1, p2, p3) = phi123(z);
            let (h1, _, _) = phi123(z / 2.0);
            s.e.push(z.exp());
            s.e2.push((z / 2.0).exp());
            s.q.push(0.5 * dt * h1);
            s.f1.push(dt * (p1 - 3.0 * p2 + 4.0 * p3));
            s.f2.push(dt * 2.0 * (p2 - 2.0 * p3));
            s.f3.push(dt * (4.0 * p3 - p2));
        }
        Ok(s)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `state` by one step in place.
    pub fn step(&self, system: &GalerkinSystem, state: &mut [Complex64]) {
        let n = state.len();
        let z = Complex64::new(0.0, 0.0);
        let mut nu = vec![z; n];
        let mut na = vec![z; n];
        let mut nb = vec![z; n];
        let mut nc = vec![z; n];
        let mut a = vec![z; n];
        let mut b = vec![z; n];
        let mut c = vec![z; n];
        system.nonlinear(state, &mut nu);
        for i in 0..n {
            a[i] = state[i] * self.e2[i] + nu[i] * self.q[i];
        }
        system.nonlinear(&a, &mut na);
        for i in 0..n {
            b[i] = state[i] * self.e2[i] + na[i] * self.q[i];
        }
        system.nonlinear(&b, &mut nb);
        for i in 0..n {
            c[i] = a[i] * self.e2[i] + (nb[i] * 2.0 - nu[i]) * self.q[i];
        }
        system.nonlinear(&c, &mut nc);
        for i in 0..n {
            state[i] = state[i] * self.e[i] + nu[i] * self.f1[i] + (na[i] + nb[i]) * self.f2[i] + nc[i] * self.f3[i];
        }
        system.symmetrise(state);
    }
}

/// One exponential RK4 step of size `dt` from `state`.
pub fn step_etdrk4(state: &SpectralField, kind: RhsKind<'_>, dt: f64) -> Result<SpectralField, DynamicsError> {
    let radius = match kind {
        RhsKind::Full(g) => state.radius_sq().max(g.radius_sq()),
        RhsKind::Compressed(spec) => spec.radius_sq(),
    };
    let sys = GalerkinSystem::new(kind, radius)?;
    let scheme = Etdrk4::new(&sys, dt)?;
    let mut s = sys.to_state(state)?;
    scheme.step(&sys, &mut s);
    Ok(sys.to_field(&s))
}
