use alloc::collections::{BTreeMap, BTreeSet};
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::WaveVector;

/// Fourier coefficient `u(k)` of a 2D vector field.
pub type Coeff = [Complex64; 2];

const ZERO: Coeff = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];

/// Relative tolerance of the reality check in [`SpectralField::new`].
pub const REALITY_TOL: f64 = 1e-12;
/// Relative tolerance of the divergence check in [`SpectralField::new`].
pub const DIVERGENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldError {
    ZeroMode,
    DuplicateMode { k: WaveVector },
    RealityViolation { k: WaveVector },
    DivergenceViolation { k: WaveVector },
    TruncationViolation { k: WaveVector, radius_sq: i64 },
    NonFinite { k: WaveVector },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::ZeroMode => write!(f, "the zero wavevector cannot carry a coefficient"),
            FieldError::DuplicateMode { k } => write!(f, "mode {k} supplied twice"),
            FieldError::RealityViolation { k } => {
                write!(f, "coefficient at -{k} is not the conjugate of the one at {k}")
            }
            FieldError::DivergenceViolation { k } => write!(f, "k . u(k) != 0 at {k}"),
            FieldError::TruncationViolation { k, radius_sq } => {
                write!(f, "mode {k} lies outside |k|^2 <= {radius_sq}")
            }
            FieldError::NonFinite { k } => write!(f, "non-finite coefficient at {k}"),
        }
    }
}

impl core::error::Error for FieldError {}

fn norm2(c: &Coeff) -> f64 {
    c[0].norm_sqr() + c[1].norm_sqr()
}

fn conj(c: &Coeff) -> Coeff {
    [c[0].conj(), c[1].conj()]
}

fn dot_k(c: &Coeff, k: WaveVector) -> Complex64 {
    c[0] * k.k1 as f64 + c[1] * k.k2 as f64
}

/// Truncated, real, divergence-free vector field stored by its Fourier
/// coefficients. Both `k` and `-k` are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    radius_sq: i64,
    coeffs: BTreeMap<WaveVector, Coeff>,
}

impl SpectralField {
    pub fn zero(radius_sq: i64) -> Self {
        Self {
            radius_sq,
            coeffs: BTreeMap::new(),
        }
    }

    /// Validating constructor. Missing conjugate partners are filled in.
    pub fn new<I>(entries: I, radius_sq: i64) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (WaveVector, Coeff)>,
    {
        let mut given: BTreeMap<WaveVector, Coeff> = BTreeMap::new();
        for (k, c) in entries {
            if k.is_zero() {
                return Err(FieldError::ZeroMode);
            }
            if k.norm_sq() > radius_sq {
                return Err(FieldError::TruncationViolation { k, radius_sq });
            }
            if !(c[0].re.is_finite() && c[0].im.is_finite() && c[1].re.is_finite() && c[1].im.is_finite()) {
                return Err(FieldError::NonFinite { k });
            }
            if given.insert(k, c).is_some() {
                return Err(FieldError::DuplicateMode { k });
            }
        }
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &given {
            let mag = norm2(c).sqrt();
            if dot_k(c, k).norm() > DIVERGENCE_TOL * mag * k.norm() {
                return Err(FieldError::DivergenceViolation { k });
            }
            match given.get(&-k) {
                Some(partner) => {
                    let cj = conj(partner);
                    let diff = ((c[0] - cj[0]).norm_sqr() + (c[1] - cj[1]).norm_sqr()).sqrt();
                    let scale = mag.max(norm2(partner).sqrt());
                    if diff > REALITY_TOL * scale {
                        return Err(FieldError::RealityViolation { k });
                    }
                    coeffs.insert(k, *c);
                }
                None => {
                    coeffs.insert(k, *c);
                    coeffs.insert(-k, conj(c));
                }
            }
        }
        Ok(Self { radius_sq, coeffs })
    }

    /// Trusted constructor for operator outputs that are valid by construction.
    pub(crate) fn from_map(radius_sq: i64, coeffs: BTreeMap<WaveVector, Coeff>) -> Self {
        Self { radius_sq, coeffs }
    }

    pub fn radius_sq(&self) -> i64 {
        self.radius_sq
    }

    /// Same coefficients, different truncation radius (must still contain the support).
    pub fn with_radius(mut self, radius_sq: i64) -> Result<Self, FieldError> {
        if let Some(k) = self.coeffs.keys().find(|k| k.norm_sq() > radius_sq) {
            return Err(FieldError::TruncationViolation { k: *k, radius_sq });
        }
        self.radius_sq = radius_sq;
        Ok(self)
    }

    pub fn get(&self, k: WaveVector) -> Coeff {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (WaveVector, &Coeff)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Shells `|k|^2` carrying a nonzero coefficient.
    pub fn support_shells(&self) -> BTreeSet<i64> {
        self.coeffs
            .iter()
            .filter(|(_, c)| norm2(c) > 0.0)
            .map(|(k, _)| k.norm_sq())
            .collect()
    }

    /// Largest violation of the reality and divergence conditions, relative to the field norm.
    pub fn invariant_defect(&self) -> f64 {
        let scale = self.coeffs.values().map(norm2).sum::<f64>().sqrt();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (&k, c) in &self.coeffs {
            let partner = self.get(-k);
            let cj = conj(&partner);
            let reality = ((c[0] - cj[0]).norm_sqr() + (c[1] - cj[1]).norm_sqr()).sqrt();
            let div = dot_k(c, k).norm() / k.norm();
            worst = worst.max(reality).max(div);
        }
        worst / scale
    }

    /// Converts to the scalar-amplitude form `alpha(k) = -i u(k) . k_perp / |k|`.
    pub fn to_scalar(&self) -> ScalarAmplitudeField {
        let amplitudes = self
            .coeffs
            .iter()
            .map(|(&k, c)| {
                let kp = k.perp();
                let proj = dot_k(c, kp) / k.norm();
                (k, Complex64::new(proj.im, -proj.re))
            })
            .collect();
        ScalarAmplitudeField { amplitudes }
    }

    /// Builds `u(k) = i alpha(k) k_perp / |k|`.
    pub fn from_scalar(amps: &ScalarAmplitudeField, radius_sq: i64) -> Result<Self, FieldError> {
        let mut coeffs = BTreeMap::new();
        for (&k, &a) in &amps.amplitudes {
            if k.norm_sq() > radius_sq {
                return Err(FieldError::TruncationViolation { k, radius_sq });
            }
            coeffs.insert(k, scalar_to_coeff(k, a));
        }
        Ok(Self { radius_sq, coeffs })
    }

    pub(crate) fn map_coeffs<F>(&self, mut f: F) -> Self
    where
        F: FnMut(WaveVector, &Coeff) -> Coeff,
    {
        Self {
            radius_sq: self.radius_sq,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, f(k, c))).collect(),
        }
    }

    pub(crate) fn filter_modes<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(WaveVector) -> bool,
    {
        Self {
            radius_sq: self.radius_sq,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| keep(**k))
                .map(|(k, c)| (*k, *c))
                .collect(),
        }
    }

    fn combine(&self, other: &Self, a: f64, b: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            coeffs.insert(k, [c[0] * a, c[1] * a]);
        }
        for (&k, c) in &other.coeffs {
            let e = coeffs.entry(k).or_insert(ZERO);
            e[0] += c[0] * b;
            e[1] += c[1] * b;
        }
        Self {
            radius_sq: self.radius_sq.max(other.radius_sq),
            coeffs,
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        self.combine(other, a, b)
    }
}

pub(crate) fn scalar_to_coeff(k: WaveVector, a: Complex64) -> Coeff {
    let n = k.norm();
    let ia = Complex64::new(-a.im, a.re);
    let kp = k.perp();
    [ia * (kp.k1 as f64 / n), ia * (kp.k2 as f64 / n)]
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.combine(rhs, 1.0, 1.0)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.combine(rhs, 1.0, -1.0)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.map_coeffs(|_, c| [c[0] * self, c[1] * self])
    }
}

/// Scalar amplitudes `alpha(k)` with `alpha(-k) = conj(alpha(k))`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarAmplitudeField {
    amplitudes: BTreeMap<WaveVector, Complex64>,
}

impl ScalarAmplitudeField {
    /// Validating constructor. Missing conjugate partners are filled in.
    pub fn new<I>(entries: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (WaveVector, Complex64)>,
    {
        let mut given: BTreeMap<WaveVector, Complex64> = BTreeMap::new();
        for (k, a) in entries {
            if k.is_zero() {
                return Err(FieldError::ZeroMode);
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(FieldError::NonFinite { k });
            }
            if given.insert(k, a).is_some() {
                return Err(FieldError::DuplicateMode { k });
            }
        }
        let mut amplitudes = BTreeMap::new();
        for (&k, &a) in &given {
            match given.get(&-k) {
                Some(&p) => {
                    if (a - p.conj()).norm() > REALITY_TOL * a.norm().max(p.norm()) {
                        return Err(FieldError::RealityViolation { k });
                    }
                    amplitudes.insert(k, a);
                }
                None => {
                    amplitudes.insert(k, a);
                    amplitudes.insert(-k, a.conj());
                }
            }
        }
        Ok(Self { amplitudes })
    }

    pub fn get(&self, k: WaveVector) -> Complex64 {
        self.amplitudes.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (WaveVector, Complex64)> + '_ {
        self.amplitudes.iter().map(|(k, a)| (*k, *a))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Modes with a nonzero amplitude.
    pub fn support(&self) -> BTreeSet<WaveVector> {
        self.amplitudes
            .iter()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn max_norm_sq(&self) -> i64 {
        self.amplitudes.keys().map(|k| k.norm_sq()).max().unwrap_or(0)
    }
}
