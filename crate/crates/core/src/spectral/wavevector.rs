use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

/// Integer wavevector `k = (k1, k2)` on the square lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveVector {
    pub k1: i32,
    pub k2: i32,
}

impl WaveVector {
    pub const fn new(k1: i32, k2: i32) -> Self {
        Self { k1, k2 }
    }

    /// Exact squared length `k1^2 + k2^2`.
    pub const fn norm_sq(self) -> i64 {
        let a = self.k1 as i64;
        let b = self.k2 as i64;
        a * a + b * b
    }

    pub fn norm(self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// `k^perp = (-k2, k1)`.
    pub const fn perp(self) -> Self {
        Self::new(-self.k2, self.k1)
    }

    pub const fn dot(self, other: Self) -> i64 {
        self.k1 as i64 * other.k1 as i64 + self.k2 as i64 * other.k2 as i64
    }

    pub const fn is_zero(self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }
}

impl Add for WaveVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.k1 + rhs.k1, self.k2 + rhs.k2)
    }
}

impl Sub for WaveVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.k1 - rhs.k1, self.k2 - rhs.k2)
    }
}

impl Neg for WaveVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.k1, -self.k2)
    }
}

impl fmt::Display for WaveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

impl From<(i32, i32)> for WaveVector {
    fn from((k1, k2): (i32, i32)) -> Self {
        Self::new(k1, k2)
    }
}

/// Largest `r` with `r * r <= n`.
fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All lattice vectors with `|k|^2 = norm_sq`, in lexicographic order.
pub fn shell(norm_sq: i64) -> Vec<WaveVector> {
    let r = isqrt(norm_sq) as i32;
    let mut out = Vec::new();
    if norm_sq <= 0 {
        return out;
    }
    for k1 in -r..=r {
        for k2 in -r..=r {
            let k = WaveVector::new(k1, k2);
            if k.norm_sq() == norm_sq {
                out.push(k);
            }
        }
    }
    out
}

/// All nonzero lattice vectors with `|k|^2 <= radius_sq`, in lexicographic order.
pub fn ball(radius_sq: i64) -> Vec<WaveVector> {
    let r = isqrt(radius_sq) as i32;
    let mut out = Vec::new();
    for k1 in -r..=r {
        for k2 in -r..=r {
            let k = WaveVector::new(k1, k2);
            if !k.is_zero() && k.norm_sq() <= radius_sq {
                out.push(k);
            }
        }
    }
    out
}

/// Whether `n` is an eigenvalue of the Stokes operator, i.e. a positive sum of two squares.
pub fn is_stokes_eigenvalue(n: i64) -> bool {
    if n <= 0 {
        return false;
    }
    let r = isqrt(n);
    (0..=r).any(|a| {
        let rest = n - a * a;
        let b = isqrt(rest);
        b * b == rest
    })
}

/// Stokes eigenvalues in `[1, max]`.
pub fn stokes_eigenvalues(max: i64) -> Vec<i64> {
    (1..=max).filter(|&n| is_stokes_eigenvalue(n)).collect()
}
