use alloc::vec::Vec;
use core::fmt;

use crate::spectral::WaveVector;

/// The sixteen wavevectors of the shells `|k|^2 = 1, 2, 5`, ordered so that
/// conjugate partners are adjacent (`i ^ 1`).
pub const MODES: [WaveVector; 16] = [
    WaveVector::new(1, 0),
    WaveVector::new(-1, 0),
    WaveVector::new(0, 1),
    WaveVector::new(0, -1),
    WaveVector::new(1, 1),
    WaveVector::new(-1, -1),
    WaveVector::new(-1, 1),
    WaveVector::new(1, -1),
    WaveVector::new(1, 2),
    WaveVector::new(-1, -2),
    WaveVector::new(1, -2),
    WaveVector::new(-1, 2),
    WaveVector::new(2, 1),
    WaveVector::new(-2, -1),
    WaveVector::new(2, -1),
    WaveVector::new(-2, 1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(u8);

impl ModeIndex {
    pub const COUNT: usize = 16;

    pub fn new(i: usize) -> Option<Self> {
        (i < Self::COUNT).then_some(Self(i as u8))
    }

    pub fn from_vector(k: WaveVector) -> Option<Self> {
        MODES.iter().position(|&m| m == k).map(|i| Self(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn vector(self) -> WaveVector {
        MODES[self.index()]
    }

    /// Index of `-k`.
    pub fn conj(self) -> Self {
        Self(self.0 ^ 1)
    }

    /// 1, 2 or 3 for `S_1`, `S_2`, `S_3`.
    pub fn set(self) -> u8 {
        match self.0 {
            0..=3 => 1,
            4..=7 => 2,
            _ => 3,
        }
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..Self::COUNT as u8).map(Self)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{}", self.vector())
    }
}

/// Set of mode indices as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModeSet(u16);

impl ModeSet {
    pub const EMPTY: Self = Self(0);
    pub const S1: Self = Self(0x000f);
    pub const S2: Self = Self(0x00f0);
    pub const S3: Self = Self(0xff00);
    pub const ALL: Self = Self(0xffff);

    pub fn from_bits(bits: u16) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, m: ModeIndex) -> bool {
        self.0 >> m.0 & 1 == 1
    }

    pub fn insert(&mut self, m: ModeIndex) -> bool {
        let had = self.contains(m);
        self.0 |= 1 << m.0;
        !had
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn is_superset(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Closed under `k -> -k`.
    pub fn is_conjugate_closed(self) -> bool {
        self.iter().all(|m| self.contains(m.conj()))
    }

    pub fn iter(self) -> impl Iterator<Item = ModeIndex> {
        ModeIndex::all().filter(move |&m| self.contains(m))
    }
}

impl FromIterator<ModeIndex> for ModeSet {
    fn from_iter<I: IntoIterator<Item = ModeIndex>>(iter: I) -> Self {
        let mut s = Self::EMPTY;
        for m in iter {
            s.insert(m);
        }
        s
    }
}

/// `(S_1, S_2, S_3)` as wavevector lists in canonical order.
pub fn build_active_sets() -> (Vec<WaveVector>, Vec<WaveVector>, Vec<WaveVector>) {
    (MODES[0..4].to_vec(), MODES[4..8].to_vec(), MODES[8..16].to_vec())
}
