#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{identity_defect4, solve3, Mat4};
use crate::spectral::{apply_stokes_power, inner, norm_as, SpectralField};

use super::{GeometryError, GhostDiagnostics};

/// Relative cutoff below which a Gram-Schmidt residual counts as zero.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    /// Built from `(g, u, du/dt, Au)`.
    Old,
    /// Built from `(g, u, Au, A^2 u)`.
    New,
}

/// Orthonormal 4-frame `f_0 .. f_3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    vectors: [SpectralField; 4],
    kind: FrameKind,
}

impl Frame {
    /// Orthonormalises four fields in order. On failure returns the index of
    /// the first vector that lies in the span of its predecessors.
    pub fn from_sequence(seq: [&SpectralField; 4], kind: FrameKind) -> Result<Self, usize> {
        let mut out: [Option<SpectralField>; 4] = Default::default();
        for i in 0..4 {
            let scale = norm_as(seq[i], 0.0);
            let mut v = seq[i].clone();
            for _ in 0..2 {
                for f in out.iter().take(i).flatten() {
                    let c = inner(&v, f);
                    v = v.lin_comb(1.0, f, -c);
                }
            }
            let n = norm_as(&v, 0.0);
            if !(n > FRAME_TOL * scale) {
                return Err(i);
            }
            out[i] = Some((1.0 / n) * &v);
        }
        let [a, b, c, d] = out;
        Ok(Self {
            vectors: [a.unwrap(), b.unwrap(), c.unwrap(), d.unwrap()],
            kind,
        })
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn vectors(&self) -> &[SpectralField; 4] {
        &self.vectors
    }

    /// `((v, f_0), .., (v, f_3))`.
    pub fn coordinates(&self, v: &SpectralField) -> [f64; 4] {
        core::array::from_fn(|i| inner(v, &self.vectors[i]))
    }

    /// `sum_i x_i f_i`.
    pub fn synthesize(&self, x: &[f64; 4]) -> SpectralField {
        let mut out = (x[0]) * &self.vectors[0];
        for i in 1..4 {
            out = out.lin_comb(1.0, &self.vectors[i], x[i]);
        }
        out
    }

    /// Orthogonal projection onto the span of the frame.
    pub fn project(&self, v: &SpectralField) -> SpectralField {
        self.synthesize(&self.coordinates(v))
    }

    pub fn gram(&self) -> Mat4 {
        core::array::from_fn(|i| core::array::from_fn(|j| inner(&self.vectors[i], &self.vectors[j])))
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        identity_defect4(&self.gram())
    }
}

/// `f_0 = g/G`, then `u`, `du/dt` and `Au` orthonormalised in turn.
pub fn old_frame(u: &SpectralField, udot: &SpectralField, g: &SpectralField) -> Result<Frame, GeometryError> {
    let au = apply_stokes_power(u, 1.0);
    Frame::from_sequence([g, u, udot, &au], FrameKind::Old).map_err(|index| GeometryError::FrameDegenerate { index, fit: None })
}

/// `f_0 = g/G`, then `u`, `Au` and `A^2 u`. Degeneracy at the last step is
/// the chained relation `A^2 u = gamma g + beta u + alpha Au`; the error then
/// carries the least-squares `(gamma, beta, alpha)`.
pub fn new_frame(u: &SpectralField, g: &SpectralField) -> Result<Frame, GeometryError> {
    let au = apply_stokes_power(u, 1.0);
    let a2u = apply_stokes_power(u, 2.0);
    Frame::from_sequence([g, u, &au, &a2u], FrameKind::New).map_err(|index| {
        let fit = if index == 3 { fit_chained(u, g) } else { None };
        GeometryError::FrameDegenerate { index, fit }
    })
}

/// Least-squares `(gamma, beta, alpha)` for `A^2 u ~ gamma g + beta u + alpha Au`
/// from the Gram system of `(g, u, Au)`.
pub fn fit_chained(u: &SpectralField, g: &SpectralField) -> Option<[f64; 3]> {
    let au = apply_stokes_power(u, 1.0);
    let a2u = apply_stokes_power(u, 2.0);
    let basis = [g, u, &au];
    let m = core::array::from_fn(|i| core::array::from_fn(|j| inner(basis[i], basis[j])));
    let rhs = core::array::from_fn(|i| inner(&a2u, basis[i]));
    solve3(&m, &rhs, 1e-14)
}

/// Coordinates of `u, Au, g, du/dt, B(u,u)` in the old frame, written in
/// terms of the diagnostics of a ghost state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameCoordinates {
    pub u: [f64; 4],
    pub au: [f64; 4],
    pub g: [f64; 4],
    pub udot: [f64; 4],
    pub b: [f64; 4],
}

pub fn old_frame_closed_forms(d: &GhostDiagnostics) -> Result<FrameCoordinates, GeometryError> {
    let g = d.g_sq.sqrt();
    let (e, big_e, p) = (d.e, d.big_e, d.p);
    let eta1_sq = e - big_e * big_e / d.g_sq;
    if !(eta1_sq > FRAME_TOL * e) {
        return Err(GeometryError::DegenerateDiagnostics { which: "e - E^2/G^2" });
    }
    let eta1 = eta1_sq.sqrt();
    let au1 = (big_e - big_e * p / d.g_sq) / eta1;
    let au3_sq = p - p * p / d.g_sq - au1 * au1;
    if au3_sq < -FRAME_TOL * p {
        return Err(GeometryError::DegenerateDiagnostics {
            which: "P - P^2/G^2 - (Au,f_1)^2",
        });
    }
    let au3 = au3_sq.max(0.0).sqrt();
    let udot = d.udot_sq.sqrt();
    let uc = [big_e / g, eta1, 0.0, 0.0];
    let auc = [p / g, au1, 0.0, au3];
    let gc = [g, 0.0, 0.0, 0.0];
    let udc = [0.0, 0.0, udot, 0.0];
    let bc = core::array::from_fn(|i| gc[i] - auc[i] - udc[i]);
    Ok(FrameCoordinates {
        u: uc,
        au: auc,
        g: gc,
        udot: udc,
        b: bc,
    })
}

/// The map `W = sum_j f~_j (f_j, .)` carrying one frame onto another.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTransport {
    from: Frame,
    to: Frame,
}

pub fn frame_transport(from: &Frame, to: &Frame) -> FrameTransport {
    FrameTransport {
        from: from.clone(),
        to: to.clone(),
    }
}

impl FrameTransport {
    /// Overlap matrix `(f_i, f~_j)`: the identity for equal frames and a
    /// permutation when the target reorders the source vectors.
    pub fn matrix(&self) -> Mat4 {
        core::array::from_fn(|i| core::array::from_fn(|j| inner(&self.from.vectors[i], &self.to.vectors[j])))
    }

    pub fn apply(&self, h: &SpectralField) -> SpectralField {
        self.to.synthesize(&self.from.coordinates(h))
    }

    /// `| |W h| - |P h| |`: zero when `W` is an isometry on the source span.
    pub fn isometry_defect(&self, h: &SpectralField) -> f64 {
        (norm_as(&self.apply(h), 0.0) - norm_as(&self.from.project(h), 0.0)).abs()
    }

    /// `|W P h - W h|`.
    pub fn projector_defect(&self, h: &SpectralField) -> f64 {
        let wp = self.apply(&self.from.project(h));
        norm_as(&(&wp - &self.apply(h)), 0.0)
    }
}
