#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{leading_minors4, solve3, Mat3, Mat4};

use super::{GeometryError, GhostDiagnostics};

/// The symmetric matrix `[[lambda,0,0,0],[0,a,0,c],[0,0,1,0],[0,c,0,b]]`
/// reproducing the old-frame coordinates of `Au` from those of `u`, with `b = s c^2 / a`.
pub fn stokes_matrix(d: &GhostDiagnostics, s: f64) -> Result<Mat4, GeometryError> {
    let eta1_sq = d.e - d.big_e * d.big_e / d.g_sq;
    if !(eta1_sq > 1e-10 * d.e) {
        return Err(GeometryError::DegenerateDiagnostics { which: "e - E^2/G^2" });
    }
    let a = (d.big_e - d.big_e * d.p / d.g_sq) / eta1_sq;
    let num = d.big_e - d.big_e * d.p / d.g_sq;
    let c_sq = (d.p - d.p * d.p / d.g_sq - num * num / eta1_sq) / eta1_sq;
    let c = c_sq.max(0.0).sqrt();
    let b = s * c * c / a;
    let m = [
        [d.lam(), 0.0, 0.0, 0.0],
        [0.0, a, 0.0, c],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, c, 0.0, b],
    ];
    let minors = leading_minors4(&m);
    // ab - c^2 = (s - 1) c^2 is the deciding quantity; test it directly as well.
    if !(s > 1.0) || minors.iter().any(|&x| !(x > 0.0)) || !(a * b - c * c > 0.0) {
        return Err(GeometryError::NotPositiveDefinite { minors });
    }
    Ok(m)
}

/// Tensor `B^h_{jk}`, indexed `[h][j][k]`, acting as `B(u, v)_h = sum_{j,k} B^h_{jk} u_j v_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlinearTensor {
    pub entries: [[[f64; 4]; 4]; 4],
}

impl NonlinearTensor {
    pub fn apply(&self, u: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
        core::array::from_fn(|h| {
            let mut acc = 0.0;
            for j in 0..4 {
                for k in 0..4 {
                    acc += self.entries[h][j][k] * u[j] * v[k];
                }
            }
            acc
        })
    }
}

/// Sparse solution with `B(u~, u~) = beta` for `u~ = (eta0, eta1, 0, 0)`;
/// entries not fixed by the construction are zero.
///
/// The skew condition `(B(u~,v),w) + (B(u~,w),v) = 0` additionally needs
/// `beta_0 eta_0 + beta_1 eta_1 = 0`, which is `(B(u,u), u) = 0` in frame coordinates.
pub fn nonlinear_tensor(eta0: f64, eta1: f64, betas: [f64; 4]) -> Result<NonlinearTensor, GeometryError> {
    let scale = eta0.hypot(eta1);
    if !(eta0.abs() > 1e-12 * scale) || !(eta1.abs() > 1e-12 * scale) {
        return Err(GeometryError::DegenerateCoordinates);
    }
    let mut t = [[[0.0; 4]; 4]; 4];
    t[0][0][1] = betas[0] / (eta0 * eta1);
    t[1][1][0] = betas[1] / (eta0 * eta1);
    t[2][0][0] = betas[2] / (eta0 * eta0);
    t[3][0][0] = betas[3] / (eta0 * eta0);
    t[0][2][0] = t[2][0][0];
    t[0][0][2] = -t[2][0][0];
    t[0][3][0] = t[3][0][0];
    t[0][0][3] = -t[3][0][0];
    Ok(NonlinearTensor { entries: t })
}

/// Gram matrix of `(g, u, Au)` under the ghost relations, and its determinant
/// `(lambda e - E) E (G^2 - P)`.
pub fn gram_matrix(d: &GhostDiagnostics) -> (Mat3, f64) {
    let (g2, e, big_e, p) = (d.g_sq, d.e, d.big_e, d.p);
    let m = [[g2, big_e, p], [big_e, e, big_e], [p, big_e, p]];
    let det = (d.lam() * e - big_e) * big_e * (g2 - p);
    (m, det)
}

/// Coefficients `(w1, w2, w3)` of the projection of `B(u,u)` onto
/// `span{g, u, Au}`, from `M w = (G^2 - P, 0, 0)`.
pub fn project_b_onto_h012(d: &GhostDiagnostics) -> Result<[f64; 3], GeometryError> {
    let (m, det) = gram_matrix(d);
    let scale = d.g_sq * d.g_sq * d.g_sq;
    if !(det > 1e-14 * scale) {
        return Err(GeometryError::SingularGram { det });
    }
    solve3(&m, &[d.g_sq - d.p, 0.0, 0.0], 1e-14).ok_or(GeometryError::SingularGram { det })
}
