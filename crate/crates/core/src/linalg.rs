//! Small dense matrices used by the frame and Gram-matrix code.

pub type Mat3 = [[f64; 3]; 3];
pub type Mat4 = [[f64; 4]; 4];

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is below `tol` times the largest entry.
pub fn solve3(m: &Mat3, b: &[f64; 3], tol: f64) -> Option<[f64; 3]> {
    let mut a = *m;
    let mut x = *b;
    let scale = a.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= tol * scale {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..3).rev() {
        let mut s = x[col];
        for c in col + 1..3 {
            s -= a[col][c] * x[c];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

pub fn mat3_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

pub fn mat4_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    core::array::from_fn(|i| (0..4).map(|j| m[i][j] * v[j]).sum())
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose4(m: &Mat4) -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| m[j][i]))
}

pub fn identity4() -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

/// Largest entrywise deviation from the identity.
pub fn identity_defect4(m: &Mat4) -> f64 {
    let id = identity4();
    (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (m[i][j] - id[i][j]).abs())
        .fold(0.0, f64::max)
}

/// Determinant by Laplace expansion along the first row.
pub fn det4(m: &Mat4) -> f64 {
    let mut acc = 0.0;
    for c in 0..4 {
        let minor: Mat3 = core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                let jj = if j < c { j } else { j + 1 };
                m[i + 1][jj]
            })
        });
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * m[0][c] * det3(&minor);
    }
    acc
}

/// Leading principal minors `[d1, d2, d3, d4]`.
pub fn leading_minors4(m: &Mat4) -> [f64; 4] {
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = det3(&[[m[0][0], m[0][1], m[0][2]], [m[1][0], m[1][1], m[1][2]], [m[2][0], m[2][1], m[2][2]]]);
    [d1, d2, d3, det4(m)]
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (0..4).map(|i| a[i] * b[i]).sum()
}
