//! Physical-space evaluation of `P[(u . grad) v]` on an `n x n` grid with FFTs,
//! an independent check of the convolution sum in the kernel.

use std::sync::Arc;

use ghostlab_core::spectral::{SpectralField, WaveVector};
use ghostlab_core::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct GridOracle {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl GridOracle {
    /// `n` must exceed the largest component of any output wavevector twice over
    /// so that products do not alias.
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn index(&self, c: i32) -> usize {
        c.rem_euclid(self.n as i32) as usize
    }

    fn fft2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        for row in data.chunks_exact_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[i * n + j];
            }
            plan.process(&mut col);
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
    }

    /// Grid values of component `c` of `u`, multiplied by `(i k_d)` when `d` is given.
    fn to_grid(&self, u: &SpectralField, c: usize, d: Option<usize>) -> Vec<Complex64> {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, coeff) in u.iter() {
            let factor = match d {
                None => Complex64::new(1.0, 0.0),
                Some(0) => Complex64::new(0.0, k.k1 as f64),
                Some(_) => Complex64::new(0.0, k.k2 as f64),
            };
            data[self.index(k.k1) * n + self.index(k.k2)] += coeff[c] * factor;
        }
        self.fft2(&mut data, &self.inverse);
        data
    }

    /// Coefficients of `P[(u . grad) v]` for every `k` with `|k|^2 <= out_radius_sq`.
    pub fn bilinear(&self, u: &SpectralField, v: &SpectralField, out_radius_sq: i64) -> Vec<(WaveVector, [Complex64; 2])> {
        let n = self.n;
        let u_grid = [self.to_grid(u, 0, None), self.to_grid(u, 1, None)];
        let mut out = Vec::new();
        let mut w = [vec![Complex64::new(0.0, 0.0); n * n], vec![Complex64::new(0.0, 0.0); n * n]];
        for (m, wm) in w.iter_mut().enumerate() {
            for d in 0..2 {
                let dv = self.to_grid(v, m, Some(d));
                for (x, (a, b)) in wm.iter_mut().zip(u_grid[d].iter().zip(&dv)) {
                    *x += a * b;
                }
            }
            self.fft2(wm, &self.forward);
        }
        let scale = 1.0 / (n * n) as f64;
        let r = (out_radius_sq as f64).sqrt() as i32 + 1;
        for k1 in -r..=r {
            for k2 in -r..=r {
                let k = WaveVector::new(k1, k2);
                if k.is_zero() || k.norm_sq() > out_radius_sq {
                    continue;
                }
                let idx = self.index(k1) * n + self.index(k2);
                let c = [w[0][idx] * scale, w[1][idx] * scale];
                let kk = k.norm_sq() as f64;
                let lon = (c[0] * k1 as f64 + c[1] * k2 as f64) / kk;
                out.push((k, [c[0] - lon * k1 as f64, c[1] - lon * k2 as f64]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghostlab_core::spectral::{bilinear, make_eigenforce, EigenforceSpec};

    #[test]
    fn single_shell_force_gives_zero() {
        let g = make_eigenforce(&EigenforceSpec::uniform(5, 1.0).unwrap()).unwrap();
        let o = GridOracle::new(16);
        let worst = o
            .bilinear(&g, &g, 20)
            .iter()
            .fold(0.0f64, |m, (_, c)| m.max(c[0].norm().max(c[1].norm())));
        assert!(worst < 1e-14);
    }

    #[test]
    fn two_force_shells_match_the_convolution() {
        let g1 = make_eigenforce(&EigenforceSpec::uniform(1, 1.0).unwrap()).unwrap();
        let g2 = make_eigenforce(&EigenforceSpec::uniform(2, 1.0).unwrap()).unwrap();
        let b = bilinear(&g1, &g2, 9);
        for (k, c) in GridOracle::new(16).bilinear(&g1, &g2, 9) {
            let d = b.get(k);
            assert!((d[0] - c[0]).norm() + (d[1] - c[1]).norm() < 1e-14, "{k}");
        }
    }
}
