//! Randomised checks of the algebraic identities of the bilinear term and of
//! the ghost geometry. Each identity reports the largest normalised residual
//! over its samples.

use ghostlab_core::geometry::{
    chained_coefficients, chained_residual, decompose_chained, diagnostics, gram_matrix, new_frame, nonlinear_tensor,
    old_frame, old_frame_closed_forms, project_b_onto_h012, stokes_matrix, GhostDiagnostics,
};
use ghostlab_core::linalg::Mat4;
use ghostlab_core::sampling::{orthogonalise, random_field, random_on_shells, synthetic_ghost_state};
use ghostlab_core::spectral::{apply_stokes_power, inner, make_eigenforce, norm_as, EigenforceSpec, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::GridOracle;

/// The bilinear map under test, `(u, v, out_radius_sq) -> B(u, v)`.
pub type BilinearFn<'a> = &'a (dyn Fn(&SpectralField, &SpectralField, i64) -> SpectralField + Sync);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteParams {
    pub samples: usize,
    pub seed: u64,
    /// Radius of the random fields for the bilinear identities.
    pub radius_sq: i64,
    /// How many of the samples are also compared with the grid oracle.
    pub oracle_samples: usize,
    pub oracle_grid: usize,
}

impl SuiteParams {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            radius_sq: 25,
            oracle_samples: samples,
            oracle_grid: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl IdentityResult {
    /// `NaN` fails.
    pub fn passed(&self) -> bool {
        self.max_residual < self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub results: Vec<IdentityResult>,
    /// `(B(Av, v), u) - (B(u, v), Av)`, normalised, for every sample.
    pub enstrophy_per_sample: Vec<f64>,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<&IdentityResult> {
        self.results.iter().filter(|r| !r.passed()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

struct Acc {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    worst: f64,
}

impl Acc {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            samples: 0,
            worst: 0.0,
        }
    }

    fn add(&mut self, r: f64) {
        self.samples += 1;
        // NaN must stick
        if r.is_nan() || self.worst.is_nan() {
            self.worst = f64::NAN;
        } else {
            self.worst = self.worst.max(r.abs());
        }
    }

    fn finish(self) -> IdentityResult {
        IdentityResult {
            name: self.name,
            samples: self.samples,
            max_residual: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn rel(x: f64, scale: f64) -> f64 {
    x.abs() / scale.max(f64::MIN_POSITIVE)
}

fn norm(u: &SpectralField) -> f64 {
    norm_as(u, 0.0)
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    core::array::from_fn(|i| dot4(&m[i], v))
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting.
fn det_elimination<const N: usize>(mut m: [[f64; N]; N]) -> f64 {
    let mut det = 1.0;
    for c in 0..N {
        let p = (c..N).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..N {
            let f = m[r][c] / m[c][c];
            for k in c..N {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// Smallest Cholesky pivot relative to the largest diagonal entry; positive iff SPD.
fn cholesky_margin(m: &Mat4) -> f64 {
    let mut l = [[0.0f64; 4]; 4];
    let scale = (0..4).fold(0.0f64, |s, i| s.max(m[i][i].abs())).max(f64::MIN_POSITIVE);
    let mut margin = f64::INFINITY;
    for i in 0..4 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                margin = margin.min(d / scale);
                if d <= 0.0 {
                    return margin;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    margin
}

struct ChainedSample {
    g: SpectralField,
    u: SpectralField,
    udot: SpectralField,
    d: GhostDiagnostics,
}

/// `eta g + u_1 + u_5` with the ghost relations for `lambda = 2`, and a velocity
/// orthogonal to `g`, `u` and `Au`.
fn chained_sample(rng: &mut ChaCha8Rng) -> ChainedSample {
    let eta = rng.gen_range(0.02..0.48);
    let magnitude = rng.gen_range(0.3..5.0);
    let g = make_eigenforce(&EigenforceSpec::uniform(2, magnitude).expect("2 is an eigenvalue")).expect("valid force");
    let u = synthetic_ghost_state(rng, &g, 2, eta, &[1, 5]).expect("eta in range");
    let au = apply_stokes_power(&u, 1.0);
    let raw = random_on_shells(rng, &[1, 2, 5], magnitude);
    let udot = orthogonalise(&raw, &[&g, &u, &au]);
    let d = diagnostics(&u, &udot, &g, 2);
    ChainedSample { g, u, udot, d }
}

pub fn run_suite(params: &SuiteParams, b: BilinearFn<'_>) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let r = params.radius_sq;
    let out = 4 * r;
    let oracle = GridOracle::new(params.oracle_grid);

    let mut skew = Acc::new("b_uvv_vanishes", 1e-11);
    let mut anti = Acc::new("b_antisymmetry", 1e-11);
    let mut au_orth = Acc::new("b_uu_orthogonal_to_au", 1e-11);
    let mut enstrophy = Acc::new("enstrophy_invariance", 1e-11);
    let mut grid = Acc::new("grid_oracle", 1e-10);
    let mut per_sample = Vec::with_capacity(params.samples);

    let mut relations = Acc::new("ghost_relations", 1e-10);
    let mut inequalities = Acc::new("ghost_inequalities_ratio", 1.0);
    let mut chained = Acc::new("chained_coefficients", 1e-10);
    let mut decomposition = Acc::new("chained_decomposition", 1e-10);
    let mut gram = Acc::new("gram_determinant", 1e-12);
    let mut projection = Acc::new("b_projection_is_g_minus_au", 1e-9);
    let mut frames = Acc::new("frame_orthonormality", 1e-10);
    let mut closed = Acc::new("frame_closed_forms", 1e-9);
    let mut stokes = Acc::new("stokes_matrix_reproduces_au", 1e-9);
    let mut spd = Acc::new("stokes_matrix_not_spd", 0.5);
    let mut tensor = Acc::new("tensor_identities", 1e-12);

    for i in 0..params.samples {
        let u = random_field(&mut rng, r, 0.7, 1.0);
        let v = random_field(&mut rng, r, 0.7, 1.0);
        let w = random_field(&mut rng, r, 0.7, 1.0);
        let (nu, nv1, nw1) = (norm(&u), norm_as(&v, 0.5), norm_as(&w, 0.5));
        let buv = b(&u, &v, out);
        let buw = b(&u, &w, out);
        skew.add(rel(inner(&buv, &v), nu * nv1 * nv1));
        anti.add(rel(inner(&buv, &w) + inner(&buw, &v), nu * nv1 * nw1));
        let au = apply_stokes_power(&u, 1.0);
        let buu = b(&u, &u, out);
        au_orth.add(rel(inner(&buu, &au), nu * norm_as(&u, 0.5) * norm(&au)));
        let av = apply_stokes_power(&v, 1.0);
        let x = rel(inner(&b(&av, &v, out), &u) - inner(&buv, &av), nu * nv1 * norm(&av));
        enstrophy.add(x);
        per_sample.push(x);
        if i < params.oracle_samples {
            let scale = norm(&buv);
            let worst = oracle.bilinear(&u, &v, out).iter().fold(0.0f64, |m, (k, c)| {
                let d = buv.get(*k);
                m.max(((d[0] - c[0]).norm_sqr() + (d[1] - c[1]).norm_sqr()).sqrt())
            });
            grid.add(rel(worst, scale));
        }

        let s = chained_sample(&mut rng);
        let d = &s.d;
        relations.add(rel(d.big_e - d.gu, d.big_e).max(rel(d.p - 2.0 * d.big_e, d.p)));
        let lam = 2.0;
        inequalities.add(
            [d.p / d.g_sq, d.big_e / (lam * d.e), d.big_e * d.big_e / (d.e * d.g_sq), d.big_e * d.big_e / (d.e * d.p)]
                .into_iter()
                .fold(0.0f64, f64::max),
        );
        let scale = d.a32_sq.sqrt().max(d.g_sq.sqrt());
        match chained_coefficients(d) {
            Ok(cc) => {
                let roots = rel(cc.mu_plus + cc.mu_minus - cc.alpha, cc.alpha.abs().max(1.0))
                    .max(rel(cc.mu_plus * cc.mu_minus + cc.beta, cc.beta.abs().max(1.0)));
                let disc = if cc.discriminant() > 0.0 { 0.0 } else { f64::INFINITY };
                chained.add(
                    (cc.alpha + cc.beta - 1.0)
                        .abs()
                        .max(roots)
                        .max(disc)
                        .max(rel(chained_residual(&s.u, &s.g, &cc.raw()), scale)),
                );
                match decompose_chained(&s.u, &s.g, 2, &cc) {
                    Ok(dec) => decomposition.add(
                        rel(dec.residual, scale)
                            .max(rel(dec.u_plus_sq - dec.u_plus_sq_predicted, dec.u_plus_sq.max(dec.u_plus_sq_predicted)))
                            .max(rel(dec.u_minus_sq - dec.u_minus_sq_predicted, dec.u_minus_sq.max(dec.u_minus_sq_predicted)))
                            .max(rel(dec.balance, d.p.max(1.0))),
                    ),
                    Err(_) => decomposition.add(f64::INFINITY),
                }
            }
            Err(_) => {
                chained.add(f64::INFINITY);
                decomposition.add(f64::INFINITY);
            }
        }
        let (m, det) = gram_matrix(d);
        gram.add(rel(det - det_elimination(m), det.abs()));
        let au = apply_stokes_power(&s.u, 1.0);
        match project_b_onto_h012(d) {
            Ok(w) => projection.add((w[0] - 1.0).abs().max(w[1].abs()).max((w[2] + 1.0).abs())),
            Err(_) => projection.add(f64::INFINITY),
        }
        match old_frame(&s.u, &s.udot, &s.g) {
            Ok(f) => {
                frames.add(f.orthonormality_defect());
                match old_frame_closed_forms(d) {
                    Ok(cf) => {
                        let bcoord = s.g.lin_comb(1.0, &au, -1.0).lin_comb(1.0, &s.udot, -1.0);
                        let sc = [d.g_sq, d.p, d.udot_sq].iter().fold(0.0f64, |m, x| m.max(x.sqrt()));
                        let mut worst = 0.0f64;
                        for (field, want) in [(&s.u, cf.u), (&au, cf.au), (&s.g, cf.g), (&s.udot, cf.udot), (&bcoord, cf.b)] {
                            let got = f.coordinates(field);
                            for k in 0..4 {
                                worst = worst.max(rel(got[k] - want[k], sc));
                            }
                        }
                        closed.add(worst);

                        match stokes_matrix(d, 2.0) {
                            Ok(a) => {
                                let from_u = mat_vec(&a, &f.coordinates(&s.u));
                                let direct = f.coordinates(&au);
                                let mut worst = (0..4).fold(0.0f64, |m, k| m.max(rel(from_u[k] - direct[k], d.p.sqrt())));
                                for p in 0..4 {
                                    for q in 0..4 {
                                        worst = worst.max(rel(a[p][q] - a[q][p], d.p.sqrt()));
                                    }
                                }
                                stokes.add(worst);
                                spd.add(if cholesky_margin(&a) > 0.0 { 0.0 } else { 1.0 });
                                tensor.add(tensor_residual(&mut rng, &a, &cf.u, &cf.b));
                            }
                            Err(_) => {
                                stokes.add(f64::INFINITY);
                                spd.add(1.0);
                            }
                        }
                    }
                    Err(_) => closed.add(f64::INFINITY),
                }
            }
            Err(_) => frames.add(f64::INFINITY),
        }
        let generic = random_on_shells(&mut rng, &[1, 2, 5, 10], 1.0);
        match new_frame(&generic, &s.g) {
            Ok(f) => frames.add(f.orthonormality_defect()),
            Err(_) => frames.add(f64::INFINITY),
        }
    }

    let results = [
        skew,
        anti,
        au_orth,
        enstrophy,
        grid,
        relations,
        inequalities,
        chained,
        decomposition,
        gram,
        projection,
        frames,
        closed,
        stokes,
        spd,
        tensor,
    ]
    .into_iter()
    .map(Acc::finish)
    .collect();
    SuiteReport {
        results,
        enstrophy_per_sample: per_sample,
    }
}

/// Reproduction, skew-symmetry and the `A` condition of the tensor, both for
/// frame coordinates of a chained state and for random 4-vectors.
fn tensor_residual(rng: &mut ChaCha8Rng, a: &Mat4, u_frame: &[f64; 4], b_frame: &[f64; 4]) -> f64 {
    let eta0 = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let eta1 = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let rest: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-5.0..5.0));
    // (B(u,u), u) = 0 fixes the first coordinate
    let random = ([eta0, eta1, 0.0, 0.0], [-rest[0] * eta1 / eta0, rest[0], rest[1], rest[2]]);
    let v: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    let w: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    let a_norm = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())) * 4.0;
    let mut worst = 0.0f64;
    for (u, betas) in [(*u_frame, *b_frame), random] {
        let t = match nonlinear_tensor(u[0], u[1], betas) {
            Ok(t) => t,
            Err(_) => return f64::INFINITY,
        };
        let big = t.entries.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs())) * 4.0;
        let rep = t.apply(&u, &u);
        for h in 0..4 {
            worst = worst.max(rel(rep[h] - betas[h], big * vec_norm(&u).powi(2)));
        }
        let skew = dot4(&t.apply(&u, &v), &w) + dot4(&t.apply(&u, &w), &v);
        worst = worst.max(rel(skew, big * vec_norm(&u) * vec_norm(&v) * vec_norm(&w)));
        let av = mat_vec(a, &v);
        let third = dot4(&t.apply(&av, &v), &w) - dot4(&t.apply(&w, &v), &av);
        worst = worst.max(rel(third, big * a_norm * vec_norm(&v).powi(2) * vec_norm(&w)));
    }
    worst
}
