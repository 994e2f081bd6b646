//! One test per acceptance criterion; each prints a PASS/FAIL line to stderr
//! (uncaptured) before asserting.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::{code, column, ghostlab, read_table, stderr, write};
use ghostlab_core::constraints::nonexistence_report;
use ghostlab_core::dynamics::{balance_residuals, integrate, RhsKind};
use ghostlab_core::geometry::{
    chained_coefficients, decompose_chained, diagnostics, gram_matrix, new_frame, nonlinear_tensor, old_frame,
    old_frame_closed_forms, project_b_onto_h012, stokes_matrix, GhostDiagnostics,
};
use ghostlab_core::sampling::{orthogonalise, random_on_shells, synthetic_ghost_state};
use ghostlab_core::spectral::{apply_stokes_power, inner, make_eigenforce, EigenforceSpec, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, title: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n} ({title}): {status} {detail}");
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
}

fn force(lambda: i64, magnitude: f64) -> SpectralField {
    make_eigenforce(&EigenforceSpec::uniform(lambda, magnitude).unwrap()).unwrap()
}

fn rel(x: f64, scale: f64) -> f64 {
    x.abs() / scale.abs().max(f64::MIN_POSITIVE)
}

struct Chained {
    g: SpectralField,
    u: SpectralField,
    udot: SpectralField,
    d: GhostDiagnostics,
}

/// `eta g + u_1 + u_5` with the ghost relations, velocity orthogonal to `g, u, Au`.
fn chained(r: &mut ChaCha8Rng) -> Chained {
    let eta = r.gen_range(0.02..0.48);
    let mag = r.gen_range(0.3..5.0);
    let g = force(2, mag);
    let u = synthetic_ghost_state(r, &g, 2, eta, &[1, 5]).unwrap();
    let au = apply_stokes_power(&u, 1.0);
    let udot = orthogonalise(&random_on_shells(r, &[1, 2, 5], mag), &[&g, &u, &au]);
    let d = diagnostics(&u, &udot, &g, 2);
    Chained { g, u, udot, d }
}

/// Cofactor expansion along the first row.
fn det3_cofactor(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[[f64; 4]; 4], v: &[f64; 4]) -> [f64; 4] {
    core::array::from_fn(|i| dot4(&m[i], v))
}

/// Leading principal minors by cofactor expansion, all positive iff SPD.
fn leading_minors(m: &[[f64; 4]; 4]) -> [f64; 4] {
    let sub3 = |rows: [usize; 3], cols: [usize; 3]| -> f64 {
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = m[rows[i]][cols[j]];
            }
        }
        det3_cofactor(a)
    };
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = sub3([0, 1, 2], [0, 1, 2]);
    let mut d4 = 0.0;
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let sign = if (3 + j) % 2 == 0 { 1.0 } else { -1.0 };
        d4 += sign * m[3][j] * sub3([0, 1, 2], [cols[0], cols[1], cols[2]]);
    }
    [d1, d2, d3, d4]
}

#[test]
fn criterion_1_nonexistence() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let o = ghostlab(&["verify-nonexistence", "--out", "v"], dir.path());
    let elapsed = start.elapsed();
    let (_, lines) = read_table(&dir.path().join("v/nonexistence_transcript.tsv"));
    let lines: Vec<String> = lines.into_iter().map(|mut r| r.remove(0)).collect();
    let constraint_lines = lines.iter().filter(|l| l.starts_with("constraint ") && l.contains("[|k|^2=")).count();
    let case_sections = lines.iter().filter(|l| l.starts_with("case ") && l.ends_with("nonzero:")).count();
    let r = nonexistence_report().unwrap();
    let annihilated = [18, 20].iter().all(|s| r.generated.annihilated_shells.contains(s));
    let cases_ok = r.cases.len() == 8 && r.cases.iter().all(|c| c.state.zeroes_s1_s2());
    let ok = code(&o) == 0
        && constraint_lines == 28
        && r.matched.len() == 28
        && case_sections == 8
        && cases_ok
        && annihilated
        && r.mu_plus.coupled_candidates() == vec![5]
        && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "nonexistence mechanization",
        ok,
        &format!(
            "exit {}, {constraint_lines} constraints matched, {case_sections} cases zero S1+S2: {cases_ok}, shells 18/20 cancel: {annihilated}, mu_+ candidates {:?}, {:.3} s",
            code(&o),
            r.mu_plus.coupled_candidates(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_bilinear_identities() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let o = ghostlab(&["identities", "--seed", "42", "--out", "i"], dir.path());
    let elapsed = start.elapsed();
    let (h, rows) = read_table(&dir.path().join("i/identities.tsv"));
    let get = |name: &str| -> (usize, f64) {
        let r = rows.iter().find(|r| r[0] == name).unwrap_or_else(|| panic!("{name} missing"));
        (r[1].parse().unwrap(), r[h.iter().position(|c| c == "max_residual").unwrap()].parse().unwrap())
    };
    let mut detail = Vec::new();
    let mut ok = code(&o) == 0 && elapsed < Duration::from_secs(30);
    for name in ["b_uvv_vanishes", "b_antisymmetry", "b_uu_orthogonal_to_au", "enstrophy_invariance"] {
        let (n, worst) = get(name);
        ok &= n >= 1000 && worst < 1e-11;
        detail.push(format!("{name} {worst:.1e}"));
    }
    let (n, worst) = get("grid_oracle");
    ok &= n >= 100 && worst < 1e-10;
    detail.push(format!("grid oracle {worst:.1e} on {n} samples"));
    let (_, per_sample) = read_table(&dir.path().join("i/enstrophy_invariance.tsv"));
    ok &= per_sample.len() >= 1000;
    verdict(2, "bilinear identity suite", ok, &format!("exit {}, {}, {:.1} s {}", code(&o), detail.join(", "), elapsed.as_secs_f64(), stderr(&o)));
}

#[test]
fn criterion_3_stationary_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", "lambda = 2\nG = 1.0\nu0 = { kind = \"stationary\" }\ndt = 1e-3\nT = 100\nsample_every = 100\n");
    let o = ghostlab(&["simulate", "--config", "s.toml", "--out", "s"], dir.path());
    let (h, rows) = read_table(&dir.path().join("s/trajectory.tsv"));
    let mut drift = 0.0f64;
    for name in ["e", "E", "P"] {
        let c = column(&h, &rows, name);
        drift = c.iter().fold(drift, |m, x| m.max((x - c[0]).abs()));
    }
    let t = column(&h, &rows, "t");
    let e = column(&h, &rows, "e");
    let reached = (t.last().unwrap() - 100.0).abs() < 1e-9 && (e[0] - 0.25).abs() < 1e-15;

    // energy and enstrophy balances along random trajectories of the full system
    let g = force(2, 1.0);
    let mut worst = 0.0f64;
    for seed in 0..5 {
        let u0 = random_on_shells(&mut ChaCha8Rng::seed_from_u64(seed), &[1, 2, 5], 1.0);
        let traj = integrate(&u0, RhsKind::Full(&g), 1.0, 1e-3, 1).unwrap();
        for (_, re, rb) in balance_residuals(&traj, &g, 2).unwrap() {
            worst = worst.max(re.abs()).max(rb.abs());
        }
    }
    let ok = code(&o) == 0 && reached && drift < 1e-10 && worst < 1e-6;
    verdict(3, "stationary reproduction", ok, &format!("drift in (e, E, P) over T=100: {drift:.1e}; worst balance residual at dt=1e-3: {worst:.1e}"));
}

#[test]
fn criterion_4_figure_curves() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.toml", "G = 1.0\nmu_plus = [4, 5, 25, 81]\ne_grid = { n = 201 }\n");
    let o = ghostlab(&["curves", "--config", "c.toml", "--out", "c"], dir.path());
    // caption equations a E^2 - b E + c e = 0
    let captions = [(4, 2.0, 3.0, 4.0), (5, 3.0, 4.0, 5.0), (25, 23.0, 24.0, 25.0), (81, 79.0, 80.0, 81.0)];
    let mut worst = 0.0f64;
    let mut ok = code(&o) == 0;
    for (mu, a, b, c) in captions {
        let (h, rows) = read_table(&dir.path().join(format!("c/curve_mu{mu}.tsv")));
        let e = column(&h, &rows, "e");
        let big = column(&h, &rows, "E_curve");
        for (&e, &x) in e.iter().zip(&big) {
            let terms = [a * x * x, b * x, c * e];
            let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            if scale > 0.0 {
                worst = worst.max(rel(terms[0] - terms[1] + terms[2], scale));
            }
            if e > 0.0 && e < 0.25 {
                let inside = x * x - x + e < 0.0 && x < e.sqrt() && x < 2.0 * e && x > (1.0 - (1.0 - 4.0 * e).sqrt()) / 2.0;
                ok &= inside;
            }
        }
        ok &= e[0] == 0.0 && big[0] == 0.0;
        ok &= *e.last().unwrap() == 0.25 && (big.last().unwrap() - 0.5).abs() < 1e-15;
    }
    ok &= worst < 1e-12;
    verdict(4, "figure curves", ok, &format!("worst caption residual {worst:.1e}; endpoints (0,0) and (1/4,1/2) present; interior points admissible"));
}

#[test]
fn criterion_5_geometry_consistency() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let (mut coeff, mut dec_worst, mut det_worst, mut proj_worst) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut ok = true;
    for _ in 0..300 {
        let c = chained(&mut r);
        let d = &c.d;
        let cc = chained_coefficients(d).unwrap();
        let mut roots = [cc.mu_minus, cc.mu_plus];
        roots.sort_by(f64::total_cmp);
        coeff = coeff
            .max((cc.alpha + cc.beta - 1.0).abs())
            .max(rel(cc.mu_plus + cc.mu_minus - cc.alpha, cc.alpha))
            .max(rel(cc.mu_plus * cc.mu_minus + cc.beta, cc.beta))
            .max((roots[0] - 1.0).abs())
            .max((roots[1] - 5.0).abs() / 5.0);
        ok &= cc.discriminant() > 0.0;

        let dec = decompose_chained(&c.u, &c.g, 2, &cc).unwrap();
        let scale = d.a32_sq.sqrt().max(d.g_sq.sqrt());
        dec_worst = dec_worst
            .max(rel(dec.residual, scale))
            .max(rel(dec.u_plus_sq - dec.u_plus_sq_predicted, dec.u_plus_sq))
            .max(rel(dec.u_minus_sq - dec.u_minus_sq_predicted, dec.u_minus_sq))
            .max(rel(dec.balance, d.p.max(1.0)));

        let (m, det) = gram_matrix(d);
        let au = apply_stokes_power(&c.u, 1.0);
        let basis = [&c.g, &c.u, &au];
        let direct: [[f64; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| inner(basis[i], basis[j])));
        let formula = (2.0 * d.e - d.big_e) * d.big_e * (d.g_sq - d.p);
        det_worst = det_worst.max(rel(det - det3_cofactor(m), det)).max(rel(formula - det3_cofactor(direct), formula));
        for i in 0..3 {
            for j in 0..3 {
                det_worst = det_worst.max(rel(m[i][j] - direct[i][j], direct[i][j].abs().max(d.g_sq)));
            }
        }
        let w = project_b_onto_h012(d).unwrap();
        proj_worst = proj_worst.max((w[0] - 1.0).abs()).max(w[1].abs()).max((w[2] + 1.0).abs());
    }
    ok &= coeff < 1e-10 && dec_worst < 1e-10 && det_worst < 1e-12 && proj_worst < 1e-9;
    verdict(
        5,
        "geometry consistency",
        ok,
        &format!("coefficients {coeff:.1e}, decomposition and norms {dec_worst:.1e}, det(M) {det_worst:.1e}, P012 B(u,u) vs g - Au {proj_worst:.1e}"),
    );
}

#[test]
fn criterion_6_ghost_search() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e.toml", "lambda = 2\nG = 30.0\nensemble = 100\n");
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get()).to_string();
    let start = Instant::now();
    let o = ghostlab(&["ghost-check", "--config", "e.toml", "--out", "e", "--jobs", &jobs], dir.path());
    let elapsed = start.elapsed();
    let (h, rows) = read_table(&dir.path().join("e/ghost_check_ensemble.tsv"));
    let vi = h.iter().position(|c| c == "verdict").unwrap();
    let candidates = rows.iter().filter(|r| r[vi] == "CandidateChainedGhost").count();
    let seeds: Vec<u64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let ordered = seeds == (0..100).collect::<Vec<u64>>();
    let kinds: BTreeSet<&str> = rows.iter().map(|r| r[vi].as_str()).collect();
    let ok = code(&o) == 0 && rows.len() == 100 && ordered && candidates == 0 && elapsed < Duration::from_secs(120);
    verdict(
        6,
        "ghost search",
        ok,
        &format!("{} runs at lambda=2, G=30: {candidates} candidates, verdicts {kinds:?}, {:.1} s", rows.len(), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_7_frames() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let (mut ortho, mut closed, mut stokes, mut tensor) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut spd = true;
    for _ in 0..300 {
        let c = chained(&mut r);
        let d = &c.d;
        let f = old_frame(&c.u, &c.udot, &c.g).unwrap();
        let generic = random_on_shells(&mut r, &[1, 2, 5, 10], 1.0);
        let nf = new_frame(&generic, &c.g).unwrap();
        for frame in [&f, &nf] {
            let v = frame.vectors();
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((inner(&v[i], &v[j]) - want).abs());
                }
            }
        }
        let cf = old_frame_closed_forms(d).unwrap();
        let au = apply_stokes_power(&c.u, 1.0);
        let b = c.g.lin_comb(1.0, &au, -1.0).lin_comb(1.0, &c.udot, -1.0);
        let scale = [d.g_sq, d.p, d.udot_sq].iter().fold(0.0f64, |m, x| m.max(x.sqrt()));
        for (field, want) in [(&c.u, cf.u), (&au, cf.au), (&c.g, cf.g), (&c.udot, cf.udot), (&b, cf.b)] {
            let got: [f64; 4] = core::array::from_fn(|i| inner(field, &f.vectors()[i]));
            for i in 0..4 {
                closed = closed.max(rel(got[i] - want[i], scale));
            }
        }
        let a = stokes_matrix(d, 2.0).unwrap();
        let from_u = mat_vec(&a, &cf.u);
        for i in 0..4 {
            stokes = stokes.max(rel(from_u[i] - cf.au[i], d.p.sqrt()));
        }
        spd &= leading_minors(&a).iter().all(|&m| m > 0.0) && (0..4).all(|i| (0..4).all(|j| a[i][j] == a[j][i]));

        // random 4-vectors with (B(u,u), u) = 0
        let eta0 = r.gen_range(0.1..3.0);
        let eta1 = r.gen_range(0.1..3.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let rest: [f64; 3] = core::array::from_fn(|_| r.gen_range(-5.0..5.0));
        let betas = [-rest[0] * eta1 / eta0, rest[0], rest[1], rest[2]];
        let t = nonlinear_tensor(eta0, eta1, betas).unwrap();
        let u = [eta0, eta1, 0.0, 0.0];
        let v: [f64; 4] = core::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let w: [f64; 4] = core::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let n = |x: &[f64; 4]| dot4(x, x).sqrt();
        let big = t.entries.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs())) * 4.0;
        let rep = t.apply(&u, &u);
        for h in 0..4 {
            tensor = tensor.max(rel(rep[h] - betas[h], big * n(&u) * n(&u)));
        }
        let skew = dot4(&t.apply(&u, &v), &w) + dot4(&t.apply(&u, &w), &v);
        tensor = tensor.max(rel(skew, big * n(&u) * n(&v) * n(&w)));
        let av = mat_vec(&a, &v);
        let a_norm = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())) * 4.0;
        let third = dot4(&t.apply(&av, &v), &w) - dot4(&t.apply(&w, &v), &av);
        tensor = tensor.max(rel(third, big * a_norm * n(&v) * n(&v) * n(&w)));
    }
    let ok = ortho < 1e-10 && closed < 1e-9 && stokes < 1e-9 && spd && tensor < 1e-12;
    verdict(
        7,
        "frame suite",
        ok,
        &format!("orthonormality {ortho:.1e}, closed-form coordinates {closed:.1e}, A-tilde {stokes:.1e} SPD: {spd}, B-tilde {tensor:.1e}"),
    );
}
