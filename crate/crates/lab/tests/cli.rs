mod common;

use std::fs;

use common::{code, column, ghostlab, read_table, stderr, stdout, write};
use ghostlab::commands::{identities, Context};
use ghostlab::config::RunConfig;
use ghostlab_core::constraints::transcribed_constraints;
use ghostlab_core::spectral::{bilinear, bilinear_filtered, SpectralField};

const STATIONARY: &str = "lambda = 2\nG = 1.0\nu0 = { kind = \"stationary\" }\ndt = 1e-3\nT = 5\nsample_every = 100\n";

#[test]
fn help_and_bad_usage() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&ghostlab(&["--help"], dir.path())), 0);
    assert_eq!(code(&ghostlab(&["bogus"], dir.path())), 2);
    assert_eq!(code(&ghostlab(&["simulate", "--seed", "x"], dir.path())), 2);
    let o = ghostlab(&["simulate"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--config"));
    let o = ghostlab(&["simulate", "--config", "missing.toml"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn stationary_simulation_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", STATIONARY);
    let o = ghostlab(&["simulate", "--config", "s.toml", "--out", "s"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("final t=5.0000000000000000e0 e="));
    let (h, rows) = read_table(&dir.path().join("s/trajectory.tsv"));
    assert_eq!(h, ["t", "e", "E", "P", "A32", "eta", "chained_residual"]);
    assert_eq!(rows.len(), 51);
    for name in ["e", "E", "P", "A32", "eta"] {
        let c = column(&h, &rows, name);
        assert!(c.iter().all(|x| (x - c[0]).abs() < 1e-14), "{name}");
    }
    assert!(column(&h, &rows, "chained_residual").iter().all(|x| x.is_nan()));
    assert!((column(&h, &rows, "eta")[0] - 0.5).abs() < 1e-15);
}

#[test]
fn missing_dt_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", "lambda = 2\nG = 1.0\nT = 1\n");
    let o = ghostlab(&["simulate", "--config", "s.toml"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`dt`"), "{}", stderr(&o));
    write(dir.path(), "t.toml", "lambda = 2\nG = 1.0\ndt = 0.01\nT = 1\ntypo = 3\n");
    let o = ghostlab(&["simulate", "--config", "t.toml"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("typo"));
    write(dir.path(), "u.toml", "lambda = 2\nG = 1.0\ndt = -0.01\nT = 1\n");
    assert_eq!(code(&ghostlab(&["simulate", "--config", "u.toml"], dir.path())), 2);
}

#[test]
fn default_shells_give_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", "lambda = 2\nG = 2.0\ndt = 1e-3\nT = 0.5\nsample_every = 10\nsystem = \"compressed\"\n");
    let o = ghostlab(&["simulate", "--config", "s.toml", "--seed", "3", "--out", "s"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = read_table(&dir.path().join("s/trajectory.tsv"));
    for name in ["t", "e", "E", "P", "eta"] {
        assert!(h.iter().any(|c| c == name));
    }
    assert_eq!(rows.len(), 51);
    // shells 1, 2, 5 and nothing else in the final state
    let (_, modes) = read_table(&dir.path().join("s/final_state.tsv"));
    for m in &modes {
        let k: (i64, i64) = (m[0].parse().unwrap(), m[1].parse().unwrap());
        assert!([1, 2, 5].contains(&(k.0 * k.0 + k.1 * k.1)));
    }
    assert_eq!(modes.len(), 8);
}

#[test]
fn exported_state_restarts_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let base = "lambda = 2\nG = 2.0\ndt = 1e-3\nsample_every = 250\n";
    write(dir.path(), "a.toml", &format!("{base}T = 1.0\n"));
    write(dir.path(), "b.toml", &format!("{base}T = 0.5\n"));
    write(dir.path(), "c.toml", &format!("{base}T = 0.5\nu0 = {{ kind = \"file\", path = \"b/final_state.tsv\" }}\n"));
    for (cfg, out) in [("a.toml", "a"), ("b.toml", "b"), ("c.toml", "c")] {
        let o = ghostlab(&["simulate", "--config", cfg, "--out", out, "--seed", "9"], dir.path());
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let (h, a) = read_table(&dir.path().join("a/trajectory.tsv"));
    let (_, c) = read_table(&dir.path().join("c/trajectory.tsv"));
    let (ea, ec) = (column(&h, &a, "E"), column(&h, &c, "E"));
    assert!((ea.last().unwrap() - ec.last().unwrap()).abs() < 1e-12 * ea.last().unwrap());
}

#[test]
fn divergence_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x.toml", "lambda = 2\nG = 1e8\ndt = 1.0\nT = 100\n");
    let o = ghostlab(&["simulate", "--config", "x.toml"], dir.path());
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = ghostlab(&["ghost-check", "--config", "x.toml"], dir.path());
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn ghost_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "u.toml", "lambda = 2\nG = 1.0\nu0 = { kind = \"stationary\" }\nT = 2\n");
    let o = ghostlab(&["ghost-check", "--config", "u.toml", "--out", "u"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "verdict: ConvergedToSteadyState");

    write(dir.path(), "m.toml", "lambda = 2\nG = 1.0\nu0 = { kind = \"chained\", eta = 0.4999, omega = 3.0 }\nT = 10\n");
    let o = ghostlab(&["ghost-check", "--config", "m.toml", "--out", "m"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "verdict: CandidateChainedGhost");
    let (h, rows) = read_table(&dir.path().join("m/ghost_check_series.tsv"));
    assert_eq!(h, ["t", "eta", "chained_residual"]);
    assert_eq!(rows.len(), 1001);
    let (_, report) = read_table(&dir.path().join("m/ghost_check_report.tsv"));
    assert_eq!(report[0], ["verdict", "CandidateChainedGhost"]);

    // far from 1/lambda the same construction leaks out of the shells
    write(dir.path(), "n.toml", "lambda = 2\nG = 1.0\nu0 = { kind = \"chained\", eta = 0.2, omega = 3.0 }\nT = 10\n");
    let o = ghostlab(&["ghost-check", "--config", "n.toml"], dir.path());
    assert_eq!(stdout(&o).trim(), "verdict: NotGhost");
}

#[test]
fn ensemble_is_ordered_and_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e.toml", "lambda = 2\nG = 5.0\nensemble = 6\nT = 2\n");
    let one = ghostlab(&["ghost-check", "--config", "e.toml", "--out", "one", "--seed", "10"], dir.path());
    let three = ghostlab(&["ghost-check", "--config", "e.toml", "--out", "three", "--seed", "10", "--jobs", "3"], dir.path());
    assert_eq!((code(&one), code(&three)), (0, 0));
    let a = fs::read(dir.path().join("one/ghost_check_ensemble.tsv")).unwrap();
    let b = fs::read(dir.path().join("three/ghost_check_ensemble.tsv")).unwrap();
    assert_eq!(a, b);
    let (_, rows) = read_table(&dir.path().join("one/ghost_check_ensemble.tsv"));
    let seeds: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(seeds, ["10", "11", "12", "13", "14", "15"]);
    assert_eq!(stdout(&one), stdout(&three));

    write(dir.path(), "f.toml", "lambda = 2\nG = 5.0\nensemble = 6\nu0 = { kind = \"stationary\" }\n");
    assert_eq!(code(&ghostlab(&["ghost-check", "--config", "f.toml"], dir.path())), 2);
}

#[test]
fn curves_reject_degenerate_mu_and_hit_the_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.toml", "G = 1.0\nmu_plus = [5, 2]\n");
    let o = ghostlab(&["curves", "--config", "b.toml"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("mu_plus"));
    write(dir.path(), "m.toml", "G = 1.0\n");
    assert!(stderr(&ghostlab(&["curves", "--config", "m.toml"], dir.path())).contains("`mu_plus`"));

    write(dir.path(), "c.toml", "G = 2.0\nmu_plus = [5]\ne_grid = { values = [0.0, 0.5, 1.0, 1.5] }\nc_bg = 0.5\n");
    let o = ghostlab(&["curves", "--config", "c.toml", "--out", "c"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = read_table(&dir.path().join("c/curve_mu5.tsv"));
    assert_eq!(h, ["e", "E_curve", "E_sqrt_e", "E_eq_e", "E_2e", "E_boundary_parabola", "E_lower_bound"]);
    let e_curve = column(&h, &rows, "E_curve");
    // (G^2/4, G^2/2) = (1, 2); beyond it there is no admissible point
    assert!((e_curve[2] - 2.0).abs() < 1e-15);
    assert!(e_curve[3].is_nan());
    // G^2 / (2 + c G sqrt(ln(2e))) at e = 1.5
    let lb = column(&h, &rows, "E_lower_bound");
    assert!((lb[3] - 4.0 / (2.0 + 0.5 * 2.0 * 3.0f64.ln().sqrt())).abs() < 1e-15);
    assert!(lb[0].is_nan());
}

#[test]
fn nonexistence_transcript_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = ghostlab(&["verify-nonexistence", "--out", "a"], dir.path());
    let b = ghostlab(&["verify-nonexistence", "--out", "b"], dir.path());
    assert_eq!((code(&a), code(&b)), (0, 0));
    for f in ["nonexistence_transcript.tsv", "constraints.tsv"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap());
    }
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("NONEXISTENT"));
}

#[test]
fn exported_constraints_verify_and_corruption_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = ghostlab(&["verify-nonexistence", "--out", "a"], dir.path());
    assert_eq!(code(&o), 0);
    // the exported list is a valid reference
    write(dir.path(), "ok.toml", "reference_constraints = \"a/constraints.tsv\"\n");
    assert_eq!(code(&ghostlab(&["verify-nonexistence", "--config", "ok.toml", "--out", "b"], dir.path())), 0);

    let text = fs::read_to_string(dir.path().join("a/constraints.tsv")).unwrap();
    let corrupted = text.replacen("+1*(0,1)*(1,2)", "+1*(1,0)*(1,2)", 1);
    assert_ne!(corrupted, text);
    write(dir.path(), "bad.tsv", &corrupted);
    write(dir.path(), "bad.toml", "reference_constraints = \"bad.tsv\"\n");
    let o = ghostlab(&["verify-nonexistence", "--config", "bad.toml", "--out", "c"], dir.path());
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("GenerationMismatch"), "{}", stderr(&o));

    let dropped: String = text.lines().take(28).map(|l| format!("{l}\n")).collect();
    write(dir.path(), "short.tsv", &dropped);
    write(dir.path(), "short.toml", "reference_constraints = \"short.tsv\"\n");
    let o = ghostlab(&["verify-nonexistence", "--config", "short.toml"], dir.path());
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("GenerationMismatch"));

    write(dir.path(), "junk.tsv", "id\tk1\n");
    write(dir.path(), "junk.toml", "reference_constraints = \"junk.tsv\"\n");
    assert_eq!(code(&ghostlab(&["verify-nonexistence", "--config", "junk.toml"], dir.path())), 2);
    assert_eq!(transcribed_constraints().len(), 28);
}

#[test]
fn identities_command_and_a_broken_double() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "i.toml", "samples = 50\n");
    let o = ghostlab(&["identities", "--config", "i.toml", "--seed", "42", "--out", "i"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = read_table(&dir.path().join("i/identities.tsv"));
    assert_eq!(h, ["identity", "samples", "max_residual", "tolerance", "status"]);
    assert!(rows.iter().all(|r| r[4] == "pass"));
    let (_, per_sample) = read_table(&dir.path().join("i/enstrophy_invariance.tsv"));
    assert_eq!(per_sample.len(), 50);

    // sign flipped on the outputs with odd k1
    let broken = |u: &SpectralField, v: &SpectralField, r: i64| {
        bilinear(u, v, r).lin_comb(1.0, &bilinear_filtered(u, v, r, |k| k.k1 % 2 != 0), -2.0)
    };
    let mut ctx = Context::new(RunConfig::parse("samples = 20").unwrap(), dir.path().join("broken"));
    ctx.seed = Some(42);
    let mut log = Vec::new();
    let err = identities::run_with(&ctx, &mut log, &broken).unwrap_err();
    assert_eq!(err.exit_code(), 4);
    let msg = err.to_string();
    assert!(msg.contains("b_uvv_vanishes") && msg.contains("grid_oracle"), "{msg}");
    assert!(String::from_utf8(log).unwrap().contains("FAIL"));
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", "lambda = 2\nG = 3.0\ndt = 1e-3\nT = 1\nsample_every = 50\n");
    for out in ["a", "b"] {
        assert_eq!(code(&ghostlab(&["simulate", "--config", "s.toml", "--seed", "4", "--out", out], dir.path())), 0);
    }
    for f in ["trajectory.tsv", "final_state.tsv"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap());
    }
}
