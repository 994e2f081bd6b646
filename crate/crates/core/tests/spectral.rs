mod common;

use common::{dist, field, force, grid_bilinear, norm};
use ghostlab_core::spectral::{
    apply_stokes_power, bilinear, eigenspace_project, inner, norm_as, norm_as_sq, project_shells, shell, truncate,
    SpectralField,
};
use proptest::prelude::*;

fn rel(x: f64, scale: f64) -> f64 {
    x.abs() / scale.max(f64::MIN_POSITIVE)
}

#[test]
fn bilinear_matches_grid_products() {
    for seed in 0..12 {
        let u = field(seed, 25);
        let v = field(1000 + seed, 25);
        let b = bilinear(&u, &v, 100);
        let scale = norm(&b);
        let mut worst: f64 = 0.0;
        for (k, c) in grid_bilinear(&u, &v, 24, 100) {
            let d = b.get(k);
            worst = worst.max(((d[0] - c[0]).norm_sqr() + (d[1] - c[1]).norm_sqr()).sqrt());
        }
        assert!(worst < 1e-10 * scale, "seed {seed}: {worst} vs {scale}");
    }
}

#[test]
fn bilinear_output_radius_truncates() {
    let u = field(3, 10);
    let v = field(4, 10);
    let full = bilinear(&u, &v, 40);
    let cut = bilinear(&u, &v, 9);
    assert!(dist(&truncate(&full, 9), &cut) < 1e-15);
    assert!(cut.iter().all(|(k, _)| k.norm_sq() <= 9));
}

#[test]
fn single_shell_force_has_no_self_interaction() {
    for lambda in [1, 2, 5, 25] {
        let g = force(lambda, 3.0);
        let b = bilinear(&g, &g, 4 * lambda);
        assert!(norm(&b) < 1e-13, "lambda {lambda}: {}", norm(&b));
        assert!((norm(&g) - 3.0).abs() < 1e-14);
        assert!(dist(&apply_stokes_power(&g, 1.0), &(lambda as f64 * &g)) < 1e-13);
    }
}

#[test]
fn stokes_power_of_single_mode() {
    let u = SpectralField::new(
        [(ghostlab_core::WaveVector::new(1, 2), [ghostlab_core::Complex64::new(2.0, 0.0), ghostlab_core::Complex64::new(-1.0, 0.0)])],
        5,
    )
    .unwrap();
    // |u|^2 = 2 (|2|^2 + |-1|^2) = 10
    assert!((norm_as_sq(&u, 0.0) - 10.0).abs() < 1e-14);
    assert!((norm_as_sq(&u, 0.5) - 50.0).abs() < 1e-12);
    assert!((norm_as_sq(&u, 1.5) - 1250.0).abs() < 1e-9);
}

#[test]
fn shell_projections_partition_the_field() {
    let u = field(8, 25);
    let shells: Vec<i64> = u.support_shells().into_iter().collect();
    let mut sum = SpectralField::zero(25);
    for &m in &shells {
        let p = eigenspace_project(&u, m);
        assert_eq!(p.support_shells().into_iter().collect::<Vec<_>>(), vec![m]);
        sum = &sum + &p;
    }
    assert!(dist(&sum, &u) < 1e-15);
    assert_eq!(shell(13).len(), 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn advection_is_skew(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (u, v, w) = (field(s1, 25), field(s2, 25), field(s3, 25));
        let bvw = inner(&bilinear(&u, &v, 100), &w);
        let bwv = inner(&bilinear(&u, &w, 100), &v);
        let scale = norm(&u) * norm_as(&v, 0.5) * norm_as(&w, 0.5);
        prop_assert!(rel(bvw + bwv, scale) < 1e-11);
        let bvv = inner(&bilinear(&u, &v, 100), &v);
        prop_assert!(rel(bvv, scale) < 1e-11);
    }

    #[test]
    fn nonlinear_term_is_orthogonal_to_au(s in any::<u64>()) {
        let u = field(s, 25);
        let au = apply_stokes_power(&u, 1.0);
        let x = inner(&bilinear(&u, &u, 100), &au);
        prop_assert!(rel(x, norm(&u) * norm_as(&u, 0.5) * norm(&au)) < 1e-11);
    }

    #[test]
    fn enstrophy_invariance_strong_form(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u, v) = (field(s1, 25), field(s2, 25));
        let av = apply_stokes_power(&v, 1.0);
        let lhs = inner(&bilinear(&av, &v, 100), &u);
        let rhs = inner(&bilinear(&u, &v, 100), &av);
        let scale = norm(&u) * norm_as(&v, 0.5) * norm(&av);
        prop_assert!(rel(lhs - rhs, scale) < 1e-11, "{lhs} {rhs}");
    }

    #[test]
    fn poincare_and_cauchy_schwarz(s in any::<u64>()) {
        let u = field(s, 25);
        let (e, big_e, p) = (norm_as_sq(&u, 0.0), norm_as_sq(&u, 0.5), norm_as_sq(&u, 1.0));
        prop_assert!(big_e >= e * (1.0 - 1e-14));
        prop_assert!(p * e >= big_e * big_e * (1.0 - 1e-14));
    }

    #[test]
    fn single_shell_saturates_cauchy_schwarz(s in any::<u64>(), pick in 0usize..6) {
        let m = [1i64, 2, 5, 10, 13, 25][pick];
        let u = eigenspace_project(&field(s, 25), m);
        let (e, big_e, p) = (norm_as_sq(&u, 0.0), norm_as_sq(&u, 0.5), norm_as_sq(&u, 1.0));
        prop_assert!((p * e - big_e * big_e).abs() <= 1e-13 * big_e * big_e + 1e-300);
    }

    #[test]
    fn projections_commute_with_stokes_powers(s in any::<u64>(), pick in 0usize..4, power in 0.0f64..2.0) {
        let u = field(s, 25);
        let shells = [vec![1i64, 2, 5], vec![2], vec![4, 9, 25], vec![5, 10, 13]][pick].iter().copied().collect();
        let a = project_shells(&apply_stokes_power(&u, power), &shells);
        let b = apply_stokes_power(&project_shells(&u, &shells), power);
        prop_assert!(dist(&a, &b) <= 1e-14 * norm_as(&u, power));
    }

    #[test]
    fn scalar_form_round_trips(s in any::<u64>()) {
        let u = field(s, 25);
        let back = SpectralField::from_scalar(&u.to_scalar(), 25).unwrap();
        prop_assert!(dist(&u, &back) <= 1e-14 * norm(&u));
        prop_assert!(back.invariant_defect() < 1e-14);
    }

    #[test]
    fn bilinear_output_is_a_valid_field(s1 in any::<u64>(), s2 in any::<u64>()) {
        let b = bilinear(&field(s1, 13), &field(s2, 13), 52);
        prop_assert!(b.invariant_defect() < 1e-13);
    }
}
