use std::f64::consts::PI;
use std::sync::Arc;

use onofri_core::cr::*;
use onofri_core::inequalities::DEFICIT_TOLERANCE;
use onofri_core::specfun::gauss_legendre_on;
use onofri_core::Error;
use proptest::prelude::*;

fn ctx(n: usize, j: usize) -> Arc<CrContext<f64>> {
    make_cr_context_default(n, j).unwrap()
}

/// Disk average with weight `(1 − r²)^{n−1} r dr dφ`, Gauss–Legendre in `r`
/// and a fine trapezoid rule in `φ`.
fn disk_mean(n: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let radial = gauss_legendre_on(200, 0.0, 1.0).unwrap();
    let angles = 256;
    let (mut num, mut den) = (0.0, 0.0);
    for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
        let r: f64 = r;
        let jac = w * r * (1.0 - r * r).powi(n as i32 - 1);
        for l in 0..angles {
            let phi = 2.0 * PI * l as f64 / angles as f64;
            num += jac * f(r, phi);
            den += jac;
        }
    }
    num / den
}

#[test]
fn gram_and_angular_exactness() {
    for n in 1..=3 {
        for &j in &[4, 16] {
            let c = ctx(n, j);
            assert!(c.gram_error() < 1e-11, "n={n} J={j}: {}", c.gram_error());
            assert!(c.angular_exactness_error() < 1e-13);
        }
    }
}

#[test]
fn basis_is_orthonormal_under_independent_quadrature() {
    let c = ctx(2, 3);
    let keys = c.keys().len();
    for a in 0..keys {
        for b in 0..=a {
            let g = disk_mean(2, |r, phi| c.basis_value(a, r, phi) * c.basis_value(b, r, phi));
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((g - expect).abs() < 1e-11, "{:?} {:?}: {g}", c.keys()[a], c.keys()[b]);
        }
    }
}

#[test]
fn sub_laplacian_identity() {
    for n in 1..=3usize {
        let q = 2 * n + 2;
        let nf = n as f64;
        for j in 0..=32usize {
            for k in 0..=32usize {
                let prod = lambda_j(2.0, j, q).unwrap() * lambda_j(2.0, k, q).unwrap();
                let (jf, kf) = (j as f64, k as f64);
                let expect = jf * kf + nf / 2.0 * (jf + kf) + nf * nf / 4.0;
                assert!((prod - expect).abs() <= 1e-10 * expect);
            }
        }
    }
}

#[test]
fn aprime_is_the_endpoint_limit_of_lambda() {
    for n in 1..=3usize {
        let q = 2 * n + 2;
        for j in 1..=16usize {
            let target: f64 = (0..=n).map(|l| (j + l) as f64).product();
            let at_q = lambda_j(q as f64, j, q).unwrap();
            assert!((at_q - target).abs() < 1e-10 * target);
            let eps: Vec<f64> = (1..=8).map(|m| 0.8 * 0.5f64.powi(m)).collect();
            let errs: Vec<f64> = eps.iter().map(|&e| (lambda_j(q as f64 - e, j, q).unwrap() - target).abs()).collect();
            assert!(errs.windows(2).all(|p| p[1] < p[0]));
            let order = onofri_core::inequalities::fitted_order(&eps, &errs).unwrap();
            assert!((order - 1.0).abs() < 0.3, "n={n} j={j} order={order}");
        }
    }
}

#[test]
fn field_values_and_parseval() {
    for n in 1..=3 {
        let c = ctx(n, 6);
        let f = DiskField::random(&c, 6, 11);
        let oracle_mean = disk_mean(n, |r, phi| f.eval(r, phi));
        assert!((f.mean() - oracle_mean).abs() < 1e-12);
        let oracle_sq = disk_mean(n, |r, phi| f.eval(r, phi).powi(2));
        assert!((f.mean_square() - oracle_sq).abs() < 1e-11);
        let grid = f.values_on_grid();
        assert!((cr_mean_integral(&c, &grid).unwrap() - oracle_mean).abs() < 1e-12);
        let sq: Vec<f64> = grid.iter().map(|v| v * v).collect();
        assert!((cr_mean_integral(&c, &sq).unwrap() - f.mean_square()).abs() < 1e-11);
    }
}

#[test]
fn projection_matches_independent_coefficients() {
    let c = ctx(1, 8);
    let g = DiskField::project(&c, |r, phi| (0.2 * r * phi.cos()).exp());
    for b in 0..6 {
        let oracle = disk_mean(1, |r, phi| (0.2 * r * phi.cos()).exp() * c.basis_value(b, r, phi));
        assert!((g.coeffs()[b] - oracle).abs() < 1e-13);
    }
}

#[test]
fn cr_sobolev_examples() {
    let eval = |j: usize| {
        let c = ctx(1, j);
        let v = DiskField::project(&c, |r, phi| (0.2 * r * phi.cos()).exp());
        cr_sobolev_pair(2.0, &v).unwrap()
    };
    let (coarse, fine) = (eval(10), eval(16));
    assert!(coarse.deficit > 0.0);
    assert!((coarse.deficit - fine.deficit).abs() < 1e-9);
    assert!(matches!(
        cr_sobolev_pair(3.9995, &DiskField::constant(&ctx(1, 4), 1.0)),
        Err(Error::EndpointProximity { .. })
    ));
}

#[test]
fn cr_mto_examples() {
    let eval = |j: usize| {
        let c = ctx(1, j);
        cr_mto_pair(&DiskField::pluri(&c, 1, 0.3, 0.0).unwrap()).unwrap()
    };
    let (coarse, fine) = (eval(4), eval(12));
    assert!(coarse.deficit > 0.0);
    assert!((coarse.deficit - fine.deficit).abs() < 1e-9);
    // n = 1: uniform disk, ⨍ e^{4 a r cos φ} = 2 I_1(4a) / (4a)
    let x: f64 = 1.2;
    let bessel_i1: f64 = (0..30usize).map(|m| (x / 2.0).powi(2 * m as i32 + 1) / (factorial(m) * factorial(m + 1))).sum();
    let oracle = (2.0 * bessel_i1 / x).ln() / 4.0;
    assert!((coarse.lhs - oracle).abs() < 1e-13, "{} vs {oracle}", coarse.lhs);
    // A'_Q on (1,0): 1·2, and ⨍ (r cos φ)² = 1/4 for n = 1
    assert!((coarse.rhs - 2.0 * 0.09 / 4.0).abs() < 1e-14);
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

#[test]
fn cr_limit_example() {
    let c = ctx(1, 16);
    let f = DiskField::pluri(&c, 1, 0.4, 0.0).unwrap();
    let table = cr_limit_study(&f, &d_sequence(4, 0.8, 2.0, 8)).unwrap();
    assert!(table.errors_decreasing(0));
    for pair in table.rows.windows(2) {
        for r in [pair[0].lhs_err / pair[1].lhs_err, pair[0].rhs_err / pair[1].rhs_err] {
            assert!((1.6..2.5).contains(&r), "ratio {r}");
        }
    }
    assert!((table.lhs_order.unwrap() - 1.0).abs() < 0.3);
    assert!((table.rhs_order.unwrap() - 1.0).abs() < 0.3);
    let zero = cr_limit_study(&DiskField::zero(&c), &d_sequence(4, 0.8, 2.0, 3)).unwrap();
    assert!(zero.rows.iter().all(|r| r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-12));
    assert!(cr_limit_study(&DiskField::random(&c, 4, 1), &[3.0]).is_err());
}

#[test]
fn pluri_of_cosine_survives_projection() {
    let c = ctx(2, 5);
    let f = DiskField::pluri(&c, 1, 1.0, 0.0).unwrap();
    assert!(f.is_pluriharmonic());
    assert_eq!(pluriharmonic_project(&f).coeffs(), f.coeffs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_is_idempotent(n in 1usize..=3, seed in any::<u64>()) {
        let c = ctx(n, 6);
        let f = DiskField::random(&c, 10, seed);
        let once = pluriharmonic_project(&f);
        prop_assert!(once.is_pluriharmonic());
        let twice = pluriharmonic_project(&once);
        prop_assert_eq!(twice.coeffs(), once.coeffs());
    }

    #[test]
    fn round_trip(n in 1usize..=3, j in 1usize..10, seed in any::<u64>()) {
        let c = ctx(n, j);
        let f = DiskField::random(&c, 2 * j, seed);
        let back = analyze_disk(&c, &f.values_on_grid()).unwrap();
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cr_deficits_nonnegative(n in 1usize..=3, frac in 0.05..0.95_f64, seed in any::<u64>()) {
        let c = ctx(n, 6);
        let q = c.q() as f64;
        let f = DiskField::random_pluriharmonic(&c, 6, seed);
        prop_assert!(cr_mto_pair(&f).unwrap().deficit >= -DEFICIT_TOLERANCE);
        let v = DiskField::random(&c, 6, seed).plus_constant(2.0);
        prop_assert!(cr_sobolev_pair(frac * q, &v).unwrap().deficit >= -DEFICIT_TOLERANCE);
    }

    #[test]
    fn cr_bridge_identity(n in 1usize..=3, frac in 0.3..0.99_f64, seed in any::<u64>()) {
        let c = ctx(n, 8);
        let d = frac * c.q() as f64;
        let f = DiskField::random_pluriharmonic(&c, 8, seed);
        let pair = cr_d_pair(d, &f).unwrap();
        let gap = c.q() as f64 - d;
        let lambda0 = lambda_j(d, 0, c.q()).unwrap();
        let bridged = 4.0 / (gap * gap) / lambda0 * pair.sobolev.deficit;
        prop_assert!(((pair.rhs - pair.lhs) - bridged).abs() <= 1e-12 * (1.0 + pair.rhs.abs()));
    }

    #[test]
    fn cr_lhs_target_shift_invariant(seed in any::<u64>(), shift in -3.0..3.0_f64) {
        let c = ctx(1, 8);
        let f = DiskField::random_pluriharmonic(&c, 8, seed);
        let a = cr_lhs_target(&f).unwrap();
        let b = cr_lhs_target(&f.plus_constant(shift)).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn cr_sobolev_is_two_homogeneous(seed in any::<u64>(), scale in 0.1..10.0_f64) {
        let c = ctx(1, 6);
        let v = DiskField::random(&c, 6, seed).plus_constant(2.0);
        let a = cr_sobolev_pair(2.0, &v).unwrap();
        let b = cr_sobolev_pair(2.0, &v.scaled(scale)).unwrap();
        prop_assert!((b.lhs - scale * scale * a.lhs).abs() < 1e-12 * b.lhs);
        prop_assert!((b.deficit - scale * scale * a.deficit).abs() < 1e-12 * b.rhs);
    }
}
