use std::f64::consts::PI;
use std::sync::Arc;

use onofri_core::inequalities::*;
use onofri_core::specfun::{gamma_ratio, gauss_legendre_on};
use onofri_core::sphere::*;
use onofri_core::Error;
use proptest::prelude::*;

fn ctx(n: usize, k: usize) -> Arc<SphereContext<f64>> {
    make_context(n, k, 2 * k + 2).unwrap()
}

fn polar_mean(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = gauss_legendre_on(600, 0.0, PI).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let jac = t.sin().powi(n as i32 - 1);
        num += w * jac * f(t.cos());
        den += w * jac;
    }
    num / den
}

fn sharp(n: usize, gamma: f64) -> f64 {
    gamma_ratio(n as f64 / 2.0 + gamma, n as f64 / 2.0 - gamma).unwrap()
}

/// Positive smooth field built from a seeded random one.
fn positive_field(c: &Arc<SphereContext<f64>>, seed: u64) -> ZonalField<f64> {
    let w = ZonalField::random(c, c.degree(), seed);
    let lowest = c.nodes().iter().map(|&x| w.eval(x)).fold(f64::INFINITY, f64::min);
    w.plus_constant(lowest.abs() + 0.5)
}

#[test]
fn sobolev_lhs_matches_polar_oracle() {
    for &(n, gamma) in &[(1, 0.3), (2, 0.5), (3, 1.0), (4, 1.7)] {
        let c = ctx(n, 12);
        let v = positive_field(&c, 5);
        let rec = sobolev_pair(gamma, &v).unwrap();
        let p = 2.0 * n as f64 / (n as f64 - 2.0 * gamma);
        let oracle = sharp(n, gamma) * polar_mean(n, |x| v.eval(x).abs().powf(p)).powf(2.0 / p);
        assert!((rec.lhs - oracle).abs() < 1e-11 * oracle, "n={n}");
        assert!(!rec.diagnostics.capped);
    }
}

#[test]
fn exponential_example_on_s2_is_strict_and_resolved() {
    let eval = |k: usize| {
        let c = ctx(2, k);
        let e1 = ZonalField::mode(&c, 1, 0.3).unwrap();
        let v = ZonalField::project(&c, |x| e1.eval(x).exp());
        sobolev_pair(0.5, &v).unwrap()
    };
    let (coarse, fine) = (eval(20), eval(32));
    assert!(coarse.deficit > 0.0);
    assert!((coarse.deficit - fine.deficit).abs() < 1e-9);
}

#[test]
fn mto_examples() {
    let zero = mto_pair(&ZonalField::zero(&ctx(3, 6))).unwrap();
    assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
    for n in 1..=4 {
        let rec = mto_pair(&ZonalField::constant(&ctx(n, 6), 0.7)).unwrap();
        let expect = 2.0 * (1..n).product::<usize>() as f64 * 0.7;
        assert!((rec.lhs - expect).abs() < 1e-13 && (rec.rhs - expect).abs() < 1e-13);
    }
    let eval = |k: usize| mto_pair(&ZonalField::mode(&ctx(2, k), 1, 0.4).unwrap()).unwrap();
    let (coarse, fine) = (eval(8), eval(24));
    assert!(coarse.deficit > 0.0);
    assert!((coarse.deficit - fine.deficit).abs() < 1e-9);
    // ⨍_{S²} e^{2 a x} = sinh(2a)/(2a), with e_1 = √3 x
    let a = 0.4 * 3f64.sqrt();
    let oracle = ((2.0 * a).sinh() / (2.0 * a)).ln();
    assert!((coarse.lhs - oracle).abs() < 1e-13);
    assert!((coarse.rhs - 2.0 * 0.16).abs() < 1e-14);
}

#[test]
fn endpoint_example_n2() {
    let eval = |k: usize| gamma_pair(0.9, &ZonalField::mode(&ctx(2, k), 1, 0.5).unwrap()).unwrap();
    let (coarse, fine) = (eval(16), eval(28));
    assert!(coarse.lhs.is_finite() && coarse.rhs.is_finite());
    assert!(coarse.rhs - coarse.lhs > 0.0);
    assert!((coarse.lhs - fine.lhs).abs() < 1e-9 && (coarse.rhs - fine.rhs).abs() < 1e-9);
}

#[test]
fn endpoint_functionals_reject_the_guard() {
    let w = ZonalField::mode(&ctx(2, 8), 1, 0.5).unwrap();
    assert!(matches!(gamma_pair(0.9996, &w), Err(Error::EndpointProximity { .. })));
    assert!(gamma_pair(0.999, &w).is_ok());
    assert!(limit_study(&w, &[0.9, 0.8]).is_err());
}

#[test]
fn limit_table_examples() {
    let c = ctx(1, 24);
    let w = ZonalField::mode(&c, 1, 0.5).unwrap();
    let table = limit_study(&w, &gamma_sequence(1, 0.4, 2.0, 8)).unwrap();
    assert!((table.rows[0].rhs_target - 0.25).abs() < 1e-15);
    let constant = limit_study(&ZonalField::constant(&c, 0.8), &gamma_sequence(1, 0.4, 2.0, 4)).unwrap();
    for row in &constant.rows {
        assert!(row.lhs_err < 1e-12 && row.rhs_err < 1e-12);
    }
}

#[test]
fn limit_study_n2_halves_errors() {
    let c = ctx(2, 32);
    let w = ZonalField::from_coeffs(&c, &[0.0, 0.5, 0.0, 0.3]).unwrap();
    let table = limit_study(&w, &gamma_sequence(2, 0.4, 2.0, 8)).unwrap();
    assert!(table.errors_decreasing(0));
    for pair in table.rows.windows(2) {
        let r = pair[0].lhs_err / pair[1].lhs_err;
        assert!((1.6..2.5).contains(&r), "lhs ratio {r}");
        let r = pair[0].rhs_err / pair[1].rhs_err;
        assert!((1.6..2.5).contains(&r), "rhs ratio {r}");
    }
    assert!((table.lhs_order.unwrap() - 1.0).abs() < 0.3);
    assert!((table.rhs_order.unwrap() - 1.0).abs() < 0.3);
    let extrapolated = table.lhs_extrapolated.unwrap();
    assert!((extrapolated - table.rows[0].lhs_target).abs() < table.rows.last().unwrap().lhs_err);
}

#[test]
fn taylor_remainder_examples() {
    let c = ctx(2, 12);
    let zero = taylor_remainder_check(0.7, &ZonalField::zero(&c)).unwrap();
    assert_eq!(zero.sup, 0.0);
    let gamma = 0.6;
    let gap: f64 = 2.0 - 2.0 * gamma;
    let k = taylor_remainder_check(gamma, &ZonalField::constant(&c, 1.3)).unwrap();
    let a = gap * 1.3 / 2.0;
    assert!((k.sup - (a.exp() - 1.0 - a) / (gap * gap)).abs() < 1e-14);
    let w = ZonalField::mode(&c, 1, 1.0).unwrap();
    let sups: Vec<f64> = [0.6, 0.8, 0.95]
        .iter()
        .map(|&g| {
            let t = taylor_remainder_check(g, &w).unwrap();
            assert!(t.representation_error < 1e-10);
            assert!(t.sup <= t.bound);
            t.sup
        })
        .collect();
    let (lo, hi) = sups.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &s| (l.min(s), h.max(s)));
    // spread measured against the largest value
    assert!((hi - lo) / hi < 0.2);
}

#[test]
fn fitted_order_ignores_zero_errors() {
    assert_eq!(fitted_order::<f64>(&[0.1, 0.05], &[0.0, 0.0]), None);
    let order = fitted_order::<f64>(&[0.4, 0.2, 0.1], &[0.8, 0.2, 0.05]).unwrap();
    assert!((order - 2.0).abs() < 1e-12);
}

#[test]
fn records_serialize() {
    let rec = sobolev_pair(0.5, &ZonalField::constant(&ctx(2, 4), 1.0)).unwrap();
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["kind"], "sphere-sobolev");
    assert_eq!(json["n"], 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn deficits_nonnegative(n in 1usize..=4, frac in 0.05..0.95_f64, seed in any::<u64>()) {
        let c = ctx(n, 12);
        let gamma = frac * n as f64 / 2.0;
        let v = positive_field(&c, seed);
        prop_assert!(sobolev_pair(gamma, &v).unwrap().deficit >= -DEFICIT_TOLERANCE);
        let w = ZonalField::random(&c, 12, seed);
        prop_assert!(mto_pair(&w).unwrap().deficit >= -DEFICIT_TOLERANCE);
    }

    #[test]
    fn bridge_identity(n in 1usize..=3, frac in 0.3..0.99_f64, seed in any::<u64>()) {
        let c = ctx(n, 12);
        let gamma = frac * n as f64 / 2.0;
        let w = ZonalField::random(&c, 8, seed);
        let pair = gamma_pair(gamma, &w).unwrap();
        let gap = n as f64 - 2.0 * gamma;
        let bridged = 4.0 / (gap * gap) * pair.sobolev.deficit;
        prop_assert!(((pair.rhs - pair.lhs) - bridged).abs() <= 1e-12 * (1.0 + pair.rhs.abs()));
        prop_assert!(pair.lhs <= pair.rhs + DEFICIT_TOLERANCE);
    }

    #[test]
    fn lhs_target_is_shift_invariant(n in 1usize..=4, seed in any::<u64>(), shift in -5.0..5.0_f64) {
        let c = ctx(n, 10);
        let w = ZonalField::random(&c, 10, seed);
        let a = lhs_target(&w).unwrap();
        let b = lhs_target(&w.plus_constant(shift)).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sobolev_is_two_homogeneous(seed in any::<u64>(), scale in 0.1..10.0_f64) {
        let c = ctx(3, 8);
        let v = positive_field(&c, seed);
        let a = sobolev_pair(1.0, &v).unwrap();
        let b = sobolev_pair(1.0, &v.scaled(scale)).unwrap();
        prop_assert!((b.lhs - scale * scale * a.lhs).abs() < 1e-12 * b.lhs);
        prop_assert!((b.rhs - scale * scale * a.rhs).abs() < 1e-12 * b.rhs);
    }
}

#[test]
fn mto_handles_large_fields() {
    let c = ctx(3, 6);
    let w = ZonalField::mode(&c, 1, 400.0).unwrap();
    let rec = mto_pair(&w).unwrap();
    assert!(rec.lhs.is_finite() && rec.deficit > 0.0);
}
