use std::f64::consts::PI;
use std::sync::Arc;

use onofri_core::specfun::gauss_legendre_on;
use onofri_core::sphere::*;
use onofri_core::Error;
use proptest::prelude::*;

fn ctx(n: usize, k: usize) -> Arc<SphereContext<f64>> {
    make_context(n, k, 2 * k + 2).unwrap()
}

/// Sphere average of a zonal function by Gauss–Legendre in the polar angle,
/// with the `sin^{n−1} θ` weight written out explicitly.
fn polar_mean(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = gauss_legendre_on(400, 0.0, PI).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let jac = t.sin().powi(n as i32 - 1);
        num += w * jac * f(t.cos());
        den += w * jac;
    }
    num / den
}

#[test]
fn gram_identity() {
    for n in 1..=4 {
        for &k in &[4, 16, 32] {
            let c = ctx(n, k);
            assert!(c.gram_error() < 1e-11, "n={n} K={k}: {}", c.gram_error());
        }
    }
}

#[test]
fn low_degree_basis_closed_forms() {
    // ⨍ x² = 1/(n + 1), so e_1 = √(n + 1) x
    for n in 1..=4 {
        let c = ctx(n, 3);
        for &x in &[-0.8, 0.1, 0.55] {
            let e = c.basis_values(x);
            assert!((e[0] - 1.0).abs() < 1e-14);
            assert!((e[1] - (n as f64 + 1.0).sqrt() * x).abs() < 1e-14, "n={n}");
        }
    }
    // Chebyshev case: e_k = √2 cos(kθ)
    let c = ctx(1, 6);
    let e = c.basis_values(0.3);
    for (k, v) in e.iter().enumerate().skip(1) {
        assert!((v - 2f64.sqrt() * (k as f64 * 0.3f64.acos()).cos()).abs() < 1e-13);
    }
}

#[test]
fn mean_matches_polar_integration() {
    for n in 1..=4 {
        let c = ctx(n, 10);
        let f = ZonalField::random(&c, 10, 17);
        let oracle = polar_mean(n, |x| f.eval(x));
        assert!((f.mean() - oracle).abs() < 1e-13);
        let values = f.values_at_nodes();
        assert!((mean_integral(&c, &values).unwrap() - oracle).abs() < 1e-13);
        let sq = polar_mean(n, |x| f.eval(x).powi(2));
        assert!((f.mean_square() - sq).abs() < 1e-11 * sq.max(1.0));
    }
}

#[test]
fn projection_of_exponential_matches_polar_oracle() {
    let c = ctx(2, 20);
    let g = ZonalField::project(&c, |x| (0.7 * x).exp());
    for k in 0..4 {
        let oracle = polar_mean(2, |x| (0.7 * x).exp() * c.basis_values(x)[k]);
        assert!((g.coeffs()[k] - oracle).abs() < 1e-13);
    }
}

#[test]
fn spectra_closed_forms() {
    for n in 1..=4 {
        let c = ctx(n, 32);
        let nf = n as f64;
        let p1 = if n > 2 { Some(spectrum_p(&c, 1.0).unwrap()) } else { None };
        let half = (n > 1).then(|| spectrum_p(&c, 0.5).unwrap());
        let b = spectrum_b(&c);
        for k in 0..=32 {
            let kf = k as f64;
            if let Some(half) = &half {
                assert!((half.eigenvalues[k] - b.eigenvalues[k]).abs() < 1e-12 * b.eigenvalues[k].max(1.0));
            }
            assert!((b.eigenvalues[k] - (kf + (nf - 1.0) / 2.0)).abs() < 1e-15);
            if let Some(p1) = &p1 {
                // conformal Laplacian: k(k + n − 1) + n(n − 2)/4
                let expect = kf * (kf + nf - 1.0) + nf * (nf - 2.0) / 4.0;
                assert!((p1.eigenvalues[k] - expect).abs() < 1e-12 * expect);
            }
        }
    }
    assert!(spectrum_p(&ctx(2, 4), 1.0).is_err());
    assert!(spectrum_p(&ctx(2, 4), 0.0).is_err());
}

#[test]
fn endpoint_spectra() {
    let two = spectrum_p_endpoint(&ctx(2, 64));
    for k in 0..=64 {
        let expect = (k * (k + 1)) as f64;
        assert!((two.eigenvalues[k] - expect).abs() <= 1e-12 * expect);
    }
    let one = spectrum_p_endpoint(&ctx(1, 64));
    for k in 0..=64 {
        assert!((one.eigenvalues[k] - k as f64).abs() <= 1e-12 * k as f64);
    }
}

#[test]
fn context_mismatch_is_reported() {
    let f = ZonalField::random(&ctx(2, 8), 8, 1);
    let s = spectrum_b(&ctx(3, 8));
    assert!(matches!(apply_diagonal(&f, &s), Err(Error::ContextMismatch)));
    let s = spectrum_b(&ctx(2, 6));
    assert!(quadratic_form(&f, &s).is_err());
    assert!(make_context::<f64>(2, 8, 17).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip(n in 1usize..=4, k in 1usize..24, seed in any::<u64>()) {
        let c = ctx(n, k);
        let f = ZonalField::random(&c, k, seed);
        let back = analyze(&c, &f.values_at_nodes()).unwrap();
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval_on_oversampled_nodes(n in 1usize..=4, k in 1usize..20, seed in any::<u64>()) {
        let c = ctx(n, k);
        let f = ZonalField::random(&c, k, seed);
        let nodes = c.nodes().to_vec();
        let values = synthesize(&f, &nodes).unwrap();
        let direct: f64 = values.iter().zip(c.mean_weights()).map(|(v, w)| w * v * v).sum();
        prop_assert!((direct - f.mean_square()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_operators_are_self_adjoint(n in 1usize..=4, seed in any::<u64>(), frac in 0.05..0.95_f64) {
        let c = ctx(n, 12);
        let gamma = frac * n as f64 / 2.0;
        let s = spectrum_p(&c, gamma).unwrap();
        let u = ZonalField::random(&c, 12, seed);
        let v = ZonalField::random(&c, 12, seed.wrapping_add(1));
        let pu = apply_diagonal(&u, &s).unwrap().values_at_nodes();
        let pv = apply_diagonal(&v, &s).unwrap().values_at_nodes();
        let (uv, vu): (Vec<f64>, Vec<f64>) = u
            .values_at_nodes()
            .iter()
            .zip(&v.values_at_nodes())
            .zip(pu.iter().zip(&pv))
            .map(|((a, b), (pa, pb))| (a * pb, b * pa))
            .unzip();
        let l = mean_integral(&c, &uv).unwrap();
        let r = mean_integral(&c, &vu).unwrap();
        prop_assert!((l - r).abs() < 1e-12 * (1.0 + l.abs()));
        let q = quadratic_form(&u, &s).unwrap();
        let uu: Vec<f64> = u.values_at_nodes().iter().zip(&pu).map(|(a, b)| a * b).collect();
        prop_assert!((q - mean_integral(&c, &uu).unwrap()).abs() < 1e-12 * (1.0 + q.abs()));
    }

    #[test]
    fn eigenvalues_increase_with_degree(n in 1usize..=4, frac in 0.05..0.99_f64) {
        let c = ctx(n, 40);
        let s = spectrum_p(&c, frac * n as f64 / 2.0).unwrap();
        prop_assert!(s.eigenvalues.windows(2).all(|p| p[1] > p[0]));
    }
}

#[test]
fn single_precision_context() {
    let c = make_context::<f32>(2, 6, 14).unwrap();
    assert!(c.gram_error() < 1e-5);
    let f = ZonalField::random(&c, 6, 3);
    let back = analyze(&c, &f.values_at_nodes()).unwrap();
    for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
        assert!((a - b).abs() < 1e-5);
    }
}
