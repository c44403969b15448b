//! Zonal function calculus on the round sphere `S^n`.
//!
//! Functions invariant under rotations about a fixed axis depend only on
//! `x = cos θ`. They are expanded in the degree-`k` zonal harmonics
//! `e_k(x) ∝ C_k^{(n−1)/2}(x)`, normalized so that the sphere *average*
//! `⨍ e_j e_k = δ_jk`. Every integral in this crate is a normalized average, so
//! the surface area of the sphere never appears.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_ratio, gauss_jacobi_rule, gegenbauer_all, rising_factorial, QuadratureRule};
use crate::Real;

/// Largest oversampled rule the adaptive means will build.
pub const MAX_ADAPTIVE_POINTS: usize = 1 << 14;

/// Convergence record of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadDiagnostics<T> {
    /// Number of quadrature points in the accepted level.
    pub points: usize,
    /// Relative change between the last two levels.
    pub last_rel_change: T,
    /// The size cap was reached before the tolerance was met.
    pub capped: bool,
}

/// Oversampled Gauss rule together with the basis tabulated on its nodes.
#[derive(Debug)]
struct DenseLevel<T> {
    nodes: Vec<T>,
    mean_weights: Vec<T>,
    /// `basis[k][i] = e_k(nodes[i])`
    basis: Vec<Vec<T>>,
}

/// Dimension, truncation and quadrature for zonal computations on `S^n`.
#[derive(Debug)]
pub struct SphereContext<T> {
    n: usize,
    degree: usize,
    rule: QuadratureRule<T>,
    mean_weights: Vec<T>,
    norm_table: Vec<T>,
    basis: Vec<Vec<T>>,
    levels: Vec<OnceLock<DenseLevel<T>>>,
    level_sizes: Vec<usize>,
}

/// Builds a context for `S^n` with truncation degree `degree` (`K`) and a
/// Gauss rule of `points` (`M`) nodes in `x = cos θ`.
///
/// The normalization constants are measured with the rule itself rather than
/// transcribed from closed forms.
pub fn make_context<T: Real>(n: usize, degree: usize, points: usize) -> Result<Arc<SphereContext<T>>> {
    if n == 0 {
        return Err(Error::Parameter("sphere dimension n must be >= 1".into()));
    }
    if degree == 0 {
        return Err(Error::Parameter("truncation degree K must be >= 1".into()));
    }
    if points < 2 * degree + 2 {
        return Err(Error::Parameter(format!(
            "quadrature size M = {points} is below 2K + 2 = {}",
            2 * degree + 2
        )));
    }
    let a = (T::from_usize_lossy(n) - T::lit(2.0)) / T::lit(2.0);
    let rule = gauss_jacobi_rule(points, a, a)?;
    let mean_weights = rule.normalized_weights();
    let lambda = gegenbauer_index::<T>(n);

    let raw: Vec<Vec<T>> = rule.nodes.iter().map(|&x| gegenbauer_all(degree, lambda, x)).collect();
    let norm_table: Vec<T> = (0..=degree)
        .map(|k| {
            raw.iter()
                .zip(&mean_weights)
                .map(|(row, &w)| w * row[k] * row[k])
                .sum::<T>()
                .sqrt()
        })
        .collect();
    let basis = (0..=degree)
        .map(|k| raw.iter().map(|row| row[k] / norm_table[k]).collect())
        .collect();

    let mut level_sizes = Vec::new();
    let mut size = 4 * degree;
    loop {
        level_sizes.push(size.min(MAX_ADAPTIVE_POINTS).max(2));
        if size >= MAX_ADAPTIVE_POINTS {
            break;
        }
        size *= 2;
    }
    let levels = level_sizes.iter().map(|_| OnceLock::new()).collect();

    Ok(Arc::new(SphereContext {
        n,
        degree,
        rule,
        mean_weights,
        norm_table,
        basis,
        levels,
        level_sizes,
    }))
}

fn gegenbauer_index<T: Real>(n: usize) -> T {
    (T::from_usize_lossy(n) - T::one()) / T::lit(2.0)
}

impl<T: Real> SphereContext<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation degree `K`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn quadrature(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    pub fn nodes(&self) -> &[T] {
        &self.rule.nodes
    }

    /// Weights of the context rule rescaled to sum to one.
    pub fn mean_weights(&self) -> &[T] {
        &self.mean_weights
    }

    /// `‖C_k^{(n−1)/2}‖` under the mean inner product, `k = 0..=K`.
    pub fn norm_table(&self) -> &[T] {
        &self.norm_table
    }

    /// `e_0(x), …, e_K(x)`.
    pub fn basis_values(&self, x: T) -> Vec<T> {
        let mut raw = gegenbauer_all(self.degree, gegenbauer_index(self.n), x);
        for (v, &norm) in raw.iter_mut().zip(&self.norm_table) {
            *v = *v / norm;
        }
        raw
    }

    /// Basis tabulated on the context nodes, `[k][i]`.
    pub fn basis_at_nodes(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Largest deviation of the numerical Gram matrix from the identity.
    pub fn gram_error(&self) -> T {
        let mut worst = T::zero();
        for j in 0..=self.degree {
            for k in 0..=j {
                let g: T = self.basis[j]
                    .iter()
                    .zip(&self.basis[k])
                    .zip(&self.mean_weights)
                    .map(|((&a, &b), &w)| w * a * b)
                    .sum();
                let target = if j == k { T::one() } else { T::zero() };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    fn level(&self, index: usize) -> &DenseLevel<T> {
        self.levels[index].get_or_init(|| {
            let a = (T::from_usize_lossy(self.n) - T::lit(2.0)) / T::lit(2.0);
            let rule = gauss_jacobi_rule(self.level_sizes[index], a, a)
                .expect("parameters validated at context construction");
            let mean_weights = rule.normalized_weights();
            let rows: Vec<Vec<T>> = rule.nodes.iter().map(|&x| self.basis_values(x)).collect();
            let basis = (0..=self.degree)
                .map(|k| rows.iter().map(|r| r[k]).collect())
                .collect();
            DenseLevel {
                nodes: rule.nodes,
                mean_weights,
                basis,
            }
        })
    }

    /// Adaptive `ln ⨍ exp(h(x, f(x)))` over oversampled Gauss levels, starting
    /// at `4K` points and doubling until the mean changes by less than the
    /// relative tolerance. The largest exponent is factored out before
    /// summation, so huge exponents do not overflow.
    pub(crate) fn adaptive_log_mean_exp(
        &self,
        field: &[T],
        h: impl Fn(T, T) -> T,
    ) -> Result<(T, QuadDiagnostics<T>)> {
        let tol = T::adaptive_tol();
        let mut previous: Option<T> = None;
        let mut last_change = T::infinity();
        for index in 0..self.level_sizes.len() {
            let level = self.level(index);
            let exponents: Vec<T> = level
                .nodes
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let value = field
                        .iter()
                        .zip(&level.basis)
                        .map(|(&c, row)| c * row[i])
                        .sum();
                    h(x, value)
                })
                .collect();
            let current = log_mean_exp(&exponents, &level.mean_weights)?;
            if let Some(prev) = previous {
                last_change = (current - prev).abs();
                if last_change <= tol {
                    return Ok((
                        current,
                        QuadDiagnostics {
                            points: level.nodes.len(),
                            last_rel_change: last_change,
                            capped: false,
                        },
                    ));
                }
            }
            previous = Some(current);
        }
        let points = *self.level_sizes.last().unwrap();
        log::warn!("adaptive sphere quadrature capped at {points} points (last change {last_change})");
        Ok((
            previous.unwrap(),
            QuadDiagnostics {
                points,
                last_rel_change: last_change,
                capped: true,
            },
        ))
    }
}

/// `ln Σ wᵢ exp(hᵢ)` with the maximum exponent factored out.
pub(crate) fn log_mean_exp<T: Real>(exponents: &[T], weights: &[T]) -> Result<T> {
    let top = exponents.iter().copied().fold(T::neg_infinity(), T::max);
    if top == T::neg_infinity() {
        return Err(Error::NonPositiveNorm);
    }
    if !top.is_finite() {
        return Err(Error::Parameter("non-finite integrand in exponential mean".into()));
    }
    let sum: T = exponents
        .iter()
        .zip(weights)
        .map(|(&h, &w)| w * (h - top).exp())
        .sum();
    let mass: T = weights.iter().copied().sum();
    Ok(top + (sum / mass).ln())
}

/// Truncated expansion `Σ_k c_k e_k` of a zonal function.
#[derive(Debug, Clone)]
pub struct ZonalField<T> {
    ctx: Arc<SphereContext<T>>,
    coeffs: Vec<T>,
}

impl<T: Real> ZonalField<T> {
    /// Field with the given coefficients; shorter vectors are zero-padded.
    pub fn from_coeffs(ctx: &Arc<SphereContext<T>>, coeffs: &[T]) -> Result<Self> {
        if coeffs.len() > ctx.degree + 1 {
            return Err(Error::SizeMismatch {
                expected: ctx.degree + 1,
                got: coeffs.len(),
            });
        }
        let mut c = coeffs.to_vec();
        c.resize(ctx.degree + 1, T::zero());
        Ok(Self { ctx: ctx.clone(), coeffs: c })
    }

    pub fn zero(ctx: &Arc<SphereContext<T>>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: vec![T::zero(); ctx.degree + 1],
        }
    }

    pub fn constant(ctx: &Arc<SphereContext<T>>, value: T) -> Self {
        let mut f = Self::zero(ctx);
        f.coeffs[0] = value;
        f
    }

    /// `amplitude · e_k`.
    pub fn mode(ctx: &Arc<SphereContext<T>>, k: usize, amplitude: T) -> Result<Self> {
        if k > ctx.degree {
            return Err(Error::Parameter(format!(
                "mode degree {k} exceeds truncation K = {}",
                ctx.degree
            )));
        }
        let mut f = Self::zero(ctx);
        f.coeffs[k] = amplitude;
        Ok(f)
    }

    /// Seeded smooth random field: `c_k ~ U(−1, 1) · (1 + k)^{−2}` for
    /// `k ≤ min(max_degree, K)`.
    pub fn random(ctx: &Arc<SphereContext<T>>, max_degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Self::zero(ctx);
        for k in 0..=max_degree.min(ctx.degree) {
            let u: f64 = rng.gen_range(-1.0..1.0);
            f.coeffs[k] = T::lit(u / ((1 + k) as f64).powi(2));
        }
        f
    }

    /// Projection of `f` onto degrees `≤ K`, computed on oversampled rules
    /// until the coefficients stop changing.
    pub fn project(ctx: &Arc<SphereContext<T>>, f: impl Fn(T) -> T) -> Self {
        let tol = T::epsilon() * T::lit(1024.0);
        let mut previous: Option<Vec<T>> = None;
        for index in 0..ctx.level_sizes.len() {
            let level = ctx.level(index);
            let values: Vec<T> = level.nodes.iter().map(|&x| f(x)).collect();
            let coeffs: Vec<T> = level
                .basis
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&values)
                        .zip(&level.mean_weights)
                        .map(|((&e, &v), &w)| w * e * v)
                        .sum()
                })
                .collect();
            if let Some(prev) = &previous {
                let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs())).max(T::min_positive_value());
                let change = coeffs
                    .iter()
                    .zip(prev)
                    .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
                if change <= tol * scale {
                    return Self { ctx: ctx.clone(), coeffs };
                }
            }
            previous = Some(coeffs);
        }
        Self {
            ctx: ctx.clone(),
            coeffs: previous.unwrap(),
        }
    }

    pub fn context(&self) -> &Arc<SphereContext<T>> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `⨍ f`, which is the coefficient of `e_0 ≡ 1`.
    pub fn mean(&self) -> T {
        self.coeffs[0] / self.ctx.norm_table[0]
    }

    /// `⨍ f² = Σ c_k²`.
    pub fn mean_square(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    pub fn eval(&self, x: T) -> T {
        self.ctx
            .basis_values(x)
            .iter()
            .zip(&self.coeffs)
            .map(|(&e, &c)| e * c)
            .sum()
    }

    /// Values at the context quadrature nodes.
    pub fn values_at_nodes(&self) -> Vec<T> {
        (0..self.ctx.rule.len())
            .map(|i| {
                self.coeffs
                    .iter()
                    .zip(&self.ctx.basis)
                    .map(|(&c, row)| c * row[i])
                    .sum()
            })
            .collect()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn plus_constant(&self, shift: T) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = f.coeffs[0] + shift;
        f
    }
}

/// Coefficients of the function sampled at the context nodes.
pub fn analyze<T: Real>(ctx: &Arc<SphereContext<T>>, node_values: &[T]) -> Result<ZonalField<T>> {
    if node_values.len() != ctx.rule.len() {
        return Err(Error::SizeMismatch {
            expected: ctx.rule.len(),
            got: node_values.len(),
        });
    }
    let coeffs = ctx
        .basis
        .iter()
        .map(|row| {
            row.iter()
                .zip(node_values)
                .zip(&ctx.mean_weights)
                .map(|((&e, &f), &w)| w * e * f)
                .sum()
        })
        .collect();
    Ok(ZonalField { ctx: ctx.clone(), coeffs })
}

/// Pointwise values `Σ c_k e_k(x)` at arbitrary `x ∈ [−1, 1]`.
pub fn synthesize<T: Real>(field: &ZonalField<T>, nodes: &[T]) -> Result<Vec<T>> {
    nodes
        .iter()
        .map(|&x| {
            if x.abs() > T::one() {
                Err(domain("synthesis node must lie in [-1, 1]", x))
            } else {
                Ok(field.eval(x))
            }
        })
        .collect()
}

/// Normalized average `⨍ f = Σ wᵢ f(xᵢ) / Σ wᵢ` from values at the context nodes.
pub fn mean_integral<T: Real>(ctx: &SphereContext<T>, node_values: &[T]) -> Result<T> {
    if node_values.len() != ctx.rule.len() {
        return Err(Error::SizeMismatch {
            expected: ctx.rule.len(),
            got: node_values.len(),
        });
    }
    Ok(node_values.iter().zip(&ctx.mean_weights).map(|(&f, &w)| w * f).sum())
}

/// Operators diagonal in the zonal harmonic basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SphereOperator<T> {
    /// `B = sqrt(−Δ + ((n − 1)/2)²)`.
    B,
    /// Fractional conformal operator `P_γ`.
    P { gamma: T },
    /// Endpoint operator `P_{n/2}`.
    Endpoint,
}

/// Eigenvalues of a diagonal operator indexed by harmonic degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDiagonal<T> {
    pub operator: SphereOperator<T>,
    pub n: usize,
    pub eigenvalues: Vec<T>,
}

/// Eigenvalues `Γ(k + n/2 + γ) / Γ(k + n/2 − γ)` of `P_γ`, `0 < γ < n/2`.
pub fn spectrum_p<T: Real>(ctx: &SphereContext<T>, gamma: T) -> Result<SpectrumDiagonal<T>> {
    let half_n = T::from_usize_lossy(ctx.n) / T::lit(2.0);
    if !(gamma > T::zero() && gamma < half_n) {
        return Err(domain("gamma must lie in (0, n/2)", gamma));
    }
    let eigenvalues = (0..=ctx.degree)
        .map(|k| {
            let base = T::from_usize_lossy(k) + half_n;
            gamma_ratio(base + gamma, base - gamma)
        })
        .collect::<Result<_>>()?;
    Ok(SpectrumDiagonal {
        operator: SphereOperator::P { gamma },
        n: ctx.n,
        eigenvalues,
    })
}

/// Eigenvalues of `P_{n/2}`: `0` on constants and `k (k + 1) ··· (k + n − 1)` for `k ≥ 1`.
pub fn spectrum_p_endpoint<T: Real>(ctx: &SphereContext<T>) -> SpectrumDiagonal<T> {
    let eigenvalues = (0..=ctx.degree)
        .map(|k| {
            if k == 0 {
                T::zero()
            } else {
                rising_factorial(T::from_usize_lossy(k), ctx.n)
            }
        })
        .collect();
    SpectrumDiagonal {
        operator: SphereOperator::Endpoint,
        n: ctx.n,
        eigenvalues,
    }
}

/// Eigenvalues `k + (n − 1)/2` of `B`.
pub fn spectrum_b<T: Real>(ctx: &SphereContext<T>) -> SpectrumDiagonal<T> {
    let shift = gegenbauer_index::<T>(ctx.n);
    SpectrumDiagonal {
        operator: SphereOperator::B,
        n: ctx.n,
        eigenvalues: (0..=ctx.degree).map(|k| T::from_usize_lossy(k) + shift).collect(),
    }
}

fn check_spectrum<T: Real>(field: &ZonalField<T>, spectrum: &SpectrumDiagonal<T>) -> Result<()> {
    if spectrum.n != field.ctx.n || spectrum.eigenvalues.len() != field.coeffs.len() {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// `c_k ↦ λ_k c_k`.
pub fn apply_diagonal<T: Real>(field: &ZonalField<T>, spectrum: &SpectrumDiagonal<T>) -> Result<ZonalField<T>> {
    check_spectrum(field, spectrum)?;
    Ok(ZonalField {
        ctx: field.ctx.clone(),
        coeffs: field
            .coeffs
            .iter()
            .zip(&spectrum.eigenvalues)
            .map(|(&c, &l)| c * l)
            .collect(),
    })
}

/// `⨍ f · (Λ f) = Σ λ_k c_k²`.
pub fn quadratic_form<T: Real>(field: &ZonalField<T>, spectrum: &SpectrumDiagonal<T>) -> Result<T> {
    check_spectrum(field, spectrum)?;
    Ok(field
        .coeffs
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(&c, &l)| l * c * c)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, k: usize, m: usize) -> Arc<SphereContext<f64>> {
        make_context(n, k, m).unwrap()
    }

    #[test]
    fn gram_identity() {
        for n in 1..=4 {
            assert!(ctx(n, 8, 32).gram_error() < 1e-11, "n={n}");
        }
        assert!(ctx(2, 40, 82).gram_error() < 1e-11);
    }

    #[test]
    fn circle_basis_is_scaled_cosines() {
        let c = ctx(1, 8, 32);
        for &x in &[-0.9, -0.1, 0.4, 0.95] {
            let e = c.basis_values(x);
            assert!((e[0] - 1.0).abs() < 1e-14);
            for (k, v) in e.iter().enumerate().skip(1) {
                let expect = 2.0_f64.sqrt() * (k as f64 * f64::acos(x)).cos();
                assert!((v - expect).abs() < 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn constant_basis_function() {
        let c = ctx(3, 4, 16);
        let ones = vec![1.0; 16];
        let f = analyze(&c, &ones).unwrap();
        assert!((f.coeffs()[0] - 1.0).abs() < 1e-14);
        assert!(f.coeffs()[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn rejects_small_rule() {
        assert!(make_context::<f64>(2, 8, 17).is_err());
        assert!(make_context::<f64>(0, 8, 32).is_err());
    }

    #[test]
    fn analyze_single_mode() {
        let c = ctx(2, 8, 32);
        let values = c.basis_at_nodes()[3].clone();
        let f = analyze(&c, &values).unwrap();
        for (k, v) in f.coeffs().iter().enumerate() {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-12);
        }
        assert!(analyze(&c, &values[..10]).is_err());
    }

    #[test]
    fn mean_integral_examples() {
        let c = ctx(2, 8, 32);
        let vals: Vec<f64> = c.nodes().iter().map(|_| 2.5).collect();
        assert!((mean_integral(&c, &vals).unwrap() - 2.5).abs() < 1e-14);
        let odd: Vec<f64> = c.nodes().to_vec();
        assert!(mean_integral(&c, &odd).unwrap().abs() < 1e-15);
        let sq: Vec<f64> = c.nodes().iter().map(|x| x * x).collect();
        assert!((mean_integral(&c, &sq).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn spectra_examples() {
        let s2 = ctx(2, 8, 32);
        let p = spectrum_p(&s2, 0.5).unwrap();
        assert!((p.eigenvalues[0] - 0.5).abs() < 1e-14);
        assert!((p.eigenvalues[1] - 1.5).abs() < 1e-14);
        let s3 = ctx(3, 4, 16);
        assert!((spectrum_p(&s3, 1.0).unwrap().eigenvalues[0] - 0.75).abs() < 1e-14);
        assert!(spectrum_p(&s3, 1.5).is_err());
        assert!(spectrum_p(&s3, 0.0).is_err());

        let e = spectrum_p_endpoint(&s2);
        for (k, v) in e.eigenvalues.iter().enumerate() {
            assert_eq!(*v, (k * (k + 1)) as f64);
        }
        let e1 = spectrum_p_endpoint(&ctx(1, 8, 32));
        for (k, v) in e1.eigenvalues.iter().enumerate() {
            assert_eq!(*v, k as f64);
        }
        assert_eq!(spectrum_p_endpoint(&ctx(4, 3, 8)).eigenvalues[1], 24.0);

        assert_eq!(spectrum_b(&ctx(1, 2, 6)).eigenvalues[0], 0.0);
        assert_eq!(spectrum_b(&s3).eigenvalues[2], 3.0);
        assert_eq!(spectrum_b(&s2).eigenvalues[0], 0.5);
    }

    #[test]
    fn diagonal_action_examples() {
        let c = ctx(2, 8, 32);
        let one = ZonalField::constant(&c, 3.0);
        let p = spectrum_p(&c, 0.7).unwrap();
        let y = p.eigenvalues[0];
        let pf = apply_diagonal(&one, &p).unwrap();
        assert!((pf.coeffs()[0] - 3.0 * y).abs() < 1e-14);
        let end = spectrum_p_endpoint(&c);
        assert_eq!(apply_diagonal(&one, &end).unwrap().coeffs()[0], 0.0);
        let e2 = ZonalField::mode(&c, 2, 1.0).unwrap();
        assert_eq!(apply_diagonal(&e2, &end).unwrap().coeffs()[2], 6.0);
        assert!((quadratic_form(&ZonalField::constant(&c, 1.0), &p).unwrap() - y).abs() < 1e-15);
        let e1 = ZonalField::mode(&c, 1, 1.0).unwrap();
        assert_eq!(quadratic_form(&e1, &end).unwrap(), 2.0);

        let other = ctx(3, 8, 32);
        assert_eq!(
            quadratic_form(&e1, &spectrum_p_endpoint(&other)),
            Err(Error::ContextMismatch)
        );
    }

    #[test]
    fn random_fields_are_seeded() {
        let c = ctx(2, 8, 32);
        let a = ZonalField::random(&c, 8, 42);
        let b = ZonalField::random(&c, 8, 42);
        assert_eq!(a.coeffs(), b.coeffs());
        assert_ne!(a.coeffs(), ZonalField::random(&c, 8, 43).coeffs());
    }

    #[test]
    fn projection_of_polynomial_is_exact() {
        let c = ctx(3, 6, 14);
        let f = ZonalField::random(&c, 6, 5);
        let g = ZonalField::project(&c, |x| f.eval(x));
        for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_mean_of_exponential() {
        // ⨍_{S^2} e^{a cos θ} = sinh(a) / a
        let c = ctx(2, 4, 10);
        let (log_m, diag) = c.adaptive_log_mean_exp(&[], |x, _| 1.7 * x).unwrap();
        assert!((log_m.exp() - 1.7_f64.sinh() / 1.7).abs() < 1e-13);
        assert!(!diag.capped);
    }
}
