//! Torus-invariant functions on the CR sphere `S^{2n+1}`.
//!
//! Functions that depend only on the last coordinate `z = r e^{iφ}` are
//! expanded in disk polynomials `R^{(n−1)}_{j,k}`, the zonal representatives of
//! the bidegree spaces `H_{j,k}`. The normalized sphere average pushes forward
//! to the disk average with weight `∝ (1 − r²)^{n−1} r dr dφ`; in the radial
//! variable `s = 2r² − 1` this is the Jacobi weight `(1 − s)^{n−1}`.
//!
//! Real basis: `R_{k,k}` and `Re R_{k+m,k}`, `Im R_{k+m,k}` for `m ≥ 1`, each
//! scaled to unit mean square. Index 0 is the constant.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::inequalities::{
    DeficitRecord, InequalityKind, LimitRow, LimitTable, SobolevParts, ENDPOINT_GUARD,
};
use crate::specfun::{disk_radial, factorial, gamma_ratio, gauss_jacobi_rule, rising_factorial};
use crate::sphere::{log_mean_exp, QuadDiagnostics};
use crate::Real;

/// Largest number of tensor-grid points the adaptive disk means will use.
pub const MAX_ADAPTIVE_GRID: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    /// `R_{k,k}` or `Re R_{k+m,k}`.
    Cos,
    /// `Im R_{k+m,k}`.
    Sin,
}

/// Real basis function built from the bidegree pair `(j, k)` with `j ≥ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisKey {
    pub j: usize,
    pub k: usize,
    pub part: Part,
}

impl BasisKey {
    /// Angular frequency `j − k`.
    pub fn frequency(&self) -> usize {
        self.j - self.k
    }

    /// Lies in the pluriharmonic space `⊕ H_{j,0} ⊕ H_{0,j} ⊕ H_{0,0}`.
    pub fn is_pluriharmonic(&self) -> bool {
        self.k == 0
    }
}

/// Tensor grid: Gauss–Jacobi in `s`, trapezoid in `φ`, with the radial
/// factors of the basis tabulated on it.
#[derive(Debug)]
struct DiskGrid<T> {
    radial_nodes: Vec<T>,
    radial_weights: Vec<T>,
    angular: usize,
    /// `radial[b][i]`: normalized radial factor of basis `b` at node `i`.
    radial: Vec<Vec<T>>,
    /// `cos(m φ_l)` and `sin(m φ_l)` for `m = 0..=J`.
    cos: Vec<Vec<T>>,
    sin: Vec<Vec<T>>,
}

/// Dimension, bidegree truncation and quadrature for computations on `S^{2n+1}`.
#[derive(Debug)]
pub struct CrContext<T> {
    n: usize,
    degree: usize,
    keys: Vec<BasisKey>,
    norm_table: Vec<T>,
    grid: DiskGrid<T>,
    levels: Vec<OnceLock<DiskGrid<T>>>,
    level_sizes: Vec<(usize, usize)>,
}

/// Builds a CR context with bidegrees `j, k ≤ degree` (`J`), a radial
/// Gauss–Jacobi rule of `radial` nodes and `angular` uniform angles.
pub fn make_cr_context<T: Real>(n: usize, degree: usize, radial: usize, angular: usize) -> Result<Arc<CrContext<T>>> {
    if n == 0 {
        return Err(Error::Parameter("CR dimension n must be >= 1".into()));
    }
    if degree == 0 {
        return Err(Error::Parameter("bidegree truncation J must be >= 1".into()));
    }
    if radial < degree + 1 {
        return Err(Error::Parameter(format!(
            "radial rule size {radial} is below J + 1 = {}",
            degree + 1
        )));
    }
    if angular < 4 * degree + 2 {
        return Err(Error::Parameter(format!(
            "angular grid size {angular} is below 4J + 2 = {}",
            4 * degree + 2
        )));
    }
    let mut keys = Vec::with_capacity((degree + 1) * (degree + 1));
    for m in 0..=degree {
        for k in 0..=(degree - m) {
            keys.push(BasisKey { j: k + m, k, part: Part::Cos });
            if m > 0 {
                keys.push(BasisKey { j: k + m, k, part: Part::Sin });
            }
        }
    }
    // index 0 must be the constant
    keys.sort_by_key(|b| (b.j + b.k, b.k == 0, b.j, b.part == Part::Sin));
    keys.sort_by_key(|b| b.j + b.k > 0);
    let unit = vec![T::one(); keys.len()];
    let raw = build_grid(n, degree, &keys, &unit, radial, angular)?;
    let norm_table: Vec<T> = keys
        .iter()
        .enumerate()
        .map(|(b, key)| {
            let radial_sq: T = raw.radial[b]
                .iter()
                .zip(&raw.radial_weights)
                .map(|(&v, &w)| w * v * v)
                .sum();
            let table = match key.part {
                Part::Cos => &raw.cos,
                Part::Sin => &raw.sin,
            };
            let angular_sq = table[key.frequency()].iter().map(|&c| c * c).sum::<T>()
                / T::from_usize_lossy(raw.angular);
            (radial_sq * angular_sq).sqrt()
        })
        .collect();
    let grid = build_grid(n, degree, &keys, &norm_table, radial, angular)?;

    let mut level_sizes = Vec::new();
    let (mut r, mut a) = (2 * (degree + 1), 2 * (4 * degree + 2));
    loop {
        level_sizes.push((r, a));
        if r * a * 4 > MAX_ADAPTIVE_GRID {
            break;
        }
        r *= 2;
        a *= 2;
    }
    let levels = level_sizes.iter().map(|_| OnceLock::new()).collect();
    Ok(Arc::new(CrContext {
        n,
        degree,
        keys,
        norm_table,
        grid,
        levels,
        level_sizes,
    }))
}

/// Context with the default grid sizes `2J + 2` radial and `4J + 2` angular.
pub fn make_cr_context_default<T: Real>(n: usize, degree: usize) -> Result<Arc<CrContext<T>>> {
    make_cr_context(n, degree, 2 * degree + 2, 4 * degree + 2)
}

fn build_grid<T: Real>(
    n: usize,
    degree: usize,
    keys: &[BasisKey],
    norms: &[T],
    radial: usize,
    angular: usize,
) -> Result<DiskGrid<T>> {
    let rule = gauss_jacobi_rule(radial, T::from_usize_lossy(n - 1), T::zero())?;
    let radial_weights = rule.normalized_weights();
    let radii: Vec<T> = rule
        .nodes
        .iter()
        .map(|&s| ((T::one() + s) / T::lit(2.0)).sqrt())
        .collect();
    let radial_table = keys
        .iter()
        .zip(norms)
        .map(|(key, &norm)| {
            radii
                .iter()
                .map(|&r| disk_radial(key.k, key.frequency(), n, r) / norm)
                .collect()
        })
        .collect();
    let step = T::lit(2.0 * PI) / T::from_usize_lossy(angular);
    let angle = |m: usize, l: usize| T::from_usize_lossy(m) * T::from_usize_lossy(l) * step;
    let cos = (0..=degree)
        .map(|m| (0..angular).map(|l| angle(m, l).cos()).collect())
        .collect();
    let sin = (0..=degree)
        .map(|m| (0..angular).map(|l| angle(m, l).sin()).collect())
        .collect();
    Ok(DiskGrid {
        radial_nodes: rule.nodes,
        radial_weights,
        angular,
        radial: radial_table,
        cos,
        sin,
    })
}

impl<T: Real> DiskGrid<T> {
    fn len(&self) -> usize {
        self.radial_nodes.len() * self.angular
    }

    /// Field values on the grid, row-major in (radial, angular).
    fn synthesize(&self, keys: &[BasisKey], degree: usize, coeffs: &[T]) -> Vec<T> {
        let mut values = vec![T::zero(); self.len()];
        for i in 0..self.radial_nodes.len() {
            let mut cos_amp = vec![T::zero(); degree + 1];
            let mut sin_amp = vec![T::zero(); degree + 1];
            for (b, key) in keys.iter().enumerate() {
                if coeffs[b] == T::zero() {
                    continue;
                }
                let term = coeffs[b] * self.radial[b][i];
                match key.part {
                    Part::Cos => cos_amp[key.frequency()] = cos_amp[key.frequency()] + term,
                    Part::Sin => sin_amp[key.frequency()] = sin_amp[key.frequency()] + term,
                }
            }
            let row = &mut values[i * self.angular..(i + 1) * self.angular];
            for m in 0..=degree {
                let (ca, sa) = (cos_amp[m], sin_amp[m]);
                if ca == T::zero() && sa == T::zero() {
                    continue;
                }
                for (l, v) in row.iter_mut().enumerate() {
                    *v = *v + ca * self.cos[m][l] + sa * self.sin[m][l];
                }
            }
        }
        values
    }

    /// Coefficients `⨍ f · basis_b` from grid values.
    fn analyze(&self, keys: &[BasisKey], degree: usize, values: &[T]) -> Vec<T> {
        let inv_a = T::one() / T::from_usize_lossy(self.angular);
        let rows = self.radial_nodes.len();
        // angular moments per radial node
        let mut cos_mom = vec![vec![T::zero(); rows]; degree + 1];
        let mut sin_mom = vec![vec![T::zero(); rows]; degree + 1];
        for i in 0..rows {
            let row = &values[i * self.angular..(i + 1) * self.angular];
            for m in 0..=degree {
                let mut c = T::zero();
                let mut s = T::zero();
                for (l, &v) in row.iter().enumerate() {
                    c = c + v * self.cos[m][l];
                    s = s + v * self.sin[m][l];
                }
                cos_mom[m][i] = c * inv_a;
                sin_mom[m][i] = s * inv_a;
            }
        }
        keys.iter()
            .enumerate()
            .map(|(b, key)| {
                let moments = match key.part {
                    Part::Cos => &cos_mom[key.frequency()],
                    Part::Sin => &sin_mom[key.frequency()],
                };
                moments
                    .iter()
                    .zip(&self.radial[b])
                    .zip(&self.radial_weights)
                    .map(|((&f, &r), &w)| w * f * r)
                    .sum()
            })
            .collect()
    }

    fn weights(&self) -> Vec<T> {
        let inv_a = T::one() / T::from_usize_lossy(self.angular);
        self.radial_weights
            .iter()
            .flat_map(|&w| std::iter::repeat_n(w * inv_a, self.angular))
            .collect()
    }

    /// `(s, φ)` of every grid point, row-major.
    fn points(&self) -> Vec<(T, T)> {
        let step = T::lit(2.0 * PI) / T::from_usize_lossy(self.angular);
        self.radial_nodes
            .iter()
            .flat_map(|&s| (0..self.angular).map(move |l| (s, T::from_usize_lossy(l) * step)))
            .collect()
    }
}

impl<T: Real> CrContext<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    /// Bidegree truncation `J`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn keys(&self) -> &[BasisKey] {
        &self.keys
    }

    pub fn norm_table(&self) -> &[T] {
        &self.norm_table
    }

    pub fn radial_size(&self) -> usize {
        self.grid.radial_nodes.len()
    }

    pub fn angular_size(&self) -> usize {
        self.grid.angular
    }

    /// Index of a basis function.
    pub fn index_of(&self, key: BasisKey) -> Option<usize> {
        self.keys.iter().position(|&k| k == key)
    }

    /// Normalized basis function `b` at `(r, φ)`.
    pub fn basis_value(&self, b: usize, r: T, phi: T) -> T {
        let key = self.keys[b];
        let radial = disk_radial(key.k, key.frequency(), self.n, r) / self.norm_table[b];
        let angle = T::from_usize_lossy(key.frequency()) * phi;
        match key.part {
            Part::Cos => radial * angle.cos(),
            Part::Sin => radial * angle.sin(),
        }
    }

    /// Largest deviation of the numerical Gram matrix from the identity.
    ///
    /// The grid is a tensor product, so each Gram entry factors into an
    /// angular sum times a radial sum.
    pub fn gram_error(&self) -> T {
        let g = &self.grid;
        let inv_a = T::one() / T::from_usize_lossy(g.angular);
        let angular = |a: BasisKey, b: BasisKey| -> T {
            let ta = if a.part == Part::Cos { &g.cos } else { &g.sin };
            let tb = if b.part == Part::Cos { &g.cos } else { &g.sin };
            ta[a.frequency()]
                .iter()
                .zip(&tb[b.frequency()])
                .map(|(&x, &y)| x * y)
                .sum::<T>()
                * inv_a
        };
        let mut worst = T::zero();
        for (a, ka) in self.keys.iter().enumerate() {
            for (b, kb) in self.keys.iter().enumerate().take(a + 1) {
                let ang = angular(*ka, *kb);
                let rad: T = g.radial[a]
                    .iter()
                    .zip(&g.radial[b])
                    .zip(&g.radial_weights)
                    .map(|((&x, &y), &w)| w * x * y)
                    .sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((ang * rad - target).abs());
            }
        }
        worst
    }

    /// Largest error of the angular grid on `e^{imφ}`, `|m| ≤ 2J`.
    pub fn angular_exactness_error(&self) -> T {
        let a = self.grid.angular;
        let step = 2.0 * PI / a as f64;
        let mut worst = T::zero();
        for m in 0..=(2 * self.degree) {
            let (mut c, mut s) = (T::zero(), T::zero());
            for l in 0..a {
                let angle = T::lit(step * (m * l % a) as f64);
                c = c + angle.cos();
                s = s + angle.sin();
            }
            let c = c / T::from_usize_lossy(a) - if m == 0 { T::one() } else { T::zero() };
            let s = s / T::from_usize_lossy(a);
            worst = worst.max(c.abs()).max(s.abs());
        }
        worst
    }

    fn level(&self, index: usize) -> &DiskGrid<T> {
        self.levels[index].get_or_init(|| {
            let (r, a) = self.level_sizes[index];
            build_grid(self.n, self.degree, &self.keys, &self.norm_table, r, a)
                .expect("parameters validated at context construction")
        })
    }

    /// Adaptive `ln ⨍ exp(h(s, φ, F(s, φ)))` over doubling tensor grids.
    pub(crate) fn adaptive_log_mean_exp(
        &self,
        coeffs: &[T],
        h: impl Fn(T, T, T) -> T + Sync,
    ) -> Result<(T, QuadDiagnostics<T>)> {
        let tol = T::adaptive_tol();
        let mut previous: Option<T> = None;
        let mut last_change = T::infinity();
        for index in 0..self.level_sizes.len() {
            let grid = self.level(index);
            let values = grid.synthesize(&self.keys, self.degree, coeffs);
            let exponents: Vec<T> = grid
                .points()
                .iter()
                .zip(&values)
                .map(|(&(s, phi), &v)| h(s, phi, v))
                .collect();
            let current = log_mean_exp(&exponents, &grid.weights())?;
            if let Some(prev) = previous {
                last_change = (current - prev).abs();
                if last_change <= tol {
                    return Ok((
                        current,
                        QuadDiagnostics {
                            points: grid.len(),
                            last_rel_change: last_change,
                            capped: false,
                        },
                    ));
                }
            }
            previous = Some(current);
        }
        let (r, a) = *self.level_sizes.last().unwrap();
        log::warn!("adaptive disk quadrature capped at {r}x{a} points (last change {last_change})");
        Ok((
            previous.unwrap(),
            QuadDiagnostics {
                points: r * a,
                last_rel_change: last_change,
                capped: true,
            },
        ))
    }
}

/// Truncated disk-polynomial expansion of a torus-invariant function.
#[derive(Debug, Clone)]
pub struct DiskField<T> {
    ctx: Arc<CrContext<T>>,
    coeffs: Vec<T>,
}

impl<T: Real> DiskField<T> {
    pub fn zero(ctx: &Arc<CrContext<T>>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: vec![T::zero(); ctx.keys.len()],
        }
    }

    pub fn constant(ctx: &Arc<CrContext<T>>, value: T) -> Self {
        let mut f = Self::zero(ctx);
        f.coeffs[0] = value;
        f
    }

    pub fn from_coeffs(ctx: &Arc<CrContext<T>>, coeffs: &[T]) -> Result<Self> {
        if coeffs.len() != ctx.keys.len() {
            return Err(Error::SizeMismatch {
                expected: ctx.keys.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            ctx: ctx.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    /// `amplitude · r^j cos(jφ − phase)`, a pluriharmonic function.
    pub fn pluri(ctx: &Arc<CrContext<T>>, j: usize, amplitude: T, phase: T) -> Result<Self> {
        if j > ctx.degree {
            return Err(Error::Parameter(format!(
                "degree {j} exceeds truncation J = {}",
                ctx.degree
            )));
        }
        let mut f = Self::zero(ctx);
        if j == 0 {
            f.coeffs[0] = amplitude * phase.cos();
            return Ok(f);
        }
        for (part, weight) in [(Part::Cos, phase.cos()), (Part::Sin, phase.sin())] {
            let b = ctx.index_of(BasisKey { j, k: 0, part }).expect("key in basis");
            f.coeffs[b] = amplitude * weight * ctx.norm_table[b];
        }
        Ok(f)
    }

    /// Seeded random pluriharmonic field: coefficients of the normalized
    /// `Re`/`Im R_{j,0}` drawn from `U(−1, 1) · (1 + j)^{−2}`.
    pub fn random_pluriharmonic(ctx: &Arc<CrContext<T>>, max_degree: usize, seed: u64) -> Self {
        Self::random_where(ctx, seed, |key| key.k == 0 && key.j <= max_degree)
    }

    /// Seeded random field over all bidegrees with `j + k ≤ max_degree`,
    /// scaled by `(1 + j + k)^{−2}`.
    pub fn random(ctx: &Arc<CrContext<T>>, max_degree: usize, seed: u64) -> Self {
        Self::random_where(ctx, seed, |key| key.j + key.k <= max_degree)
    }

    fn random_where(ctx: &Arc<CrContext<T>>, seed: u64, keep: impl Fn(&BasisKey) -> bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Self::zero(ctx);
        for (b, key) in ctx.keys.iter().enumerate() {
            let u: f64 = rng.gen_range(-1.0..1.0);
            if keep(key) {
                f.coeffs[b] = T::lit(u / ((1 + key.j + key.k) as f64).powi(2));
            }
        }
        f
    }

    /// Projection of `f(r, φ)` onto the basis, refined until the coefficients settle.
    pub fn project(ctx: &Arc<CrContext<T>>, f: impl Fn(T, T) -> T) -> Self {
        let tol = T::epsilon() * T::lit(1024.0);
        let mut previous: Option<Vec<T>> = None;
        for index in 0..ctx.level_sizes.len() {
            let grid = ctx.level(index);
            let values: Vec<T> = grid
                .points()
                .iter()
                .map(|&(s, phi)| f(((T::one() + s) / T::lit(2.0)).sqrt(), phi))
                .collect();
            let coeffs = grid.analyze(&ctx.keys, ctx.degree, &values);
            if let Some(prev) = &previous {
                let scale = coeffs
                    .iter()
                    .fold(T::zero(), |m, c| m.max(c.abs()))
                    .max(T::min_positive_value());
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

    pub fn context(&self) -> &Arc<CrContext<T>> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `⨍ F`.
    pub fn mean(&self) -> T {
        self.coeffs[0] / self.ctx.norm_table[0]
    }

    /// `⨍ F² = Σ c²`.
    pub fn mean_square(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    pub fn eval(&self, r: T, phi: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != T::zero())
            .map(|(b, &c)| c * self.ctx.basis_value(b, r, phi))
            .sum()
    }

    /// Values on the context grid, row-major in (radial, angular).
    pub fn values_on_grid(&self) -> Vec<T> {
        self.ctx.grid.synthesize(&self.ctx.keys, self.ctx.degree, &self.coeffs)
    }

    /// Support is contained in the pluriharmonic bidegrees.
    pub fn is_pluriharmonic(&self) -> bool {
        self.first_non_pluriharmonic().is_none()
    }

    fn first_non_pluriharmonic(&self) -> Option<BasisKey> {
        self.ctx
            .keys
            .iter()
            .zip(&self.coeffs)
            .find(|(key, &c)| !key.is_pluriharmonic() && c != T::zero())
            .map(|(key, _)| *key)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn plus_constant(&self, shift: T) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = f.coeffs[0] + shift * self.ctx.norm_table[0];
        f
    }
}

/// Coefficients of a function sampled on the context grid (row-major).
pub fn analyze_disk<T: Real>(ctx: &Arc<CrContext<T>>, values: &[T]) -> Result<DiskField<T>> {
    if values.len() != ctx.grid.len() {
        return Err(Error::SizeMismatch {
            expected: ctx.grid.len(),
            got: values.len(),
        });
    }
    Ok(DiskField {
        ctx: ctx.clone(),
        coeffs: ctx.grid.analyze(&ctx.keys, ctx.degree, values),
    })
}

/// Normalized CR-sphere average from values on the context grid.
pub fn cr_mean_integral<T: Real>(ctx: &CrContext<T>, values: &[T]) -> Result<T> {
    if values.len() != ctx.grid.len() {
        return Err(Error::SizeMismatch {
            expected: ctx.grid.len(),
            got: values.len(),
        });
    }
    Ok(values.iter().zip(ctx.grid.weights()).map(|(&v, w)| v * w).sum())
}

/// Zeroes every coefficient with `min(j, k) ≥ 1`.
pub fn pluriharmonic_project<T: Real>(field: &DiskField<T>) -> DiskField<T> {
    let mut out = field.clone();
    for (c, key) in out.coeffs.iter_mut().zip(&field.ctx.keys) {
        if !key.is_pluriharmonic() {
            *c = T::zero();
        }
    }
    out
}

/// `λ_j(d) = Γ(j + (Q + d)/4) / Γ(j + (Q − d)/4)` for `0 < d ≤ Q`; at `d = Q`
/// the limit `Γ(j + Q/2) / Γ(j)` (zero for `j = 0`).
pub fn lambda_j<T: Real>(d: T, j: usize, q: usize) -> Result<T> {
    let qf = T::from_usize_lossy(q);
    if !(d > T::zero() && d <= qf) {
        return Err(domain("d must lie in (0, Q]", d));
    }
    let jf = T::from_usize_lossy(j);
    let four = T::lit(4.0);
    if d == qf {
        return Ok(if j == 0 {
            T::zero()
        } else {
            rising_factorial(jf, q / 2)
        });
    }
    gamma_ratio(jf + (qf + d) / four, jf + (qf - d) / four)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CrOperator<T> {
    /// Intertwining operator `A_d`.
    A { d: T },
    /// Sub-Laplacian `L = A_2 − n²/4`.
    SubLaplacian,
    /// `A'_Q = Π_{ℓ=0}^{n} ((2/n) L + ℓ)` on pluriharmonic functions.
    APrimeQ,
}

/// Eigenvalues aligned with the context basis; `None` where the operator is
/// not defined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BidegreeSpectrum<T> {
    pub operator: CrOperator<T>,
    pub n: usize,
    pub keys: Vec<BasisKey>,
    pub eigenvalues: Vec<Option<T>>,
}

impl<T: Real> BidegreeSpectrum<T> {
    /// Eigenvalue on bidegree `(j, k)`, either order.
    pub fn at(&self, j: usize, k: usize) -> Option<T> {
        let (hi, lo) = (j.max(k), j.min(k));
        self.keys
            .iter()
            .position(|key| key.j == hi && key.k == lo)
            .and_then(|b| self.eigenvalues[b])
    }
}

fn q_of<T: Real>(ctx: &CrContext<T>) -> T {
    T::from_usize_lossy(ctx.q())
}

/// `A_d` eigenvalues `λ_j(d) λ_k(d)`, `0 < d < Q`.
pub fn spectrum_ad<T: Real>(ctx: &CrContext<T>, d: T) -> Result<BidegreeSpectrum<T>> {
    if !(d > T::zero() && d < q_of(ctx)) {
        return Err(domain("d must lie in (0, Q)", d));
    }
    let lambdas = (0..=ctx.degree)
        .map(|j| lambda_j(d, j, ctx.q()))
        .collect::<Result<Vec<_>>>()?;
    Ok(BidegreeSpectrum {
        operator: CrOperator::A { d },
        n: ctx.n,
        keys: ctx.keys.clone(),
        eigenvalues: ctx.keys.iter().map(|key| Some(lambdas[key.j] * lambdas[key.k])).collect(),
    })
}

/// Sub-Laplacian eigenvalues `jk + (n/2)(j + k)`.
pub fn spectrum_l<T: Real>(ctx: &CrContext<T>) -> BidegreeSpectrum<T> {
    let half_n = T::from_usize_lossy(ctx.n) / T::lit(2.0);
    BidegreeSpectrum {
        operator: CrOperator::SubLaplacian,
        n: ctx.n,
        keys: ctx.keys.clone(),
        eigenvalues: ctx
            .keys
            .iter()
            .map(|key| {
                let (j, k) = (T::from_usize_lossy(key.j), T::from_usize_lossy(key.k));
                Some(j * k + half_n * (j + k))
            })
            .collect(),
    }
}

/// `A'_Q` eigenvalues from the product `Π_{ℓ=0}^{n} ((2/n) L + ℓ)` of sub-Laplacian
/// eigenvalues; defined only on pluriharmonic bidegrees.
pub fn spectrum_aprime_q<T: Real>(ctx: &CrContext<T>) -> BidegreeSpectrum<T> {
    let sub = spectrum_l(ctx);
    let scale = T::lit(2.0) / T::from_usize_lossy(ctx.n);
    let eigenvalues = ctx
        .keys
        .iter()
        .zip(&sub.eigenvalues)
        .map(|(key, l)| {
            key.is_pluriharmonic().then(|| {
                let l = l.expect("sub-Laplacian defined everywhere");
                (0..=ctx.n).fold(T::one(), |acc, ell| acc * (scale * l + T::from_usize_lossy(ell)))
            })
        })
        .collect();
    BidegreeSpectrum {
        operator: CrOperator::APrimeQ,
        n: ctx.n,
        keys: ctx.keys.clone(),
        eigenvalues,
    }
}

fn defined_eigenvalues<T: Real>(field: &DiskField<T>, spectrum: &BidegreeSpectrum<T>) -> Result<Vec<T>> {
    if spectrum.n != field.ctx.n || spectrum.keys != field.ctx.keys {
        return Err(Error::ContextMismatch);
    }
    spectrum
        .eigenvalues
        .iter()
        .zip(&field.coeffs)
        .zip(&spectrum.keys)
        .map(|((l, &c), key)| match l {
            Some(l) => Ok(*l),
            None if c == T::zero() => Ok(T::zero()),
            None => Err(Error::NotPluriharmonic { j: key.j, k: key.k }),
        })
        .collect()
}

/// Coefficient-wise action of a bidegree-diagonal operator.
pub fn apply_cr<T: Real>(field: &DiskField<T>, spectrum: &BidegreeSpectrum<T>) -> Result<DiskField<T>> {
    let eig = defined_eigenvalues(field, spectrum)?;
    Ok(DiskField {
        ctx: field.ctx.clone(),
        coeffs: field.coeffs.iter().zip(&eig).map(|(&c, &l)| c * l).collect(),
    })
}

/// `⨍ F · (Λ F) = Σ λ_b c_b²`.
pub fn cr_quadratic_form<T: Real>(field: &DiskField<T>, spectrum: &BidegreeSpectrum<T>) -> Result<T> {
    let eig = defined_eigenvalues(field, spectrum)?;
    Ok(field.coeffs.iter().zip(&eig).map(|(&c, &l)| l * c * c).sum())
}

fn guarded_cr_gap<T: Real>(ctx: &CrContext<T>, d: T) -> Result<T> {
    let q = q_of(ctx);
    if !(d > T::zero() && d < q) {
        return Err(domain("d must lie in (0, Q)", d));
    }
    let gap = q - d;
    if gap < T::lit(ENDPOINT_GUARD) {
        return Err(Error::EndpointProximity {
            gap: gap.to_f64_lossy(),
            guard: ENDPOINT_GUARD,
        });
    }
    Ok(gap)
}

fn cr_sobolev_parts<T: Real>(d: T, v: &DiskField<T>) -> Result<SobolevParts<T>> {
    let ctx = &v.ctx;
    let gap = guarded_cr_gap(ctx, d)?;
    if v.coeffs.iter().all(|&c| c == T::zero()) {
        return Err(Error::NonPositiveNorm);
    }
    let spectrum = spectrum_ad(ctx, d)?;
    let eig: Vec<T> = spectrum.eigenvalues.iter().map(|l| l.expect("A_d defined everywhere")).collect();
    let exponent = T::lit(2.0) * q_of(ctx) / gap;
    let (log_mean, diagnostics) = ctx.adaptive_log_mean_exp(&v.coeffs, |_, _, value| exponent * value.abs().ln())?;
    Ok(SobolevParts::assemble(&v.coeffs, &eig, exponent, log_mean, diagnostics))
}

fn cr_record<T: Real>(kind: InequalityKind, n: usize, parameter: Option<T>, parts: &SobolevParts<T>) -> DeficitRecord<T> {
    DeficitRecord {
        kind,
        n,
        parameter,
        lhs: parts.lhs(),
        rhs: parts.rhs(),
        deficit: parts.deficit(),
        field: String::new(),
        diagnostics: parts.diagnostics,
    }
}

/// Both sides of `λ_0(d)² (⨍|v|^{2Q/(Q−d)})^{(Q−d)/Q} ≤ ⨍ v A_d v`.
pub fn cr_sobolev_pair<T: Real>(d: T, v: &DiskField<T>) -> Result<DeficitRecord<T>> {
    let parts = cr_sobolev_parts(d, v)?;
    Ok(cr_record(InequalityKind::CrSobolev, v.ctx.n, Some(d), &parts)
        .with_field(format!("disk(J={})", v.ctx.degree)))
}

/// Centered `ln ⨍ e^{Q(F − F̄)}`.
fn cr_centered_log_exp_mean<T: Real>(f: &DiskField<T>) -> Result<(T, QuadDiagnostics<T>)> {
    let q = q_of(&f.ctx);
    let mean = f.mean();
    f.ctx.adaptive_log_mean_exp(&f.coeffs, |_, _, value| q * (value - mean))
}

/// Both sides of `(n!/Q) ln ⨍ e^{QF} ≤ ⨍ F A'_Q F + n! ⨍ F` for pluriharmonic `F`.
pub fn cr_mto_pair<T: Real>(f: &DiskField<T>) -> Result<DeficitRecord<T>> {
    if let Some(key) = f.first_non_pluriharmonic() {
        return Err(Error::NotPluriharmonic { j: key.j, k: key.k });
    }
    let ctx = &f.ctx;
    let energy = cr_quadratic_form(f, &spectrum_aprime_q(ctx))?;
    let (centered, diagnostics) = cr_centered_log_exp_mean(f)?;
    let n_fact = factorial::<T>(ctx.n);
    let excess_lhs = n_fact / q_of(ctx) * centered;
    let linear = n_fact * f.mean();
    Ok(DeficitRecord {
        kind: InequalityKind::CrMto,
        n: ctx.n,
        parameter: None,
        lhs: excess_lhs + linear,
        rhs: energy + linear,
        deficit: energy - excess_lhs,
        field: format!("disk(J={})", ctx.degree),
        diagnostics,
    })
}

/// `v = e^{(Q − d) F / 2}` projected onto the basis.
pub fn cr_exponential_field<T: Real>(d: T, f: &DiskField<T>) -> Result<DiskField<T>> {
    let ctx = &f.ctx;
    if !(d > T::zero() && d < q_of(ctx)) {
        return Err(domain("d must lie in (0, Q)", d));
    }
    let rate = (q_of(ctx) - d) / T::lit(2.0);
    Ok(DiskField::project(ctx, |r, phi| (rate * f.eval(r, phi)).exp()))
}

/// Rescaled CR Sobolev sides for a pluriharmonic `F`:
///
/// `LHS_d = 4/(Q−d)² · λ_0(d) [(⨍|v|^{2Q/(Q−d)})^{(Q−d)/Q} − ⨍ v²]`,
/// `RHS_d = 4/(Q−d)² · λ_0(d)^{−1} [⨍ v A_d v − λ_0(d)² ⨍ v²]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrEndpointPair<T> {
    pub d: T,
    pub lhs: T,
    pub rhs: T,
    pub sobolev: DeficitRecord<T>,
}

pub fn cr_d_pair<T: Real>(d: T, f: &DiskField<T>) -> Result<CrEndpointPair<T>> {
    if let Some(key) = f.first_non_pluriharmonic() {
        return Err(Error::NotPluriharmonic { j: key.j, k: key.k });
    }
    let gap = guarded_cr_gap(&f.ctx, d)?;
    let v = cr_exponential_field(d, f)?;
    let parts = cr_sobolev_parts(d, &v)?;
    let lambda0 = lambda_j(d, 0, f.ctx.q())?;
    let scale = T::lit(4.0) / (gap * gap);
    Ok(CrEndpointPair {
        d,
        lhs: scale * lambda0 * parts.holder_gap(),
        rhs: scale / lambda0 * parts.excess,
        sobolev: cr_record(InequalityKind::CrSobolev, f.ctx.n, Some(d), &parts)
            .with_field("exp((Q-d) F / 2)"),
    })
}

pub fn cr_lhs_d<T: Real>(d: T, f: &DiskField<T>) -> Result<T> {
    cr_d_pair(d, f).map(|p| p.lhs)
}

pub fn cr_rhs_d<T: Real>(d: T, f: &DiskField<T>) -> Result<T> {
    cr_d_pair(d, f).map(|p| p.rhs)
}

/// Limit of `LHS_d`: `(n!/Q) ln ⨍ e^{Q(F − F̄)}`.
pub fn cr_lhs_target<T: Real>(f: &DiskField<T>) -> Result<T> {
    let (centered, _) = cr_centered_log_exp_mean(f)?;
    Ok(factorial::<T>(f.ctx.n) / q_of(&f.ctx) * centered)
}

/// Limit of `RHS_d`: `⨍ F A'_Q F`.
pub fn cr_rhs_target<T: Real>(f: &DiskField<T>) -> Result<T> {
    cr_quadratic_form(f, &spectrum_aprime_q(&f.ctx))
}

/// `d_m = Q − gap · refine^{−m}` for `m = 1..=steps`.
pub fn d_sequence<T: Real>(q: usize, gap: T, refine: T, steps: usize) -> Vec<T> {
    (1..=steps)
        .map(|m| T::from_usize_lossy(q) - gap * refine.powi(-(m as i32)))
        .collect()
}

/// Evaluates `LHS_d`, `RHS_d` along `ds` (increasing toward `Q`).
pub fn cr_limit_study<T: Real>(f: &DiskField<T>, ds: &[T]) -> Result<LimitTable<T>> {
    if let Some(key) = f.first_non_pluriharmonic() {
        return Err(Error::NotPluriharmonic { j: key.j, k: key.k });
    }
    if ds.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::Parameter("d sequence must be strictly increasing".into()));
    }
    for &d in ds {
        guarded_cr_gap(&f.ctx, d)?;
    }
    let lhs_goal = cr_lhs_target(f)?;
    let rhs_goal = cr_rhs_target(f)?;
    let q = q_of(&f.ctx);
    let rows = ds
        .par_iter()
        .map(|&d| {
            let pair = cr_d_pair(d, f)?;
            Ok(LimitRow {
                parameter: d,
                gap: q - d,
                lhs: pair.lhs,
                rhs: pair.rhs,
                lhs_target: lhs_goal,
                rhs_target: rhs_goal,
                lhs_err: (pair.lhs - lhs_goal).abs(),
                rhs_err: (pair.rhs - rhs_goal).abs(),
                order_running: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitTable::from_rows(rows))
}
