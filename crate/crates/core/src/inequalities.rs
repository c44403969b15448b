//! Both sides of the sharp fractional Sobolev and Moser–Trudinger–Onofri
//! inequalities on `S^n`, the rescaled functionals whose limits connect them
//! as `γ → n/2`, and convergence tables for those limits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{factorial, gauss_legendre_on};
use crate::sphere::{spectrum_p, spectrum_p_endpoint, QuadDiagnostics, ZonalField};
use crate::Real;

/// Smallest admissible endpoint gap `n − 2γ` (or `Q − d`).
pub const ENDPOINT_GUARD: f64 = 1e-3;

/// Default tolerance separating quadrature noise from a violated inequality.
pub const DEFICIT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    SphereSobolev,
    SphereMto,
    CrSobolev,
    CrMto,
}

/// One evaluation of an inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficitRecord<T> {
    pub kind: InequalityKind,
    pub n: usize,
    /// `γ` (sphere) or `d` (CR); `None` for the endpoint inequalities.
    pub parameter: Option<T>,
    pub lhs: T,
    pub rhs: T,
    /// `rhs − lhs`, evaluated in a cancellation-free arrangement.
    pub deficit: T,
    pub field: String,
    pub diagnostics: QuadDiagnostics<T>,
}

impl<T: Real> DeficitRecord<T> {
    pub fn with_field(mut self, descriptor: impl Into<String>) -> Self {
        self.field = descriptor.into();
        self
    }

    /// Deficit is at least `−tolerance`.
    pub fn holds(&self, tolerance: T) -> bool {
        self.deficit >= -tolerance
    }
}

/// Ingredients of a Sobolev pair `base · (⨍|v|^p)^{2/p} ≤ Σ λ_k c_k²`.
///
/// `base` is the eigenvalue on constants. Splitting both sides against the
/// common reference `base · ⨍v²` leaves two nonnegative brackets, and the
/// deficit is their difference.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SobolevParts<T> {
    pub base: T,
    /// `Σ (λ_k − λ_0) c_k² = ⨍ v Λ v − base · ⨍ v²`.
    pub excess: T,
    /// `(⨍|v|^p)^{2/p}`.
    pub power_mean: T,
    /// `⨍ v² = Σ c_k²`.
    pub mean_square: T,
    pub diagnostics: QuadDiagnostics<T>,
}

impl<T: Real> SobolevParts<T> {
    /// `(⨍|v|^p)^{2/p} − ⨍ v²`, nonnegative by Hölder.
    pub fn holder_gap(&self) -> T {
        self.power_mean - self.mean_square
    }

    pub fn lhs(&self) -> T {
        self.base * self.power_mean
    }

    pub fn rhs(&self) -> T {
        self.excess + self.base * self.mean_square
    }

    pub fn deficit(&self) -> T {
        self.excess - self.base * self.holder_gap()
    }

    /// Assembles the parts from coefficients, eigenvalues (index 0 is the
    /// constant mode) and `ln ⨍|v|^p`.
    pub fn assemble(
        coeffs: &[T],
        eigenvalues: &[T],
        exponent: T,
        log_power_mean: T,
        diagnostics: QuadDiagnostics<T>,
    ) -> Self {
        let base = eigenvalues[0];
        let excess = coeffs
            .iter()
            .zip(eigenvalues)
            .skip(1)
            .map(|(&c, &l)| (l - base) * c * c)
            .sum();
        let mean_square = coeffs.iter().map(|&c| c * c).sum();
        let power_mean = (T::lit(2.0) / exponent * log_power_mean).exp();
        Self {
            base,
            excess,
            power_mean,
            mean_square,
            diagnostics,
        }
    }
}

fn half_n<T: Real>(n: usize) -> T {
    T::from_usize_lossy(n) / T::lit(2.0)
}

fn check_gamma<T: Real>(n: usize, gamma: T) -> Result<()> {
    if !(gamma > T::zero() && gamma < half_n(n)) {
        return Err(domain("gamma must lie in (0, n/2)", gamma));
    }
    Ok(())
}

/// `n − 2γ`, rejected below the endpoint guard.
fn guarded_gap<T: Real>(n: usize, gamma: T) -> Result<T> {
    check_gamma(n, gamma)?;
    let gap = T::from_usize_lossy(n) - gamma - gamma;
    if gap < T::lit(ENDPOINT_GUARD) {
        return Err(Error::EndpointProximity {
            gap: gap.to_f64_lossy(),
            guard: ENDPOINT_GUARD,
        });
    }
    Ok(gap)
}

pub(crate) fn sphere_sobolev_parts<T: Real>(gamma: T, v: &ZonalField<T>) -> Result<SobolevParts<T>> {
    let ctx = v.context();
    check_gamma(ctx.n(), gamma)?;
    if v.coeffs().iter().all(|&c| c == T::zero()) {
        return Err(Error::NonPositiveNorm);
    }
    let spectrum = spectrum_p(ctx, gamma)?;
    let n = T::from_usize_lossy(ctx.n());
    let exponent = T::lit(2.0) * n / (n - gamma - gamma);
    let (log_mean, diagnostics) = ctx.adaptive_log_mean_exp(v.coeffs(), |_, value| exponent * value.abs().ln())?;
    Ok(SobolevParts::assemble(
        v.coeffs(),
        &spectrum.eigenvalues,
        exponent,
        log_mean,
        diagnostics,
    ))
}

/// Both sides of the sharp Sobolev inequality
/// `Y(n,γ) (⨍|v|^{2n/(n−2γ)})^{(n−2γ)/n} ≤ ⨍ v P_γ v`.
pub fn sobolev_pair<T: Real>(gamma: T, v: &ZonalField<T>) -> Result<DeficitRecord<T>> {
    let parts = sphere_sobolev_parts(gamma, v)?;
    Ok(DeficitRecord {
        kind: InequalityKind::SphereSobolev,
        n: v.context().n(),
        parameter: Some(gamma),
        lhs: parts.lhs(),
        rhs: parts.rhs(),
        deficit: parts.deficit(),
        field: format!("zonal(K={})", v.context().degree()),
        diagnostics: parts.diagnostics,
    })
}

/// Centered exponential mean `ln ⨍ e^{n (w − w̄)}`.
fn centered_log_exp_mean<T: Real>(w: &ZonalField<T>) -> Result<(T, QuadDiagnostics<T>)> {
    let ctx = w.context();
    let n = T::from_usize_lossy(ctx.n());
    let mean = w.mean();
    ctx.adaptive_log_mean_exp(w.coeffs(), |_, value| n * (value - mean))
}

/// `2 (n − 1)! / n`.
fn mto_weight<T: Real>(n: usize) -> T {
    T::lit(2.0) * factorial::<T>(n - 1) / T::from_usize_lossy(n)
}

/// Both sides of the Moser–Trudinger–Onofri inequality
/// `(2(n−1)!/n) ln ⨍ e^{nw} ≤ ⨍ (w P_{n/2} w + 2(n−1)! w)`.
///
/// The exponential average is taken after subtracting the mean and then the
/// pointwise maximum, so large `w` cannot overflow.
pub fn mto_pair<T: Real>(w: &ZonalField<T>) -> Result<DeficitRecord<T>> {
    let ctx = w.context();
    let n = ctx.n();
    let (centered, diagnostics) = centered_log_exp_mean(w)?;
    let weight = mto_weight::<T>(n);
    let linear = T::lit(2.0) * factorial::<T>(n - 1) * w.mean();
    let energy = crate::sphere::quadratic_form(w, &spectrum_p_endpoint(ctx))?;
    let excess_lhs = weight * centered;
    Ok(DeficitRecord {
        kind: InequalityKind::SphereMto,
        n,
        parameter: None,
        lhs: excess_lhs + linear,
        rhs: energy + linear,
        deficit: energy - excess_lhs,
        field: format!("zonal(K={})", ctx.degree()),
        diagnostics,
    })
}

/// `v = e^{(n/2 − γ) w}` projected onto degrees `≤ K`.
pub fn exponential_field<T: Real>(gamma: T, w: &ZonalField<T>) -> Result<ZonalField<T>> {
    let ctx = w.context();
    check_gamma(ctx.n(), gamma)?;
    let rate = half_n::<T>(ctx.n()) - gamma;
    Ok(ZonalField::project(ctx, |x| (rate * w.eval(x)).exp()))
}

/// Rescaled Sobolev sides `LHS_γ`, `RHS_γ` for the field `w`, and the
/// underlying Sobolev record for `v = e^{(n/2 − γ) w}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointPair<T> {
    pub gamma: T,
    pub lhs: T,
    pub rhs: T,
    pub sobolev: DeficitRecord<T>,
}

/// Evaluates `LHS_γ` and `RHS_γ` together:
///
/// `LHS_γ = 4/(n−2γ)² · Y(n,γ) [(⨍|v|^{2n/(n−2γ)})^{(n−2γ)/n} − ⨍ v²]`,
/// `RHS_γ = 4/(n−2γ)² · [⨍ v P_γ v − Y(n,γ) ⨍ v²]`.
pub fn gamma_pair<T: Real>(gamma: T, w: &ZonalField<T>) -> Result<EndpointPair<T>> {
    let gap = guarded_gap(w.context().n(), gamma)?;
    let v = exponential_field(gamma, w)?;
    let parts = sphere_sobolev_parts(gamma, &v)?;
    let scale = T::lit(4.0) / (gap * gap);
    Ok(EndpointPair {
        gamma,
        lhs: scale * parts.base * parts.holder_gap(),
        rhs: scale * parts.excess,
        sobolev: DeficitRecord {
            kind: InequalityKind::SphereSobolev,
            n: w.context().n(),
            parameter: Some(gamma),
            lhs: parts.lhs(),
            rhs: parts.rhs(),
            deficit: parts.deficit(),
            field: "exp((n/2-gamma) w)".into(),
            diagnostics: parts.diagnostics,
        },
    })
}

pub fn lhs_gamma<T: Real>(gamma: T, w: &ZonalField<T>) -> Result<T> {
    gamma_pair(gamma, w).map(|p| p.lhs)
}

pub fn rhs_gamma<T: Real>(gamma: T, w: &ZonalField<T>) -> Result<T> {
    gamma_pair(gamma, w).map(|p| p.rhs)
}

/// Limit of `LHS_γ`: `(2(n−1)!/n) ln ⨍ e^{n(w − w̄)}`.
pub fn lhs_target<T: Real>(w: &ZonalField<T>) -> Result<T> {
    let (centered, _) = centered_log_exp_mean(w)?;
    Ok(mto_weight::<T>(w.context().n()) * centered)
}

/// Limit of `RHS_γ`: `⨍ w P_{n/2} w`.
pub fn rhs_target<T: Real>(w: &ZonalField<T>) -> Result<T> {
    crate::sphere::quadratic_form(w, &spectrum_p_endpoint(w.context()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow<T> {
    /// `γ` or `d`.
    pub parameter: T,
    /// Distance to the endpoint: `n − 2γ` or `Q − d`.
    pub gap: T,
    pub lhs: T,
    pub rhs: T,
    pub lhs_target: T,
    pub rhs_target: T,
    pub lhs_err: T,
    pub rhs_err: T,
    /// Order estimated from this row and the previous one, using the larger
    /// of the two errors.
    pub order_running: Option<T>,
}

/// Convergence table of the rescaled functionals toward their endpoint limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable<T> {
    pub rows: Vec<LimitRow<T>>,
    /// Least-squares slope of `ln lhs_err` against `ln gap`.
    pub lhs_order: Option<T>,
    pub rhs_order: Option<T>,
    /// Richardson extrapolation of the last two rows using the fitted order.
    pub lhs_extrapolated: Option<T>,
    pub rhs_extrapolated: Option<T>,
}

impl<T: Real> LimitTable<T> {
    pub(crate) fn from_rows(mut rows: Vec<LimitRow<T>>) -> Self {
        for i in 1..rows.len() {
            let (a, b) = (&rows[i - 1], &rows[i]);
            let ea = a.lhs_err.max(a.rhs_err);
            let eb = b.lhs_err.max(b.rhs_err);
            let order = if ea > T::zero() && eb > T::zero() {
                Some((ea / eb).ln() / (a.gap / b.gap).ln())
            } else {
                None
            };
            rows[i].order_running = order;
        }
        let gaps: Vec<T> = rows.iter().map(|r| r.gap).collect();
        let lhs_order = fitted_order(&gaps, &rows.iter().map(|r| r.lhs_err).collect::<Vec<_>>());
        let rhs_order = fitted_order(&gaps, &rows.iter().map(|r| r.rhs_err).collect::<Vec<_>>());
        let lhs_extrapolated = richardson(&rows, lhs_order, |r| r.lhs);
        let rhs_extrapolated = richardson(&rows, rhs_order, |r| r.rhs);
        Self {
            rows,
            lhs_order,
            rhs_order,
            lhs_extrapolated,
            rhs_extrapolated,
        }
    }

    /// Both error columns strictly decrease from row `skip` onward.
    pub fn errors_decreasing(&self, skip: usize) -> bool {
        self.rows.windows(2).skip(skip).all(|w| {
            w[1].lhs_err < w[0].lhs_err && w[1].rhs_err < w[0].rhs_err
        })
    }
}

/// Least-squares slope of `ln err` versus `ln gap`. `None` if fewer than two
/// rows or any error is not strictly positive.
pub fn fitted_order<T: Real>(gaps: &[T], errors: &[T]) -> Option<T> {
    if gaps.len() < 2 || errors.iter().any(|&e| !(e > T::zero())) {
        return None;
    }
    let xs: Vec<T> = gaps.iter().map(|g| g.ln()).collect();
    let ys: Vec<T> = errors.iter().map(|e| e.ln()).collect();
    let count = T::from_usize_lossy(xs.len());
    let mx = xs.iter().copied().sum::<T>() / count;
    let my = ys.iter().copied().sum::<T>() / count;
    let sxy: T = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    if sxx == T::zero() {
        return None;
    }
    Some(sxy / sxx)
}

fn richardson<T: Real>(rows: &[LimitRow<T>], order: Option<T>, value: impl Fn(&LimitRow<T>) -> T) -> Option<T> {
    let order = order?;
    let [.., a, b] = rows else { return None };
    let ratio = (a.gap / b.gap).powf(order);
    Some(value(b) + (value(b) - value(a)) / (ratio - T::one()))
}

/// Evaluates `LHS_γ`, `RHS_γ` along `gammas` (increasing toward `n/2`) and
/// tabulates their distance to the endpoint targets.
pub fn limit_study<T: Real>(w: &ZonalField<T>, gammas: &[T]) -> Result<LimitTable<T>> {
    let n = w.context().n();
    if gammas.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::Parameter("gamma sequence must be strictly increasing".into()));
    }
    for &g in gammas {
        guarded_gap(n, g)?;
    }
    let lhs_goal = lhs_target(w)?;
    let rhs_goal = rhs_target(w)?;
    let rows = gammas
        .par_iter()
        .map(|&gamma| {
            let pair = gamma_pair(gamma, w)?;
            Ok(LimitRow {
                parameter: gamma,
                gap: T::from_usize_lossy(n) - gamma - gamma,
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

/// `γ_m = n/2 − gap · refine^{−m}` for `m = 1..=steps`.
pub fn gamma_sequence<T: Real>(n: usize, gap: T, refine: T, steps: usize) -> Vec<T> {
    (1..=steps)
        .map(|m| half_n::<T>(n) - gap * refine.powi(-(m as i32)))
        .collect()
}

/// Outcome of the Taylor-remainder check for `v = 1 + (n/2 − γ) w + (n − 2γ)² f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorRemainder<T> {
    pub gamma: T,
    /// `max |f|` over the context nodes.
    pub sup: T,
    /// Largest difference between the direct remainder and its integral form.
    pub representation_error: T,
    /// `(1/8) sup w² · e^{(n − 2γ) sup|w| / 2}`.
    pub bound: T,
}

/// Computes `f = (v − 1 − (n/2 − γ) w) / (n − 2γ)²` at the context nodes and
/// compares it with `(1/4) w² ∫₀¹ (1 − s) e^{(n−2γ) w s / 2} ds`, the integral
/// taken by 32-point Gauss–Legendre.
pub fn taylor_remainder_check<T: Real>(gamma: T, w: &ZonalField<T>) -> Result<TaylorRemainder<T>> {
    let gap = guarded_gap(w.context().n(), gamma)?;
    let half = T::lit(0.5);
    let rule = gauss_legendre_on(32, T::zero(), T::one())?;
    let values = w.values_at_nodes();
    let mut sup = T::zero();
    let mut representation_error = T::zero();
    let mut sup_w = T::zero();
    for &wi in &values {
        let a = half * gap * wi;
        let direct = (a.exp_m1() - a) / (gap * gap);
        let integral = rule.integrate(|s| (T::one() - s) * (a * s).exp());
        let closed = wi * wi / T::lit(4.0) * integral;
        sup = sup.max(direct.abs());
        representation_error = representation_error.max((direct - closed).abs());
        sup_w = sup_w.max(wi.abs());
    }
    let bound = sup_w * sup_w / T::lit(8.0) * (half * gap * sup_w).exp();
    Ok(TaylorRemainder {
        gamma,
        sup,
        representation_error,
        bound,
    })
}
