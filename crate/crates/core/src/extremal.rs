//! Recovery of the sharp Sobolev constant by minimizing the Rayleigh-type
//! quotient `R(v) = ⨍ v P_γ v / (⨍|v|^p)^{2/p}`, `p = 2n/(n − 2γ)`, over
//! truncated zonal fields, and the conformal factors that attain equality.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::inequalities::{sobolev_pair, ENDPOINT_GUARD};
use crate::specfun::gauss_jacobi_rule;
use crate::sphere::{spectrum_p, SphereContext, ZonalField};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Relative change of the quotient fell below the tolerance.
    Converged,
    /// The starting point already had a vanishing gradient.
    Stationary,
    MaxIterations,
    /// Backtracking could not find a decrease.
    LineSearchStalled,
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizerOptions {
    pub max_iterations: usize,
    /// Stop once `|R_{i} − R_{i+1}| ≤ rel_tol · R_{i+1}`.
    pub rel_tol: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            rel_tol: 1e-12,
            armijo: 1e-4,
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerReport<T> {
    pub n: usize,
    pub gamma: T,
    /// Truncation degree `K`.
    pub degree: usize,
    pub seed: Option<u64>,
    pub iterations: usize,
    /// Quotient of the final iterate, with `⨍|v|^p` from adaptive quadrature.
    pub final_value: T,
    pub sharp_constant: T,
    /// `final_value − Y(n,γ)`.
    pub gap: T,
    /// Quotient after every accepted step, starting with the initial value.
    pub trace: Vec<T>,
    /// Coefficients of the final iterate, scaled to `⨍|v|^p = 1`.
    pub coeffs: Vec<T>,
    pub termination: Termination,
}

/// Starting point of a descent.
#[derive(Debug, Clone)]
pub enum Init<T> {
    Field(ZonalField<T>),
    /// `ZonalField::random(ctx, K, seed)`.
    Seed(u64),
}

/// The quotient on a fixed Gauss rule large enough to integrate `|v|^p`
/// exactly whenever `p` is an even integer.
#[derive(Debug, Clone)]
pub struct Quotient<T> {
    gamma: T,
    exponent: T,
    eigenvalues: Vec<T>,
    weights: Vec<T>,
    /// `[k][i]`.
    basis: Vec<Vec<T>>,
}

impl<T: Real> Quotient<T> {
    pub fn new(ctx: &Arc<SphereContext<T>>, gamma: T) -> Result<Self> {
        let n = T::from_usize_lossy(ctx.n());
        let gap = n - gamma - gamma;
        if !(gamma > T::zero() && gap > T::zero()) {
            return Err(domain("gamma must lie in (0, n/2)", gamma));
        }
        if gap < T::lit(ENDPOINT_GUARD) {
            return Err(Error::EndpointProximity {
                gap: gap.to_f64_lossy(),
                guard: ENDPOINT_GUARD,
            });
        }
        let exponent = T::lit(2.0) * n / gap;
        let k = ctx.degree();
        // exact for degree ceil(p)·K
        let needed = (exponent.ceil().to_f64_lossy() as usize * k) / 2 + 1;
        let size = needed.max(ctx.quadrature().len());
        let half = T::from_usize_lossy(ctx.n()) / T::lit(2.0) - T::one();
        let rule = gauss_jacobi_rule(size, half, half)?;
        let weights = rule.normalized_weights();
        let columns: Vec<Vec<T>> = rule.nodes.iter().map(|&x| ctx.basis_values(x)).collect();
        let basis = (0..=k).map(|j| columns.iter().map(|col| col[j]).collect()).collect();
        Ok(Self {
            gamma,
            exponent,
            eigenvalues: spectrum_p(ctx, gamma)?.eigenvalues,
            weights,
            basis,
        })
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    fn values(&self, coeffs: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.weights.len()];
        for (&c, row) in coeffs.iter().zip(&self.basis) {
            if c != T::zero() {
                for (vi, &e) in v.iter_mut().zip(row) {
                    *vi = *vi + c * e;
                }
            }
        }
        v
    }

    fn energy(&self, coeffs: &[T]) -> T {
        coeffs.iter().zip(&self.eigenvalues).map(|(&c, &l)| l * c * c).sum()
    }

    /// `⨍|v|^p`.
    pub fn power_integral(&self, coeffs: &[T]) -> T {
        let p = self.exponent;
        self.values(coeffs)
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * v.abs().powf(p))
            .sum()
    }

    pub fn value(&self, coeffs: &[T]) -> Result<T> {
        self.check(coeffs)?;
        let denom = self.power_integral(coeffs).powf(T::lit(2.0) / self.exponent);
        if !(denom > T::zero()) {
            return Err(Error::NonPositiveNorm);
        }
        Ok(self.energy(coeffs) / denom)
    }

    /// `R` and `∇R`.
    ///
    /// With `D = (⨍|v|^p)^{2/p}`: `∇R = (2Λc − R ∇D) / D` and
    /// `∇_k D = 2 (⨍|v|^p)^{2/p − 1} ⨍ |v|^{p−2} v e_k`.
    pub fn value_and_gradient(&self, coeffs: &[T]) -> Result<(T, Vec<T>)> {
        self.check(coeffs)?;
        let p = self.exponent;
        let two = T::lit(2.0);
        let values = self.values(coeffs);
        let mut integral = T::zero();
        let mut chain = Vec::with_capacity(values.len());
        for (&v, &w) in values.iter().zip(&self.weights) {
            let a = v.abs();
            integral = integral + w * a.powf(p);
            // |v|^{p−2} v, written to stay finite at v = 0 for p ≥ 2
            chain.push(if a == T::zero() { T::zero() } else { w * a.powf(p - T::one()) * v.signum() });
        }
        let denom = integral.powf(two / p);
        if !(denom > T::zero()) {
            return Err(Error::NonPositiveNorm);
        }
        let quotient = self.energy(coeffs) / denom;
        let scale = two * integral.powf(two / p - T::one());
        let grad = coeffs
            .iter()
            .zip(&self.eigenvalues)
            .zip(&self.basis)
            .map(|((&c, &l), row)| {
                let g: T = row.iter().zip(&chain).map(|(&e, &h)| e * h).sum();
                (two * l * c - quotient * scale * g) / denom
            })
            .collect();
        Ok((quotient, grad))
    }

    fn check(&self, coeffs: &[T]) -> Result<()> {
        if coeffs.len() != self.eigenvalues.len() {
            return Err(Error::SizeMismatch {
                expected: self.eigenvalues.len(),
                got: coeffs.len(),
            });
        }
        Ok(())
    }

    fn normalize(&self, coeffs: &mut [T]) -> Result<()> {
        let integral = self.power_integral(coeffs);
        if !(integral > T::zero()) || !integral.is_finite() {
            return Err(Error::NonPositiveNorm);
        }
        let factor = integral.powf(-T::one() / self.exponent);
        for c in coeffs.iter_mut() {
            *c = *c * factor;
        }
        Ok(())
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Gradient descent on the quotient with Barzilai–Borwein steps, Armijo
/// backtracking and renormalization to `⨍|v|^p = 1` after every step.
pub fn minimize_quotient<T: Real>(
    ctx: &Arc<SphereContext<T>>,
    gamma: T,
    init: Init<T>,
    opts: &OptimizerOptions,
) -> Result<OptimizerReport<T>> {
    let quotient = Quotient::new(ctx, gamma)?;
    let (mut c, seed) = match init {
        Init::Field(f) => {
            if !Arc::ptr_eq(f.context(), ctx) && f.context().n() != ctx.n() {
                return Err(Error::ContextMismatch);
            }
            (f.coeffs().to_vec(), None)
        }
        Init::Seed(s) => (ZonalField::random(ctx, ctx.degree(), s).coeffs().to_vec(), Some(s)),
    };
    quotient.check(&c)?;
    quotient.normalize(&mut c)?;
    let (mut value, mut grad) = quotient.value_and_gradient(&c)?;
    let mut trace = vec![value];
    let stationary_tol = T::epsilon() * T::lit(64.0) * value.abs().max(T::one());
    let rel_tol = T::lit(opts.rel_tol);
    let armijo = T::lit(opts.armijo);
    let mut termination = Termination::MaxIterations;
    let mut step = T::one() / value.abs().max(T::one());
    let mut iterations = 0;

    if dot(&grad, &grad).sqrt() <= stationary_tol {
        termination = Termination::Stationary;
    } else {
        while iterations < opts.max_iterations {
            iterations += 1;
            let g2 = dot(&grad, &grad);
            let mut trial_step = step;
            let mut accepted = None;
            for _ in 0..opts.max_backtracks {
                let mut trial: Vec<T> = c.iter().zip(&grad).map(|(&x, &g)| x - trial_step * g).collect();
                if quotient.normalize(&mut trial).is_ok() {
                    if let Ok((v, g)) = quotient.value_and_gradient(&trial) {
                        if v <= value - armijo * trial_step * g2 {
                            accepted = Some((trial, v, g));
                            break;
                        }
                    }
                }
                trial_step = trial_step / T::lit(2.0);
            }
            let Some((next, next_value, next_grad)) = accepted else {
                termination = Termination::LineSearchStalled;
                break;
            };
            let s: Vec<T> = next.iter().zip(&c).map(|(&a, &b)| a - b).collect();
            let y: Vec<T> = next_grad.iter().zip(&grad).map(|(&a, &b)| a - b).collect();
            let sy = dot(&s, &y);
            step = if sy > T::zero() { dot(&s, &s) / sy } else { trial_step * T::lit(2.0) };
            let change = (value - next_value).abs();
            c = next;
            value = next_value;
            grad = next_grad;
            trace.push(value);
            if change <= rel_tol * value.abs() {
                termination = Termination::Converged;
                break;
            }
        }
    }

    let field = ZonalField::from_coeffs(ctx, &c)?;
    let record = sobolev_pair(gamma, &field)?;
    let sharp = spectrum_p(ctx, gamma)?.eigenvalues[0];
    let final_value = sharp * record.rhs / record.lhs;
    Ok(OptimizerReport {
        n: ctx.n(),
        gamma,
        degree: ctx.degree(),
        seed,
        iterations,
        final_value,
        sharp_constant: sharp,
        gap: final_value - sharp,
        trace,
        coeffs: c,
        termination,
    })
}

/// Best-of report over seeded random starts `base_seed, base_seed + 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiStartReport<T> {
    pub best: OptimizerReport<T>,
    pub runs: Vec<OptimizerReport<T>>,
}

/// Runs independent descents concurrently and keeps the lowest final value.
pub fn multistart<T: Real>(
    ctx: &Arc<SphereContext<T>>,
    gamma: T,
    starts: usize,
    base_seed: u64,
    opts: &OptimizerOptions,
) -> Result<MultiStartReport<T>> {
    if starts == 0 {
        return Err(Error::Parameter("at least one start is required".into()));
    }
    let runs = (0..starts as u64)
        .into_par_iter()
        .map(|i| minimize_quotient(ctx, gamma, Init::Seed(base_seed.wrapping_add(i)), opts))
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .iter()
        .min_by(|a, b| a.final_value.partial_cmp(&b.final_value).expect("finite quotients"))
        .expect("nonempty")
        .clone();
    Ok(MultiStartReport { best, runs })
}

/// Threshold on the relative tail energy above which truncation is reported.
pub const TAIL_WARNING: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ConformalFactor<T> {
    pub t: T,
    pub field: ZonalField<T>,
    /// `1 − Σ c_k² / ⨍ v_t²`: energy beyond degree `K`.
    pub tail_ratio: T,
    pub truncated: bool,
}

/// `v_t(θ) = (cosh t + sinh t · cos θ)^{−(n−2γ)/2}` projected to degree `K`.
pub fn conformal_factor_field<T: Real>(ctx: &Arc<SphereContext<T>>, t: T, gamma: T) -> Result<ConformalFactor<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(domain("t must be nonnegative", t));
    }
    let n = T::from_usize_lossy(ctx.n());
    if !(gamma > T::zero() && gamma + gamma < n) {
        return Err(domain("gamma must lie in (0, n/2)", gamma));
    }
    if t == T::zero() {
        return Ok(ConformalFactor {
            t,
            field: ZonalField::constant(ctx, T::one()),
            tail_ratio: T::zero(),
            truncated: false,
        });
    }
    let power = -(n - gamma - gamma) / T::lit(2.0);
    let (ch, sh) = (t.cosh(), t.sinh());
    let log_v = move |x: T| power * (ch + sh * x).ln();
    let field = ZonalField::project(ctx, |x| log_v(x).exp());
    let (log_total, _) = ctx.adaptive_log_mean_exp(&[], |x, _| T::lit(2.0) * log_v(x))?;
    let total = log_total.exp();
    let tail_ratio = ((total - field.mean_square()) / total).max(T::zero());
    let truncated = tail_ratio > T::lit(TAIL_WARNING);
    if truncated {
        log::warn!("conformal factor at t = {t} loses {tail_ratio} of its energy beyond degree {}", ctx.degree());
    }
    Ok(ConformalFactor {
        t,
        field,
        tail_ratio,
        truncated,
    })
}
