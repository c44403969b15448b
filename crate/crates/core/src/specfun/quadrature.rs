//! Gauss–Jacobi rules by the Golub–Welsch construction.

use serde::Serialize;

use super::gamma::log_gamma;
use super::tridiag::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::Real;

/// Gauss rule for the weight `(1 − x)^α (1 + x)^β` on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule<T> {
    pub alpha: T,
    pub beta: T,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of the weights; equals `∫ (1 − x)^α (1 + x)^β dx`.
    pub fn mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weights rescaled to sum to one, for averages against the normalized weight.
    pub fn normalized_weights(&self) -> Vec<T> {
        let mass = self.mass();
        self.weights.iter().map(|&w| w / mass).collect()
    }
}

/// Total mass `2^{α+β+1} Γ(α+1) Γ(β+1) / Γ(α+β+2)` of the Jacobi weight.
pub fn jacobi_mass<T: Real>(alpha: T, beta: T) -> Result<T> {
    let one = T::one();
    let ln2 = T::LN_2();
    Ok(((alpha + beta + one) * ln2 + log_gamma(alpha + one)? + log_gamma(beta + one)?
        - log_gamma(alpha + beta + T::lit(2.0))?)
    .exp())
}

/// Gauss–Jacobi rule with `size` nodes.
pub fn gauss_jacobi_rule<T: Real>(size: usize, alpha: T, beta: T) -> Result<QuadratureRule<T>> {
    if size == 0 {
        return Err(Error::Parameter("quadrature size must be >= 1".into()));
    }
    if !(alpha > -T::one()) || !(beta > -T::one()) {
        return Err(Error::Parameter(format!(
            "Jacobi weight exponents must exceed -1 (alpha={alpha}, beta={beta})"
        )));
    }
    let (diag, off) = jacobi_matrix(size, alpha, beta);
    let (nodes, first) = tridiagonal_eigen(&diag, &off)?;
    let mass = jacobi_mass(alpha, beta)?;
    let weights = first.iter().map(|&v| mass * v * v).collect();
    Ok(QuadratureRule {
        alpha,
        beta,
        nodes,
        weights,
    })
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<T: Real>(size: usize, a: T, b: T) -> Result<QuadratureRule<T>> {
    let mut rule = gauss_jacobi_rule(size, T::zero(), T::zero())?;
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    for x in rule.nodes.iter_mut() {
        *x = mid + half * *x;
    }
    for w in rule.weights.iter_mut() {
        *w = *w * half;
    }
    Ok(rule)
}

/// Symmetric Jacobi matrix of the orthonormal Jacobi polynomials.
fn jacobi_matrix<T: Real>(size: usize, alpha: T, beta: T) -> (Vec<T>, Vec<T>) {
    let one = T::one();
    let two = T::lit(2.0);
    let ab = alpha + beta;
    let diff_sq = beta * beta - alpha * alpha;
    let diag = (0..size)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + two)
            } else {
                let s = two * T::from_usize_lossy(k) + ab;
                diff_sq / (s * (s + two))
            }
        })
        .collect();
    let off = (1..size)
        .map(|k| {
            let fk = T::from_usize_lossy(k);
            let s = two * fk + ab;
            let b2 = if k == 1 {
                // (k + α + β) cancels against (2k + α + β − 1); safe when α + β = −1
                T::lit(4.0) * (one + alpha) * (one + beta) / ((ab + two).powi(2) * (ab + T::lit(3.0)))
            } else {
                T::lit(4.0) * fk * (fk + alpha) * (fk + beta) * (fk + ab)
                    / (s * s * (s + one) * (s - one))
            };
            b2.sqrt()
        })
        .collect();
    (diag, off)
}
