//! Three-term recurrences for Gegenbauer, Jacobi and disk polynomials.

use crate::error::{domain, Error, Result};
use crate::Real;

fn check_unit_interval<T: Real>(x: T) -> Result<()> {
    if x.abs() > T::one() || x.is_nan() {
        return Err(domain("argument must lie in [-1, 1]", x));
    }
    Ok(())
}

fn check_jacobi_params<T: Real>(alpha: T, beta: T) -> Result<()> {
    if !(alpha > -T::one()) || !(beta > -T::one()) {
        return Err(Error::Parameter(format!(
            "Jacobi parameters must exceed -1 (alpha={alpha}, beta={beta})"
        )));
    }
    Ok(())
}

/// Gegenbauer polynomial `C_k^λ(x)`.
///
/// For `λ = 0` the Chebyshev convention `T_k(x) = cos(k arccos x)` is used,
/// since the standard normalization of `C_k^0` vanishes for `k ≥ 1`.
pub fn gegenbauer_eval<T: Real>(k: usize, lambda: T, x: T) -> Result<T> {
    check_unit_interval(x)?;
    if lambda < T::zero() {
        return Err(domain("Gegenbauer parameter must be >= 0", lambda));
    }
    Ok(*gegenbauer_all(k, lambda, x).last().unwrap())
}

/// Values `C_0^λ(x), …, C_k^λ(x)` (Chebyshev convention at `λ = 0`).
/// No domain checks; callers validate.
pub fn gegenbauer_all<T: Real>(k: usize, lambda: T, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(T::one());
    if k == 0 {
        return out;
    }
    let two = T::lit(2.0);
    if lambda == T::zero() {
        out.push(x);
        for i in 2..=k {
            let next = two * x * out[i - 1] - out[i - 2];
            out.push(next);
        }
        return out;
    }
    out.push(two * lambda * x);
    for i in 2..=k {
        let fi = T::from_usize_lossy(i);
        let next = (two * (fi + lambda - T::one()) * x * out[i - 1]
            - (fi + two * lambda - two) * out[i - 2])
            / fi;
        out.push(next);
    }
    out
}

/// Endpoint value `C_k^λ(1) = binom(k + 2λ − 1, k)`, or 1 under the `λ = 0` convention.
pub fn gegenbauer_at_one<T: Real>(k: usize, lambda: T) -> T {
    if lambda == T::zero() {
        return T::one();
    }
    let two_lambda = lambda + lambda;
    (1..=k).fold(T::one(), |acc, i| {
        let fi = T::from_usize_lossy(i);
        acc * (fi + two_lambda - T::one()) / fi
    })
}

/// Jacobi polynomial `P_m^{(α,β)}(x)`.
pub fn jacobi_eval<T: Real>(m: usize, alpha: T, beta: T, x: T) -> Result<T> {
    check_jacobi_params(alpha, beta)?;
    check_unit_interval(x)?;
    Ok(*jacobi_all(m, alpha, beta, x).last().unwrap())
}

/// Values `P_0^{(α,β)}(x), …, P_m^{(α,β)}(x)`. No domain checks.
pub fn jacobi_all<T: Real>(m: usize, alpha: T, beta: T, x: T) -> Vec<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(m + 1);
    out.push(one);
    if m == 0 {
        return out;
    }
    let ab = alpha + beta;
    out.push((alpha + one) + (ab + two) * (x - one) / two);
    for k in 2..=m {
        let fk = T::from_usize_lossy(k);
        let s = two * fk + ab;
        let a1 = two * fk * (fk + ab) * (s - two);
        let a2 = (s - one) * (s * (s - two) * x + alpha * alpha - beta * beta);
        let a3 = two * (fk + alpha - one) * (fk + beta - one) * s;
        let next = (a2 * out[k - 1] - a3 * out[k - 2]) / a1;
        out.push(next);
    }
    out
}

/// `P_m^{(α,β)}(1) = binom(m + α, m)`.
pub fn jacobi_at_one<T: Real>(m: usize, alpha: T) -> T {
    (1..=m).fold(T::one(), |acc, i| {
        let fi = T::from_usize_lossy(i);
        acc * (fi + alpha) / fi
    })
}

/// Disk polynomial `R^{(n−1)}_{j,k}(r e^{iφ})`, returned as `(re, im)`.
///
/// `R_{j,k}(z) = r^{|j−k|} e^{i(j−k)φ} P_m^{(n−1,|j−k|)}(2r² − 1) / P_m^{(n−1,|j−k|)}(1)`
/// with `m = min(j, k)`, so that `R_{j,k}(e^{iφ}) = e^{i(j−k)φ}`.
pub fn disk_poly_eval<T: Real>(j: usize, k: usize, n: usize, r: T, phi: T) -> Result<(T, T)> {
    if n == 0 {
        return Err(Error::Parameter("CR dimension n must be >= 1".into()));
    }
    if !(r >= T::zero() && r <= T::one()) {
        return Err(domain("disk radius must lie in [0, 1]", r));
    }
    let radial = disk_radial(j.min(k), j.abs_diff(k), n, r);
    let angle = (T::from_usize_lossy(j) - T::from_usize_lossy(k)) * phi;
    Ok((radial * angle.cos(), radial * angle.sin()))
}

/// Radial factor `r^m P_k^{(n−1,m)}(2r² − 1) / P_k^{(n−1,m)}(1)` of the disk polynomial
/// with angular frequency `m` and lower degree `k`.
pub(crate) fn disk_radial<T: Real>(k: usize, m: usize, n: usize, r: T) -> T {
    let alpha = T::from_usize_lossy(n - 1);
    let beta = T::from_usize_lossy(m);
    let s = T::lit(2.0) * r * r - T::one();
    let p = *jacobi_all(k, alpha, beta, s).last().unwrap();
    r.powi(m as i32) * p / jacobi_at_one(k, alpha)
}
