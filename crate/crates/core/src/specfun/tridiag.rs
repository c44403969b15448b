//! Implicit-shift QL iteration for symmetric tridiagonal matrices.
//!
//! Only the first component of every eigenvector is accumulated, which is all
//! the Golub–Welsch construction needs; the cost is `O(n²)` instead of `O(n³)`.

use crate::error::{Error, Result};
use crate::Real;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`).
///
/// Returns eigenvalues in ascending order and, for each, the first component of
/// its unit eigenvector.
pub fn tridiagonal_eigen<T: Real>(diag: &[T], off: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if off.len() + 1 != n {
        return Err(Error::SizeMismatch {
            expected: n - 1,
            got: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.iter().copied().chain(std::iter::once(T::zero())).collect();
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    let eps = T::epsilon();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::Parameter(format!(
                    "tridiagonal QL failed to converge for eigenvalue {l}"
                )));
            }
            // Wilkinson-type shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = (g * g + T::one()).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated_early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated_early {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    Ok((
        order.iter().map(|&i| d[i]).collect(),
        order.iter().map(|&i| z[i]).collect(),
    ))
}
