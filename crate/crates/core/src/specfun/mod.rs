//! Special functions and quadrature primitives.

mod gamma;
mod poly;
mod quadrature;
mod tridiag;

pub use gamma::{factorial, gamma_ratio, log_gamma, rising_factorial};
pub(crate) use poly::disk_radial;
pub use poly::{
    disk_poly_eval, gegenbauer_all, gegenbauer_at_one, gegenbauer_eval, jacobi_all,
    jacobi_at_one, jacobi_eval,
};
pub use quadrature::{gauss_jacobi_rule, gauss_legendre_on, jacobi_mass, QuadratureRule};
pub use tridiag::tridiagonal_eigen;
