//! Forward and inverse spectral problems for the Sturm-Liouville equation with
//! frozen argument
//!
//! ```text
//! -y''(x) + q(x) y(a) = lambda y(x),   y(0) = y(pi) = 0,
//! ```
//!
//! and for its finite-difference discretization
//!
//! ```text
//! y[j+1] + y[j-1] - w[j] y[m] = mu y[j],   y[0] = y[l+1] = 0,
//! ```
//!
//! with `h = pi / (l + 1)`, `w[j] = h^2 q(x[j])` and `mu = 2 - h^2 lambda`.
//!
//! The crate is layered bottom-up:
//!
//! * [`chebypoly`]: polynomials in the monomial basis and in the basis of
//!   `psi_n(mu) = U_{n-1}(mu / 2)`, interpolation and root finding.
//! * [`discrete`]: the discrete problem, its characteristic polynomial and
//!   spectrum.
//! * [`inverse`]: recovery of `w` from discrete eigenvalues in the
//!   non-degenerate, degenerate and symmetric configurations.
//! * [`continuous`]: characteristic functions and eigenvalues of the
//!   continuous problem for `a = pi / 2`, and a registry of benchmark
//!   potentials.
//! * [`reconstruct`]: recovery of a symmetric continuous potential from
//!   finitely many eigenvalues through corrected discrete surrogates, plus
//!   convergence diagnostics.

pub mod chebypoly;
pub mod continuous;
pub mod discrete;
mod error;
pub mod inverse;
pub mod reconstruct;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Greatest common divisor.
pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
