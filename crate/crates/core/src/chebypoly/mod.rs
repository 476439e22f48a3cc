//! Polynomial substrate: monomial-basis polynomials, the `psi` basis,
//! interpolation and root finding.

mod interp;
mod poly;
mod psi;
mod roots;

pub use interp::{interpolate, interpolate_psi, leja_order, poly_from_roots, DUPLICATE_NODE_TOL};
pub use poly::Poly;
pub use psi::{poly_to_psi, psi_eval, psi_mul, psi_poly, psi_to_poly, psi_zeros, PsiSeries};
pub use roots::{
    aberth, poly_roots, poly_roots_with, scaled_residual, AberthOptions, AberthOutcome, ROOT_RESIDUAL_TOL,
};
