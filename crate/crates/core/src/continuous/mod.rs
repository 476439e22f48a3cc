//! The continuous problem `-y'' + q(x) y(a) = lambda y`, `y(0) = y(pi) = 0`,
//! for the frozen point `a = pi/2`.
//!
//! Its eigenvalues are the degenerate values `(2k)^2` plus `rho_n^2` for odd
//! `n`, where `rho_n` are the zeros of
//! `R(rho) = 2 cos(rho pi/2) + int_0^{pi/2} p(t) sin(rho t)/rho dt`.

mod potential;
mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

pub use potential::{Constant, Potential, PotentialRegistry, Quadratic, SampledPotential, Tent, Zero, SERIES_RADIUS};
pub use quadrature::{integrate, QUADRATURE_TOL};

use crate::{Error, Result};

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// ... or once `|R|` at the midpoint is below this times `1 + rho`.
pub const BISECTION_RESIDUAL: f64 = 1e-14;

fn panels_for(rho: Complex64, length: f64) -> usize {
    2 + (rho.norm() * length / PI).ceil() as usize
}

/// `sin(rho t) / rho`, with the `rho -> 0` limit `t`.
fn sinc_kernel(rho: Complex64, t: f64) -> Complex64 {
    if rho == Complex64::new(0.0, 0.0) {
        Complex64::new(t, 0.0)
    } else {
        (rho * t).sin() / rho
    }
}

/// `R(rho)` via the closed form when the potential has one, otherwise by
/// quadrature.
pub fn r_eval(pot: &dyn Potential, rho: Complex64) -> Result<Complex64> {
    match pot.closed_r(rho) {
        Some(r) => Ok(r),
        None => r_quadrature(pot, rho),
    }
}

/// `R(rho)` by quadrature regardless of any closed form.
pub fn r_quadrature(pot: &dyn Potential, rho: Complex64) -> Result<Complex64> {
    let integral = integrate(
        |t| sinc_kernel(rho, t) * pot.p(t),
        0.0,
        FRAC_PI_2,
        panels_for(rho, FRAC_PI_2),
    )?;
    Ok(2.0 * (rho * FRAC_PI_2).cos() + integral)
}

/// `Delta(lambda) = sin(rho pi/2)/rho * R(rho)`, `rho = sqrt(lambda)`.
pub fn delta_eval(pot: &dyn Potential, lambda: Complex64) -> Result<Complex64> {
    let rho = lambda.sqrt();
    Ok(sinc_kernel(rho, FRAC_PI_2) * r_eval(pot, rho)?)
}

/// `Delta(lambda) = C(0) S(pi) - C(pi) S(0)` for an arbitrary frozen point
/// `a`, from
/// `C(x) = cos(rho (x - a)) + int_a^x q(t) sin(rho (x - t))/rho dt`,
/// `S(x) = sin(rho (x - a))/rho`.
pub fn delta_determinant(pot: &dyn Potential, lambda: Complex64, a: f64) -> Result<Complex64> {
    let rho = lambda.sqrt();
    let c_at = |x: f64| -> Result<Complex64> {
        let integral = integrate(
            |t| sinc_kernel(rho, x - t) * pot.q(t),
            a,
            x,
            panels_for(rho, (x - a).abs()),
        )?;
        Ok((rho * (x - a)).cos() + integral)
    };
    let s_at = |x: f64| sinc_kernel(rho, x - a);
    Ok(c_at(0.0)? * s_at(PI) - c_at(PI)? * s_at(0.0))
}

/// `(2 sin(n pi/2) / pi) int_0^{pi/2} p(t) sin(n t) dt`, the first-order
/// shift of `lambda_n` away from `n^2` for odd `n`.
pub fn first_order_shift(pot: &dyn Potential, n: usize) -> Result<f64> {
    let nf = n as f64;
    let integral = integrate(
        |t| Complex64::new(pot.p(t) * (nf * t).sin(), 0.0),
        0.0,
        FRAC_PI_2,
        panels_for(Complex64::new(nf, 0.0), FRAC_PI_2),
    )?;
    Ok(2.0 * (nf * FRAC_PI_2).sin() / PI * integral.re)
}

/// Eigenvalues up to index `n_max`, split by parity of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousSpectrum {
    /// `(n, lambda_n)` for odd `n`.
    pub odd: Vec<(usize, f64)>,
    /// `(n, n^2)` for even `n`.
    pub even: Vec<(usize, f64)>,
}

impl ContinuousSpectrum {
    pub fn lambda(&self, n: usize) -> Option<f64> {
        let list = if n % 2 == 1 { &self.odd } else { &self.even };
        list.iter().find(|(k, _)| *k == n).map(|&(_, v)| v)
    }

    pub fn odd_values(&self) -> Vec<f64> {
        self.odd.iter().map(|&(_, v)| v).collect()
    }

    /// All entries ordered by index.
    pub fn all(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self.odd.iter().chain(&self.even).copied().collect();
        v.sort_by_key(|&(n, _)| n);
        v
    }
}

fn real_r(pot: &dyn Potential, rho: f64) -> Result<f64> {
    Ok(r_eval(pot, Complex64::new(rho, 0.0))?.re)
}

/// `rho_n` for odd `n` by bisection on `[n - 1/2, n + 1/2]`, widened to
/// `[n - 0.9, n + 0.9]` when the narrow bracket shows no sign change.
pub fn odd_root(pot: &dyn Potential, n: usize) -> Result<f64> {
    let nf = n as f64;
    let mut bracket = None;
    for width in [0.5, 0.9] {
        let (lo, hi) = (nf - width, nf + width);
        let (flo, fhi) = (real_r(pot, lo)?, real_r(pot, hi)?);
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            bracket = Some((lo, hi, flo));
            break;
        }
    }
    let (mut lo, mut hi, mut flo) = bracket.ok_or(Error::BracketFailure { n })?;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fmid = real_r(pot, mid)?;
        if fmid.abs() <= BISECTION_RESIDUAL * (1.0 + mid) {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn continuous_spectrum(pot: &dyn Potential, n_max: usize) -> Result<ContinuousSpectrum> {
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for n in 1..=n_max {
        if n % 2 == 1 {
            let rho = odd_root(pot, n)?;
            odd.push((n, rho * rho));
        } else {
            even.push((n, (n * n) as f64));
        }
    }
    Ok(ContinuousSpectrum { odd, even })
}
