use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Dense complex polynomial in the monomial basis; `coeffs[k]` multiplies `mu^k`.
///
/// Trailing exact zeros are always trimmed, so the last stored coefficient is
/// nonzero unless the polynomial is zero (no stored coefficients).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `mu - root`.
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Degree, with the zero polynomial at −1.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `mu^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * mu + c)
    }

    /// Value and first derivative by a doubled Horner pass.
    pub fn eval_with_derivative(&self, mu: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut deriv = zero;
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * mu + value;
            value = value * mu + c;
        }
        (value, deriv)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Long division by `divisor`, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Division that is exact in theory: fails unless the remainder norm is at
    /// most `rel_tol * ‖self‖`.
    pub fn div_exact(&self, divisor: &Poly, rel_tol: f64) -> Result<Poly> {
        let (quot, rem) = self.div_rem(divisor);
        let scale = self.norm().max(f64::MIN_POSITIVE);
        let residual = rem.norm() / scale;
        if residual > rel_tol {
            return Err(Error::InexactDivision { residual });
        }
        Ok(quot)
    }
}

fn zip_with(a: &[Complex64], b: &[Complex64], f: impl Fn(Complex64, Complex64) -> Complex64) -> Poly {
    let zero = Complex64::new(0.0, 0.0);
    let n = a.len().max(b.len());
    Poly::new(
        (0..n)
            .map(|k| f(a.get(k).copied().unwrap_or(zero), b.get(k).copied().unwrap_or(zero)))
            .collect(),
    )
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        zip_with(&self.coeffs, &rhs.coeffs, |x, y| x + y)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        zip_with(&self.coeffs, &rhs.coeffs, |x, y| x - y)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_polynomial_has_degree_minus_one() {
        assert_eq!(Poly::zero().degree(), -1);
        assert_eq!(Poly::from_real(&[0.0, 0.0]).degree(), -1);
        assert_eq!(Poly::from_real(&[1.0, 2.0, 0.0]).degree(), 1);
    }

    #[test]
    fn arithmetic_matches_hand_expansion() {
        let a = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let b = Poly::from_real(&[1.0, 1.0]);
        assert_eq!(&a * &b, Poly::from_real(&[-1.0, -1.0, 1.0, 1.0]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(&a + &b, Poly::from_real(&[0.0, 1.0, 1.0]));
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let b = Poly::from_real(&[2.0, -3.0, 0.5, 1.0]);
        let q = (&a * &b).div_exact(&a, 1e-12).unwrap();
        assert!((&q - &b).norm() < 1e-14);
    }

    #[test]
    fn inexact_division_is_rejected() {
        let a = Poly::from_real(&[1.0, 0.0, 1.0]);
        let b = Poly::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(b.div_exact(&a, 1e-10), Err(Error::InexactDivision { .. })));
    }

    #[test]
    fn derivative_matches_doubled_horner() {
        let p = Poly::from_real(&[3.0, -1.0, 0.5, 2.0]);
        let mu = Complex64::new(0.3, -0.7);
        let (v, d) = p.eval_with_derivative(mu);
        assert!((v - p.eval(mu)).norm() < 1e-14);
        assert!((d - p.derivative().eval(mu)).norm() < 1e-14);
        assert_eq!(p.eval(c(0.0)), c(3.0));
    }
}
