//! The basis `psi_0 = 0, psi_1 = 1, psi_{n+1} = mu psi_n - psi_{n-1}`, i.e.
//! `psi_n(mu) = U_{n-1}(mu / 2) = sin(n theta) / sin(theta)` with
//! `mu = 2 cos(theta)`.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::{leja_order, Poly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `psi_n(mu)` by the three-term recurrence.
pub fn psi_eval(n: usize, mu: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (ZERO, ONE);
    if n == 0 {
        return ZERO;
    }
    for _ in 1..n {
        let next = mu * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Zeros of `psi_n`: `2 cos(pi k / n)` for `k = 1..n-1`, in ascending `k`.
pub fn psi_zeros(n: usize) -> Vec<f64> {
    assert!(n >= 1, "psi_0 vanishes identically");
    (1..n).map(|k| 2.0 * (PI * k as f64 / n as f64).cos()).collect()
}

/// `psi_n` in the monomial basis. Its coefficients are integers, exact in
/// `f64` for `n` well past 64.
pub fn psi_poly(n: usize) -> Poly {
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = vec![1.0];
    if n == 0 {
        return Poly::zero();
    }
    for _ in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    Poly::from_real(&cur)
}

/// `sum_{j=1}^{N} c_j psi_j(mu)`; `coeffs()[j - 1]` holds `c_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSeries {
    coeffs: Vec<Complex64>,
}

impl PsiSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![ZERO; len])
    }

    /// The single basis element `psi_j`; `psi_0` is the empty series.
    pub fn basis(j: usize) -> Self {
        let mut s = Self::zeros(j);
        if j > 0 {
            s.coeffs[j - 1] = ONE;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `psi_j` (1-based; zero outside the stored range).
    pub fn coeff(&self, j: usize) -> Complex64 {
        if j == 0 {
            return ZERO;
        }
        self.coeffs.get(j - 1).copied().unwrap_or(ZERO)
    }

    /// Adds `c psi_j` in place, growing the series if needed.
    pub fn add_term(&mut self, j: usize, c: Complex64) {
        if j == 0 {
            return;
        }
        if self.coeffs.len() < j {
            self.coeffs.resize(j, ZERO);
        }
        self.coeffs[j - 1] += c;
    }

    /// Keeps the first `n` coordinates, zero-padding when shorter.
    pub fn truncated(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, ZERO);
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, mu: Complex64) -> Complex64 {
        let (mut b1, mut b2) = (ZERO, ZERO);
        for &c in self.coeffs.iter().rev() {
            let b0 = c + mu * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    /// Multiplication by `mu`, using `mu psi_j = psi_{j+1} + psi_{j-1}`.
    pub fn mul_mu(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![ZERO; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            if i > 0 {
                out[i - 1] += c;
            }
        }
        Self::new(out)
    }

    /// Product with the basis element `psi_a`, term by term through
    /// [`psi_mul`].
    pub fn mul_basis(&self, a: usize) -> Self {
        if a == 0 {
            return Self::zeros(0);
        }
        let mut out = Self::zeros(self.coeffs.len() + a - 1);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let b = i + 1;
            for k in 0..a.min(b) {
                out.coeffs[a + b - 2 - 2 * k] += c;
            }
        }
        out
    }

    /// `prod (mu - r)` over `roots`, built directly in the psi basis with the
    /// factors taken in Leja order.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = Self::basis(1);
        for r in leja_order(roots).into_iter().map(|i| roots[i]) {
            let shifted = acc.mul_mu();
            let mut next = shifted.coeffs;
            for (i, &c) in acc.coeffs.iter().enumerate() {
                next[i] -= r * c;
            }
            acc = Self::new(next);
        }
        acc
    }

    /// Monomial form.
    pub fn to_poly(&self) -> Poly {
        psi_to_poly(self)
    }

    /// Coordinates of `p` with `N = deg(p) + 1` (one coordinate for zero).
    pub fn from_poly(p: &Poly) -> Self {
        poly_to_psi(p, (p.degree() + 1).max(1) as usize)
    }
}

fn zip_psi(a: &PsiSeries, b: &PsiSeries, f: impl Fn(Complex64, Complex64) -> Complex64) -> PsiSeries {
    let n = a.len().max(b.len());
    PsiSeries::new((1..=n).map(|j| f(a.coeff(j), b.coeff(j))).collect())
}

impl Add for &PsiSeries {
    type Output = PsiSeries;
    fn add(self, rhs: &PsiSeries) -> PsiSeries {
        zip_psi(self, rhs, |x, y| x + y)
    }
}

impl Sub for &PsiSeries {
    type Output = PsiSeries;
    fn sub(self, rhs: &PsiSeries) -> PsiSeries {
        zip_psi(self, rhs, |x, y| x - y)
    }
}

/// Coordinates of `psi_a psi_b`: ones at `a + b - 1 - 2k`, `k = 0..min(a, b) - 1`.
pub fn psi_mul(a: usize, b: usize) -> PsiSeries {
    assert!(a >= 1 && b >= 1, "psi_mul needs positive indices");
    PsiSeries::basis(b).mul_basis(a)
}

/// Monomial form of a psi series.
pub fn psi_to_poly(s: &PsiSeries) -> Poly {
    let n = s.len();
    let mut out = vec![ZERO; n];
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = vec![1.0];
    for (j, &c) in s.coeffs().iter().enumerate() {
        if j > 0 {
            let mut next = vec![0.0; cur.len() + 1];
            for (k, &v) in cur.iter().enumerate() {
                next[k + 1] += v;
            }
            for (k, &v) in prev.iter().enumerate() {
                next[k] -= v;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        if c != ZERO {
            for (k, &v) in cur.iter().enumerate() {
                out[k] += c * v;
            }
        }
    }
    Poly::new(out)
}

/// Coordinates of `p` with respect to `psi_1..psi_n`.
///
/// The change of basis is unit upper triangular (`psi_j` is monic of degree
/// `j - 1`); it is solved by back-substitution from the top coefficient
/// down. Coefficients of `p` above `mu^{n-1}` are ignored.
pub fn poly_to_psi(p: &Poly, n: usize) -> PsiSeries {
    let mut rem: Vec<Complex64> = (0..n).map(|k| p.coeff(k)).collect();
    let mut out = vec![ZERO; n];
    let basis: Vec<Poly> = (1..=n).map(psi_poly).collect();
    for j in (1..=n).rev() {
        let c = rem[j - 1];
        out[j - 1] = c;
        if c != ZERO {
            for (k, &v) in basis[j - 1].coeffs().iter().enumerate() {
                rem[k] -= c * v;
            }
        }
    }
    PsiSeries::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn recurrence_base_cases() {
        let mu = Complex64::new(0.37, -1.2);
        assert_eq!(psi_eval(0, mu), ZERO);
        assert_eq!(psi_eval(1, mu), ONE);
        assert_eq!(psi_eval(3, re(1.0)), ZERO);
        for n in 0..20 {
            assert_eq!(psi_eval(n, re(2.0)), re(n as f64));
        }
    }

    #[test]
    fn zeros_follow_closed_form() {
        assert!(psi_zeros(1).is_empty());
        let z = psi_zeros(4);
        let expected = [2f64.sqrt(), 0.0, -(2f64.sqrt())];
        for (a, b) in z.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(psi_zeros(3).len(), 2);
        assert!((psi_zeros(3)[0] - 1.0).abs() < 1e-15);
        assert!((psi_zeros(3)[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_conversions() {
        assert_eq!(
            PsiSeries::from_real(&[0.0, 0.0, 1.0]).to_poly(),
            Poly::from_real(&[-1.0, 0.0, 1.0])
        );
        let mu2 = Poly::from_real(&[0.0, 0.0, 1.0]);
        assert_eq!(PsiSeries::from_poly(&mu2), PsiSeries::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(PsiSeries::from_poly(&Poly::zero()), PsiSeries::from_real(&[0.0]));
    }

    #[test]
    fn psi_mul_small_cases() {
        assert_eq!(psi_mul(1, 5), PsiSeries::basis(5));
        assert_eq!(psi_mul(2, 2), PsiSeries::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(psi_mul(4, 3), PsiSeries::from_real(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]));
        // monomial cross-check
        assert_eq!(psi_mul(4, 3).to_poly(), &psi_poly(4) * &psi_poly(3));
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let s = PsiSeries::new(vec![
            Complex64::new(0.5, 1.0),
            re(-2.0),
            re(0.25),
            Complex64::new(0.0, 3.0),
        ]);
        let mu = Complex64::new(1.3, 0.4);
        let direct: Complex64 = (1..=4).map(|j| s.coeff(j) * psi_eval(j, mu)).sum();
        assert!((s.eval(mu) - direct).norm() < 1e-13);
        assert!((s.to_poly().eval(mu) - direct).norm() < 1e-12);
    }

    #[test]
    fn roots_in_psi_basis_match_monomial_product() {
        let roots = [re(1.5), Complex64::new(-0.2, 0.7), re(0.0), re(-1.9)];
        let psi = PsiSeries::from_roots(&roots);
        let mono = roots.iter().fold(Poly::one(), |acc, &r| &acc * &Poly::linear(r));
        assert!((&psi.to_poly() - &mono).norm() < 1e-13);
        // zeros of psi_{l+1}
        let z: Vec<Complex64> = psi_zeros(7).into_iter().map(re).collect();
        let s = PsiSeries::from_roots(&z);
        assert!((&s - &PsiSeries::basis(7)).coeffs().iter().all(|c| c.norm() < 1e-13));
    }
}
