//! The discrete frozen-argument system
//!
//! ```text
//! y[j+1] + y[j-1] - w[j] y[m] = mu y[j],  j = 1..l,   y[0] = y[l+1] = 0,
//! ```
//!
//! its characteristic polynomial `D(mu) = P_0 Q_{l+1} - P_{l+1} Q_0` and its
//! spectrum. `P` and `Q` solve the recurrence with `P_{m-1} = 1, P_m = 0` and
//! `Q_{m-1} = 0, Q_m = 1`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::chebypoly::{aberth, AberthOptions, Poly, PsiSeries};
use crate::{gcd, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `lambda = (2 - mu) / h^2`.
pub fn mu_to_lambda(mu: Complex64, h: f64) -> Complex64 {
    (2.0 - mu) / (h * h)
}

/// `mu = 2 - h^2 lambda`.
pub fn lambda_to_mu(lambda: Complex64, h: f64) -> Complex64 {
    2.0 - lambda * (h * h)
}

/// `4 sin^2(n h / 2) / h^2`, the n-th eigenvalue of the unperturbed grid.
pub fn free_eigenvalue(n: usize, h: f64) -> f64 {
    let s = (0.5 * n as f64 * h).sin();
    4.0 * s * s / (h * h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteProblem {
    l: usize,
    m: usize,
    h: f64,
    w: Vec<Complex64>,
    q: Option<Vec<Complex64>>,
}

/// The four boundary polynomials in psi-basis form.
#[derive(Clone, Debug, PartialEq)]
pub struct PqPolynomials {
    /// `P_0 = psi_m`
    pub p_start: PsiSeries,
    /// `P_{l+1} = -psi_{l-m+1}`
    pub p_end: PsiSeries,
    /// `Q_0 = -psi_{m-1} + sum_{j<m} w_j psi_j`
    pub q_start: PsiSeries,
    /// `Q_{l+1} = psi_{l-m+2} + sum_{j<=l-m+1} w_{l+1-j} psi_j`
    pub q_end: PsiSeries,
}

fn check_index(l: usize, m: usize) -> Result<()> {
    if l == 0 || m == 0 || m > l {
        return Err(Error::BadIndex { m, l });
    }
    Ok(())
}

impl DiscreteProblem {
    /// Grid of `l = q_values.len()` points with `w_j = h^2 q_j`.
    pub fn sample(q_values: &[Complex64], m: usize) -> Result<Self> {
        let l = q_values.len();
        check_index(l, m)?;
        let h = PI / (l + 1) as f64;
        let w = q_values.iter().map(|&q| q * (h * h)).collect();
        Ok(Self {
            l,
            m,
            h,
            w,
            q: Some(q_values.to_vec()),
        })
    }

    /// Samples a real potential at `x_j = j h`, `j = 1..l`.
    pub fn from_fn(q: impl Fn(f64) -> f64, l: usize, m: usize) -> Result<Self> {
        let h = PI / (l + 1) as f64;
        let values: Vec<Complex64> = (1..=l).map(|j| Complex64::new(q(j as f64 * h), 0.0)).collect();
        Self::sample(&values, m)
    }

    pub fn from_w(w: Vec<Complex64>, m: usize) -> Result<Self> {
        let l = w.len();
        check_index(l, m)?;
        Ok(Self {
            l,
            m,
            h: PI / (l + 1) as f64,
            w,
            q: None,
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `w_1..w_l` (index 0 holds `w_1`).
    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    /// `w_j` for 1-based `j`.
    pub fn w_at(&self, j: usize) -> Complex64 {
        self.w[j - 1]
    }

    pub fn q(&self) -> Option<&[Complex64]> {
        self.q.as_deref()
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    /// `d = gcd(m, l + 1)`; the configuration is degenerate when `d > 1`.
    pub fn degeneracy(&self) -> usize {
        gcd(self.m, self.l + 1)
    }

    /// The mirrored problem `j -> l + 1 - j`; it has the same spectrum.
    pub fn reflected(&self) -> Self {
        let mut w = self.w.clone();
        w.reverse();
        let q = self.q.as_ref().map(|q| q.iter().rev().copied().collect());
        Self {
            l: self.l,
            m: self.l + 1 - self.m,
            h: self.h,
            w,
            q,
        }
    }

    pub fn pq_polynomials(&self) -> PqPolynomials {
        let (l, m) = (self.l, self.m);
        let p_start = PsiSeries::basis(m);
        let p_end = PsiSeries::basis(l - m + 1).scale(-ONE);
        let mut q_start = PsiSeries::basis(m - 1).scale(-ONE);
        for j in 1..m {
            q_start.add_term(j, self.w_at(j));
        }
        let mut q_end = PsiSeries::basis(l - m + 2);
        for j in 1..=l - m + 1 {
            q_end.add_term(j, self.w_at(l + 1 - j));
        }
        PqPolynomials {
            p_start,
            p_end,
            q_start,
            q_end,
        }
    }

    /// `D(mu)` from the polynomials of [`Self::pq_polynomials`], assembled in
    /// the psi basis with exact basis products.
    pub fn char_poly_psi(&self) -> PsiSeries {
        let (l, m) = (self.l, self.m);
        let pq = self.pq_polynomials();
        // P_0 Q_{l+1} - P_{l+1} Q_0 = psi_m Q_{l+1} + psi_{l-m+1} Q_0
        let a = pq.q_end.mul_basis(m);
        let b = pq.q_start.mul_basis(l - m + 1);
        (&a + &b).truncated(l + 1)
    }

    /// Monic degree-`l` characteristic polynomial.
    pub fn char_poly(&self) -> Poly {
        self.char_poly_psi().to_poly()
    }

    /// `D(mu)` by running the recurrence outward from `m` in both directions;
    /// O(l), no coefficient expansion.
    pub fn d_eval(&self, mu: Complex64) -> Complex64 {
        self.d_eval_with_derivative(mu).0
    }

    pub fn d_eval_with_derivative(&self, mu: Complex64) -> (Complex64, Complex64) {
        let (l, m) = (self.l, self.m);
        let mu = Dual::var(mu);
        let zero = Dual::constant(ZERO);
        let one = Dual::constant(ONE);

        // y[j-1] = mu y[j] + w_j y[m] - y[j+1] for j = m-1..1
        let down = |mut prev: Dual, mut cur: Dual, ym: Complex64| {
            // prev = y[j+1], cur = y[j]
            for j in (1..m).rev() {
                let next = mu * cur + Dual::constant(self.w_at(j) * ym) - prev;
                prev = cur;
                cur = next;
            }
            cur
        };
        // y[j+1] = mu y[j] + w_j y[m] - y[j-1] for j = m..l
        let up = |mut prev: Dual, mut cur: Dual, ym: Complex64| {
            for j in m..=l {
                let next = mu * cur + Dual::constant(self.w_at(j) * ym) - prev;
                prev = cur;
                cur = next;
            }
            cur
        };

        let p0 = down(zero, one, ZERO);
        let p_end = up(one, zero, ZERO);
        let q0 = down(one, zero, ONE);
        let q_end = up(zero, one, ONE);
        let d = p0 * q_end - p_end * q0;
        (d.v, d.d)
    }

    /// All `l` eigenvalues.
    ///
    /// The simultaneous iteration runs on the recurrence form of `D` (value
    /// and derivative), which stays accurate near `mu = ±2` where the
    /// monomial coefficients do not. Start radius is the Gershgorin bound
    /// `2 + max |w_j|`.
    pub fn spectrum(&self) -> Result<Spectrum> {
        self.spectrum_with(AberthOptions::default())
    }

    pub fn spectrum_with(&self, opts: AberthOptions) -> Result<Spectrum> {
        let bound = 2.0 + self.w.iter().map(|w| w.norm()).fold(0.0, f64::max);
        let outcome = aberth(self.l, 1.1 * bound, |z| self.d_eval_with_derivative(z), opts);
        if !outcome.converged {
            let worst = outcome
                .roots
                .iter()
                .map(|&z| self.d_eval(z).norm() / (1.0 + z.norm()).powi(self.l as i32))
                .fold(0.0, f64::max);
            if worst.is_nan() || worst > 1e-9 {
                return Err(Error::NoConvergence {
                    iterations: outcome.iterations,
                    worst_residual: worst,
                });
            }
        }
        Ok(Spectrum::from_mu(outcome.roots, self.h))
    }
}

/// Eigenvalues in both parametrizations, ordered by ascending `Re lambda`
/// (ties by `Im lambda`).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    h: f64,
    mu: Vec<Complex64>,
    lambda: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_mu(mu: Vec<Complex64>, h: f64) -> Self {
        let mut pairs: Vec<(Complex64, Complex64)> = mu.into_iter().map(|m| (m, mu_to_lambda(m, h))).collect();
        pairs.sort_by(|a, b| a.1.re.total_cmp(&b.1.re).then(a.1.im.total_cmp(&b.1.im)));
        let (mu, lambda) = pairs.into_iter().unzip();
        Self { h, mu, lambda }
    }

    pub fn from_lambda(lambda: &[Complex64], h: f64) -> Self {
        Self::from_mu(lambda.iter().map(|&l| lambda_to_mu(l, h)).collect(), h)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// First-order forward-mode value, enough for `D` and `D'`.
#[derive(Clone, Copy, Debug)]
struct Dual {
    v: Complex64,
    d: Complex64,
}

impl Dual {
    fn constant(v: Complex64) -> Self {
        Self { v, d: ZERO }
    }

    fn var(v: Complex64) -> Self {
        Self { v, d: ONE }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            d: self.d + o.d,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            v: self.v - o.v,
            d: self.d - o.d,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            d: self.v * o.d + self.d * o.v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebypoly::{psi_eval, psi_mul, psi_poly};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sampling_scales_by_h_squared() {
        let p = DiscreteProblem::sample(&[re(0.0); 6], 2).unwrap();
        assert!(p.w().iter().all(|w| *w == ZERO));
        let p = DiscreteProblem::sample(&[re(3.0)], 1).unwrap();
        assert!((p.w()[0] - re(3.0 * (PI / 2.0).powi(2))).norm() < 1e-15);
        assert!((p.h() * 2.0 - PI).abs() < 1e-15);
    }

    #[test]
    fn quadratic_potential_first_weight() {
        let p = DiscreteProblem::from_fn(|x| x * (PI - x), 9, 5).unwrap();
        let h = PI / 10.0;
        let q1 = h * (PI - h);
        assert!((q1 - 0.8883).abs() < 1e-4);
        assert!((p.w()[0] - re(h * h * q1)).norm() < 1e-15);
    }

    #[test]
    fn bad_index_is_rejected() {
        assert_eq!(
            DiscreteProblem::sample(&[re(1.0); 3], 4),
            Err(Error::BadIndex { m: 4, l: 3 })
        );
        assert_eq!(
            DiscreteProblem::sample(&[re(1.0); 3], 0),
            Err(Error::BadIndex { m: 0, l: 3 })
        );
    }

    #[test]
    fn free_problem_polynomials() {
        let p = DiscreteProblem::from_w(vec![ZERO; 7], 3).unwrap();
        let pq = p.pq_polynomials();
        assert_eq!(pq.q_start.to_poly(), -&psi_poly(2));
        assert_eq!(pq.q_end.to_poly(), psi_poly(7 - 3 + 2));
        assert_eq!(p.char_poly(), psi_poly(8));
        let mu = Complex64::new(0.3, 0.2);
        assert!((p.d_eval(mu) - psi_eval(8, mu)).norm() < 1e-13);
    }

    #[test]
    fn q_end_reads_weights_backwards() {
        let w: Vec<Complex64> = [0.1, 0.2, 0.3, 0.4].into_iter().map(re).collect();
        let p = DiscreteProblem::from_w(w, 2).unwrap();
        let q_end = p.pq_polynomials().q_end;
        assert_eq!(q_end.coeffs(), &[re(0.4), re(0.3), re(0.2), re(1.0)]);
    }

    #[test]
    fn single_point_problem() {
        let p = DiscreteProblem::from_w(vec![Complex64::new(0.7, -0.2)], 1).unwrap();
        let mu = Complex64::new(-0.4, 1.1);
        assert!((p.d_eval(mu) - (mu + Complex64::new(0.7, -0.2))).norm() < 1e-15);
        assert_eq!(p.char_poly(), Poly::new(vec![Complex64::new(0.7, -0.2), ONE]));
    }

    #[test]
    fn char_poly_with_only_frozen_weight() {
        // l = 4, m = 2, w_2 = 5: D = psi_2 (psi_4 + 5 psi_3) - psi_3 psi_1
        let w = vec![ZERO, re(5.0), ZERO, ZERO];
        let p = DiscreteProblem::from_w(w, 2).unwrap();
        let expected = &(&psi_mul(2, 4).to_poly() + &psi_mul(2, 3).to_poly().scale(re(5.0))) - &psi_mul(3, 1).to_poly();
        assert_eq!(p.char_poly(), expected);
    }

    #[test]
    fn derivative_matches_char_poly() {
        let w: Vec<Complex64> = (0..9)
            .map(|j| Complex64::new(0.1 * j as f64, -0.05 * j as f64))
            .collect();
        let p = DiscreteProblem::from_w(w, 4).unwrap();
        let cp = p.char_poly();
        let mu = Complex64::new(0.8, -0.3);
        let (v, d) = p.d_eval_with_derivative(mu);
        let (v2, d2) = cp.eval_with_derivative(mu);
        assert!((v - v2).norm() < 1e-12 * (1.0 + v.norm()));
        assert!((d - d2).norm() < 1e-12 * (1.0 + d.norm()));
    }

    #[test]
    fn reflection_keeps_spectrum() {
        let w: Vec<Complex64> = (0..6)
            .map(|j| Complex64::new(0.3 - 0.1 * j as f64, 0.05 * j as f64))
            .collect();
        let p = DiscreteProblem::from_w(w, 2).unwrap();
        let r = p.reflected();
        assert_eq!(r.m(), 5);
        let c1 = p.char_poly();
        let c2 = r.char_poly();
        assert!((&c1 - &c2).norm() < 1e-13);
    }

    #[test]
    fn free_spectrum_is_closed_form() {
        let p = DiscreteProblem::from_w(vec![ZERO; 9], 5).unwrap();
        let s = p.spectrum().unwrap();
        for (n, lam) in s.lambda().iter().enumerate() {
            assert!((lam - re(free_eigenvalue(n + 1, p.h()))).norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_values_appear_for_any_weights() {
        let w: Vec<Complex64> = [0.3, -0.7, 0.2, 0.9, -0.1].into_iter().map(re).collect();
        let p = DiscreteProblem::from_w(w, 3).unwrap();
        assert_eq!(p.degeneracy(), 3);
        let s = p.spectrum().unwrap();
        for target in [1.0, -1.0] {
            let nearest = s
                .mu()
                .iter()
                .map(|m| (m - re(target)).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-10);
        }
        // l = 5, m = 3: the degenerate eigenvalues keep positions n = 2 and 4 here
        assert!((s.mu()[1] - re(1.0)).norm() < 1e-10);
        assert!((s.mu()[3] - re(-1.0)).norm() < 1e-10);
    }
}
