//! Recovery of the weights `w_j` from eigenvalues.
//!
//! Every interpolation node used here is a closed-form zero of some `psi_n`;
//! no polynomial is ever root-found during an inversion.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chebypoly::{interpolate_psi, poly_from_roots, psi_eval, psi_mul, psi_poly, Poly, PsiSeries};
use crate::{gcd, Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which block of weights next to `m` is supplied in the degenerate problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `w_{m-d+1}..w_{m-1}` (`d - 1` values).
    Left,
    /// `w_{m+1}..w_{m+d}` (`d` values).
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateData {
    pub side: Side,
    /// Ordered by increasing index `j`.
    pub known_w: Vec<Complex64>,
}

/// Output of [`solve_symmetric`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSolution {
    pub w_m: Complex64,
    /// `s_j = w_j + w_{l+1-j}` for `j = 1..m-1`.
    pub pair_sums: Vec<Complex64>,
}

impl SymmetricSolution {
    pub fn m(&self) -> usize {
        self.pair_sums.len() + 1
    }

    /// The `l = 2m - 1` weights under `w_j = w_{l+1-j}`.
    pub fn symmetric_w(&self) -> Vec<Complex64> {
        let m = self.m();
        let mut w = vec![self.w_m; 2 * m - 1];
        for (j, s) in self.pair_sums.iter().enumerate() {
            w[j] = s * 0.5;
            w[2 * m - 2 - j] = s * 0.5;
        }
        w
    }
}

/// `w_m` as the `mu^{l-1}` coefficient of `D - psi_m psi_{l-m+2}`.
pub fn recover_wm(d: &Poly, l: usize, m: usize) -> Result<Complex64> {
    if d.degree() != l as isize {
        return Err(Error::DegreeMismatch {
            expected: l,
            found: d.degree(),
        });
    }
    if m == 0 || m > l {
        return Err(Error::BadIndex { m, l });
    }
    let base = psi_mul(m, l - m + 2).to_poly();
    Ok(d.coeff(l - 1) - base.coeff(l - 1))
}

/// `2 cos(pi k / n)`, `k = 1..n-1`.
fn cos_nodes(n: usize) -> impl Iterator<Item = (usize, Complex64)> {
    (1..n).map(move |k| (k, Complex64::new(2.0 * (PI * k as f64 / n as f64).cos(), 0.0)))
}

fn product_eval(roots: &[Complex64], z: Complex64) -> Complex64 {
    roots.iter().map(|r| z - r).product()
}

/// Reads `w_{m+1}..w_l` off `Q_{l+1}` given as psi coordinates.
fn read_right_block(q_end: &PsiSeries, w: &mut [Complex64], l: usize, m: usize) {
    for j in 1..=l - m {
        w[l - j] = q_end.coeff(j);
    }
}

/// Inverse problem for `gcd(m, l + 1) = 1`: all `l` eigenvalues determine
/// all `l` weights.
pub fn solve_nondegenerate(mu: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    let l = mu.len();
    if l == 0 || m == 0 || m > l {
        return Err(Error::BadIndex { m, l });
    }
    let d = gcd(m, l + 1);
    if d > 1 {
        return Err(Error::DegenerateConfiguration { l, m, d });
    }
    let char_poly = poly_from_roots(mu);
    let w_m = recover_wm(&char_poly, l, m)?;
    let mut w = vec![Complex64::new(0.0, 0.0); l];
    w[m - 1] = w_m;

    // psi_m vanishes at nu_k, so D(nu_k) = psi_{l-m+1}(nu_k) Q_0(nu_k)
    let (nodes, values): (Vec<_>, Vec<_>) = cos_nodes(m)
        .map(|(_, nu)| {
            let q0 = product_eval(mu, nu) / psi_eval(l - m + 1, nu);
            (nu, q0 + psi_eval(m - 1, nu))
        })
        .unzip();
    let left = interpolate_psi(&nodes, &values)?;
    for j in 1..m {
        w[j - 1] = left.coeff(j);
    }

    // psi_{l-m+1} vanishes at theta_k, so D(theta_k) = psi_m(theta_k) Q_{l+1}(theta_k)
    let (nodes, values): (Vec<_>, Vec<_>) = cos_nodes(l - m + 1)
        .map(|(_, th)| {
            let q_end = product_eval(mu, th) / psi_eval(m, th);
            let rest = q_end - psi_eval(l - m + 2, th) - w_m * psi_eval(l - m + 1, th);
            (th, rest)
        })
        .unzip();
    let right = interpolate_psi(&nodes, &values)?;
    read_right_block(&right, &mut w, l, m);
    Ok(w)
}

/// The `d - 1` eigenvalues every problem with `gcd(m, l + 1) = d` shares.
pub fn degenerate_eigenvalues(d: usize) -> Vec<Complex64> {
    cos_nodes(d).map(|(_, x)| x).collect()
}

/// Removes from a full spectrum the entry nearest to each degenerate value.
pub fn reduce_spectrum(full_mu: &[Complex64], l: usize, m: usize) -> Result<Vec<Complex64>> {
    if full_mu.len() != l {
        return Err(Error::WrongCount {
            expected: l,
            found: full_mu.len(),
        });
    }
    let mut rest = full_mu.to_vec();
    for xi in degenerate_eigenvalues(gcd(m, l + 1)) {
        let nearest = rest
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - xi).norm().total_cmp(&(b.1 - xi).norm()))
            .map(|(i, _)| i)
            .expect("spectrum shorter than the degenerate part");
        rest.remove(nearest);
    }
    Ok(rest)
}

/// Inverse problem for `d = gcd(m, l + 1) > 1`.
///
/// `mu_reduced` holds the `l - d + 1` eigenvalues that depend on `w`; the
/// degenerate ones are appended internally from their closed form. The
/// right-hand variant runs the left one on the mirrored problem `j -> l+1-j`;
/// of its `d` supplied values only `w_{m+1}..w_{m+d-1}` enter, and `w_{m+d}`
/// comes back recovered from the spectrum.
pub fn solve_degenerate(mu_reduced: &[Complex64], m: usize, l: usize, data: &DegenerateData) -> Result<Vec<Complex64>> {
    if l == 0 || m == 0 || m > l {
        return Err(Error::BadIndex { m, l });
    }
    let d = gcd(m, l + 1);
    if d == 1 {
        return Err(Error::NotDegenerate { l, m });
    }
    if mu_reduced.len() != l - d + 1 {
        return Err(Error::WrongCount {
            expected: l - d + 1,
            found: mu_reduced.len(),
        });
    }
    match data.side {
        Side::Left => {
            if data.known_w.len() != d - 1 {
                return Err(Error::SideDataMismatch(format!(
                    "left side needs {} known weights w_{}..w_{}, got {}",
                    d - 1,
                    m - d + 1,
                    m - 1,
                    data.known_w.len()
                )));
            }
            solve_degenerate_left(mu_reduced, m, l, d, &data.known_w)
        }
        Side::Right => {
            if m + d > l {
                return Err(Error::SideDataMismatch(format!(
                    "right side needs w_{}..w_{} but l = {l}",
                    m + 1,
                    m + d
                )));
            }
            if data.known_w.len() != d {
                return Err(Error::SideDataMismatch(format!(
                    "right side needs {d} known weights w_{}..w_{}, got {}",
                    m + 1,
                    m + d,
                    data.known_w.len()
                )));
            }
            let mirrored: Vec<Complex64> = data.known_w[..d - 1].iter().rev().copied().collect();
            let mut w = solve_degenerate_left(mu_reduced, l + 1 - m, l, d, &mirrored)?;
            w.reverse();
            Ok(w)
        }
    }
}

fn solve_degenerate_left(
    mu_reduced: &[Complex64],
    m: usize,
    l: usize,
    d: usize,
    known: &[Complex64],
) -> Result<Vec<Complex64>> {
    let mut mu = mu_reduced.to_vec();
    mu.extend(degenerate_eigenvalues(d));
    let char_poly = poly_from_roots(&mu);
    let w_m = recover_wm(&char_poly, l, m)?;

    let known_sum = |nu: Complex64| -> Complex64 {
        known
            .iter()
            .enumerate()
            .map(|(i, &wj)| wj * psi_eval(m - d + 1 + i, nu))
            .sum()
    };

    // zeros of psi_m / psi_d: the nu_k with k not a multiple of m/d
    let step = m / d;
    let (nodes, values): (Vec<_>, Vec<_>) = cos_nodes(m)
        .filter(|(k, _)| k % step != 0)
        .map(|(_, nu)| {
            let q0 = product_eval(&mu, nu) / psi_eval(l - m + 1, nu);
            (nu, q0 + psi_eval(m - 1, nu) - known_sum(nu))
        })
        .unzip();
    let reduced = interpolate_psi(&nodes, &values)?;

    let mut q_start = PsiSeries::basis(m - 1).scale(-ONE);
    for j in 1..=m - d {
        q_start.add_term(j, reduced.coeff(j));
    }
    for (i, &wj) in known.iter().enumerate() {
        q_start.add_term(m - d + 1 + i, wj);
    }

    let d_psi = PsiSeries::from_roots(&mu);
    let dividend = (&d_psi - &q_start.mul_basis(l - m + 1)).to_poly();
    let q_end = PsiSeries::from_poly(&dividend.div_exact(&psi_poly(m), 1e-10)?);
    let mut rest = &q_end - &PsiSeries::basis(l - m + 2);
    rest.add_term(l - m + 1, -w_m);

    let mut w = vec![Complex64::new(0.0, 0.0); l];
    for j in 1..=m - d {
        w[j - 1] = reduced.coeff(j);
    }
    for (i, &wj) in known.iter().enumerate() {
        w[m - d + i] = wj;
    }
    w[m - 1] = w_m;
    read_right_block(&rest, &mut w, l, m);
    Ok(w)
}

/// The symmetric configuration `l = 2m - 1` from the `m` eigenvalues that
/// are not fixed by the degeneration (the odd-indexed ones).
///
/// Only `w_m` and the sums `w_j + w_{l+1-j}` are determined by the spectrum.
pub fn solve_symmetric(mu_odd: &[Complex64], m: usize) -> Result<SymmetricSolution> {
    if m == 0 {
        return Err(Error::BadIndex { m, l: 0 });
    }
    if mu_odd.len() != m {
        return Err(Error::WrongCount {
            expected: m,
            found: mu_odd.len(),
        });
    }
    let mut z = &PsiSeries::from_roots(mu_odd) - &PsiSeries::basis(m + 1);
    z.add_term(m - 1, ONE);
    let z = z.truncated(m);
    Ok(SymmetricSolution {
        w_m: z.coeff(m),
        pair_sums: (1..m).map(|j| z.coeff(j)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::DiscreteProblem;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn free_mu(l: usize) -> Vec<Complex64> {
        (1..=l)
            .map(|n| re(2.0 * (PI * n as f64 / (l + 1) as f64).cos()))
            .collect()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn recover_wm_of_free_problem_is_zero() {
        assert!(recover_wm(&psi_poly(8), 7, 3).unwrap().norm() < 1e-13);
        assert_eq!(
            recover_wm(&psi_poly(8), 6, 3),
            Err(Error::DegreeMismatch { expected: 6, found: 7 })
        );
    }

    #[test]
    fn recover_wm_is_minus_trace() {
        let mu = [Complex64::new(0.3, 0.1), re(-1.2), Complex64::new(0.4, -0.7), re(1.9)];
        let got = recover_wm(&poly_from_roots(&mu), 4, 2).unwrap();
        let trace: Complex64 = mu.iter().sum();
        assert!((got + trace).norm() < 1e-13);
    }

    #[test]
    fn free_spectrum_inverts_to_zero() {
        for (l, m) in [(4, 2), (6, 3), (8, 4), (10, 1), (10, 10)] {
            let w = solve_nondegenerate(&free_mu(l), m).unwrap();
            assert!(w.iter().all(|x| x.norm() < 1e-10), "l = {l}, m = {m}");
        }
    }

    #[test]
    fn small_round_trip() {
        let w: Vec<Complex64> = [0.1, 0.2, 0.3, 0.4].into_iter().map(re).collect();
        let spec = DiscreteProblem::from_w(w.clone(), 2).unwrap().spectrum().unwrap();
        let back = solve_nondegenerate(spec.mu(), 2).unwrap();
        assert!(max_err(&back, &w) < 1e-8);
    }

    #[test]
    fn guards() {
        assert_eq!(
            solve_nondegenerate(&free_mu(9), 5),
            Err(Error::DegenerateConfiguration { l: 9, m: 5, d: 5 })
        );
        assert_eq!(
            solve_degenerate(
                &free_mu(4),
                2,
                4,
                &DegenerateData {
                    side: Side::Left,
                    known_w: vec![]
                }
            ),
            Err(Error::NotDegenerate { l: 4, m: 2 })
        );
        let data = DegenerateData {
            side: Side::Right,
            known_w: vec![re(0.0); 5],
        };
        assert!(matches!(
            solve_degenerate(&free_mu(5), 5, 9, &data),
            Err(Error::SideDataMismatch(_))
        ));
        let data = DegenerateData {
            side: Side::Left,
            known_w: vec![re(0.0); 2],
        };
        assert_eq!(
            solve_degenerate(&free_mu(5), 3, 5, &data),
            Err(Error::WrongCount { expected: 3, found: 5 })
        );
        assert_eq!(
            solve_symmetric(&free_mu(3), 4),
            Err(Error::WrongCount { expected: 4, found: 3 })
        );
    }

    #[test]
    fn degenerate_free_problem() {
        let mu: Vec<Complex64> = [1, 3, 5]
            .into_iter()
            .map(|n| re(2.0 * (PI * n as f64 / 6.0).cos()))
            .collect();
        let data = DegenerateData {
            side: Side::Left,
            known_w: vec![re(0.0); 2],
        };
        let w = solve_degenerate(&mu, 3, 5, &data).unwrap();
        assert!(w.iter().all(|x| x.norm() < 1e-10));
    }

    #[test]
    fn symmetric_free_problem() {
        let m = 5;
        let mu: Vec<Complex64> = (0..m)
            .map(|i| re(2.0 * (PI * (2 * i + 1) as f64 / (2 * m) as f64).cos()))
            .collect();
        let s = solve_symmetric(&mu, m).unwrap();
        assert!(s.w_m.norm() < 1e-12);
        assert!(s.pair_sums.iter().all(|x| x.norm() < 1e-12));
        assert_eq!(s.symmetric_w().len(), 9);
    }
}
