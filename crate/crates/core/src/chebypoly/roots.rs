use std::f64::consts::TAU;

use num_complex::Complex64;

use super::Poly;
use crate::{Error, Result};

/// Residual bound for [`poly_roots`]:
/// `|p(r)| / (‖p‖ (1 + |r|)^deg)` must not exceed this at any returned root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub struct AberthOptions {
    pub max_iterations: usize,
    /// Newton polishing steps applied to each root after the simultaneous phase.
    pub polish_steps: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            polish_steps: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Aberth–Ehrlich simultaneous iteration for a function with exactly `degree`
/// zeros, given `value_and_derivative`.
///
/// Starting points sit on a circle of radius `radius`, rotated off the real
/// axis. Updates are applied in place (Gauss-Seidel style). Each root is
/// frozen once its correction falls to the rounding level; afterwards every
/// root gets up to `polish_steps` Newton steps that are kept only if they
/// reduce the residual.
pub fn aberth<F>(degree: usize, radius: f64, value_and_derivative: F, opts: AberthOptions) -> AberthOutcome
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / degree as f64 + 0.4))
        .collect();
    let mut done = vec![false; degree];
    let mut iterations = 0;
    let mut converged = degree == 0;
    while iterations < opts.max_iterations && !converged {
        iterations += 1;
        converged = true;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let (f, df) = value_and_derivative(z[i]);
            if f == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..degree).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = if df == Complex64::new(0.0, 0.0) {
                // flat spot: nudge outward
                Complex64::new(1e-3 * (1.0 + z[i].norm()), 0.0)
            } else {
                let ratio = f / df;
                ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion)
            };
            if !step.is_finite() {
                converged = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                converged = false;
            }
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..opts.polish_steps {
            let (f, df) = value_and_derivative(*zi);
            if df == Complex64::new(0.0, 0.0) || f == Complex64::new(0.0, 0.0) {
                break;
            }
            let candidate = *zi - f / df;
            if candidate.is_finite() && value_and_derivative(candidate).0.norm() < f.norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    AberthOutcome {
        roots: z,
        iterations,
        converged,
    }
}

/// Scaled residual `|p(r)| / (‖p‖ (1 + |r|)^deg)`.
pub fn scaled_residual(p: &Poly, root: Complex64) -> f64 {
    let deg = p.degree().max(0) as i32;
    p.eval(root).norm() / (p.norm() * (1.0 + root.norm()).powi(deg))
}

/// All complex roots of `p`, with multiplicity.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    poly_roots_with(p, AberthOptions::default())
}

pub fn poly_roots_with(p: &Poly, opts: AberthOptions) -> Result<Vec<Complex64>> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow {
            degree: p.degree(),
            required: 1,
        });
    }
    let deg = p.degree() as usize;
    let lead = p.leading();
    let radius = 1.0 + p.coeffs()[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let outcome = aberth(deg, radius, |z| p.eval_with_derivative(z), opts);
    let worst = outcome.roots.iter().map(|&r| scaled_residual(p, r)).fold(0.0, f64::max);
    if worst.is_nan() || worst > ROOT_RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            iterations: outcome.iterations,
            worst_residual: worst,
        });
    }
    Ok(outcome.roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebypoly::{poly_from_roots, psi_poly, psi_zeros};

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn roots_of_psi6() {
        let roots = poly_roots(&psi_poly(6)).unwrap();
        let mut expected = psi_zeros(6);
        expected.sort_by(f64::total_cmp);
        for (got, want) in sorted_re(roots.clone()).iter().zip(&expected) {
            assert!((got - want).abs() < 1e-10);
        }
        assert!(roots.iter().all(|z| z.im.abs() < 1e-10));
    }

    #[test]
    fn roots_of_mu_squared_minus_one() {
        let roots = sorted_re(poly_roots(&Poly::from_real(&[-1.0, 0.0, 1.0])).unwrap());
        assert!((roots[0] + 1.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_root_meets_residual_contract() {
        let p = poly_from_roots(&[Complex64::new(0.5, 0.0); 2]);
        let p = &p * &Poly::linear(Complex64::new(-1.0, 0.5));
        let roots = poly_roots(&p).unwrap();
        assert!(roots.iter().all(|&r| scaled_residual(&p, r) <= ROOT_RESIDUAL_TOL));
    }

    #[test]
    fn constant_polynomial_rejected() {
        assert!(matches!(
            poly_roots(&Poly::one()),
            Err(Error::DegreeTooLow { degree: 0, .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let p = psi_poly(20);
        let opts = AberthOptions {
            max_iterations: 1,
            polish_steps: 0,
        };
        assert!(matches!(
            poly_roots_with(&p, opts),
            Err(Error::NoConvergence { iterations: 1, .. })
        ));
    }
}
