use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::{Error, Result};

/// Successive panel doublings must agree to this, relative to `max(1, |I|)`.
pub const QUADRATURE_TOL: f64 = 1e-10;
const MAX_PANELS: usize = 1 << 15;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(8).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

fn composite(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        for &(x, w) in rule() {
            sum += f(mid + half * x) * w;
        }
    }
    sum * half
}

/// Composite 8-point Gauss-Legendre on `[a, b]`, doubling the panel count
/// from `start_panels` until two successive values agree.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, start_panels: usize) -> Result<Complex64> {
    let mut panels = start_panels.max(1);
    let mut prev = composite(&f, a, b, panels);
    let mut change = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        change = (next - prev).norm();
        if change <= QUADRATURE_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure { last_change: change })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_oscillatory() {
        let v = integrate(|t| Complex64::new(t * t * t, 0.0), 0.0, 2.0, 1).unwrap();
        assert!((v.re - 4.0).abs() < 1e-13);
        let v = integrate(|t| Complex64::new((40.0 * t).sin(), 0.0), 0.0, 1.0, 4).unwrap();
        assert!((v.re - (1.0 - 40f64.cos()) / 40.0).abs() < 1e-11);
    }

    #[test]
    fn kink_converges_algebraically() {
        let v = integrate(|t| Complex64::new((t - 0.3).abs(), 0.0), 0.0, 1.0, 1).unwrap();
        assert!((v.re - (0.045 + 0.245)).abs() < 1e-9);
    }

    #[test]
    fn nonintegrable_fails() {
        let err = integrate(
            |t| Complex64::new(1.0 / t.sqrt().max(1e-300) / t.sqrt().max(1e-300), 0.0),
            0.0,
            1.0,
            1,
        );
        assert!(matches!(err, Err(Error::QuadratureFailure { .. })));
    }
}
