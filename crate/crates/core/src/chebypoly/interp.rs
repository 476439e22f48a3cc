use num_complex::Complex64;

use super::{Poly, PsiSeries};
use crate::{Error, Result};

/// Nodes closer than this are treated as coincident.
pub const DUPLICATE_NODE_TOL: f64 = 1e-14;

/// Monic `prod (mu - r)`.
///
/// Conjugate pairs are matched first and multiplied in as real quadratics,
/// so conjugate-symmetric inputs give real coefficients.
pub fn poly_from_roots(roots: &[Complex64]) -> Poly {
    let mut pending: Vec<Complex64> = roots.to_vec();
    let mut acc = Poly::one();
    while let Some(r) = pending.pop() {
        if r.im == 0.0 {
            acc = &acc * &Poly::linear(r);
            continue;
        }
        let tol = 1e-12 * (1.0 + r.norm());
        let partner = pending
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p - r.conj()).norm()))
            .filter(|&(_, dist)| dist <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i);
        match partner {
            Some(i) => {
                let p = pending.swap_remove(i);
                let mid = (r + p.conj()) * 0.5;
                let quad = Poly::from_real(&[mid.norm_sqr(), -2.0 * mid.re, 1.0]);
                acc = &acc * &quad;
            }
            None => acc = &acc * &Poly::linear(r),
        }
    }
    acc
}

/// Leja ordering: start from the node of largest modulus, then repeatedly
/// take the node maximizing the product of distances to those already chosen.
pub fn leja_order(nodes: &[Complex64]) -> Vec<usize> {
    let n = nodes.len();
    let mut order = Vec::with_capacity(n);
    if n == 0 {
        return order;
    }
    let first = (0..n)
        .max_by(|&a, &b| nodes[a].norm().total_cmp(&nodes[b].norm()))
        .unwrap();
    order.push(first);
    let mut used = vec![false; n];
    used[first] = true;
    // log-products avoid overflow for long node sets
    let mut score: Vec<f64> = nodes.iter().map(|z| (z - nodes[first]).norm().ln()).collect();
    for _ in 1..n {
        let next = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&a, &b| score[a].total_cmp(&score[b]))
            .unwrap();
        used[next] = true;
        order.push(next);
        for i in 0..n {
            if !used[i] {
                score[i] += (nodes[i] - nodes[next]).norm().ln();
            }
        }
    }
    order
}

fn newton_form(nodes: &[Complex64], values: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if nodes.len() != values.len() {
        return Err(Error::WrongCount {
            expected: nodes.len(),
            found: values.len(),
        });
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= DUPLICATE_NODE_TOL {
                return Err(Error::DuplicateNode { first: i, second: j });
            }
        }
    }
    let order = leja_order(nodes);
    let x: Vec<Complex64> = order.iter().map(|&i| nodes[i]).collect();
    let mut dd: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let n = x.len();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - k]);
        }
    }
    Ok((x, dd))
}

/// The unique polynomial of degree `< nodes.len()` through the given points,
/// via Newton divided differences on Leja-ordered nodes.
pub fn interpolate(nodes: &[Complex64], values: &[Complex64]) -> Result<Poly> {
    let (x, dd) = newton_form(nodes, values)?;
    let mut acc = Poly::zero();
    for i in (0..x.len()).rev() {
        acc = &(&acc * &Poly::linear(x[i])) + &Poly::constant(dd[i]);
    }
    Ok(acc)
}

/// Same interpolant as [`interpolate`], with the Newton form expanded
/// directly in the psi basis (`nodes.len()` coordinates, at least one).
///
/// Never passes through monomial coefficients, which lose digits quickly for
/// nodes clustered in `[-2, 2]`.
pub fn interpolate_psi(nodes: &[Complex64], values: &[Complex64]) -> Result<PsiSeries> {
    let (x, dd) = newton_form(nodes, values)?;
    let mut acc = PsiSeries::zeros(0);
    for i in (0..x.len()).rev() {
        let shifted = acc.mul_mu();
        let mut next = &shifted - &acc.scale(x[i]);
        next.add_term(1, dd[i]);
        acc = next;
    }
    Ok(acc.truncated(x.len().max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebypoly::{psi_poly, psi_zeros};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn empty_product_is_one() {
        assert_eq!(poly_from_roots(&[]), Poly::one());
        assert_eq!(
            poly_from_roots(&[re(1.0), re(-1.0)]),
            Poly::from_real(&[-1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn psi_zeros_rebuild_psi() {
        for l in 1..12 {
            let roots: Vec<Complex64> = psi_zeros(l + 1).into_iter().map(re).collect();
            let p = poly_from_roots(&roots);
            assert!((&p - &psi_poly(l + 1)).norm() < 1e-12, "l = {l}");
        }
    }

    #[test]
    fn conjugate_pairs_give_real_coefficients() {
        let roots = [
            Complex64::new(0.3, 0.8),
            re(1.1),
            Complex64::new(-1.0, -0.25),
            Complex64::new(0.3, -0.8),
            Complex64::new(-1.0, 0.25),
        ];
        let p = poly_from_roots(&roots);
        assert_eq!(p.degree(), 5);
        assert!(p.coeffs().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn constant_and_quadratic_interpolation() {
        assert_eq!(interpolate(&[re(0.0)], &[re(7.0)]).unwrap(), Poly::constant(re(7.0)));
        let target = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let nodes: Vec<Complex64> = psi_zeros(4).into_iter().map(re).collect();
        let values: Vec<Complex64> = nodes.iter().map(|&z| target.eval(z)).collect();
        let p = interpolate(&nodes, &values).unwrap();
        assert!((&p - &target).norm() < 1e-12);
    }

    #[test]
    fn duplicate_nodes_are_rejected() {
        let err = interpolate(&[re(1.0), re(0.5), re(1.0)], &[re(0.0); 3]).unwrap_err();
        assert_eq!(err, Error::DuplicateNode { first: 0, second: 2 });
    }

    #[test]
    fn psi_interpolant_matches_monomial_one() {
        let nodes: Vec<Complex64> = psi_zeros(9).into_iter().map(re).collect();
        let values: Vec<Complex64> = nodes.iter().map(|z| Complex64::new(z.re.cos(), z.re.sin())).collect();
        let mono = interpolate(&nodes, &values).unwrap();
        let psi = interpolate_psi(&nodes, &values).unwrap();
        assert_eq!(psi.len(), 8);
        assert!((&psi.to_poly() - &mono).norm() < 1e-12);
        assert_eq!(interpolate_psi(&[], &[]).unwrap(), PsiSeries::zeros(1));
    }

    #[test]
    fn leja_starts_at_largest_node() {
        let nodes: Vec<Complex64> = [0.1, -1.9, 1.0, 0.5].into_iter().map(re).collect();
        let order = leja_order(&nodes);
        assert_eq!(order[0], 1);
        assert_eq!(order[1], 2);
    }
}
