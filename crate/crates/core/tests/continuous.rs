use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use frozen_spectral::continuous::*;
use frozen_spectral::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn named() -> [(&'static dyn Potential, [f64; 5]); 3] {
    [
        (&Quadratic, [3.5895, 8.8607, 25.0226, 48.9922, 81.0036]),
        (&Tent, [2.2432, 9.1668, 25.0542, 49.0268, 81.0160]),
        (&Constant, [2.3477, 8.4962, 25.2631, 48.8138, 81.1431]),
    ]
}

#[test]
fn closed_forms_match_quadrature_at_random_rho() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (pot, _) in named() {
        for _ in 0..20 {
            let rho = c(rng.gen_range(0.5..20.0));
            let a = r_eval(pot, rho).unwrap();
            let b = r_quadrature(pot, rho).unwrap();
            assert!((a - b).norm() <= 1e-8, "{} at {rho}", pot.name());
        }
    }
}

#[test]
fn small_rho_series_matches_quadrature() {
    for (pot, _) in named() {
        for rho in [0.0, 1e-6, 0.01, 0.05, 0.099] {
            let a = r_eval(pot, c(rho)).unwrap();
            let b = r_quadrature(pot, c(rho)).unwrap();
            assert!((a - b).norm() <= 1e-10, "{} at {rho}", pot.name());
        }
        let z = Complex64::new(0.03, 0.04);
        assert!((r_eval(pot, z).unwrap() - r_quadrature(pot, z).unwrap()).norm() <= 1e-10);
    }
}

#[test]
fn table_eigenvalues() {
    for (pot, want) in named() {
        let s = continuous_spectrum(pot, 9).unwrap();
        assert_eq!(s.odd.len(), 5);
        assert_eq!(s.even, vec![(2, 4.0), (4, 16.0), (6, 36.0), (8, 64.0)]);
        for ((n, got), want) in s.odd.iter().zip(want) {
            assert!((got - want).abs() <= 2e-3, "{} n = {n}: {got} vs {want}", pot.name());
            assert!(r_eval(pot, c(got.sqrt())).unwrap().norm() <= 1e-10);
        }
    }
}

#[test]
fn eigenvalues_are_zeros_of_delta() {
    let s = continuous_spectrum(&Tent, 7).unwrap();
    for (_, lam) in s.all() {
        assert!(delta_eval(&Tent, c(lam)).unwrap().norm() <= 1e-10);
    }
}

#[test]
fn determinant_for_free_problem_any_frozen_point() {
    for a in [0.3, FRAC_PI_2, 2.0] {
        for lam in [c(0.7), c(5.0), Complex64::new(2.0, -1.0)] {
            let rho = lam.sqrt();
            let want = (rho * PI).sin() / rho;
            let got = delta_determinant(&Zero, lam, a).unwrap();
            assert!((got - want).norm() <= 1e-12);
        }
    }
}

#[test]
fn determinant_agrees_with_factorized_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for pot in [&Quadratic as &dyn Potential, &Tent, &Constant] {
        for _ in 0..5 {
            let lam = Complex64::new(rng.gen_range(0.5..60.0), rng.gen_range(-2.0..2.0));
            let a = delta_eval(pot, lam).unwrap();
            let b = delta_determinant(pot, lam, FRAC_PI_2).unwrap();
            assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()), "{} at {lam}", pot.name());
        }
    }
}

#[test]
fn first_order_residual_decays() {
    let s = continuous_spectrum(&Quadratic, 41).unwrap();
    let (mut ns, mut rs) = (Vec::new(), Vec::new());
    for &(n, lam) in &s.odd {
        let r = (lam - (n * n) as f64 - first_order_shift(&Quadratic, n).unwrap()).abs();
        ns.push(n as f64);
        rs.push(r);
    }
    let k = slope(&ns, &rs);
    assert!(k <= -0.8, "slope {k}");
}

#[test]
fn tent_eigenvalues_approach_squares_quadratically() {
    let s = continuous_spectrum(&Tent, 41).unwrap();
    let ns: Vec<f64> = s.odd.iter().map(|&(n, _)| n as f64).collect();
    let es: Vec<f64> = s.odd.iter().map(|&(n, lam)| (lam - (n * n) as f64).abs()).collect();
    let k = slope(&ns, &es);
    assert!(k <= -1.6, "slope {k}");
}

#[test]
fn sampled_csv_potential_tracks_closed_form() {
    let dir = std::env::temp_dir().join(format!("fs-cont-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quad.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# q = x (pi - x)").unwrap();
    writeln!(f, "x,q").unwrap();
    for i in 0..=200 {
        let x = PI * i as f64 / 200.0;
        writeln!(f, "{x:.17},{:.17}", x * (PI - x)).unwrap();
    }
    drop(f);
    let sampled = PotentialRegistry::default().resolve(path.to_str().unwrap()).unwrap();
    assert_eq!(sampled.name(), "quad");
    for t in [0.0, 0.4, 1.1, FRAC_PI_2] {
        assert!((sampled.p(t) - sampled.q(t) - sampled.q(PI - t)).abs() < 1e-15);
    }
    let a = continuous_spectrum(sampled.as_ref(), 9).unwrap();
    let b = continuous_spectrum(&Quadratic, 9).unwrap();
    for ((_, x), (_, y)) in a.odd.iter().zip(&b.odd) {
        assert!((x - y).abs() <= 1e-6, "{x} vs {y}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zero_samples_give_free_spectrum() {
    let x: Vec<f64> = (0..=10).map(|i| PI * i as f64 / 10.0).collect();
    let pot = SampledPotential::new("zeros", x, vec![0.0; 11]).unwrap();
    for rho in [1.0, 3.0, 5.0] {
        assert!(r_quadrature(&pot, c(rho)).unwrap().norm() < 1e-14);
    }
    let s = continuous_spectrum(&pot, 9).unwrap();
    for (n, lam) in s.all() {
        assert_eq!(lam, (n * n) as f64);
    }
}

#[test]
fn malformed_csv_is_rejected() {
    let dir = std::env::temp_dir().join(format!("fs-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.csv");
    std::fs::write(&path, "0,1\n0.5,abc\n").unwrap();
    assert!(SampledPotential::from_csv(&path).is_err());
    std::fs::write(&path, "0,1\n0.5\n").unwrap();
    assert!(SampledPotential::from_csv(&path).is_err());
    std::fs::write(&path, "0,1\n2,1\n1,1\n").unwrap();
    assert!(SampledPotential::from_csv(&path).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
