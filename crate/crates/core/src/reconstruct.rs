//! Potential recovery from odd-indexed continuous eigenvalues, error tables
//! and the convergence harness.
//!
//! With `l = 2m - 1` and `h = pi/(2m)`, each `lambda_n` is shifted to a
//! surrogate discrete eigenvalue by the correction term, the symmetric
//! discrete inverse problem is solved, and weights are scaled back by `h^2`.

use std::f64::consts::PI;
use std::fmt;
use std::thread;

use num_complex::Complex64;

use crate::continuous::{continuous_spectrum, Potential};
use crate::discrete::{free_eigenvalue, lambda_to_mu, mu_to_lambda, DiscreteProblem, Spectrum};
use crate::inverse::{reduce_spectrum, solve_symmetric};
use crate::{Error, Result};

/// Largest imaginary part tolerated when a real result is expected.
pub const IMAG_TOL: f64 = 1e-9;

pub fn step(m: usize) -> f64 {
    PI / (2 * m) as f64
}

/// `lambda_n - n^2 + 4 sin^2(n h / 2) / h^2` with `h = pi/(2m)`.
pub fn correction(lambda_n: f64, n: usize, m: usize) -> f64 {
    lambda_n - (n * n) as f64 + free_eigenvalue(n, step(m))
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(Error::ComplexResidue { imag: z.im });
    }
    Ok(z.re)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub m: usize,
    pub h: f64,
    /// The input `lambda_n`, `n = 1, 3, ..., 2m - 1`.
    pub lambda: Vec<f64>,
    pub tilde_lambda: Vec<f64>,
    pub mu: Vec<f64>,
    /// psi coordinates `z_1..z_m`.
    pub z: Vec<Complex64>,
    /// Recovered `q` at `x_1..x_m`.
    pub q_tilde: Vec<f64>,
}

impl ReconstructionResult {
    pub fn l(&self) -> usize {
        2 * self.m - 1
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    /// `q_tilde` on all of `x_1..x_l`, mirrored about `x_m`.
    pub fn full_grid(&self) -> Vec<f64> {
        let mut out = self.q_tilde.clone();
        out.extend(self.q_tilde[..self.m - 1].iter().rev());
        out
    }
}

pub fn reconstruct(lambdas_odd: &[f64], m: usize) -> Result<ReconstructionResult> {
    if m == 0 {
        return Err(Error::BadIndex { m, l: 0 });
    }
    if lambdas_odd.len() != m {
        return Err(Error::WrongCount {
            expected: m,
            found: lambdas_odd.len(),
        });
    }
    let h = step(m);
    let tilde_lambda: Vec<f64> = lambdas_odd
        .iter()
        .enumerate()
        .map(|(k, &lam)| correction(lam, 2 * k + 1, m))
        .collect();
    let mu: Vec<f64> = tilde_lambda
        .iter()
        .map(|&lam| lambda_to_mu(Complex64::new(lam, 0.0), h).re)
        .collect();
    let mu_c: Vec<Complex64> = mu.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let sol = solve_symmetric(&mu_c, m)?;
    let mut z = sol.pair_sums.clone();
    z.push(sol.w_m);
    let h2 = h * h;
    let mut q_tilde = Vec::with_capacity(m);
    for (j, &zj) in z.iter().enumerate() {
        let scale = if j + 1 < m { 0.5 / h2 } else { 1.0 / h2 };
        q_tilde.push(real_part(zj * scale)?);
    }
    Ok(ReconstructionResult {
        m,
        h,
        lambda: lambdas_odd.to_vec(),
        tilde_lambda,
        mu,
        z,
        q_tilde,
    })
}

/// Forward spectrum of the sampled problem with `l = 2m - 1`.
pub fn discrete_oracle(pot: &dyn Potential, m: usize) -> Result<Spectrum> {
    DiscreteProblem::from_fn(|x| pot.q(x), 2 * m - 1, m)?.spectrum()
}

/// Non-degenerate eigenvalues `lambda_{n,l}`, `n = 1, 3, ..., 2m-1`, of a
/// full discrete spectrum with `l = 2m - 1`.
pub fn odd_discrete_lambdas(spectrum: &Spectrum, m: usize) -> Result<Vec<f64>> {
    let odd = reduce_spectrum(spectrum.mu(), 2 * m - 1, m)?;
    let mut out = odd
        .into_iter()
        .map(|mu| real_part(mu_to_lambda(mu, spectrum.h())))
        .collect::<Result<Vec<f64>>>()?;
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenRow {
    pub n: usize,
    pub lambda_n: f64,
    pub lambda_nl: Option<f64>,
    pub tilde: f64,
    /// `lambda_{n,l} - tilde`
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialRow {
    pub j: usize,
    pub x: f64,
    pub q: f64,
    pub q_tilde: f64,
    /// `q(x_j) - q_tilde`
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub name: String,
    pub eigen: Vec<EigenRow>,
    pub potential: Vec<PotentialRow>,
}

pub fn error_report(
    result: &ReconstructionResult,
    pot: &dyn Potential,
    oracle: Option<&Spectrum>,
) -> Result<ErrorReport> {
    let discrete = oracle.map(|s| odd_discrete_lambdas(s, result.m)).transpose()?;
    let eigen = (0..result.m)
        .map(|k| {
            let lambda_nl = discrete.as_ref().map(|d| d[k]);
            EigenRow {
                n: 2 * k + 1,
                lambda_n: result.lambda[k],
                lambda_nl,
                tilde: result.tilde_lambda[k],
                delta: lambda_nl.map(|v| v - result.tilde_lambda[k]),
            }
        })
        .collect();
    let potential = (1..=result.m)
        .map(|j| {
            let x = result.x(j);
            let q = pot.q(x);
            PotentialRow {
                j,
                x,
                q,
                q_tilde: result.q_tilde[j - 1],
                delta: q - result.q_tilde[j - 1],
            }
        })
        .collect();
    Ok(ErrorReport {
        name: pot.name().to_string(),
        eigen,
        potential,
    })
}

/// Four decimals, with `-0.0000` printed as `0.0000`.
pub fn fmt4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

impl ErrorReport {
    pub fn max_abs_delta_q(&self) -> f64 {
        self.potential.iter().map(|r| r.delta.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for ErrorReport {
    /// Quantities as rows, indices as columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |v: Option<f64>| v.map(fmt4).unwrap_or_else(|| "-".into());
        let line = |f: &mut fmt::Formatter<'_>, label: &str, vals: Vec<String>| -> fmt::Result {
            write!(f, "{label:<14}")?;
            for v in vals {
                write!(f, "{v:>10}")?;
            }
            writeln!(f)
        };
        writeln!(f, "potential: {}", self.name)?;
        line(f, "n", self.eigen.iter().map(|r| r.n.to_string()).collect())?;
        line(f, "lambda_n", self.eigen.iter().map(|r| fmt4(r.lambda_n)).collect())?;
        line(f, "lambda_n,l", self.eigen.iter().map(|r| cell(r.lambda_nl)).collect())?;
        line(f, "tilde_lambda", self.eigen.iter().map(|r| fmt4(r.tilde)).collect())?;
        line(f, "delta_n,l", self.eigen.iter().map(|r| cell(r.delta)).collect())?;
        line(f, "j", self.potential.iter().map(|r| r.j.to_string()).collect())?;
        line(f, "q(x_j)", self.potential.iter().map(|r| fmt4(r.q)).collect())?;
        line(f, "tilde_q", self.potential.iter().map(|r| fmt4(r.q_tilde)).collect())?;
        line(f, "delta_j", self.potential.iter().map(|r| fmt4(r.delta)).collect())
    }
}

/// `p_0 sin(0)/2 + sum_{j=1}^{m-1} p_j sin(n x_j) + p_m sin(n x_m)/2` with
/// `x_j = j pi/(2m)`.
pub fn trapz_prime_sum(p_values: &[Complex64], n: usize, m: usize) -> Result<Complex64> {
    if p_values.len() != m + 1 {
        return Err(Error::WrongCount {
            expected: m + 1,
            found: p_values.len(),
        });
    }
    let h = step(m);
    let term = |j: usize| p_values[j] * (n as f64 * j as f64 * h).sin();
    let inner: Complex64 = (1..m).map(term).sum();
    Ok(inner + 0.5 * (term(0) + term(m)))
}

/// Outcome of a log-log fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slope {
    /// Every error is zero to rounding; no rate exists.
    Exact,
    Fitted(f64),
    /// Fewer than two usable points.
    Insufficient,
}

impl Slope {
    pub fn value(self) -> Option<f64> {
        match self {
            Slope::Fitted(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Exact => write!(f, "exact"),
            Slope::Fitted(s) => write!(f, "{s:.4}"),
            Slope::Insufficient => write!(f, "insufficient"),
        }
    }
}

/// Errors at or below this are treated as exact zeros.
pub const EXACT_TOL: f64 = 1e-9;

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Slope {
    if !ys.is_empty() && ys.iter().all(|y| y.abs() <= EXACT_TOL) {
        return Slope::Exact;
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return Slope::Insufficient;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Slope::Insufficient;
    }
    Slope::Fitted(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceCell {
    pub m: usize,
    pub n: usize,
    pub h: f64,
    pub lambda_n: f64,
    pub lambda_nl: f64,
    pub tilde: f64,
    /// `|lambda_{n,l} - tilde|`
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub cells: Vec<ConvergenceCell>,
    /// Slope of `error` against `h` for each requested `n`.
    pub slopes: Vec<(usize, Slope)>,
}

impl ConvergenceStudy {
    pub fn slope(&self, n: usize) -> Option<Slope> {
        self.slopes.iter().find(|(k, _)| *k == n).map(|&(_, s)| s)
    }
}

/// Every odd-`n` cell for one `m`: continuous, discrete and corrected values.
fn cells_for(pot: &dyn Potential, m: usize) -> Result<Vec<ConvergenceCell>> {
    let h = step(m);
    let cont = continuous_spectrum(pot, 2 * m - 1)?;
    let disc = odd_discrete_lambdas(&discrete_oracle(pot, m)?, m)?;
    Ok(cont
        .odd
        .iter()
        .zip(disc)
        .map(|(&(n, lambda_n), lambda_nl)| {
            let tilde = correction(lambda_n, n, m);
            ConvergenceCell {
                m,
                n,
                h,
                lambda_n,
                lambda_nl,
                tilde,
                error: (lambda_nl - tilde).abs(),
            }
        })
        .collect())
}

fn cells_parallel(pot: &dyn Potential, ms: &[usize]) -> Result<Vec<Vec<ConvergenceCell>>> {
    thread::scope(|s| {
        let handles: Vec<_> = ms.iter().map(|&m| s.spawn(move || cells_for(pot, m))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// `|lambda_{n,l} - tilde_lambda_{n,l}|` for each `n` in `ns` across the
/// grids `ms` (cells with `n > 2m - 1` are skipped).
pub fn convergence_study(pot: &dyn Potential, ms: &[usize], ns: &[usize]) -> Result<ConvergenceStudy> {
    let per_m = cells_parallel(pot, ms)?;
    let cells: Vec<ConvergenceCell> = per_m.into_iter().flatten().filter(|c| ns.contains(&c.n)).collect();
    let slopes = ns
        .iter()
        .map(|&n| {
            let (hs, es): (Vec<f64>, Vec<f64>) = cells.iter().filter(|c| c.n == n).map(|c| (c.h, c.error)).unzip();
            (n, log_log_slope(&hs, &es))
        })
        .collect();
    Ok(ConvergenceStudy { cells, slopes })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformPoint {
    pub m: usize,
    pub h: f64,
    /// The worst `n` and its error.
    pub n: usize,
    pub error: f64,
}

/// `max |(lambda_n - n^2) - (lambda_{n,l} - 4 sin^2(nh/2)/h^2)|` over odd
/// `n` with `n/(2m) >= alpha`, per `m`, and its slope against `h`.
pub fn uniform_correction_residual(
    pot: &dyn Potential,
    ms: &[usize],
    alpha: f64,
) -> Result<(Vec<UniformPoint>, Slope)> {
    let per_m = cells_parallel(pot, ms)?;
    let mut points = Vec::new();
    for (cells, &m) in per_m.iter().zip(ms) {
        let worst = cells
            .iter()
            .filter(|c| c.n as f64 / (2 * m) as f64 >= alpha)
            .max_by(|a, b| a.error.total_cmp(&b.error));
        if let Some(c) = worst {
            points.push(UniformPoint {
                m,
                h: c.h,
                n: c.n,
                error: c.error,
            });
        }
    }
    let (hs, es): (Vec<f64>, Vec<f64>) = points.iter().map(|p| (p.h, p.error)).unzip();
    let slope = log_log_slope(&hs, &es);
    Ok((points, slope))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrapezoidPoint {
    pub m: usize,
    pub n: usize,
    pub h: f64,
    pub sum: f64,
}

/// `|sum' p_j sin(n x_j)|` at `n` = the smallest odd integer with
/// `n >= ratio * 2m`, per `m`, and its slope against `h`.
pub fn trapezoid_sums(pot: &dyn Potential, ms: &[usize], ratio: f64) -> Result<(Vec<TrapezoidPoint>, Slope)> {
    let mut points = Vec::new();
    for &m in ms {
        let h = step(m);
        let mut n = (ratio * (2 * m) as f64).ceil().max(1.0) as usize;
        if n.is_multiple_of(2) {
            n += 1;
        }
        let p: Vec<Complex64> = (0..=m).map(|j| Complex64::new(pot.p(j as f64 * h), 0.0)).collect();
        let sum = trapz_prime_sum(&p, n, m)?;
        points.push(TrapezoidPoint {
            m,
            n,
            h,
            sum: sum.norm(),
        });
    }
    let (hs, ss): (Vec<f64>, Vec<f64>) = points.iter().map(|p| (p.h, p.sum)).unzip();
    let slope = log_log_slope(&hs, &ss);
    Ok((points, slope))
}
