use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use frozen_spectral::continuous::{continuous_spectrum, r_eval, Potential, PotentialRegistry};
use frozen_spectral::discrete::{DiscreteProblem, Spectrum};
use frozen_spectral::inverse::{reduce_spectrum, solve_degenerate, solve_nondegenerate, DegenerateData, Side};
use frozen_spectral::reconstruct::{
    convergence_study, discrete_oracle, error_report, reconstruct, trapezoid_sums, uniform_correction_residual,
    ErrorReport, ReconstructionResult, Slope,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::input::{read_complex_list, read_real_list};
use crate::output::{complex_list, emit, put_complex, Report, Row};
use crate::CliError;

const TABLE_POTENTIALS: [&str; 3] = ["quadratic", "tent", "constant"];

pub fn run(command: Command) -> Result<(), CliError> {
    let registry = PotentialRegistry::default();
    let (report, out) = match command {
        Command::Forward(a) => (forward(&registry, &a)?, a.out),
        Command::Inverse(a) => (inverse(&a)?, a.out),
        Command::InverseDegenerate(a) => (inverse_degenerate(&a)?, a.out),
        Command::SpectrumContinuous(a) => (spectrum_continuous(&registry, &a)?, a.out),
        Command::Reconstruct(a) => (reconstruct_cmd(&registry, &a)?, a.out),
        Command::ReproduceTables(a) => (reproduce_tables(&registry, &a)?, a.out),
        Command::Convergence(a) => (convergence(&registry, &a)?, a.out),
    };
    emit(&report, &out)
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn resolve(registry: &PotentialRegistry, spec: &str) -> Result<Arc<dyn Potential>, CliError> {
    Ok(registry.resolve(spec)?)
}

/// Worst nearest-neighbour distance after greedy matching.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut pool = a.to_vec();
    let mut worst: f64 = 0.0;
    for z in b {
        let Some((i, d)) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
        else {
            return f64::INFINITY;
        };
        worst = worst.max(d);
        pool.swap_remove(i);
    }
    worst
}

fn spectrum_rows(report: &mut Report, s: &Spectrum) {
    for (k, (mu, lam)) in s.mu().iter().zip(s.lambda()).enumerate() {
        let mut row = Row::new();
        row.insert("n".into(), json!(k + 1));
        put_complex(&mut row, "lambda", *lam);
        put_complex(&mut row, "mu", *mu);
        report.rows.push(row);
    }
}

fn weight_rows(report: &mut Report, w: &[Complex64]) {
    let h = PI / (w.len() + 1) as f64;
    for (j, wj) in w.iter().enumerate() {
        let mut row = Row::new();
        row.insert("j".into(), json!(j + 1));
        put_complex(&mut row, "w", *wj);
        put_complex(&mut row, "q", wj / (h * h));
        report.rows.push(row);
    }
}

fn forward(registry: &PotentialRegistry, a: &ForwardArgs) -> Result<Report, CliError> {
    let mut report = Report::new("forward");
    let problem = if let Some(spec) = &a.potential {
        let l = a.l.ok_or_else(|| config("--potential needs --l"))?;
        let pot = resolve(registry, spec)?;
        report.params.insert("potential".into(), json!(pot.name()));
        DiscreteProblem::from_fn(|x| pot.q(x), l, a.m)?
    } else if let Some(path) = &a.w {
        let w = read_complex_list(path)?;
        if let Some(l) = a.l {
            if l != w.len() {
                return Err(config(format!("--l {l} but {} weights in {}", w.len(), path.display())));
            }
        }
        report.params.insert("w_file".into(), json!(path.display().to_string()));
        DiscreteProblem::from_w(w, a.m)?
    } else {
        let l = a.l.ok_or_else(|| config("--random-w needs --l"))?;
        let seed = a.seed.ok_or_else(|| config("--random-w needs --seed"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = (0..l)
            .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)))
            .collect();
        report.params.insert("seed".into(), json!(seed));
        DiscreteProblem::from_w(w, a.m)?
    };
    let (l, m) = (problem.l(), problem.m());
    report.params.insert("l".into(), json!(l));
    report.params.insert("m".into(), json!(m));
    report.params.insert("h".into(), json!(problem.h()));
    report.params.insert("w".into(), complex_list(problem.w()));
    let s = problem.spectrum()?;
    spectrum_rows(&mut report, &s);
    let scaled = s
        .mu()
        .iter()
        .map(|&mu| problem.d_eval(mu).norm() / (1.0 + mu.norm()).powi(l as i32))
        .fold(0.0, f64::max);
    let trace: Complex64 = s.mu().iter().sum();
    report.residuals.insert("max_scaled_d".into(), json!(scaled));
    report
        .residuals
        .insert("trace_defect".into(), json!((trace + problem.w_at(m)).norm()));
    report
        .residuals
        .insert("degeneracy".into(), json!(problem.degeneracy()));
    Ok(report)
}

fn inverse(a: &InverseArgs) -> Result<Report, CliError> {
    let mu = read_complex_list(&a.mu)?;
    if let Some(l) = a.l {
        if l != mu.len() {
            return Err(config(format!(
                "--l {l} but {} eigenvalues in {}",
                mu.len(),
                a.mu.display()
            )));
        }
    }
    let w = solve_nondegenerate(&mu, a.m)?;
    let mut report = Report::new("inverse");
    report.params.insert("l".into(), json!(mu.len()));
    report.params.insert("m".into(), json!(a.m));
    weight_rows(&mut report, &w);
    let back = DiscreteProblem::from_w(w, a.m)?.spectrum()?;
    report
        .residuals
        .insert("spectrum_mismatch".into(), json!(multiset_distance(back.mu(), &mu)));
    Ok(report)
}

fn inverse_degenerate(a: &DegenerateArgs) -> Result<Report, CliError> {
    let mu = read_complex_list(&a.mu)?;
    let known_w = read_complex_list(&a.known_w)?;
    let side = match a.side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let w = solve_degenerate(
        &mu,
        a.m,
        a.l,
        &DegenerateData {
            side,
            known_w: known_w.clone(),
        },
    )?;
    let mut report = Report::new("inverse-degenerate");
    report.params.insert("l".into(), json!(a.l));
    report.params.insert("m".into(), json!(a.m));
    report
        .params
        .insert("side".into(), json!(if side == Side::Left { "left" } else { "right" }));
    report.params.insert("known_w".into(), complex_list(&known_w));
    weight_rows(&mut report, &w);
    let back = DiscreteProblem::from_w(w, a.m)?.spectrum()?;
    let reduced = reduce_spectrum(back.mu(), a.l, a.m)?;
    report
        .residuals
        .insert("spectrum_mismatch".into(), json!(multiset_distance(&reduced, &mu)));
    Ok(report)
}

fn spectrum_continuous(registry: &PotentialRegistry, a: &ContinuousArgs) -> Result<Report, CliError> {
    if a.n_max == 0 {
        return Err(config("--n-max must be at least 1"));
    }
    let pot = resolve(registry, &a.potential)?;
    let s = continuous_spectrum(pot.as_ref(), a.n_max)?;
    let mut report = Report::new("spectrum-continuous");
    report.params.insert("potential".into(), json!(pot.name()));
    report.params.insert("n_max".into(), json!(a.n_max));
    for (n, lam) in s.all() {
        let mut row = Row::new();
        row.insert("n".into(), json!(n));
        row.insert("lambda".into(), json!(lam));
        row.insert("kind".into(), json!(if n % 2 == 1 { "odd" } else { "degenerate" }));
        report.rows.push(row);
    }
    let mut worst: f64 = 0.0;
    for &(_, lam) in &s.odd {
        worst = worst.max(r_eval(pot.as_ref(), Complex64::new(lam.sqrt(), 0.0))?.norm());
    }
    report.residuals.insert("max_abs_r".into(), json!(worst));
    Ok(report)
}

fn table_rows(result: &ReconstructionResult, rep: Option<&ErrorReport>, label: Option<&str>) -> Vec<Row> {
    (0..result.m)
        .map(|k| {
            let mut row = Row::new();
            if let Some(name) = label {
                row.insert("potential".into(), json!(name));
            }
            row.insert("n".into(), json!(2 * k + 1));
            row.insert("lambda_n".into(), json!(result.lambda[k]));
            if let Some(r) = rep {
                row.insert("lambda_nl".into(), json!(r.eigen[k].lambda_nl));
            }
            row.insert("tilde_lambda".into(), json!(result.tilde_lambda[k]));
            if let Some(r) = rep {
                row.insert("delta_nl".into(), json!(r.eigen[k].delta));
            }
            row.insert("j".into(), json!(k + 1));
            row.insert("x_j".into(), json!(result.x(k + 1)));
            if let Some(r) = rep {
                row.insert("q".into(), json!(r.potential[k].q));
            }
            row.insert("q_tilde".into(), json!(result.q_tilde[k]));
            if let Some(r) = rep {
                row.insert("delta_j".into(), json!(r.potential[k].delta));
            }
            row
        })
        .collect()
}

fn full_report(pot: &dyn Potential, result: &ReconstructionResult) -> Result<ErrorReport, CliError> {
    let oracle = discrete_oracle(pot, result.m)?;
    Ok(error_report(result, pot, Some(&oracle))?)
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.map(f64::abs).fold(0.0, f64::max)
}

fn reconstruct_cmd(registry: &PotentialRegistry, a: &ReconstructArgs) -> Result<Report, CliError> {
    if a.m == 0 {
        return Err(config("--m must be at least 1"));
    }
    let pot = a.potential.as_deref().map(|s| resolve(registry, s)).transpose()?;
    let lambdas = match (&a.lambdas, &pot) {
        (Some(path), _) => read_real_list(path)?,
        (None, Some(p)) => continuous_spectrum(p.as_ref(), 2 * a.m - 1)?.odd_values(),
        (None, None) => return Err(config("reconstruct needs --potential or --lambdas")),
    };
    let result = reconstruct(&lambdas, a.m)?;
    let mut report = Report::new("reconstruct");
    report.params.insert("m".into(), json!(a.m));
    report.params.insert("l".into(), json!(result.l()));
    report.params.insert("h".into(), json!(result.h));
    if let Some(p) = &pot {
        report.params.insert("potential".into(), json!(p.name()));
    }
    if let Some(path) = &a.lambdas {
        report
            .params
            .insert("lambdas_file".into(), json!(path.display().to_string()));
    }
    let rep = pot.as_ref().map(|p| full_report(p.as_ref(), &result)).transpose()?;
    report.rows = table_rows(&result, rep.as_ref(), None);
    report
        .params
        .insert("q_tilde_full_grid".into(), json!(result.full_grid()));
    if let Some(r) = &rep {
        report
            .residuals
            .insert("max_abs_delta_j".into(), json!(r.max_abs_delta_q()));
        report.residuals.insert(
            "max_abs_delta_nl".into(),
            json!(max_abs(r.eigen.iter().filter_map(|e| e.delta))),
        );
        report.text = Some(r.to_string());
    }
    Ok(report)
}

fn reproduce_tables(registry: &PotentialRegistry, a: &TablesArgs) -> Result<Report, CliError> {
    if a.m == 0 {
        return Err(config("--m must be at least 1"));
    }
    let mut report = Report::new("reproduce-tables");
    report.params.insert("m".into(), json!(a.m));
    let mut text = String::new();
    for name in TABLE_POTENTIALS {
        let pot = resolve(registry, name)?;
        let lambdas = continuous_spectrum(pot.as_ref(), 2 * a.m - 1)?.odd_values();
        let result = reconstruct(&lambdas, a.m)?;
        let rep = full_report(pot.as_ref(), &result)?;
        report.rows.extend(table_rows(&result, Some(&rep), Some(name)));
        report
            .residuals
            .insert(format!("{name}_max_abs_delta_j"), json!(rep.max_abs_delta_q()));
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&rep.to_string());
    }
    report.text = Some(text);
    Ok(report)
}

fn slope_value(s: Slope) -> Value {
    match s {
        Slope::Fitted(v) => json!(v),
        Slope::Exact => json!("exact"),
        Slope::Insufficient => json!("insufficient"),
    }
}

fn convergence(registry: &PotentialRegistry, a: &ConvergenceArgs) -> Result<Report, CliError> {
    if a.ms.is_empty() || a.ms.contains(&0) || a.trapz_ms.contains(&0) {
        return Err(config("grid sizes must be positive"));
    }
    if let Some(n) = a.ns.iter().find(|n| *n % 2 == 0) {
        return Err(config(format!("--ns must hold odd indices, got {n}")));
    }
    if !(a.alpha > 0.0 && a.alpha <= 1.0) || !(a.ratio > 0.0 && a.ratio < 1.0) {
        return Err(config("--alpha must lie in (0, 1] and --ratio in (0, 1)"));
    }
    let pot = resolve(registry, &a.potential)?;
    let study = convergence_study(pot.as_ref(), &a.ms, &a.ns)?;
    let (uniform, uniform_slope) = uniform_correction_residual(pot.as_ref(), &a.ms, a.alpha)?;
    let (trapz, trapz_slope) = trapezoid_sums(pot.as_ref(), &a.trapz_ms, a.ratio)?;

    let mut report = Report::new("convergence");
    report.params.insert("potential".into(), json!(pot.name()));
    report.params.insert("ms".into(), json!(a.ms));
    report.params.insert("ns".into(), json!(a.ns));
    report.params.insert("alpha".into(), json!(a.alpha));
    report.params.insert("trapz_ms".into(), json!(a.trapz_ms));
    report.params.insert("ratio".into(), json!(a.ratio));
    for c in &study.cells {
        let mut row = Row::new();
        row.insert("m".into(), json!(c.m));
        row.insert("n".into(), json!(c.n));
        row.insert("h".into(), json!(c.h));
        row.insert("lambda_n".into(), json!(c.lambda_n));
        row.insert("lambda_nl".into(), json!(c.lambda_nl));
        row.insert("tilde_lambda".into(), json!(c.tilde));
        row.insert("error".into(), json!(c.error));
        report.rows.push(row);
    }
    for (n, s) in &study.slopes {
        report.slopes.insert(format!("n={n}"), slope_value(*s));
    }
    report
        .slopes
        .insert("uniform_correction".into(), slope_value(uniform_slope));
    report.slopes.insert("trapezoid_sum".into(), slope_value(trapz_slope));
    report.residuals.insert(
        "uniform_correction".into(),
        Value::Array(
            uniform
                .iter()
                .map(|p| json!({"m": p.m, "n": p.n, "h": p.h, "error": p.error}))
                .collect(),
        ),
    );
    report.residuals.insert(
        "trapezoid_sum".into(),
        Value::Array(
            trapz
                .iter()
                .map(|p| json!({"m": p.m, "n": p.n, "h": p.h, "sum": p.sum}))
                .collect(),
        ),
    );
    Ok(report)
}
