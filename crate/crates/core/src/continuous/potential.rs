use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// A real potential `q` on `[0, pi]`.
pub trait Potential: Send + Sync {
    fn name(&self) -> &str;

    fn q(&self, x: f64) -> f64;

    /// `p(t) = q(t) + q(pi - t)` on `[0, pi/2]`.
    fn p(&self, t: f64) -> f64 {
        self.q(t) + self.q(PI - t)
    }

    /// `R(rho)` in closed form, if known.
    fn closed_r(&self, _rho: Complex64) -> Option<Complex64> {
        None
    }
}

impl fmt::Debug for dyn Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({})", self.name())
    }
}

/// Below this modulus closed forms switch to their Taylor series.
pub const SERIES_RADIUS: f64 = 0.1;
const SERIES_TERMS: usize = 6;

/// `R(rho) = sum_k (-1)^k rho^{2k} [2 a^{2k}/(2k)! + M_{2k+1}/(2k+1)!]` with
/// `a = pi/2` and `M_n = int_0^a p(t) t^n dt`.
fn series_r(rho: Complex64, moment: impl Fn(usize) -> f64) -> Complex64 {
    let a = FRAC_PI_2;
    let rho2 = rho * rho;
    let mut power = Complex64::new(1.0, 0.0);
    let mut fact_even = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..SERIES_TERMS {
        if k > 0 {
            fact_even *= ((2 * k - 1) * 2 * k) as f64;
        }
        let fact_odd = fact_even * (2 * k + 1) as f64;
        let term = 2.0 * a.powi(2 * k as i32) / fact_even + moment(2 * k + 1) / fact_odd;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += power * (sign * term);
        power *= rho2;
    }
    sum
}

fn half_angle(rho: Complex64) -> (Complex64, Complex64) {
    let z = rho * FRAC_PI_2;
    (z.cos(), z.sin())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Zero;

impl Potential for Zero {
    fn name(&self) -> &str {
        "zero"
    }

    fn q(&self, _x: f64) -> f64 {
        0.0
    }

    fn closed_r(&self, rho: Complex64) -> Option<Complex64> {
        Some(2.0 * half_angle(rho).0)
    }
}

/// `q(x) = x (pi - x)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Quadratic;

impl Potential for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn q(&self, x: f64) -> f64 {
        x * (PI - x)
    }

    fn closed_r(&self, rho: Complex64) -> Option<Complex64> {
        if rho.norm() < SERIES_RADIUS {
            let a = FRAC_PI_2;
            return Some(series_r(rho, |n| {
                let n = n as i32;
                2.0 * (PI * a.powi(n + 2) / (n + 2) as f64 - a.powi(n + 3) / (n + 3) as f64)
            }));
        }
        let (c, _) = half_angle(rho);
        let r2 = rho * rho;
        Some(2.0 * c - PI * PI / (2.0 * r2) * c + 4.0 / (r2 * r2) * (1.0 - c))
    }
}

/// `q(x) = pi/2 - |pi/2 - x|`, so `p(t) = 2t`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tent;

impl Potential for Tent {
    fn name(&self) -> &str {
        "tent"
    }

    fn q(&self, x: f64) -> f64 {
        FRAC_PI_2 - (FRAC_PI_2 - x).abs()
    }

    fn closed_r(&self, rho: Complex64) -> Option<Complex64> {
        if rho.norm() < SERIES_RADIUS {
            return Some(series_r(rho, |n| 2.0 * FRAC_PI_2.powi(n as i32 + 2) / (n + 2) as f64));
        }
        let (c, s) = half_angle(rho);
        let r2 = rho * rho;
        Some(2.0 * c - PI / r2 * c + 2.0 * s / (r2 * rho))
    }
}

/// `q(x) = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Constant;

impl Potential for Constant {
    fn name(&self) -> &str {
        "constant"
    }

    fn q(&self, _x: f64) -> f64 {
        1.0
    }

    fn closed_r(&self, rho: Complex64) -> Option<Complex64> {
        if rho.norm() < SERIES_RADIUS {
            return Some(series_r(rho, |n| 2.0 * FRAC_PI_2.powi(n as i32 + 1) / (n + 1) as f64));
        }
        let (c, _) = half_angle(rho);
        Some(2.0 * c + 2.0 * (1.0 - c) / (rho * rho))
    }
}

/// Natural cubic spline through tabulated `(x, q)` pairs.
#[derive(Clone, Debug)]
pub struct SampledPotential {
    name: String,
    x: Vec<f64>,
    y: Vec<f64>,
    /// second derivatives at the knots
    m2: Vec<f64>,
}

impl SampledPotential {
    pub fn new(name: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidPotential(format!(
                "{} abscissae but {} values",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InvalidPotential("need at least two samples".into()));
        }
        if let Some(bad) = x.iter().chain(&y).find(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!("non-finite sample {bad}")));
        }
        if x[0] < 0.0 || *x.last().unwrap() > PI * (1.0 + 1e-12) {
            return Err(Error::InvalidPotential("abscissae must lie in [0, pi]".into()));
        }
        if let Some(i) = (1..x.len()).find(|&i| x[i] <= x[i - 1]) {
            return Err(Error::InvalidPotential(format!(
                "abscissae not strictly increasing at row {}",
                i + 1
            )));
        }
        let m2 = natural_second_derivatives(&x, &y);
        Ok(Self {
            name: name.into(),
            x,
            y,
            m2,
        })
    }

    /// Two-column CSV `x,q`. A non-numeric first row is taken as a header and
    /// lines starting with `#` are skipped.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::InvalidPotential(format!("{}: {e}", path.display())))?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidPotential(format!("{}: {e}", path.display())))?;
            if record.len() != 2 {
                return Err(Error::InvalidPotential(format!(
                    "{}: row {} has {} columns, expected 2",
                    path.display(),
                    row + 1,
                    record.len()
                )));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    xs.push(x);
                    ys.push(y);
                }
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::InvalidPotential(format!(
                        "{}: row {} is not numeric",
                        path.display(),
                        row + 1
                    )))
                }
            }
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::new(name, xs, ys)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }
}

/// Tridiagonal solve for a natural spline (zero curvature at both ends).
fn natural_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m2 = vec![0.0; n];
    if n < 3 {
        return m2;
    }
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        if i > 1 {
            let factor = h0 / diag[i - 1];
            diag[i] -= factor * upper[i - 1];
            rhs[i] -= factor * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m2[i] = (rhs[i] - upper[i] * m2[i + 1]) / diag[i];
    }
    m2
}

impl Potential for SampledPotential {
    fn name(&self) -> &str {
        &self.name
    }

    fn q(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m2[i] + (b * b * b - b) * self.m2[i + 1]) * h * h / 6.0
    }
}

type Factory = Arc<dyn Fn() -> Arc<dyn Potential> + Send + Sync>;

/// Potentials selectable by name at run time.
#[derive(Clone)]
pub struct PotentialRegistry {
    entries: BTreeMap<String, Factory>,
}

impl fmt::Debug for PotentialRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl Default for PotentialRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register("zero", || Arc::new(Zero));
        reg.register("quadratic", || Arc::new(Quadratic));
        reg.register("tent", || Arc::new(Tent));
        reg.register("constant", || Arc::new(Constant));
        reg
    }
}

impl PotentialRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces an entry.
    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn() -> Arc<dyn Potential> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Potential>> {
        self.entries.get(name).map(|f| f())
    }

    /// A registered name, or else a path to a sampled CSV file.
    pub fn resolve(&self, spec: &str) -> Result<Arc<dyn Potential>> {
        if let Some(p) = self.get(spec) {
            return Ok(p);
        }
        let path = Path::new(spec);
        if path.is_file() {
            return Ok(Arc::new(SampledPotential::from_csv(path)?));
        }
        let known: Vec<&str> = self.names().collect();
        Err(Error::InvalidPotential(format!(
            "'{spec}' is neither a known potential ({}) nor a readable file",
            known.join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_folds_to_linear() {
        for t in [0.0, 0.3, 1.0, FRAC_PI_2] {
            assert!((Tent.p(t) - 2.0 * t).abs() < 1e-15);
        }
        assert!((Quadratic.p(0.5) - 2.0 * 0.5 * (PI - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn constant_closed_form_at_two() {
        let r = Constant.closed_r(Complex64::new(2.0, 0.0)).unwrap();
        assert!((r - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn series_and_closed_form_meet() {
        let rho = Complex64::new(0.1, 0.0);
        let pots: [&dyn Potential; 3] = [&Quadratic, &Tent, &Constant];
        for p in pots {
            let closed = p.closed_r(rho).unwrap();
            let below = p.closed_r(rho * (1.0 - 1e-9)).unwrap();
            assert!((closed - below).norm() < 1e-8, "{}", p.name());
        }
    }

    #[test]
    fn series_limit_at_zero() {
        // R(0) = 2 + int_0^{pi/2} p(t) t dt
        let r0 = Constant.closed_r(Complex64::new(0.0, 0.0)).unwrap();
        assert!((r0.re - (2.0 + FRAC_PI_2 * FRAC_PI_2)).abs() < 1e-14);
        assert!(r0.is_finite());
    }

    #[test]
    fn spline_reproduces_cubic_interior_and_line() {
        let x: Vec<f64> = (0..=20).map(|i| PI * i as f64 / 20.0).collect();
        let line: Vec<f64> = x.iter().map(|x| 3.0 - 0.5 * x).collect();
        let s = SampledPotential::new("line", x.clone(), line).unwrap();
        for t in [0.0, 0.01, 1.234, PI] {
            assert!((s.q(t) - (3.0 - 0.5 * t)).abs() < 1e-13);
        }
        let quad: Vec<f64> = x.iter().map(|x| x * (PI - x)).collect();
        let s = SampledPotential::new("quad", x, quad).unwrap();
        assert!((s.q(1.5) - 1.5 * (PI - 1.5)).abs() < 1e-4);
    }

    #[test]
    fn sampled_validation() {
        assert!(SampledPotential::new("a", vec![0.0], vec![1.0]).is_err());
        assert!(SampledPotential::new("a", vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(SampledPotential::new("a", vec![0.0, 4.0], vec![1.0, 1.0]).is_err());
        assert!(SampledPotential::new("a", vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn registry_lookup() {
        let reg = PotentialRegistry::default();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            ["constant", "quadratic", "tent", "zero"]
        );
        assert_eq!(reg.get("tent").unwrap().name(), "tent");
        assert!(reg.get("cubic").is_none());
        assert!(matches!(
            reg.resolve("no/such/file.csv"),
            Err(Error::InvalidPotential(_))
        ));
        let mut reg = reg;
        reg.register("shifted", || Arc::new(Constant));
        assert_eq!(reg.get("shifted").unwrap().q(2.0), 1.0);
    }
}
