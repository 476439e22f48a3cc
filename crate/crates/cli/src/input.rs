use std::path::Path;

use num_complex::Complex64;

use crate::CliError;

/// One value per line: `re` or `re,im`. `#` starts a comment line and a
/// non-numeric first row is skipped as a header.
pub fn read_complex_list(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let parse_err = |e: csv::Error| CliError::Config(format!("{}: {e}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(parse_err)?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == 1 => out.push(Complex64::new(v[0], 0.0)),
            Ok(v) if v.len() == 2 => out.push(Complex64::new(v[0], v[1])),
            Ok(v) => {
                return Err(CliError::Config(format!(
                    "{}: row {} has {} columns, expected 1 or 2",
                    path.display(),
                    row + 1,
                    v.len()
                )))
            }
            Err(_) if row == 0 => continue,
            Err(_) => {
                return Err(CliError::Config(format!(
                    "{}: row {} is not numeric",
                    path.display(),
                    row + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Like [`read_complex_list`], rejecting nonzero imaginary parts.
pub fn read_real_list(path: &Path) -> Result<Vec<f64>, CliError> {
    read_complex_list(path)?
        .into_iter()
        .map(|z| {
            if z.im == 0.0 {
                Ok(z.re)
            } else {
                Err(CliError::Config(format!(
                    "{}: expected real values, got {z}",
                    path.display()
                )))
            }
        })
        .collect()
}
