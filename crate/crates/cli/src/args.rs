use num_complex::Complex64;

use crate::CliError;

fn parse_f64(s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not a number: `{s}`")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("non-finite value `{s}`")));
    }
    Ok(v)
}

/// `re` or `re:im`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(Complex64::new(parse_f64(s)?, 0.0)),
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}
