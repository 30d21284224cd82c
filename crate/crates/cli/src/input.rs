use std::io::Read;

use sigmak_core::scalar::parse_rational;
use sigmak_core::{ExactRational, Poly, SigmaKPolynomial};

use crate::commands::Failure;

pub fn read_source(path: Option<&str>) -> Result<String, Failure> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {p}: {e}"))),
    }
}

pub fn read_equation(path: Option<&str>) -> Result<SigmaKPolynomial, Failure> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid equation JSON: {e}")))
}

/// Comma separated rationals, optionally wrapped in brackets.
pub fn parse_list(s: &str) -> Result<Vec<ExactRational>, Failure> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| parse_rational(t.trim().trim_matches('"')).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

pub fn parse_number(s: &str) -> Result<ExactRational, Failure> {
    parse_rational(s.trim()).map_err(|e| Failure::Usage(e.to_string()))
}

/// Either an explicit polynomial or the diagonal restriction of an equation.
pub fn read_polynomial(input: Option<&str>, poly: Option<&str>) -> Result<(Poly, serde_json::Value), Failure> {
    match poly {
        Some(p) => {
            let coeffs = parse_list(p)?;
            let poly = Poly::new(coeffs);
            if poly.deg() < 1 {
                return Err(Failure::Usage("polynomial must have degree at least 1".into()));
            }
            let echo = serde_json::json!({ "poly": poly.coeffs().iter().map(sigmak_core::scalar::format_rational).collect::<Vec<_>>() });
            Ok((poly, echo))
        }
        None => {
            let f = read_equation(input)?;
            let echo = serde_json::to_value(&f).expect("equation serializes");
            Ok((f.diagonal_restriction(), echo))
        }
    }
}

/// `a:b` with rational endpoints.
pub fn parse_range(s: &str) -> Result<(ExactRational, ExactRational), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Failure::Usage(format!("range '{s}' is not of the form a:b")));
    }
    let (a, b) = (parse_number(parts[0])?, parse_number(parts[1])?);
    if a >= b {
        return Err(Failure::Usage(format!("empty range '{s}'")));
    }
    Ok((a, b))
}

/// `start:stop:step`, inclusive of `stop` when it lies on the grid.
pub fn parse_grid(s: &str) -> Result<Vec<ExactRational>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!("grid '{s}' is not of the form start:stop:step")));
    }
    let (start, stop, step) = (parse_number(parts[0])?, parse_number(parts[1])?, parse_number(parts[2])?);
    if step <= ExactRational::from_integer(0.into()) {
        return Err(Failure::Usage("grid step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut y = start;
    while y <= stop {
        out.push(y.clone());
        y += &step;
        if out.len() > 100_000 {
            return Err(Failure::Usage("grid too large".into()));
        }
    }
    Ok(out)
}

pub fn seed() -> Result<u64, Failure> {
    match std::env::var("SIGMAK_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("SIGMAK_SEED '{s}' is not an integer"))),
        Err(_) => Ok(0),
    }
}
