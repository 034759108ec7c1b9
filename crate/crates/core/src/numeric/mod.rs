//! Sampled-function checks of the explicit contact-form constructions:
//! partial open-book profiles, collar functions, the density threshold and the
//! generalized Dehn twist.

use thiserror::Error;

pub mod collar;
pub mod density;
pub mod gdt;
pub mod profile;

pub use collar::{builtin_collar, check_collar, CollarCondition, CollarPair};
pub use density::{density_threshold, min_density, DensityModel, DensitySample, DensityTag};
pub use gdt::{gdt_apply, gdt_check_symplectic, GdtProfile, GdtReport, NuShape};
pub use profile::{check_profile, default_profile, ProfileCondition, ProfileSpec, Provenance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("point violates |y| = 1, x.y = 0: {0}")]
    Constraint(String),
}

/// One failed condition at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<C> {
    pub condition: C,
    pub index: usize,
    pub at: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report<C> {
    pub violations: Vec<Violation<C>>,
    /// Minimum of the positivity quantity over the checked samples.
    pub min_positive: f64,
}

impl<C> Report<C> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `6t⁵ − 15t⁴ + 10t³`, clamped to `[0, 1]`.
pub fn smootherstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

pub fn smootherstep_deriv(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    30.0 * t * t * (t - 1.0) * (t - 1.0)
}

/// Antiderivative of [`smootherstep`] on `[0, 1]`, vanishing at 0.
pub(crate) fn smootherstep_integral(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u.powi(4) * (u * (u - 3.0) + 2.5)
}

/// `n` points from 0 to `end`, endpoints exact.
pub fn uniform_grid(end: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect();
    grid[n - 1] = end;
    grid
}

/// Central differences inside, one-sided at the ends.
pub fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (y[hi] - y[lo]) / (x[hi] - x[lo])
        })
        .collect()
}

pub(crate) fn check_grid(grid: &[f64], what: &str) -> Result<(), NumericError> {
    if grid.len() < 3 {
        return Err(NumericError::InvalidParameter(format!("{what}: need at least 3 samples")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(NumericError::InvalidParameter(format!("{what}: non-finite sample")));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(NumericError::InvalidParameter(format!("{what}: grid not strictly increasing at sample {}", i + 1)));
    }
    Ok(())
}

/// Parses a CSV with exactly the given header into numeric rows.
pub(crate) fn read_csv(text: &str, header: &[&str]) -> Result<Vec<Vec<f64>>, NumericError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| csv_error(1, e))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(NumericError::Csv {
            line: 1,
            message: format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e.position().map_or(0, |p| p.line()), e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|field| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(NumericError::Csv { line, message: format!("not a finite number: `{field}`") }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(NumericError::Csv { line: 1, message: "no data rows".into() });
    }
    Ok(rows)
}

fn csv_error(line: u64, e: csv::Error) -> NumericError {
    NumericError::Csv { line, message: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smootherstep_shape() {
        assert_eq!(smootherstep(0.0), 0.0);
        assert_eq!(smootherstep(1.0), 1.0);
        assert!((smootherstep(0.5) - 0.5).abs() < 1e-15);
        assert!((smootherstep_integral(1.0) - 0.5).abs() < 1e-15);
        let h = 1e-6;
        for t in [0.1, 0.4, 0.8] {
            let fd = (smootherstep(t + h) - smootherstep(t - h)) / (2.0 * h);
            assert!((fd - smootherstep_deriv(t)).abs() < 1e-8);
            let fd = (smootherstep_integral(t + h) - smootherstep_integral(t - h)) / (2.0 * h);
            assert!((fd - smootherstep(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = uniform_grid(0.1, 64);
        assert_eq!((g[0], g[63]), (0.0, 0.1));
    }

    #[test]
    fn derivative_of_quadratic() {
        let x = uniform_grid(1.0, 11);
        let y: Vec<f64> = x.iter().map(|r| r * r).collect();
        let d = derivative(&x, &y);
        assert!((d[5] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_header_and_numbers() {
        let rows = read_csv("r,h1,h2\n0,1,0\n0.5,0.9,0.25\n", &["r", "h1", "h2"]).unwrap();
        assert_eq!(rows[1], vec![0.5, 0.9, 0.25]);
        assert!(matches!(read_csv("r,h\n0,1\n", &["r", "h1", "h2"]), Err(NumericError::Csv { line: 1, .. })));
        assert!(matches!(
            read_csv("r,h1,h2\n0,1,0\n0.5,x,0.25\n", &["r", "h1", "h2"]),
            Err(NumericError::Csv { line: 3, .. })
        ));
    }
}
