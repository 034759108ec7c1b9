//! Two-term density surrogate `K·A + B` with `A > 0`.

use std::f64::consts::TAU;
use std::fmt;

use super::{read_csv, NumericError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub theta: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityTag {
    BuiltinPositive,
    BuiltinNegative,
    File,
}

impl fmt::Display for DensityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityTag::BuiltinPositive => "builtin-positive",
            DensityTag::BuiltinNegative => "builtin-negative",
            DensityTag::File => "file",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    pub samples: Vec<DensitySample>,
    pub tag: DensityTag,
}

const T_GRID: [f64; 3] = [0.0, 0.5, 1.0];

impl DensityModel {
    fn builtin(grid: usize, tag: DensityTag, b: impl Fn(f64) -> f64) -> Result<Self, NumericError> {
        if grid < 2 {
            return Err(NumericError::InvalidParameter(format!("theta grid needs at least 2 points, got {grid}")));
        }
        let mut samples = Vec::with_capacity(grid * T_GRID.len());
        for i in 0..grid {
            let theta = i as f64 / grid as f64;
            let a = 1.0 + 0.5 * (TAU * theta).cos();
            for &t in &T_GRID {
                samples.push(DensitySample { theta, t, a, b: b(theta) });
            }
        }
        Ok(DensityModel { samples, tag })
    }

    /// `A = 1 + cos(2πθ)/2`, `B = 1 + (1 + sin 2πθ)/2 ≥ 1`.
    pub fn builtin_positive(grid: usize) -> Result<Self, NumericError> {
        Self::builtin(grid, DensityTag::BuiltinPositive, |theta| 1.0 + 0.5 * (1.0 + (TAU * theta).sin()))
    }

    /// `A = 1 + cos(2πθ)/2`, `B = sin(2πθ) − 1/2`.
    pub fn builtin_negative(grid: usize) -> Result<Self, NumericError> {
        Self::builtin(grid, DensityTag::BuiltinNegative, |theta| (TAU * theta).sin() - 0.5)
    }

    /// Loads `theta,t,A,B` CSV text; rows strictly increasing in `(theta, t)`.
    pub fn from_csv(text: &str) -> Result<Self, NumericError> {
        let rows = read_csv(text, &["theta", "t", "A", "B"])?;
        let samples: Vec<DensitySample> =
            rows.iter().map(|r| DensitySample { theta: r[0], t: r[1], a: r[2], b: r[3] }).collect();
        for (i, w) in samples.windows(2).enumerate() {
            if (w[1].theta, w[1].t) <= (w[0].theta, w[0].t) {
                return Err(NumericError::Csv {
                    line: i as u64 + 3,
                    message: "rows must be strictly increasing in (theta, t)".into(),
                });
            }
        }
        let model = DensityModel { samples, tag: DensityTag::File };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        match self.samples.iter().position(|s| s.a <= 0.0) {
            Some(i) => Err(NumericError::InvalidParameter(format!("A must be positive; sample {i} has A = {}", self.samples[i].a))),
            None => Ok(()),
        }
    }

    pub fn scale_a(&self, factor: f64) -> Self {
        let samples = self.samples.iter().map(|s| DensitySample { a: s.a * factor, ..*s }).collect();
        DensityModel { samples, tag: self.tag }
    }

    /// Sample where `−B/A` is largest (first one on ties).
    pub fn argmax(&self) -> Option<&DensitySample> {
        self.samples.iter().fold(None, |best: Option<&DensitySample>, s| match best {
            Some(b) if -b.b / b.a >= -s.b / s.a => Some(b),
            _ => Some(s),
        })
    }
}

/// `K₀ = max(0, max over samples of −B/A)`.
pub fn density_threshold(m: &DensityModel) -> f64 {
    m.samples.iter().map(|s| -s.b / s.a).fold(0.0, f64::max)
}

pub fn min_density(m: &DensityModel, k: f64) -> f64 {
    m.samples.iter().map(|s| k * s.a + s.b).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_model_has_zero_threshold() {
        let m = DensityModel::builtin_positive(4096).unwrap();
        assert_eq!(density_threshold(&m), 0.0);
        assert!(min_density(&m, 1e-9) > 0.0);
    }

    #[test]
    fn threshold_separates_positive_from_nonpositive() {
        let m = DensityModel::builtin_negative(4096).unwrap();
        let k0 = density_threshold(&m);
        assert!(min_density(&m, k0 + 1e-9) > 0.0);
        assert!(min_density(&m, k0 - 0.01) <= 0.0);
    }

    #[test]
    fn doubling_a_halves_threshold() {
        let m = DensityModel::builtin_negative(1024).unwrap();
        let k0 = density_threshold(&m);
        assert!((density_threshold(&m.scale_a(2.0)) - k0 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn csv_loading() {
        let m = DensityModel::from_csv("theta,t,A,B\n0,0,1,-2\n0,1,2,-2\n0.5,0,1,1\n").unwrap();
        assert_eq!(density_threshold(&m), 2.0);
        assert!(DensityModel::from_csv("theta,t,A,B\n0,0,0,-2\n").is_err());
        assert!(DensityModel::from_csv("theta,t,A,B\n0,1,1,-2\n0,0,1,1\n").is_err());
    }
}
