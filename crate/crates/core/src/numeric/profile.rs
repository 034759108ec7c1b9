//! Profiles `h₁, h₂` on `[0, ε]` for the form `h₁(r)α + h₂(r)dθ` on `M × D²_ε`.

use std::fmt;

use super::{
    check_grid, derivative, read_csv, smootherstep, smootherstep_integral, uniform_grid, NumericError, Report,
    Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub epsilon: f64,
    pub r: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileCondition {
    H1Positive,
    H1Decreasing,
    H1FlatAtZero,
    H1ExpNearEpsilon,
    H2SquareNearZero,
    H2Nondecreasing,
    H2ConstantNearEpsilon,
    WPositive,
}

impl fmt::Display for ProfileCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileCondition::H1Positive => "h1-positive",
            ProfileCondition::H1Decreasing => "h1-decreasing",
            ProfileCondition::H1FlatAtZero => "h1-flat-at-zero",
            ProfileCondition::H1ExpNearEpsilon => "h1-exp-near-epsilon",
            ProfileCondition::H2SquareNearZero => "h2-square-near-zero",
            ProfileCondition::H2Nondecreasing => "h2-nondecreasing",
            ProfileCondition::H2ConstantNearEpsilon => "h2-constant-near-epsilon",
            ProfileCondition::WPositive => "w-positive",
        })
    }
}

/// `h₁ = e^{−φ}` with `φ′ = smootherstep((r − L/3)/w)`, `L = 2ε/3`, `w = 2L/3`, so `h₁`
/// is constant near 0 and `φ(r) = r` from `L` on.
fn default_h1(r: f64, epsilon: f64) -> f64 {
    let l = 2.0 * epsilon / 3.0;
    let (a, w) = (l / 3.0, 2.0 * l / 3.0);
    let phi = if r < l { l - w / 2.0 + w * smootherstep_integral((r - a) / w) } else { r };
    (-phi).exp()
}

/// `h₂ = r²` on `[0, ε/3]`, then `h₂′ = 2r(1 − s((r−L₁)/δ)) + κ s′((r−L₁)/L₁)/L₁`
/// up to `2ε/3`, then `ε`. `δ` and `κ` are chosen so the blend lands exactly on `ε`.
struct H2Blend {
    l1: f64,
    delta: f64,
    kappa: f64,
    epsilon: f64,
}

impl H2Blend {
    fn new(epsilon: f64) -> Self {
        let l1 = epsilon / 3.0;
        let target = epsilon - l1 * l1;
        let full = 9.0 * l1 * l1 / 7.0;
        if target <= full {
            // L₁δ + 2δ²/7 = target
            let delta = (-l1 + (l1 * l1 + 8.0 * target / 7.0).sqrt()) * 7.0 / 4.0;
            H2Blend { l1, delta, kappa: 0.0, epsilon }
        } else {
            H2Blend { l1, delta: l1, kappa: target - full, epsilon }
        }
    }

    fn eval(&self, r: f64) -> f64 {
        let (l1, d) = (self.l1, self.delta);
        if r <= l1 {
            return r * r;
        }
        if r >= 2.0 * l1 {
            return self.epsilon;
        }
        let u = ((r - l1) / d).min(1.0);
        let q = |u: f64| u.powi(5) * (u * (6.0 / 7.0 * u - 2.5) + 2.0);
        let core = 2.0 * d * (l1 * (u - smootherstep_integral(u)) + d * (u * u / 2.0 - q(u)));
        l1 * l1 + core + self.kappa * smootherstep((r - l1) / l1)
    }
}

/// Built-in profile on `n_samples` uniform points. Needs `0 < ε ≤ 9` so that
/// `r²` at `ε/3` does not already exceed `ε`.
pub fn default_profile(epsilon: f64, n_samples: usize) -> Result<ProfileSpec, NumericError> {
    if !(epsilon > 0.0 && epsilon <= 9.0) {
        return Err(NumericError::InvalidParameter(format!("epsilon must lie in (0, 9], got {epsilon}")));
    }
    if n_samples < 16 {
        return Err(NumericError::InvalidParameter(format!("need at least 16 samples, got {n_samples}")));
    }
    let r = uniform_grid(epsilon, n_samples);
    let blend = H2Blend::new(epsilon);
    Ok(ProfileSpec {
        epsilon,
        h1: r.iter().map(|&r| default_h1(r, epsilon)).collect(),
        h2: r.iter().map(|&r| blend.eval(r)).collect(),
        r,
        provenance: Provenance::Builtin,
    })
}

impl ProfileSpec {
    /// Loads `r,h1,h2` CSV text; the last `r` is taken as `ε`.
    pub fn from_csv(text: &str) -> Result<Self, NumericError> {
        let rows = read_csv(text, &["r", "h1", "h2"])?;
        let column = |k: usize| rows.iter().map(|row| row[k]).collect::<Vec<_>>();
        let r = column(0);
        check_grid(&r, "profile")?;
        if r[0] != 0.0 {
            return Err(NumericError::InvalidParameter("profile grid must start at r = 0".into()));
        }
        Ok(ProfileSpec { epsilon: r[r.len() - 1], r, h1: column(1), h2: column(2), provenance: Provenance::File })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,h1,h2\n");
        for i in 0..self.r.len() {
            out.push_str(&format!("{},{},{}\n", self.r[i], self.h1[i], self.h2[i]));
        }
        out
    }

    /// `W = h₂′h₁ − h₁′h₂` by finite differences.
    pub fn wronskian(&self) -> Vec<f64> {
        let d1 = derivative(&self.r, &self.h1);
        let d2 = derivative(&self.r, &self.h2);
        (0..self.r.len()).map(|i| d2[i] * self.h1[i] - d1[i] * self.h2[i]).collect()
    }
}

/// Checks the four profile conditions. "Near" an endpoint means within `ε/6`.
/// `W` vanishes identically at `r = 0` for any admissible profile, so positivity is
/// checked on `r > 0`.
pub fn check_profile(p: &ProfileSpec, tol: f64) -> Report<ProfileCondition> {
    use ProfileCondition::*;
    let n = p.r.len();
    let eps = p.epsilon;
    let mut violations = Vec::new();
    let mut flag = |condition, index: usize, value: f64| {
        violations.push(Violation { condition, index, at: p.r[index], value });
    };

    for i in 0..n {
        if p.h1[i] <= 0.0 {
            flag(H1Positive, i, p.h1[i]);
        }
    }
    for i in 0..n - 1 {
        let slope = (p.h1[i + 1] - p.h1[i]) / (p.r[i + 1] - p.r[i]);
        if slope > tol {
            flag(H1Decreasing, i, slope);
        }
        let slope = (p.h2[i + 1] - p.h2[i]) / (p.r[i + 1] - p.r[i]);
        if slope < -tol {
            flag(H2Nondecreasing, i, slope);
        }
    }
    // second-order one-sided difference at 0
    let (h, k) = (p.r[1] - p.r[0], p.r[2] - p.r[1]);
    let d0 = if (h - k).abs() <= 1e-12 * h {
        (-3.0 * p.h1[0] + 4.0 * p.h1[1] - p.h1[2]) / (2.0 * h)
    } else {
        (p.h1[1] - p.h1[0]) / h
    };
    if d0.abs() > tol + h * h {
        flag(H1FlatAtZero, 0, d0);
    }
    for i in 0..n {
        let r = p.r[i];
        if r <= eps / 6.0 && (p.h2[i] - r * r).abs() > tol {
            flag(H2SquareNearZero, i, p.h2[i]);
        }
        if r >= 5.0 * eps / 6.0 {
            if (p.h1[i] - (-r).exp()).abs() > tol {
                flag(H1ExpNearEpsilon, i, p.h1[i]);
            }
            if (p.h2[i] - eps).abs() > tol {
                flag(H2ConstantNearEpsilon, i, p.h2[i]);
            }
        }
    }
    let w = p.wronskian();
    let mut min_w = f64::INFINITY;
    for i in 0..n {
        if p.r[i] > 0.0 {
            min_w = min_w.min(w[i]);
            if w[i] <= 0.0 {
                flag(WPositive, i, w[i]);
            }
        }
    }
    Report { violations, min_positive: min_w }
}
