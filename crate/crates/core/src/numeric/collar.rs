//! Collar functions `f: [0,ε] → [a,b]` and `g: [0,ε] → [0,ε]`.

use std::fmt;

use super::{
    check_grid, derivative, read_csv, smootherstep, smootherstep_integral, uniform_grid, NumericError, Report,
    Violation,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CollarPair {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub epsilon: f64,
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollarCondition {
    FStartsAtC,
    FConstantNearZero,
    FNondecreasing,
    FEndsAtB,
    FInRange,
    GStartsAtZero,
    GIdentityNearZero,
    GConstantNearEpsilon,
    GInRange,
    SumSlopePositive,
}

impl fmt::Display for CollarCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollarCondition::FStartsAtC => "f-starts-at-c",
            CollarCondition::FConstantNearZero => "f-constant-near-zero",
            CollarCondition::FNondecreasing => "f-nondecreasing",
            CollarCondition::FEndsAtB => "f-ends-at-b",
            CollarCondition::FInRange => "f-in-range",
            CollarCondition::GStartsAtZero => "g-starts-at-zero",
            CollarCondition::GIdentityNearZero => "g-identity-near-zero",
            CollarCondition::GConstantNearEpsilon => "g-constant-near-epsilon",
            CollarCondition::GInRange => "g-in-range",
            CollarCondition::SumSlopePositive => "sum-slope-positive",
        })
    }
}

fn parameters_ok(a: f64, b: f64, c: f64, epsilon: f64) -> Result<(), NumericError> {
    if !(a < c && c < b) {
        return Err(NumericError::InvalidParameter(format!("need a < c < b, got a={a} c={c} b={b}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(NumericError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// `g = εG(t/ε)` with `G` the identity to `1/3`, a blend reaching 1 at `2/3`, then 1;
/// `f = c` to `ε/3`, then `c + (b − c)u³` for `u` running from 0 to 1 over `[ε/3, ε]`.
pub fn builtin_collar(a: f64, b: f64, c: f64, epsilon: f64, n_samples: usize) -> Result<CollarPair, NumericError> {
    parameters_ok(a, b, c, epsilon)?;
    if n_samples < 16 {
        return Err(NumericError::InvalidParameter(format!("need at least 16 samples, got {n_samples}")));
    }
    let big_g = |x: f64| {
        if x <= 1.0 / 3.0 {
            x
        } else if x >= 2.0 / 3.0 {
            1.0
        } else {
            let u = 3.0 * (x - 1.0 / 3.0);
            1.0 / 3.0 + (u - smootherstep_integral(u)) / 3.0 + 0.5 * smootherstep(u)
        }
    };
    let t = uniform_grid(epsilon, n_samples);
    let f = t
        .iter()
        .map(|&t| {
            let u = ((t - epsilon / 3.0) / (2.0 * epsilon / 3.0)).clamp(0.0, 1.0);
            if u == 0.0 {
                c
            } else {
                c + (b - c) * u.powi(3)
            }
        })
        .collect();
    let g = t.iter().map(|&t| epsilon * big_g(t / epsilon)).collect();
    Ok(CollarPair { a, b, c, epsilon, t, f, g })
}

impl CollarPair {
    /// Loads `t,f,g` CSV text. `c = f(0)`, `b = f(ε)` and `ε` is the last `t`.
    pub fn from_csv(text: &str, a: f64) -> Result<Self, NumericError> {
        let rows = read_csv(text, &["t", "f", "g"])?;
        let column = |k: usize| rows.iter().map(|row| row[k]).collect::<Vec<_>>();
        let (t, f, g) = (column(0), column(1), column(2));
        check_grid(&t, "collar")?;
        if t[0] != 0.0 {
            return Err(NumericError::InvalidParameter("collar grid must start at t = 0".into()));
        }
        let (c, b, epsilon) = (f[0], f[f.len() - 1], t[t.len() - 1]);
        parameters_ok(a, b, c, epsilon)?;
        Ok(CollarPair { a, b, c, epsilon, t, f, g })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,f,g\n");
        for i in 0..self.t.len() {
            out.push_str(&format!("{},{},{}\n", self.t[i], self.f[i], self.g[i]));
        }
        out
    }
}

/// "Near" an endpoint means within `ε/6`.
pub fn check_collar(cp: &CollarPair, tol: f64) -> Report<CollarCondition> {
    use CollarCondition::*;
    let n = cp.t.len();
    let eps = cp.epsilon;
    let mut violations = Vec::new();
    let mut flag = |condition, index: usize, value: f64| {
        violations.push(Violation { condition, index, at: cp.t[index], value });
    };
    if (cp.f[0] - cp.c).abs() > tol {
        flag(FStartsAtC, 0, cp.f[0]);
    }
    if (cp.f[n - 1] - cp.b).abs() > tol {
        flag(FEndsAtB, n - 1, cp.f[n - 1]);
    }
    if cp.g[0].abs() > tol {
        flag(GStartsAtZero, 0, cp.g[0]);
    }
    for i in 0..n {
        let t = cp.t[i];
        if t <= eps / 6.0 {
            if (cp.f[i] - cp.c).abs() > tol {
                flag(FConstantNearZero, i, cp.f[i]);
            }
            if (cp.g[i] - t).abs() > tol {
                flag(GIdentityNearZero, i, cp.g[i]);
            }
        }
        if t >= 5.0 * eps / 6.0 && (cp.g[i] - eps).abs() > tol {
            flag(GConstantNearEpsilon, i, cp.g[i]);
        }
        if cp.f[i] < cp.a - tol || cp.f[i] > cp.b + tol {
            flag(FInRange, i, cp.f[i]);
        }
        if cp.g[i] < -tol || cp.g[i] > eps + tol {
            flag(GInRange, i, cp.g[i]);
        }
    }
    for i in 0..n - 1 {
        let slope = (cp.f[i + 1] - cp.f[i]) / (cp.t[i + 1] - cp.t[i]);
        if slope < -tol {
            flag(FNondecreasing, i, slope);
        }
    }
    let df = derivative(&cp.t, &cp.f);
    let dg = derivative(&cp.t, &cp.g);
    let mut min_sum = f64::INFINITY;
    for i in 0..n {
        let s = df[i] + dg[i];
        min_sum = min_sum.min(s);
        if s <= tol {
            flag(SumSlopePositive, i, s);
        }
    }
    Report { violations, min_positive: min_sum }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_passes() {
        for eps in [0.1, 1.0, 5.0] {
            for n in [64, 4096] {
                let cp = builtin_collar(0.0, 1.0, 0.5, eps, n).unwrap();
                let report = check_collar(&cp, 1e-9);
                assert!(report.passed(), "eps={eps} n={n}: {:?}", report.violations.first());
            }
        }
    }

    #[test]
    fn g_reaches_epsilon_smoothly() {
        let cp = builtin_collar(0.0, 1.0, 0.5, 1.0, 3001).unwrap();
        assert!((cp.g[2000] - 1.0).abs() < 1e-12);
        assert!((cp.g[1999] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn flat_overlap_fails() {
        let mut cp = builtin_collar(0.0, 1.0, 0.5, 1.0, 300).unwrap();
        for i in 120..140 {
            cp.f[i] = cp.f[120];
            cp.g[i] = cp.g[120];
        }
        for i in 140..300 {
            cp.f[i] = cp.f[i].max(cp.f[120]);
            cp.g[i] = cp.g[i].max(cp.g[120]);
        }
        let report = check_collar(&cp, 1e-9);
        assert!(report.violations.iter().any(|v| v.condition == CollarCondition::SumSlopePositive));
    }

    #[test]
    fn shifted_g_fails_endpoint() {
        let mut cp = builtin_collar(0.0, 1.0, 0.5, 1.0, 300).unwrap();
        cp.g[0] = 0.01;
        let report = check_collar(&cp, 1e-9);
        assert!(report.violations.iter().any(|v| v.condition == CollarCondition::GStartsAtZero));
    }

    #[test]
    fn csv_round_trip_and_parameters() {
        let cp = builtin_collar(0.0, 2.0, 0.5, 1.0, 40).unwrap();
        let back = CollarPair::from_csv(&cp.to_csv(), 0.0).unwrap();
        assert_eq!(back, cp);
        assert!(builtin_collar(1.0, 2.0, 0.5, 1.0, 40).is_err());
    }
}
