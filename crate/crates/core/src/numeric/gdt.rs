//! Generalized Dehn twist on `T*Sⁿ = {(x, y) ∈ ℝⁿ⁺¹ × ℝⁿ⁺¹ : |y| = 1, x·y = 0}`:
//! normalized geodesic flow for time `ν(|x|)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{smootherstep, NumericError};

#[derive(Debug, Clone, PartialEq)]
pub enum NuShape {
    Zero,
    /// `π(1 − smootherstep(t/R))`.
    Bump,
    /// Alternates between `π/2` and 0 on `cells` equal cells of `[0, R)`.
    SquareWave { cells: u32 },
    /// Piecewise-linear through `(t, ν)` samples, zero past the last sample or `R`.
    Sampled { t: Vec<f64>, nu: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdtProfile {
    pub n: usize,
    pub radius: f64,
    pub shape: NuShape,
    pub scale: f64,
}

impl GdtProfile {
    pub fn new(n: usize, radius: f64, shape: NuShape) -> Result<Self, NumericError> {
        if n == 0 {
            return Err(NumericError::InvalidParameter("sphere dimension must be positive".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(NumericError::InvalidParameter(format!("support radius must be positive, got {radius}")));
        }
        if let NuShape::Sampled { t, nu } = &shape {
            if t.len() != nu.len() || t.len() < 2 || t.windows(2).any(|w| w[1] <= w[0]) {
                return Err(NumericError::InvalidParameter("sampled nu needs matching increasing samples".into()));
            }
        }
        Ok(GdtProfile { n, radius, shape, scale: 1.0 })
    }

    pub fn bump(n: usize) -> Self {
        GdtProfile { n, radius: 1.0, shape: NuShape::Bump, scale: 1.0 }
    }

    pub fn inverse(&self) -> Self {
        GdtProfile { scale: -self.scale, ..self.clone() }
    }

    pub fn nu(&self, t: f64) -> f64 {
        if t >= self.radius {
            return 0.0;
        }
        let base = match &self.shape {
            NuShape::Zero => 0.0,
            NuShape::Bump => PI * (1.0 - smootherstep(t / self.radius)),
            NuShape::SquareWave { cells } => {
                let cell = (t / self.radius * *cells as f64).floor() as u64;
                if cell.is_multiple_of(2) {
                    PI / 2.0
                } else {
                    0.0
                }
            }
            NuShape::Sampled { t: ts, nu } => {
                if t < ts[0] {
                    nu[0]
                } else if t >= ts[ts.len() - 1] {
                    0.0
                } else {
                    let k = ts.partition_point(|&s| s <= t) - 1;
                    let w = (t - ts[k]) / (ts[k + 1] - ts[k]);
                    nu[k] * (1.0 - w) + nu[k + 1] * w
                }
            }
        };
        self.scale * base
    }
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// Applies the twist. Inputs must satisfy `|y| = 1`, `x·y = 0` within `1e−12`.
pub fn gdt_apply(p: &GdtProfile, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>), NumericError> {
    let dim = p.n + 1;
    if x.len() != dim || y.len() != dim {
        return Err(NumericError::Constraint(format!("expected vectors of length {dim}")));
    }
    let (ny, xy) = (norm(y), dot(x, y));
    if (ny - 1.0).abs() > 1e-12 || xy.abs() > 1e-12 {
        return Err(NumericError::Constraint(format!("|y| = {ny}, x.y = {xy}")));
    }
    let a = norm(x);
    let nu = p.nu(a);
    if nu == 0.0 {
        return Ok((x.to_vec(), y.to_vec()));
    }
    let (s, c) = nu.sin_cos();
    if a == 0.0 {
        return Ok((x.to_vec(), y.iter().map(|v| c * v).collect()));
    }
    let x2 = x.iter().zip(y).map(|(xi, yi)| c * xi - a * s * yi).collect();
    let y2 = x.iter().zip(y).map(|(xi, yi)| c * yi + s * xi / a).collect();
    Ok((x2, y2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdtReport {
    pub samples: usize,
    pub max_error: f64,
    pub tol: f64,
}

impl GdtReport {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tol
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n > 0.1 && n <= 1.0 {
            return v;
        }
    }
}

fn project_out(v: &mut [f64], unit: &[f64]) {
    let d = dot(v, unit);
    v.iter_mut().zip(unit).for_each(|(vi, ui)| *vi -= d * ui);
}

/// Random point with `|x|` uniform in `[0, 1.25R]`.
pub fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> (Vec<f64>, Vec<f64>) {
    let mut y = random_vector(rng, dim);
    let ny = norm(&y);
    y.iter_mut().for_each(|v| *v /= ny);
    let mut x = random_vector(rng, dim);
    project_out(&mut x, &y);
    let nx = norm(&x);
    let len = rng.gen_range(0.0..1.25 * radius);
    x.iter_mut().for_each(|v| *v *= len / nx);
    // re-project to kill round-off in x.y
    project_out(&mut x, &y);
    (x, y)
}

/// Tangent vector `(δx, δy)` at `(x, y)`: `δy·y = 0`, `δx·y + x·δy = 0`.
fn random_tangent(rng: &mut ChaCha8Rng, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dim = y.len();
    let mut dy = random_vector(rng, dim);
    project_out(&mut dy, y);
    let mut dx = random_vector(rng, dim);
    let fix = dot(&dx, y) + dot(x, &dy);
    dx.iter_mut().zip(y).for_each(|(v, yi)| *v -= fix * yi);
    (dx, dy)
}

fn retract(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let ny = norm(y);
    let y: Vec<f64> = y.iter().map(|v| v / ny).collect();
    let mut x = x.to_vec();
    project_out(&mut x, &y);
    (x, y)
}

fn omega(u: &(Vec<f64>, Vec<f64>), v: &(Vec<f64>, Vec<f64>)) -> f64 {
    dot(&u.0, &v.1) - dot(&u.1, &v.0)
}

const FD_STEP: f64 = 1e-4;

fn central_difference(
    p: &GdtProfile,
    x: &[f64],
    y: &[f64],
    u: &(Vec<f64>, Vec<f64>),
    h: f64,
) -> (Vec<f64>, Vec<f64>) {
    let moved = |sign: f64| {
        let xs: Vec<f64> = x.iter().zip(&u.0).map(|(a, b)| a + sign * h * b).collect();
        let ys: Vec<f64> = y.iter().zip(&u.1).map(|(a, b)| a + sign * h * b).collect();
        let (xr, yr) = retract(&xs, &ys);
        gdt_apply(p, &xr, &yr).expect("retracted point satisfies the constraints")
    };
    let (plus, minus) = (moved(1.0), moved(-1.0));
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(s, t)| (s - t) / (2.0 * h)).collect();
    (diff(&plus.0, &minus.0), diff(&plus.1, &minus.1))
}

/// `Dτ·u` from central differences at steps `h` and `h/2`, Richardson-combined to
/// cancel the retraction's `O(h²)` term.
fn push_forward(p: &GdtProfile, x: &[f64], y: &[f64], u: &(Vec<f64>, Vec<f64>)) -> (Vec<f64>, Vec<f64>) {
    let coarse = central_difference(p, x, y, u, FD_STEP);
    let fine = central_difference(p, x, y, u, FD_STEP / 2.0);
    let combine = |f: &[f64], c: &[f64]| f.iter().zip(c).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
    (combine(&fine.0, &coarse.0), combine(&fine.1, &coarse.1))
}

/// Compares `ω(Dτu, Dτv)` with `ω(u, v)` at seeded random points and tangent pairs.
pub fn gdt_check_symplectic(
    p: &GdtProfile,
    n: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<GdtReport, NumericError> {
    if !(n == 1 || n == 2) {
        return Err(NumericError::InvalidParameter(format!("sphere dimension must be 1 or 2, got {n}")));
    }
    let p = GdtProfile { n, ..p.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..samples {
        let (x, y) = random_point(&mut rng, n + 1, p.radius);
        let u = random_tangent(&mut rng, &x, &y);
        let v = random_tangent(&mut rng, &x, &y);
        let (du, dv) = (push_forward(&p, &x, &y, &u), push_forward(&p, &x, &y, &v));
        max_error = max_error.max((omega(&du, &dv) - omega(&u, &v)).abs());
    }
    Ok(GdtReport { samples, max_error, tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constraint_error(x: &[f64], y: &[f64]) -> f64 {
        (norm(y) - 1.0).abs().max(dot(x, y).abs())
    }

    #[test]
    fn preserves_constraints_and_norm() {
        let p = GdtProfile::bump(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (x, y) = random_point(&mut rng, 3, 1.0);
            let (x2, y2) = gdt_apply(&p, &x, &y).unwrap();
            assert!(constraint_error(&x2, &y2) < 1e-9);
            assert!((norm(&x2) - norm(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_twist() {
        let p = GdtProfile::bump(1);
        let q = p.inverse();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let (x, y) = random_point(&mut rng, 2, 1.0);
            let (x1, y1) = gdt_apply(&p, &x, &y).unwrap();
            let (x1, y1) = retract(&x1, &y1);
            let (x2, y2) = gdt_apply(&q, &x1, &y1).unwrap();
            let err = x.iter().zip(&x2).chain(y.iter().zip(&y2)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-8);
        }
    }

    #[test]
    fn zero_section_goes_antipodal() {
        let p = GdtProfile::bump(2);
        let (x, y) = gdt_apply(&p, &[0.0; 3], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(x, vec![0.0; 3]);
        assert!((y[2] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_outside_support_and_for_zero_nu() {
        let p = GdtProfile::bump(1);
        let (x, y) = (vec![0.0, 1.5], vec![1.0, 0.0]);
        assert_eq!(gdt_apply(&p, &x, &y).unwrap(), (x.clone(), y.clone()));
        let z = GdtProfile::new(1, 1.0, NuShape::Zero).unwrap();
        let (x, y) = (vec![0.0, 0.3], vec![1.0, 0.0]);
        assert_eq!(gdt_apply(&z, &x, &y).unwrap(), (x, y));
    }

    #[test]
    fn rejects_off_constraint_input() {
        let p = GdtProfile::bump(1);
        assert!(gdt_apply(&p, &[0.1, 0.0], &[1.0, 0.0]).is_err());
        assert!(gdt_apply(&p, &[0.0, 0.1], &[1.1, 0.0]).is_err());
    }

    #[test]
    fn smooth_profiles_are_symplectic() {
        for n in [1, 2] {
            let r = gdt_check_symplectic(&GdtProfile::bump(n), n, 100, 1e-5, 0).unwrap();
            assert!(r.passed(), "n={n}: {}", r.max_error);
        }
        let z = GdtProfile::new(2, 1.0, NuShape::Zero).unwrap();
        assert!(gdt_check_symplectic(&z, 2, 100, 1e-10, 0).unwrap().max_error < 1e-10);
    }

    #[test]
    fn square_wave_is_flagged() {
        let p = GdtProfile::new(2, 1.0, NuShape::SquareWave { cells: 2000 }).unwrap();
        let r = gdt_check_symplectic(&p, 2, 100, 1e-5, 0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn sampled_profile_interpolates() {
        let p = GdtProfile::new(1, 2.0, NuShape::Sampled { t: vec![0.0, 1.0], nu: vec![1.0, 0.0] }).unwrap();
        assert!((p.nu(0.25) - 0.75).abs() < 1e-15);
        assert_eq!(p.nu(1.5), 0.0);
    }
}
