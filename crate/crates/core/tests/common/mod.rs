//! Helpers shared by the integration targets: seeded generators and oracles that
//! do not go through the library's Smith normal form.

#![allow(dead_code)]

use num_bigint::BigInt;
use obcert::mcg::{SignedTwist, TwistWord};
use obcert::openbook::OpenBook;
use obcert::surface::{AtlasCurve, Surface};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn random_book(rng: &mut ChaCha8Rng, max_genus: u32, max_boundary: u32, max_len: usize) -> OpenBook {
    let g = rng.gen_range(0..=max_genus);
    let n = rng.gen_range(1..=max_boundary);
    let mut curves: Vec<AtlasCurve> = (1..=n).map(AtlasCurve::D).collect();
    for i in 1..=g {
        curves.push(AtlasCurve::A(i));
        curves.push(AtlasCurve::B(i));
    }
    let len = rng.gen_range(0..=max_len);
    let twists = (0..len)
        .map(|_| {
            let c = curves[rng.gen_range(0..curves.len())];
            if rng.gen_bool(0.5) {
                SignedTwist::pos(c)
            } else {
                SignedTwist::neg(c)
            }
        })
        .collect();
    OpenBook::new(Surface::new(g, n).unwrap(), TwistWord::new(twists), "random").unwrap()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors (`> 1`) and free rank of `coker(m)` from determinantal
/// divisors: `d_k = gcd` of all `k × k` minors, factors `d_k / d_{k−1}`.
pub fn cokernel_by_minors(m: &[Vec<i64>], rows: usize, cols: usize) -> (Vec<i128>, usize) {
    let mut prev = 1i128;
    let mut factors = Vec::new();
    let mut rank = 0;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        rank = k;
        factors.push(d / prev);
        prev = d;
    }
    (factors.into_iter().filter(|&f| f > 1).collect(), rows - rank)
}

pub fn small_rows(m: &obcert::linalg::IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| i64::try_from(v).unwrap()).collect()).collect()
}

pub fn big(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `H₁` of the lens space `L(p, q)` from its genus-1 cell structure: one cell per
/// dimension, `∂₂ = p`, `∂₁ = ∂₃ = 0`. Returns (cyclic order or 0 if free, free rank).
pub fn lens_h1_cw(p: i64) -> (Vec<i128>, usize) {
    let d2 = vec![vec![p]];
    cokernel_by_minors(&d2, 1, 1)
}

/// Signature of a small symmetric integer matrix by Jacobi eigenvalue rotation.
pub fn signature_jacobi(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        if off < 1e-20 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| if a[i][i] > 1e-9 { 1 } else if a[i][i] < -1e-9 { -1 } else { 0 }).sum()
}

/// Threshold by direct scan of the continuous formulas on `θ = i/grid`.
pub fn brute_force_k0(grid: usize, b: impl Fn(f64) -> f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut best = 0.0f64;
    for i in 0..grid {
        let theta = i as f64 / grid as f64;
        let a = 1.0 + 0.5 * (tau * theta).cos();
        best = best.max(-b(theta) / a);
    }
    best
}
