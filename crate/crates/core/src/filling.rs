//! Invariants of the Lefschetz filling `X` built from an open book: one 2-handle per
//! twist attached to `Σ × D²`.

use std::fmt;

use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{kernel_basis, IntMatrix};
use crate::openbook::OpenBook;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error("intersection form must be symmetric")]
    NotSymmetric,
}

/// A `d₃` value; the denominator always divides 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D3Value(pub Ratio<i64>);

impl D3Value {
    pub fn integer(v: i64) -> Self {
        D3Value(Ratio::from_integer(v))
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        D3Value(Ratio::new(numer, denom))
    }
}

impl fmt::Display for D3Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Default `d₃` of the standard overtwisted sphere summand. Not derived here; every
/// output that uses it says so.
pub const D_STOT_DEFAULT: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingInvariants {
    pub chi: i64,
    pub sigma: Option<i64>,
    pub c1_squared: Option<i64>,
    pub h2_rank: Option<usize>,
    pub d3: Option<D3Value>,
}

/// `χ(X) = χ(Σ) + |word|`.
pub fn filling_euler(ob: &OpenBook) -> i64 {
    ob.page().euler_characteristic() + ob.monodromy().len() as i64
}

/// Matrix whose columns are the classes of the twist curves in `H₁(Σ)`.
fn handle_map(ob: &OpenBook) -> IntMatrix {
    let page = ob.page();
    let twists = ob.monodromy().twists();
    let mut m = IntMatrix::zeros(page.homology_rank(), twists.len());
    for (j, t) in twists.iter().enumerate() {
        let class = page.curve_class(&t.curve).expect("validated open book");
        for (i, c) in class.0.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// Rank of `H₂(X) = ker(ℤ^k → H₁(Σ))`.
pub fn filling_h2_rank(ob: &OpenBook) -> usize {
    kernel_basis(&handle_map(ob)).cols()
}

pub fn curves_pairwise_disjoint(ob: &OpenBook) -> bool {
    let t = ob.monodromy().twists();
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i].curve.geometrically_disjoint(&t[j].curve)))
}

/// Intersection form of `X` in a kernel basis, with each handle contributing
/// self-intersection `−sign`. Absent unless all twist curves are pairwise disjoint.
pub fn filling_intersection_form(ob: &OpenBook) -> Option<IntMatrix> {
    if !curves_pairwise_disjoint(ob) {
        return None;
    }
    let kernel = kernel_basis(&handle_map(ob));
    let selfint: Vec<i64> = ob.monodromy().twists().iter().map(|t| -t.sign.value()).collect();
    let q = IntMatrix::diagonal(&selfint);
    Some(kernel.transpose().mul(&q).mul(&kernel))
}

/// `#positive − #negative` of a symmetric form, by rational congruence diagonalization.
pub fn filling_signature(form: &IntMatrix) -> Result<i64, FillingError> {
    if !form.is_symmetric() {
        return Err(FillingError::NotSymmetric);
    }
    let n = form.rows();
    let mut s: Vec<Vec<BigRational>> = (0..n)
        .map(|i| form.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut sigma = 0i64;
    for i in 0..n {
        if s[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !s[j][j].is_zero()) {
                s.swap(i, j);
                for row in s.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !s[i][j].is_zero()) {
                // e_i ← e_i + e_j makes the diagonal entry 2·s_ij ≠ 0
                for k in 0..n {
                    let v = s[j][k].clone();
                    s[i][k] += v;
                }
                for row in s.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = s[i][i].clone();
        sigma += if pivot.is_positive() { 1 } else { -1 };
        for k in i + 1..n {
            if s[k][i].is_zero() {
                continue;
            }
            let f = &s[k][i] / &pivot;
            for c in 0..n {
                let v = &f * &s[i][c];
                s[k][c] -= v;
            }
            for row in s.iter_mut() {
                let v = &f * &row[i];
                row[k] -= v;
            }
        }
    }
    Ok(sigma)
}

/// `d₃ = ¼(c₁² − 3σ − 2(χ − 1))`.
pub fn d3_evaluate(c1sq: i64, sigma: i64, chi: i64) -> D3Value {
    D3Value::new(c1sq - 3 * sigma - 2 * (chi - 1), 4)
}

/// Defined for all-positive words whose filling has `H₂ = 0`; then `c₁² = σ = 0`.
pub fn d3_from_word(ob: &OpenBook) -> Option<D3Value> {
    if !ob.monodromy().all_positive() || filling_h2_rank(ob) != 0 {
        return None;
    }
    Some(d3_evaluate(0, 0, filling_euler(ob)))
}

pub fn d3_connected_sum(a: D3Value, b: D3Value) -> D3Value {
    D3Value(a.0 + b.0)
}

pub fn filling_invariants(ob: &OpenBook) -> FillingInvariants {
    let h2 = filling_h2_rank(ob);
    let sigma = match h2 {
        0 => Some(0),
        _ => filling_intersection_form(ob).map(|f| filling_signature(&f).expect("kernel forms are symmetric")),
    };
    FillingInvariants {
        chi: filling_euler(ob),
        sigma,
        c1_squared: (h2 == 0).then_some(0),
        h2_rank: Some(h2),
        d3: d3_from_word(ob),
    }
}
