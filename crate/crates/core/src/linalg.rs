//! Exact integer matrices, Smith normal form and cokernel torsion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over ℤ with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the entry count is not `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor from small integer rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with transforms. Works on any rectangular matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let e = d.get(i, j);
                    if !e.is_zero()
                        && best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold a offending row into the pivot row and retry
            let p = d.get(t, t).clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SmithDecomposition {
    for t in 0..d.rows.min(d.cols) {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}

/// Torsion invariant factors (all > 1, each dividing the next) plus free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DivisorChain {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl DivisorChain {
    /// Normalizes an arbitrary list of cyclic orders: zeros count as free summands,
    /// units vanish, the rest is brought to invariant-factor form.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for o in orders {
            if o.is_zero() {
                free_rank += 1;
            } else {
                finite.push(o.abs());
            }
        }
        let diag = {
            let k = finite.len();
            let mut m = IntMatrix::zeros(k, k);
            for (i, o) in finite.into_iter().enumerate() {
                m.set(i, i, o);
            }
            m
        };
        let torsion = smith_normal_form(&diag)
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        DivisorChain { torsion, free_rank }
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &DivisorChain) -> DivisorChain {
        let orders = self
            .torsion
            .iter()
            .chain(&other.torsion)
            .cloned()
            .chain(std::iter::repeat_n(BigInt::zero(), self.free_rank + other.free_rank));
        DivisorChain::from_cyclic_orders(orders)
    }
}

impl fmt::Display for DivisorChain {
    /// Torsion divisors joined by `,`, or `0` when there are none.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Invariant factors of `ℤ^rows / image(A)`.
pub fn cokernel_divisors(a: &IntMatrix) -> DivisorChain {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    DivisorChain { torsion, free_rank: a.rows - rank }
}

pub fn has_two_torsion(d: &DivisorChain) -> bool {
    d.torsion.iter().any(|t| t.is_even())
}

/// Columns form a ℤ-basis of `ker A ⊂ ℤ^cols`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols;
    let mut out = IntMatrix::zeros(n, n - rank);
    for (k, j) in (rank..n).enumerate() {
        for i in 0..n {
            out.set(i, k, snf.v.get(i, j).clone());
        }
    }
    out
}
