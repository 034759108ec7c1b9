//! Page surfaces Σ_{g,n}, their fixed curve atlas and the homology intersection pairing.
//!
//! Coordinates of `H₁(Σ;ℤ)` are ordered `(a₁,b₁,…,a_g,b_g, e₁,…,e_{m−1}, s_{m+1},…,s_n)`
//! where `m = n − belts` counts the original boundary components and `s_j` is the basis
//! vector added by the stabilization that created boundary component `j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("a page needs at least one boundary component")]
    NoBoundary,
    #[error("belt count {belts} leaves no original boundary component (n = {boundary})")]
    TooManyBelts { boundary: u32, belts: u32 },
    #[error("curve {curve} is not in the atlas of {surface}")]
    CurveOutOfRange { curve: AtlasCurve, surface: Surface },
    #[error("homology vectors have length {left} and {right}, surface rank is {rank}")]
    LengthMismatch { left: usize, right: usize, rank: usize },
    #[error("bad curve token `{0}`")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surface {
    genus: u32,
    boundary: u32,
    belts: u32,
}

impl Surface {
    pub fn new(genus: u32, boundary: u32) -> Result<Self, AtlasError> {
        Self::with_belts(genus, boundary, 0)
    }

    /// A page whose last `belts` boundary components were created by stabilization.
    pub fn with_belts(genus: u32, boundary: u32, belts: u32) -> Result<Self, AtlasError> {
        if boundary == 0 {
            return Err(AtlasError::NoBoundary);
        }
        if belts >= boundary {
            return Err(AtlasError::TooManyBelts { boundary, belts });
        }
        Ok(Surface { genus, boundary, belts })
    }

    pub fn disk() -> Self {
        Surface { genus: 0, boundary: 1, belts: 0 }
    }

    pub fn annulus() -> Self {
        Surface { genus: 0, boundary: 2, belts: 0 }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary(&self) -> u32 {
        self.boundary
    }

    pub fn belts(&self) -> u32 {
        self.belts
    }

    /// Boundary components not created by stabilization.
    pub fn original_boundary(&self) -> u32 {
        self.boundary - self.belts
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary)
    }

    pub fn homology_rank(&self) -> usize {
        (2 * self.genus + self.boundary - 1) as usize
    }

    fn e_offset(&self) -> usize {
        2 * self.genus as usize
    }

    fn s_offset(&self) -> usize {
        self.e_offset() + self.original_boundary() as usize - 1
    }

    /// The page after one stabilization: one more boundary component, one more belt.
    pub fn stabilized(&self) -> Surface {
        Surface { genus: self.genus, boundary: self.boundary + 1, belts: self.belts + 1 }
    }

    pub fn contains(&self, c: &AtlasCurve) -> bool {
        let m = self.original_boundary();
        match *c {
            AtlasCurve::A(i) | AtlasCurve::B(i) => (1..=self.genus).contains(&i),
            AtlasCurve::D(j) => (1..=m).contains(&j),
            AtlasCurve::S(j) => (m + 1..=self.boundary).contains(&j),
            AtlasCurve::Sep(sep) => {
                sep.genus.is_within(self.genus) && sep.boundary.is_within(m.saturating_sub(1))
            }
        }
    }

    pub fn check_curve(&self, c: &AtlasCurve) -> Result<(), AtlasError> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(AtlasError::CurveOutOfRange { curve: *c, surface: *self })
        }
    }

    pub fn curve_class(&self, c: &AtlasCurve) -> Result<HomologyVector, AtlasError> {
        self.check_curve(c)?;
        let mut v = vec![0i64; self.homology_rank()];
        let m = self.original_boundary() as usize;
        match *c {
            AtlasCurve::A(i) => v[2 * (i as usize - 1)] = 1,
            AtlasCurve::B(i) => v[2 * (i as usize - 1) + 1] = 1,
            AtlasCurve::D(j) if (j as usize) < m => v[self.e_offset() + j as usize - 1] = 1,
            AtlasCurve::D(_) => {
                for x in &mut v[self.e_offset()..self.s_offset()] {
                    *x = -1;
                }
            }
            AtlasCurve::S(j) => v[self.s_offset() + (j as usize - m - 1)] = 1,
            AtlasCurve::Sep(sep) => {
                for j in sep.boundary.indices() {
                    v[self.e_offset() + j as usize - 1] = 1;
                }
            }
        }
        Ok(HomologyVector::from_small(&v))
    }

    /// Matrix `J` of the skew pairing, `⟨x,y⟩ = xᵀ J y`.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let mut j = IntMatrix::zeros(self.homology_rank(), self.homology_rank());
        for i in 0..self.genus as usize {
            j.set(2 * i, 2 * i + 1, BigInt::from(1));
            j.set(2 * i + 1, 2 * i, BigInt::from(-1));
        }
        j
    }

    pub fn intersection_number(
        &self,
        x: &HomologyVector,
        y: &HomologyVector,
    ) -> Result<BigInt, AtlasError> {
        let rank = self.homology_rank();
        if x.len() != rank || y.len() != rank {
            return Err(AtlasError::LengthMismatch { left: x.len(), right: y.len(), rank });
        }
        let mut acc = BigInt::zero();
        for i in 0..self.genus as usize {
            let (a, b) = (2 * i, 2 * i + 1);
            acc += &x.0[a] * &y.0[b] - &x.0[b] * &y.0[a];
        }
        Ok(acc)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} n={}", self.genus, self.boundary)?;
        if self.belts > 0 {
            write!(f, " belts={}", self.belts)?;
        }
        Ok(())
    }
}

/// Inclusive 1-based index range; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub const EMPTY: Span = Span { lo: 1, hi: 0 };

    pub fn new(lo: u32, hi: u32) -> Self {
        if hi < lo {
            Span::EMPTY
        } else {
            Span { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }

    fn is_within(&self, max: u32) -> bool {
        self.is_empty() || (self.lo >= 1 && self.hi <= max)
    }

    fn subset_of(&self, other: &Span) -> bool {
        self.is_empty() || (!other.is_empty() && other.lo <= self.lo && self.hi <= other.hi)
    }

    fn disjoint_from(&self, other: &Span) -> bool {
        self.is_empty() || other.is_empty() || self.hi < other.lo || other.hi < self.lo
    }

    pub fn shifted(&self, by: u32) -> Span {
        if self.is_empty() {
            *self
        } else {
            Span { lo: self.lo + by, hi: self.hi + by }
        }
    }
}

/// A separating curve cutting off the handles `genus` and the original boundary
/// components `boundary` (never the last original one). Band connected sums produce
/// these when a summand's word twists along the boundary that gets joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SepCurve {
    pub genus: Span,
    pub boundary: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtlasCurve {
    A(u32),
    B(u32),
    D(u32),
    S(u32),
    Sep(SepCurve),
}

impl AtlasCurve {
    pub fn geometrically_disjoint(&self, other: &AtlasCurve) -> bool {
        use AtlasCurve::*;
        match (self, other) {
            (A(i), B(j)) | (B(i), A(j)) => i != j,
            (Sep(x), Sep(y)) => {
                let nested = |p: &SepCurve, q: &SepCurve| {
                    p.genus.subset_of(&q.genus) && p.boundary.subset_of(&q.boundary)
                };
                let apart = x.genus.disjoint_from(&y.genus) && x.boundary.disjoint_from(&y.boundary);
                nested(x, y) || nested(y, x) || apart
            }
            _ => true,
        }
    }
}

impl fmt::Display for AtlasCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtlasCurve::A(i) => write!(f, "a{i}"),
            AtlasCurve::B(i) => write!(f, "b{i}"),
            AtlasCurve::D(j) => write!(f, "d{j}"),
            AtlasCurve::S(j) => write!(f, "s{j}"),
            AtlasCurve::Sep(sep) => {
                write!(f, "c")?;
                if !sep.genus.is_empty() {
                    write!(f, "g{}-{}", sep.genus.lo, sep.genus.hi)?;
                }
                if !sep.boundary.is_empty() {
                    write!(f, "d{}-{}", sep.boundary.lo, sep.boundary.hi)?;
                }
                Ok(())
            }
        }
    }
}

fn parse_index(s: &str, token: &str) -> Result<u32, AtlasError> {
    match s.parse::<u32>() {
        Ok(i) if i >= 1 && !s.starts_with('+') => Ok(i),
        _ => Err(AtlasError::BadToken(token.to_string())),
    }
}

fn parse_span(s: &str, token: &str) -> Result<Span, AtlasError> {
    let (lo, hi) = s.split_once('-').ok_or_else(|| AtlasError::BadToken(token.to_string()))?;
    let (lo, hi) = (parse_index(lo, token)?, parse_index(hi, token)?);
    if hi < lo {
        return Err(AtlasError::BadToken(token.to_string()));
    }
    Ok(Span { lo, hi })
}

impl FromStr for AtlasCurve {
    type Err = AtlasError;

    /// Tokens `a<i>`, `b<i>`, `d<j>`, `s<j>` and `c[g<lo>-<hi>][d<lo>-<hi>]`.
    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let bad = || AtlasError::BadToken(token.to_string());
        let mut chars = token.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        match kind {
            'a' => Ok(AtlasCurve::A(parse_index(rest, token)?)),
            'b' => Ok(AtlasCurve::B(parse_index(rest, token)?)),
            'd' => Ok(AtlasCurve::D(parse_index(rest, token)?)),
            's' => Ok(AtlasCurve::S(parse_index(rest, token)?)),
            'c' => {
                let (g_part, d_part) = match rest.find('d') {
                    Some(k) => (&rest[..k], Some(&rest[k + 1..])),
                    None => (rest, None),
                };
                let genus = match g_part.strip_prefix('g') {
                    Some(s) => parse_span(s, token)?,
                    None if g_part.is_empty() => Span::EMPTY,
                    None => return Err(bad()),
                };
                let boundary = match d_part {
                    Some(s) => parse_span(s, token)?,
                    None => Span::EMPTY,
                };
                Ok(AtlasCurve::Sep(SepCurve { genus, boundary }))
            }
            _ => Err(bad()),
        }
    }
}

/// Coordinates of a class in `H₁(Σ;ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyVector(pub Vec<BigInt>);

impl HomologyVector {
    pub fn from_small(v: &[i64]) -> Self {
        HomologyVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }
}
