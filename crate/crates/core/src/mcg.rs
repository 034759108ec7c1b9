//! Signed Dehn-twist words and their action on first homology of the page.
//!
//! A positive twist along `c` acts by the Picard–Lefschetz rule `x ↦ x + ⟨x,c⟩c`.
//! Relative classes live in the dual basis of the pairing
//! `H₁(Σ,∂Σ) × H₁(Σ) → ℤ`, so the inclusion `H₁(Σ) → H₁(Σ,∂Σ)` is `−J`
//! and a single twist has variation `sign · c cᵀ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::linalg::IntMatrix;
use crate::surface::{AtlasCurve, AtlasError, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedTwist {
    pub curve: AtlasCurve,
    pub sign: Sign,
}

impl SignedTwist {
    pub fn pos(curve: AtlasCurve) -> Self {
        SignedTwist { curve, sign: Sign::Pos }
    }

    pub fn neg(curve: AtlasCurve) -> Self {
        SignedTwist { curve, sign: Sign::Neg }
    }

    pub fn inverse(self) -> Self {
        SignedTwist { curve: self.curve, sign: self.sign.flipped() }
    }
}

impl fmt::Display for SignedTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.symbol(), self.curve)
    }
}

impl FromStr for SignedTwist {
    type Err = AtlasError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let sign = match token.chars().next() {
            Some('+') => Sign::Pos,
            Some('-') => Sign::Neg,
            _ => return Err(AtlasError::BadToken(token.to_string())),
        };
        Ok(SignedTwist { curve: token[1..].parse()?, sign })
    }
}

/// Twists in application order: the leftmost twist acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    twists: Vec<SignedTwist>,
}

impl TwistWord {
    pub fn new(twists: Vec<SignedTwist>) -> Self {
        TwistWord { twists }
    }

    pub fn empty() -> Self {
        TwistWord::default()
    }

    /// `count` positive twists along one curve.
    pub fn power(curve: AtlasCurve, count: usize) -> Self {
        TwistWord { twists: vec![SignedTwist::pos(curve); count] }
    }

    pub fn twists(&self) -> &[SignedTwist] {
        &self.twists
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn all_positive(&self) -> bool {
        self.twists.iter().all(|t| t.sign == Sign::Pos)
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        TwistWord { twists: self.twists.iter().chain(&other.twists).copied().collect() }
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord { twists: self.twists.iter().rev().map(|t| t.inverse()).collect() }
    }

    pub fn push(&mut self, t: SignedTwist) {
        self.twists.push(t);
    }

    pub fn map_curves(&self, f: impl Fn(AtlasCurve) -> AtlasCurve) -> TwistWord {
        TwistWord {
            twists: self.twists.iter().map(|t| SignedTwist { curve: f(t.curve), sign: t.sign }).collect(),
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.twists.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for TwistWord {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let twists = s.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
        Ok(TwistWord { twists })
    }
}

/// Relative-to-absolute variation map in the dual basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationMatrix(pub IntMatrix);

impl VariationMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }
}

fn outer(c: &[BigInt]) -> IntMatrix {
    let n = c.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, &c[i] * &c[j]);
        }
    }
    m
}

fn class_column(s: &Surface, t: &SignedTwist) -> Result<Vec<BigInt>, AtlasError> {
    Ok(s.curve_class(&t.curve)?.0)
}

/// `I − sign · c cᵀ J`.
pub fn twist_action_abs(s: &Surface, t: &SignedTwist) -> Result<IntMatrix, AtlasError> {
    let c = class_column(s, t)?;
    let n = c.len();
    let ccj = outer(&c).mul(&s.intersection_matrix());
    Ok(IntMatrix::identity(n).add(&ccj.scale(&BigInt::from(-t.sign.value()))))
}

/// `I − sign · J c cᵀ`, the action on relative classes.
pub fn twist_action_rel(s: &Surface, t: &SignedTwist) -> Result<IntMatrix, AtlasError> {
    let c = class_column(s, t)?;
    let n = c.len();
    let jcc = s.intersection_matrix().mul(&outer(&c));
    Ok(IntMatrix::identity(n).add(&jcc.scale(&BigInt::from(-t.sign.value()))))
}

pub fn twist_variation(s: &Surface, t: &SignedTwist) -> Result<IntMatrix, AtlasError> {
    let c = class_column(s, t)?;
    Ok(outer(&c).scale(&BigInt::from(t.sign.value())))
}

/// Inclusion of absolute into relative classes in dual-basis coordinates.
pub fn relative_inclusion(s: &Surface) -> IntMatrix {
    s.intersection_matrix().scale(&BigInt::from(-1))
}

/// Product `T_k ⋯ T_1` for the word `t_1 … t_k`.
pub fn word_action_abs(s: &Surface, w: &TwistWord) -> Result<IntMatrix, AtlasError> {
    let mut acc = IntMatrix::identity(s.homology_rank());
    for t in w.twists() {
        acc = twist_action_abs(s, t)?.mul(&acc);
    }
    Ok(acc)
}

pub fn word_action_rel(s: &Surface, w: &TwistWord) -> Result<IntMatrix, AtlasError> {
    let mut acc = IntMatrix::identity(s.homology_rank());
    for t in w.twists() {
        acc = twist_action_rel(s, t)?.mul(&acc);
    }
    Ok(acc)
}

/// Variation of the composite map. Applying `t` after the prefix `p` gives
/// `Var(p then t) = Var(t)·Rel(p) + Var(p)`.
pub fn word_variation(s: &Surface, w: &TwistWord) -> Result<VariationMatrix, AtlasError> {
    let n = s.homology_rank();
    let mut var = IntMatrix::zeros(n, n);
    let mut rel = IntMatrix::identity(n);
    for t in w.twists() {
        var = twist_variation(s, t)?.mul(&rel).add(&var);
        rel = twist_action_rel(s, t)?.mul(&rel);
    }
    Ok(VariationMatrix(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtlasCurve::*;

    fn word(s: &str) -> TwistWord {
        s.parse().unwrap()
    }

    #[test]
    fn single_twist_on_torus() {
        let t = Surface::new(1, 1).unwrap();
        let m = twist_action_abs(&t, &SignedTwist::pos(A(1))).unwrap();
        // a ↦ a, b ↦ b − a (columns are images)
        assert_eq!(m, IntMatrix::from_rows(&[[1, -1], [0, 1]]));
        let inv = twist_action_abs(&t, &SignedTwist::neg(A(1))).unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
    }

    #[test]
    fn boundary_twist_acts_trivially_on_absolute_classes() {
        let an = Surface::annulus();
        assert_eq!(twist_action_abs(&an, &SignedTwist::pos(D(1))).unwrap(), IntMatrix::identity(1));
    }

    #[test]
    fn word_products() {
        let t = Surface::new(1, 1).unwrap();
        assert_eq!(word_action_abs(&t, &TwistWord::empty()).unwrap(), IntMatrix::identity(2));
        let ta = twist_action_abs(&t, &SignedTwist::pos(A(1))).unwrap();
        let tb = twist_action_abs(&t, &SignedTwist::pos(B(1))).unwrap();
        assert_eq!(word_action_abs(&t, &word("+a1 +b1")).unwrap(), tb.mul(&ta));
        let w = word("+a1 -b1 +a1");
        let id = word_action_abs(&t, &w.concat(&w.inverse())).unwrap();
        assert_eq!(id, IntMatrix::identity(2));
    }

    #[test]
    fn variation_examples() {
        let an = Surface::annulus();
        assert_eq!(word_variation(&an, &TwistWord::empty()).unwrap().0, IntMatrix::zeros(1, 1));
        for n in 0..6 {
            let v = word_variation(&an, &TwistWord::power(D(1), n)).unwrap();
            assert_eq!(v.0, IntMatrix::from_rows(&[[n as i64]]));
        }
        let t = Surface::new(1, 1).unwrap();
        let v = word_variation(&t, &word("+a1")).unwrap();
        assert_eq!(v.0, IntMatrix::from_rows(&[[1, 0], [0, 0]]));
        let v = word_variation(&t, &word("+a1 +b1")).unwrap();
        assert_eq!(v.0, IntMatrix::from_rows(&[[1, 0], [1, 1]]));
    }

    #[test]
    fn word_algebra() {
        let w = word("+a1 -b2 +d1");
        assert_eq!(TwistWord::empty().concat(&w), w);
        assert_eq!(word("+a1").inverse(), word("-a1"));
        assert_eq!(w.inverse(), word("-d1 +b2 -a1"));
        assert_eq!(w.to_string(), "+a1 -b2 +d1");
        assert!("a1".parse::<TwistWord>().is_err());
        assert!("+q1".parse::<TwistWord>().is_err());
    }

    #[test]
    fn invalid_curve_is_an_error() {
        assert!(word_action_abs(&Surface::disk(), &word("+a1")).is_err());
    }
}
