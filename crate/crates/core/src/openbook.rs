//! Abstract open books `(Σ, φ)` and the first homology of the closed 3-manifold they build.

use std::fmt;

use thiserror::Error;

use crate::linalg::{cokernel_divisors, has_two_torsion, DivisorChain};
use crate::mcg::{word_variation, Sign, SignedTwist, TwistWord, VariationMatrix};
use crate::surface::{AtlasCurve, SepCurve, Span, Surface};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoBoundary,
    TooManyBelts { boundary: u32, belts: u32 },
    CurveNotInAtlas { position: usize, twist: SignedTwist },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoBoundary => write!(f, "page has no boundary component (n must be >= 1)"),
            Violation::TooManyBelts { boundary, belts } => {
                write!(f, "belts={belts} must be smaller than n={boundary}")
            }
            Violation::CurveNotInAtlas { position, twist } => {
                write!(f, "twist {} (position {}) uses a curve outside the page atlas", twist, position + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid open book: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct InvalidOpenBook(pub Vec<Violation>);

/// Unvalidated open-book data, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawOpenBook {
    pub genus: u32,
    pub boundary: u32,
    pub belts: u32,
    pub word: TwistWord,
    pub label: String,
}

impl RawOpenBook {
    /// Empty list iff the data describes a valid open book.
    pub fn validate(&self) -> Vec<Violation> {
        let page = match Surface::with_belts(self.genus, self.boundary, self.belts) {
            Ok(p) => p,
            Err(_) if self.boundary == 0 => return vec![Violation::NoBoundary],
            Err(_) => {
                return vec![Violation::TooManyBelts { boundary: self.boundary, belts: self.belts }]
            }
        };
        self.word
            .twists()
            .iter()
            .enumerate()
            .filter(|(_, t)| !page.contains(&t.curve))
            .map(|(position, &twist)| Violation::CurveNotInAtlas { position, twist })
            .collect()
    }

    pub fn build(self) -> Result<OpenBook, InvalidOpenBook> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(InvalidOpenBook(violations));
        }
        let page = Surface::with_belts(self.genus, self.boundary, self.belts)
            .expect("validated surface");
        Ok(OpenBook { page, monodromy: self.word, label: self.label })
    }
}

/// A validated abstract open book. Immutable; operations return new values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBook {
    page: Surface,
    monodromy: TwistWord,
    label: String,
}

/// Free rank and torsion of `H₁(M;ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub free_rank: usize,
    pub torsion: DivisorChain,
    pub two_torsion: bool,
}

impl HomologySummary {
    pub fn from_chain(torsion: DivisorChain) -> Self {
        HomologySummary { free_rank: torsion.free_rank(), two_torsion: has_two_torsion(&torsion), torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_trivial()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h1={}, free={}, two_torsion={}", self.torsion, self.free_rank, self.two_torsion)
    }
}

impl OpenBook {
    pub fn new(page: Surface, monodromy: TwistWord, label: impl Into<String>) -> Result<Self, InvalidOpenBook> {
        RawOpenBook {
            genus: page.genus(),
            boundary: page.boundary(),
            belts: page.belts(),
            word: monodromy,
            label: label.into(),
        }
        .build()
    }

    /// `(D², id)`, the open book of the standard 3-sphere.
    pub fn disk() -> Self {
        OpenBook { page: Surface::disk(), monodromy: TwistWord::empty(), label: "disk".into() }
    }

    /// `(annulus, τ_{d₁}^n)`, a lens space `L(n, n−1)`.
    pub fn lens(n: usize) -> Self {
        OpenBook {
            page: Surface::annulus(),
            monodromy: TwistWord::power(AtlasCurve::D(1), n),
            label: format!("lens{n}"),
        }
    }

    /// `(Σ_{1,1}, τ_a τ_b)`, the trefoil open book of `S³`.
    pub fn trefoil() -> Self {
        let w = TwistWord::new(vec![SignedTwist::pos(AtlasCurve::A(1)), SignedTwist::pos(AtlasCurve::B(1))]);
        OpenBook { page: Surface::new(1, 1).unwrap(), monodromy: w, label: "trefoil".into() }
    }

    pub fn page(&self) -> &Surface {
        &self.page
    }

    pub fn monodromy(&self) -> &TwistWord {
        &self.monodromy
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> OpenBook {
        OpenBook { label: label.into(), ..self.clone() }
    }

    pub fn to_raw(&self) -> RawOpenBook {
        RawOpenBook {
            genus: self.page.genus(),
            boundary: self.page.boundary(),
            belts: self.page.belts(),
            word: self.monodromy.clone(),
            label: self.label.clone(),
        }
    }

    pub fn variation(&self) -> VariationMatrix {
        word_variation(&self.page, &self.monodromy).expect("validated open book")
    }

    /// `H₁(M) = coker(Var)`.
    pub fn first_homology(&self) -> HomologySummary {
        HomologySummary::from_chain(cokernel_divisors(self.variation().matrix()))
    }

    /// Band connected sum of pages: joins the last original boundary component of each page.
    /// Twists along a joined boundary become the separating curve around that summand.
    pub fn connected_sum(&self, other: &OpenBook) -> OpenBook {
        let (x, y) = (&self.page, &other.page);
        let (g1, g2) = (x.genus(), y.genus());
        let (m1, m2) = (x.original_boundary(), y.original_boundary());
        let (k1, k2) = (x.belts(), y.belts());
        let m = m1 + m2 - 1;
        let page = Surface::with_belts(g1 + g2, m + k1 + k2, k1 + k2).expect("sum of valid pages");

        let is_bare_disk = |p: &Surface| p.genus() == 0 && p.boundary() == 1;

        let left = self.monodromy.map_curves(|c| match c {
            AtlasCurve::D(j) if j == m1 => {
                if is_bare_disk(y) {
                    AtlasCurve::D(m)
                } else {
                    AtlasCurve::Sep(SepCurve { genus: Span::new(1, g1), boundary: Span::new(1, m1 - 1) })
                }
            }
            AtlasCurve::S(j) => AtlasCurve::S(m + (j - m1)),
            other => other,
        });
        let right = other.monodromy.map_curves(|c| match c {
            AtlasCurve::A(i) => AtlasCurve::A(i + g1),
            AtlasCurve::B(i) => AtlasCurve::B(i + g1),
            AtlasCurve::D(j) if j < m2 => AtlasCurve::D(j + m1 - 1),
            AtlasCurve::D(_) => {
                if is_bare_disk(x) {
                    AtlasCurve::D(m)
                } else {
                    AtlasCurve::Sep(SepCurve {
                        genus: Span::new(g1 + 1, g1 + g2),
                        boundary: Span::new(m1, m - 1),
                    })
                }
            }
            AtlasCurve::S(j) => AtlasCurve::S(m + k1 + (j - m2)),
            AtlasCurve::Sep(s) => AtlasCurve::Sep(SepCurve {
                genus: s.genus.shifted(g1),
                boundary: s.boundary.shifted(m1 - 1),
            }),
        });

        OpenBook {
            page,
            monodromy: left.concat(&right),
            label: format!("{}#{}", self.label, other.label),
        }
    }

    /// Adds a boundary component with its belt curve and twists once along it.
    pub fn stabilize(&self, sign: Sign) -> OpenBook {
        let page = self.page.stabilized();
        let mut word = self.monodromy.clone();
        word.push(SignedTwist { curve: AtlasCurve::S(page.boundary()), sign });
        let tag = match sign {
            Sign::Pos => "+",
            Sign::Neg => "-",
        };
        OpenBook { page, monodromy: word, label: format!("{}{}", self.label, tag) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn torsion(h: &HomologySummary) -> Vec<i64> {
        h.torsion.torsion().iter().map(|t| i64::try_from(t).unwrap()).collect()
    }

    fn raw(g: u32, n: u32, w: &str) -> RawOpenBook {
        RawOpenBook { genus: g, boundary: n, belts: 0, word: w.parse().unwrap(), label: String::new() }
    }

    #[test]
    fn homology_examples() {
        assert!(OpenBook::disk().first_homology().is_trivial());
        let rp3 = OpenBook::lens(2).first_homology();
        assert_eq!(torsion(&rp3), vec![2]);
        assert!(rp3.two_torsion);
        assert!(OpenBook::trefoil().first_homology().is_trivial());
        let s1s2 = OpenBook::lens(0).first_homology();
        assert_eq!((s1s2.free_rank, torsion(&s1s2)), (1, vec![]));
    }

    #[test]
    fn connected_sum_pages() {
        let dd = OpenBook::disk().connected_sum(&OpenBook::disk());
        assert_eq!((dd.page().genus(), dd.page().boundary()), (0, 1));
        assert!(dd.monodromy().is_empty());
        let s = OpenBook::trefoil().connected_sum(&OpenBook::lens(1));
        assert_eq!((s.page().genus(), s.page().boundary()), (1, 2));
        assert_eq!(s.label(), "trefoil#lens1");
    }

    #[test]
    fn connected_sum_homology_is_block_sum() {
        let s = OpenBook::lens(2).connected_sum(&OpenBook::lens(3));
        assert_eq!(torsion(&s.first_homology()), vec![6]);
        assert_eq!(s.monodromy().to_string(), "+d1 +d1 +d2 +d2 +d2");
    }

    #[test]
    fn joined_boundary_twists_become_separating_curves() {
        let x = raw(0, 2, "+d2 +d2").build().unwrap();
        let y = raw(1, 2, "+d2 +d2 +d2 +a1").build().unwrap();
        let s = x.connected_sum(&y);
        assert_eq!(s.monodromy().to_string(), "+cd1-1 +cd1-1 +cg1-1d2-2 +cg1-1d2-2 +cg1-1d2-2 +a1");
        let expect = x.first_homology().torsion.direct_sum(&y.first_homology().torsion);
        assert_eq!(s.first_homology().torsion, expect);
    }

    #[test]
    fn stabilization_examples() {
        let s = OpenBook::disk().stabilize(Sign::Pos);
        assert_eq!((s.page().genus(), s.page().boundary()), (0, 2));
        assert_eq!(s.monodromy().to_string(), "+s2");
        assert!(s.first_homology().is_trivial());
        let l = OpenBook::lens(2).stabilize(Sign::Pos);
        assert_eq!(l.first_homology().torsion.torsion(), &[BigInt::from(2)]);
        let n = OpenBook::disk().stabilize(Sign::Neg);
        assert_eq!(n.monodromy().to_string(), "-s2");
        assert!(n.first_homology().is_trivial());
    }

    #[test]
    fn validation() {
        let v = raw(0, 1, "+a1").validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::CurveNotInAtlas { position: 0, .. }));
        assert!(raw(1, 1, "+a1 +b1").validate().is_empty());
        assert_eq!(raw(0, 0, "").validate(), vec![Violation::NoBoundary]);
        assert!(raw(0, 1, "+a1").build().is_err());
    }
}
