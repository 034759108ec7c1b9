mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use obcert::filling::{d3_evaluate, filling_signature, D3Value};
use obcert::format::{parse_openbook_file, render_openbook_file, OpenBookFile};
use obcert::certifier::C1Declaration;
use obcert::linalg::{cokernel_divisors, has_two_torsion, smith_normal_form, DivisorChain, IntMatrix};
use obcert::mcg::{relative_inclusion, twist_action_abs, word_action_abs, word_action_rel, word_variation, Sign, TwistWord};
use obcert::numeric::gdt::random_point;
use obcert::numeric::{gdt_apply, GdtProfile};
use obcert::openbook::HomologySummary;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{cokernel_by_minors, random_book, signature_jacobi, small_rows};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect())
        })
    })
}

fn book_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn chain_of(m: &IntMatrix) -> DivisorChain {
    let (factors, free) = cokernel_by_minors(&small_rows(m), m.rows(), m.cols());
    DivisorChain::from_cyclic_orders(
        factors.into_iter().map(BigInt::from).chain(std::iter::repeat_n(BigInt::zero(), free)),
    )
}

/// Random unimodular matrix as a product of elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(k));
        m = e.mul(&m);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_is_a_valid_decomposition(a in matrix(4, 6)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero(), "{:?}", diag);
        }
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
    }

    #[test]
    fn cokernel_matches_determinantal_divisors(a in matrix(4, 6)) {
        prop_assert_eq!(cokernel_divisors(&a), chain_of(&a));
    }

    #[test]
    fn cokernel_is_unimodular_invariant(
        a in matrix(4, 5),
        left in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
        right in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
    ) {
        let p = unimodular(a.rows(), &left);
        let q = unimodular(a.cols(), &right);
        prop_assert_eq!(cokernel_divisors(&p.mul(&a).mul(&q)), cokernel_divisors(&a));
    }

    #[test]
    fn two_torsion_of_direct_sum(a in matrix(3, 6), b in matrix(3, 6)) {
        let (ca, cb) = (cokernel_divisors(&a), cokernel_divisors(&b));
        let sum = cokernel_divisors(&a.direct_sum(&b));
        prop_assert_eq!(has_two_torsion(&sum), has_two_torsion(&ca) || has_two_torsion(&cb));
        prop_assert_eq!(sum, ca.direct_sum(&cb));
    }

    #[test]
    fn twists_preserve_the_intersection_form(seed in book_seed()) {
        let ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 6);
        let j = ob.page().intersection_matrix();
        let t = word_action_abs(ob.page(), ob.monodromy()).unwrap();
        prop_assert_eq!(t.transpose().mul(&j).mul(&t), j);
        prop_assert!(t.determinant().is_one());
    }

    #[test]
    fn variation_relates_absolute_and_relative_actions(seed in book_seed()) {
        let ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 6);
        let page = ob.page();
        let t = word_action_abs(page, ob.monodromy()).unwrap();
        let v = word_variation(page, ob.monodromy()).unwrap().0;
        let n = page.homology_rank();
        prop_assert_eq!(t, IntMatrix::identity(n).add(&v.mul(&relative_inclusion(page))));
    }

    #[test]
    fn variation_composition_law(seed in book_seed(), split in 0usize..7) {
        let ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 6);
        let page = ob.page();
        let twists = ob.monodromy().twists();
        let k = split.min(twists.len());
        let first = TwistWord::new(twists[..k].to_vec());
        let second = TwistWord::new(twists[k..].to_vec());
        let whole = word_variation(page, ob.monodromy()).unwrap().0;
        let composed = word_variation(page, &second).unwrap().0
            .mul(&word_action_rel(page, &first).unwrap())
            .add(&word_variation(page, &first).unwrap().0);
        prop_assert_eq!(whole, composed);
    }

    #[test]
    fn single_twist_inverse(seed in book_seed()) {
        let ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 1);
        if let Some(t) = ob.monodromy().twists().first() {
            let a = twist_action_abs(ob.page(), t).unwrap();
            let b = twist_action_abs(ob.page(), &t.inverse()).unwrap();
            prop_assert_eq!(a.mul(&b), IntMatrix::identity(ob.page().homology_rank()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stabilization_preserves_h1(seed in book_seed(), negative in any::<bool>()) {
        let ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 6);
        let sign = if negative { Sign::Neg } else { Sign::Pos };
        let st = ob.stabilize(sign);
        prop_assert_eq!(st.first_homology(), ob.first_homology());
        prop_assert_eq!(st.stabilize(Sign::Pos).first_homology(), ob.first_homology());
    }

    #[test]
    fn connected_sum_is_block_sum(a in book_seed(), b in book_seed()) {
        let x = random_book(&mut ChaCha8Rng::seed_from_u64(a), 2, 3, 5);
        let y = random_book(&mut ChaCha8Rng::seed_from_u64(b), 2, 3, 5);
        let sum = x.connected_sum(&y).first_homology();
        let expected = HomologySummary::from_chain(x.first_homology().torsion.direct_sum(&y.first_homology().torsion));
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn openbook_files_round_trip(seed in book_seed(), c1 in 0u8..3, belted in any::<bool>()) {
        let mut ob = random_book(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3, 6).with_label("rt");
        if belted {
            ob = ob.stabilize(Sign::Pos);
        }
        let c1 = [C1Declaration::Auto, C1Declaration::Zero, C1Declaration::Nonzero][c1 as usize];
        let file = OpenBookFile { book: ob, c1 };
        let text = render_openbook_file(&file);
        let back = parse_openbook_file(&text).unwrap();
        prop_assert_eq!(&back, &file);
        let spaced = text.replace(' ', "   ").replace('\n', "  \n\n");
        prop_assert_eq!(render_openbook_file(&parse_openbook_file(&spaced).unwrap()), text);
    }

    #[test]
    fn signature_matches_eigenvalue_count(n in 1usize..5, entries in prop::collection::vec(-4i64..=4, 16)) {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                rows[i][j] = entries[i * 4 + j];
                rows[j][i] = entries[i * 4 + j];
            }
        }
        let form = IntMatrix::from_rows(&rows);
        prop_assert_eq!(filling_signature(&form).unwrap(), signature_jacobi(&rows));
    }

    #[test]
    fn d3_is_additive(a in (-100i64..100, -30i64..30, -20i64..40), b in (-100i64..100, -30i64..30, -20i64..40)) {
        let whole = d3_evaluate(a.0 + b.0, a.1 + b.1, a.2 + b.2 - 1);
        let parts = D3Value(d3_evaluate(a.0, a.1, a.2).0 + d3_evaluate(b.0, b.1, b.2).0);
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn twist_keeps_points_on_the_cotangent_bundle(seed in any::<u64>(), n in 1usize..3) {
        let p = GdtProfile::bump(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = random_point(&mut rng, n + 1, 1.0);
        let (x2, y2) = gdt_apply(&p, &x, &y).unwrap();
        let ny: f64 = y2.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xy: f64 = x2.iter().zip(&y2).map(|(a, b)| a * b).sum();
        prop_assert!((ny - 1.0).abs() < 1e-9 && xy.abs() < 1e-9);
        let (x3, y3) = gdt_apply(&p.inverse(), &x2, &y2).unwrap();
        for (u, v) in x.iter().zip(&x3).chain(y.iter().zip(&y3)) {
            prop_assert!((u - v).abs() < 1e-8);
        }
    }
}

#[test]
fn jacobi_oracle_sanity() {
    assert_eq!(signature_jacobi(&[vec![0, 1], vec![1, 0]]), 0);
    assert_eq!(signature_jacobi(&[vec![2, 1], vec![1, 2]]), 2);
    assert_eq!(signature_jacobi(&[vec![-2]]), -1);
    assert_eq!(signature_jacobi(&[vec![1, 2], vec![2, 1]]), 0);
}

#[test]
fn minors_oracle_sanity() {
    assert_eq!(cokernel_by_minors(&[vec![2, 0], vec![0, 3]], 2, 2), (vec![6], 0));
    assert_eq!(cokernel_by_minors(&[vec![0, 0]], 1, 2), (vec![], 1));
    assert_eq!(cokernel_by_minors(&[vec![2, 4], vec![4, 8]], 2, 2), (vec![2], 1));
}
