use gci_core::characters::{branch, char2d, CharSeries};
use gci_core::exactring::{rat, LaurentPoly, Monomial, Var};
use gci_core::waves::{beta2d, extract_2d_coeffs, BiSeries};
use proptest::prelude::*;

fn var() -> impl Strategy<Value = Var> {
    (0..3u8, 1..=4u32, 1..=4u32).prop_filter_map("distinct points", |(kind, i, j)| match kind {
        0 => Some(Var::x(i)),
        1 => Some(Var::y(i)),
        _ if i != j => Some(Var::s(i, j)),
        _ => None,
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    let term = (prop::collection::vec((var(), -3..=3i32), 0..4), -9..=9i64, 1..=5i64);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = LaurentPoly::zero();
        for (pairs, n, d) in terms {
            p.add_term(Monomial::from_pairs(pairs), rat(n, d));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn monomials_invert(a in prop::collection::vec((var(), -3..=3i32), 0..5)) {
        let m = Monomial::from_pairs(a);
        prop_assert!(m.mul(&m.inverse()).is_one());
    }

    #[test]
    fn poly_json_round_trip(a in poly()) {
        prop_assert_eq!(LaurentPoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn two_dimensional_waves_extract(entries in prop::collection::btree_map((1..5u32, 1..5u32), 1..7i64, 0..5)) {
        let mut f = BiSeries::zero(10);
        for (&(i, j), &c) in &entries {
            f = f.add(&beta2d(i, j, 10).scale(&rat(c, 1)));
        }
        let got = extract_2d_coeffs(&f, 10).unwrap();
        let expected: std::collections::BTreeMap<_, _> = entries.iter().map(|(&k, &c)| (k, rat(c, 1))).collect();
        prop_assert_eq!(got, expected);
        prop_assert_eq!(BiSeries::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn characters_branch_back(entries in prop::collection::btree_map((1..6i64, 1..6i64), 1..5i64, 0..5)) {
        let mut chi = CharSeries::zero(8);
        for (&(a, b), &m) in &entries {
            for _ in 0..m {
                chi = chi.add(&char2d(a, b, 8));
            }
        }
        prop_assert_eq!(branch(&chi).unwrap(), entries);
    }
}
