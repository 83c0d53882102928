use proptest::prelude::*;

use twov_core::forest::{normalized_forest_of_pattern, NumberedForest};
use twov_core::fractions::{psi, psi_inverse, FractionPair};
use twov_core::pi_monoid::{canonical_word, left_divides};
use twov_core::two_v;
use twov_core::{Alphabet, Generator, Kind, NumberedPattern, Word};

fn letter(
    kinds: &'static [Kind],
    max_index: u32,
    signed: bool,
) -> impl Strategy<Value = Generator> {
    (prop::sample::select(kinds), 0..=max_index, any::<bool>()).prop_map(move |(k, i, inv)| {
        let g = Generator::new(k, i);
        if signed && inv {
            g.inverse()
        } else {
            g
        }
    })
}

const PI: &[Kind] = &[Kind::V, Kind::H, Kind::Sigma];
const VH: &[Kind] = &[Kind::V, Kind::H];
const TWO_V: &[Kind] = &[Kind::A, Kind::B, Kind::C, Kind::Pi, Kind::PiBar];

fn pi_word(max_len: usize, max_index: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(PI, max_index, false), 0..=max_len)
        .prop_map(|l| Word::from_letters(Alphabet::Pi, l))
}

fn pi_group_word(max_len: usize, max_index: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(PI, max_index, true), 0..=max_len)
        .prop_map(|l| Word::from_letters(Alphabet::Pi, l))
}

fn two_v_word(max_len: usize, max_index: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(TWO_V, max_index, true), 0..=max_len)
        .prop_map(|l| Word::from_letters(Alphabet::TwoV, l))
}

fn pattern(w: &Word) -> NumberedPattern {
    NumberedPattern::of_word(w).unwrap()
}

fn fraction(w: &Word) -> FractionPair {
    FractionPair::of_word(w).unwrap()
}

fn same(f: &FractionPair, g: &FractionPair) -> bool {
    f.equals(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(w in pi_group_word(12, 9), t in two_v_word(12, 9)) {
        prop_assert_eq!(Word::parse(&w.to_string(), Alphabet::Pi).unwrap(), w.clone());
        prop_assert_eq!(Word::parse(&t.to_string(), Alphabet::TwoV).unwrap(), t.clone());
        prop_assert_eq!(Word::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn free_reduction_keeps_the_element(w in pi_group_word(12, 3)) {
        prop_assert!(same(&fraction(&w), &fraction(&w.free_reduce())));
    }

    #[test]
    fn surplus_counts_subdivisions(w in pi_word(10, 4)) {
        let n = w.letters.iter().filter(|g| g.kind != Kind::Sigma).count() as u32;
        prop_assert_eq!(pattern(&w).surplus(), n);
    }

    #[test]
    fn transpositions_are_involutions(w in pi_word(8, 4), i in 0u32..6) {
        let p = pattern(&w);
        let s = Generator::new(Kind::Sigma, i);
        prop_assert_eq!(p.apply(s).unwrap().apply(s).unwrap(), p);
    }

    #[test]
    fn product_is_associative(a in pi_word(5, 3), b in pi_word(5, 3), c in pi_word(5, 3)) {
        let (p, q, r) = (pattern(&a), pattern(&b), pattern(&c));
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, pattern(&a.concat(&b).concat(&c)));
        let one = NumberedPattern::trivial();
        prop_assert_eq!(one.multiply(&p).unwrap(), p.clone());
        prop_assert_eq!(p.multiply(&one).unwrap(), p);
    }

    #[test]
    fn left_cancellative(c in pi_word(5, 3), k in pi_word(5, 3), l in pi_word(5, 3)) {
        let c = pattern(&c);
        let (k, l) = (pattern(&k), pattern(&l));
        let (ck, cl) = (c.multiply(&k).unwrap(), c.multiply(&l).unwrap());
        prop_assert_eq!(ck == cl, k == l);
        prop_assert_eq!(c.quotient(&ck).unwrap(), k);
    }

    #[test]
    fn left_division_is_a_section(c in pi_word(5, 3), k in pi_word(5, 3)) {
        let k = pattern(&k);
        let l = pattern(&c).multiply(&k).unwrap();
        let q = left_divides(&k, &l);
        prop_assert!(q.is_some());
        prop_assert_eq!(q.unwrap().multiply(&k).unwrap(), l);
    }

    #[test]
    fn canonical_words_decide_pi(a in pi_word(10, 3), b in pi_word(10, 3)) {
        let (p, q) = (pattern(&a), pattern(&b));
        let (ca, cb) = (canonical_word(&p).unwrap(), canonical_word(&q).unwrap());
        prop_assert_eq!(&pattern(&ca), &p);
        prop_assert_eq!(ca == cb, p == q);
        prop_assert_eq!(canonical_word(&pattern(&ca)).unwrap(), ca);
    }

    #[test]
    fn normalized_forest_round_trips(w in pi_word(10, 4)) {
        let p = pattern(&w);
        let f = normalized_forest_of_pattern(&p).unwrap();
        prop_assert!(f.is_normalized());
        prop_assert_eq!(f.to_pattern().unwrap(), p);
    }

    #[test]
    fn forests_of_words_commute_with_patterns(w in prop::collection::vec(letter(VH, 4, false), 0..=8)) {
        let w = Word::from_letters(Alphabet::Pi, w);
        prop_assert_eq!(NumberedForest::of_word(&w).unwrap().to_pattern().unwrap(), pattern(&w));
    }

    #[test]
    fn composition_is_associative(a in pi_group_word(5, 2), b in pi_group_word(5, 2), c in pi_group_word(5, 2)) {
        let (f, g, h) = (fraction(&a), fraction(&b), fraction(&c));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(same(&left, &right));
        prop_assert!(same(&left, &fraction(&a.concat(&b).concat(&c))));
    }

    #[test]
    fn inversion_reverses_products(a in pi_group_word(6, 2), b in pi_group_word(6, 2)) {
        let (f, g) = (fraction(&a), fraction(&b));
        let lhs = f.compose(&g).unwrap().invert();
        let rhs = g.invert().compose(&f.invert()).unwrap();
        prop_assert!(same(&lhs, &rhs));
        prop_assert!(f.compose(&f.invert()).unwrap().is_identity());
    }

    #[test]
    fn direct_equality_matches_composition(a in pi_group_word(6, 2), b in pi_group_word(6, 2), at in any::<prop::sample::Index>()) {
        let (f, g) = (fraction(&a), fraction(&b));
        prop_assert_eq!(f.equals(&g).unwrap(), f.compose(&g.invert()).unwrap().is_identity());
        let k = at.index(a.len() + 1);
        let padded = Word::from_letters(Alphabet::Pi, [&a.letters[..k], &b.letters, &b.inverse().letters, &a.letters[k..]].concat());
        prop_assert!(fraction(&padded).equals(&f).unwrap());
    }

    #[test]
    fn lmr_form_re_evaluates(w in pi_group_word(8, 3)) {
        let f = fraction(&w);
        prop_assert!(same(&fraction(&f.lmr_form().unwrap().to_word()), &f));
        let c = f.canonical_word().unwrap();
        prop_assert!(same(&fraction(&c), &f));
        prop_assert_eq!(fraction(&c).canonical_word().unwrap(), c);
    }

    #[test]
    fn canonical_two_v_words_decide_equality(a in two_v_word(6, 3), b in two_v_word(6, 3)) {
        let (f, g) = (two_v::eval_word(&a).unwrap(), two_v::eval_word(&b).unwrap());
        let (ca, cb) = (two_v::canonical_word(&a).unwrap(), two_v::canonical_word(&b).unwrap());
        prop_assert_eq!(ca == cb, f.compose(&g.invert()).unwrap().is_identity());
        prop_assert!(same(&two_v::eval_word(&ca).unwrap(), &f));
        prop_assert_eq!(two_v::canonical_word(&ca).unwrap(), ca);
        prop_assert!(two_v::in_two_v(&f));
    }

    #[test]
    fn psi_round_trips(p in 1u32..8, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..10)) {
        let letters = picks.iter().map(|i| Generator::new(Kind::Sigma, i.index(p as usize) as u32)).collect();
        let w = Word::from_letters(Alphabet::Pi, letters);
        let image = psi(&w, p).unwrap();
        prop_assert_eq!(psi_inverse(&image, p).unwrap(), w);
    }
}
