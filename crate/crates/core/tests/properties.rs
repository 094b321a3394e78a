mod common;

use christol_core::automaton::{Acceptor, Dfao, Direction, DEFAULT_STATE_CAP};
use christol_core::christol::{dfao_to_series, support_acceptor};
use christol_core::digits::{decode_nat, decode_sp, encode_nat, encode_sp, SpRational};
use christol_core::field::{FieldElement, GaloisField};
use christol_core::series::{
    as_power_pos, as_subst, gap_sum, GenSeries, Series, TruncatedSeries, Q,
};
use christol_core::sparse::{closed_form, is_sparse_in_base, DEFAULT_COMPONENT_CAP};
use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;

const FIELDS: [(u32, u32); 6] = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)];

fn field_and_elems(k: usize) -> impl Strategy<Value = (GaloisField, Vec<FieldElement>)> {
    (0..FIELDS.len()).prop_flat_map(move |i| {
        let (p, m) = FIELDS[i];
        let f = GaloisField::new(p, m).unwrap();
        proptest::collection::vec(0..f.order(), k).prop_map(move |xs| {
            (
                f,
                xs.into_iter().map(|x| f.from_index(x).unwrap()).collect(),
            )
        })
    })
}

/// A positively supported polynomial over a prime field, as `(p, exps, coeffs)`.
fn prime_poly() -> impl Strategy<Value = (u32, Vec<(u64, u64)>)> {
    prop_oneof![Just(2u32), Just(3u32)].prop_flat_map(|p| {
        (
            Just(p),
            proptest::collection::vec((1u64..60, 1u64..p as u64), 1..6),
        )
    })
}

fn truncated(p: u32, terms: &[(u64, u64)], n: u64) -> TruncatedSeries {
    let f = GaloisField::prime(p).unwrap();
    let mut s = TruncatedSeries::zero(f, Some(n));
    for &(e, c) in terms {
        s = s
            .add(&Series::monomial(f.from_index(c).unwrap(), e).truncate(&n))
            .unwrap();
    }
    s
}

fn random_acceptor() -> impl Strategy<Value = Acceptor> {
    (1usize..6, 2usize..4).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(proptest::collection::vec(0..n, k), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(delta, out)| Dfao::new(k, delta, 0, out, Direction::Msd).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws((_, xs) in field_and_elems(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a - a, a.field().zero());
        if !a.is_zero() {
            prop_assert!((a * a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn frobenius_is_additive_and_periodic((f, xs) in field_and_elems(2)) {
        let (a, b) = (xs[0], xs[1]);
        prop_assert_eq!((a + b).frobenius(1), a.frobenius(1) + b.frobenius(1));
        prop_assert_eq!(a.frobenius(f.degree() as i64), a);
        prop_assert_eq!(a.frobenius(1), a.pow(f.characteristic() as u64));
    }

    #[test]
    fn artin_schreier_roots_solve((f, xs) in field_and_elems(1)) {
        let c = xs[0];
        for a in c.artin_schreier_roots() {
            prop_assert_eq!(a.pow(f.characteristic() as u64) - a, c);
        }
    }

    #[test]
    fn naturals_round_trip(n in 0u64..1_000_000, k in 2u32..7) {
        prop_assert_eq!(decode_nat(&encode_nat(n, k), k).unwrap(), n);
    }

    #[test]
    fn p_adic_rationals_round_trip(num in 0u64..100_000, e in 0u32..8, p in prop_oneof![Just(2u32), Just(3), Just(5)]) {
        let x = SpRational::new(p, BigUint::from(num), e).unwrap();
        let w = encode_sp(&x);
        prop_assert!(w.is_valid());
        prop_assert_eq!(decode_sp(&w).unwrap(), x);
    }

    #[test]
    fn minimize_and_reverse_keep_the_language(a in random_acceptor()) {
        let m = a.minimize();
        prop_assert!(m.equivalent(&a).unwrap());
        prop_assert_eq!(m.minimize().num_states(), m.num_states());
        let twice = a.reversed(DEFAULT_STATE_CAP).unwrap().reversed(DEFAULT_STATE_CAP).unwrap();
        prop_assert!(twice.equivalent(&a).unwrap());
    }

    #[test]
    fn leading_zero_padding_is_invertible(a in random_acceptor()) {
        let k = a.alphabet() as u32;
        let canonical = a.intersect(&Acceptor::canonical_naturals(k)).unwrap();
        let back = canonical.pad_leading_zeros().unwrap().strip_leading_zeros().unwrap();
        prop_assert!(back.equivalent(&canonical).unwrap());
    }

    #[test]
    fn verdict_matches_census_growth(a in random_acceptor()) {
        let k = a.alphabet() as u32;
        let verdict = is_sparse_in_base(&a, k, DEFAULT_COMPONENT_CAP).unwrap();
        let table = a.census_table(30);
        if verdict.is_sparse() {
            // polynomial growth: doubling the length at most multiplies by a bounded factor
            let small = table[15].clone().max(BigUint::from(1u32));
            prop_assert!(table[30] <= small * BigUint::from(1u64 << 12));
        }
    }

    #[test]
    fn support_round_trip(seed in 0u64..1000, p in prop_oneof![Just(2u32), Just(3)]) {
        let mut r = rng(seed);
        let s = (seed % 3) as usize;
        let form = random_integer_form(&mut r, p, s, 3);
        let acc = form.acceptor(p as usize).unwrap();
        let field = GaloisField::prime(p).unwrap();
        let m = indicator_machine(&acc, field.one());
        let back = support_acceptor(&m);
        prop_assert!(back.equivalent(&acc.minimize()).unwrap());
        let series = dfao_to_series(&m, 200).unwrap();
        for e in series.support() {
            prop_assert!(acc.accepts(&encode_nat(e, p)));
        }
    }

    #[test]
    fn closed_form_matches_pumping(seed in 0u64..1000, p in prop_oneof![Just(2u32), Just(3), Just(5)]) {
        let mut r = rng(seed);
        let form = random_radix_form(&mut r, p, (seed % 4) as usize);
        let cf = closed_form(&form);
        for (n, w) in form.words_up_to(14) {
            prop_assert_eq!(cf.value(&n), christol_core::digits::positional_value(&w, p).unwrap());
        }
    }

    #[test]
    fn subst_power_round_trip(c in 1i128..5, cd in 1i128..4, d in -6i128..6, dd in 1i128..4, (p, terms) in prime_poly()) {
        let f = truncated(p, &terms, 64).to_gen();
        let exact: GenSeries = Series::from_terms(f.field(), f.terms().clone(), None).unwrap();
        let c = Q::new(c, cd);
        let d = Q::new(d, dd);
        let there = exact.subst_power(&c, &d).unwrap();
        let back = there.subst_power(&(Q::from_integer(1) / c), &(-d / c)).unwrap();
        prop_assert_eq!(back, exact);
    }

    #[test]
    fn substitution_form_equals_power_form((p, terms) in prime_poly()) {
        let f = truncated(p, &terms, 512);
        let a = as_subst(&f, &512).unwrap();
        let b = as_power_pos(&f, &512).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unit_gap_sum_is_the_power_form((p, terms) in prime_poly()) {
        let f = truncated(p, &terms, 256);
        prop_assert_eq!(gap_sum(&f, 1, &256).unwrap(), as_power_pos(&f, &256).unwrap());
    }

    #[test]
    fn power_form_solves_artin_schreier((p, terms) in prime_poly()) {
        let f = truncated(p, &terms, 300);
        let g = as_power_pos(&f, &300).unwrap();
        let r = g.artin_schreier_residual(&f).unwrap();
        prop_assert!(r.order().is_none());
    }

    #[test]
    fn products_respect_precision((p, a) in prime_poly(), (_, b) in prime_poly()) {
        let f = truncated(p, &a, 80);
        let b: Vec<(u64, u64)> = b.iter().map(|&(e, c)| (e, 1 + c % (p as u64 - 1).max(1))).collect();
        let g = truncated(p, &b, 80);
        let h = f.mul(&g).unwrap();
        let (Some(vf), Some(vg)) = (f.valuation(), g.valuation()) else {
            return Ok(());
        };
        prop_assert_eq!(h.precision(), Some(&(80 + vf.min(vg))));
    }
}
