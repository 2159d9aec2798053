use proptest::prelude::*;

use subgroup_codes::numtheory::{decompose_unit, exists_power_neg_one, order_mod, pow_mod};
use subgroup_codes::perm::{factorial, Permutation};

fn perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| Permutation::unrank(r, n).unwrap())
}

fn sized_perm() -> impl Strategy<Value = Permutation> {
    (1usize..=9).prop_flat_map(perm_of)
}

fn triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=9).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
}

proptest! {
    #[test]
    fn composition_is_associative((p, q, r) in triple()) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
    }

    #[test]
    fn composition_applies_right_first((p, q, _r) in triple()) {
        let pq = p.compose(&q);
        for i in 0..p.degree() {
            prop_assert_eq!(pq.apply(i), p.apply(q.apply(i)));
        }
    }

    #[test]
    fn inverse_cancels(p in sized_perm()) {
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert!(p.inverse().compose(&p).is_identity());
        prop_assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn rank_round_trips(p in sized_perm()) {
        let n = p.degree();
        prop_assert_eq!(Permutation::unrank(p.rank(), n).unwrap(), p);
        prop_assert!(p.rank() < factorial(n));
    }

    #[test]
    fn rank_is_monotone_in_lex_order(n in 1usize..=7, r in 0u64..5039) {
        let r = r % factorial(n);
        let mut p = Permutation::unrank(r, n).unwrap();
        if p.next_lex() {
            prop_assert_eq!(p.rank(), r + 1);
        } else {
            prop_assert_eq!(r + 1, factorial(n));
        }
    }

    #[test]
    fn cycle_notation_round_trips(p in sized_perm()) {
        let text = p.to_cycle_string();
        prop_assert_eq!(Permutation::parse(&text, p.degree()).unwrap(), p);
    }

    #[test]
    fn order_and_powers(p in sized_perm()) {
        let o = p.order();
        prop_assert!(p.power(o as i64).is_identity());
        prop_assert_eq!(p.power(-1), p.inverse());
        prop_assert_eq!(o, p.cycle_type().order());
    }

    #[test]
    fn parity_is_a_homomorphism((p, q, _r) in triple()) {
        let odd = p.parity().is_odd() ^ q.parity().is_odd();
        prop_assert_eq!(p.compose(&q).parity().is_odd(), odd);
        prop_assert_eq!(p.parity(), p.cycle_type().parity());
    }

    #[test]
    fn conjugation_preserves_cycle_type((p, g, _r) in triple()) {
        prop_assert_eq!(p.conjugate(&g).cycle_type(), p.cycle_type());
    }

    #[test]
    fn square_roots_square_back(p in sized_perm()) {
        let sq = p.compose(&p);
        prop_assert!(sq.is_square());
        let roots = sq.square_roots(64);
        prop_assert!(!roots.is_empty());
        for r in roots {
            prop_assert_eq!(r.compose(&r), sq);
        }
        match p.square_root() {
            Some(r) => prop_assert_eq!(r.compose(&r), p),
            None => prop_assert!(!p.is_square()),
        }
    }

    #[test]
    fn representative_realises_its_type(p in sized_perm()) {
        let t = p.cycle_type();
        prop_assert_eq!(t.representative().cycle_type(), t);
    }

    #[test]
    fn unit_decomposition_reconstructs(n in 3u32..=40, u in any::<u64>()) {
        let u = (u & ((1u64 << n) - 1)) | 1;
        let d = decompose_unit(u, n).unwrap();
        prop_assert_eq!(d.reconstruct(), u);
        prop_assert!(d.power < 1u64 << (n - 2));
    }

    #[test]
    fn order_divides_group_exponent(n in 3u32..=40, k in any::<u64>()) {
        let k = (k & ((1u64 << n) - 1)) | 1;
        let o = order_mod(k, n).unwrap();
        prop_assert!(o.is_power_of_two());
        prop_assert_eq!(pow_mod(k, o as u128, n), 1);
        prop_assert!(o <= 1u64 << (n - 2));
    }

    #[test]
    fn no_small_power_is_minus_one(l in 2u32..=40, k in any::<u64>()) {
        let k = (k & ((1u64 << l) - 1)) | 1;
        prop_assert!(!exists_power_neg_one(k, l).unwrap());
    }
}
