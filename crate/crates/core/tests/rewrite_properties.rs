use proptest::prelude::*;

use vsa_core::fockspace::{AlgebraBackend, Heisenberg, Partition, Vector};
use vsa_core::rational::int;
use vsa_core::rewrite::{evaluate, is_normal, word_weight, Canonicalizer, Mode, Straightener};
use vsa_core::straightening::{straighten_pair, term_degree};
use vsa_core::subspaces::quotient_reps;

fn partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=max_weight, 1..=2).prop_map(|v| Partition::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn straightening_preserves_value(
        n_diff in 1usize..=3,
        modes in prop::collection::vec((partition(3), -6i64..=1), 1..=3),
    ) {
        let h = Heisenberg::new();
        let word: Vec<Mode<Partition>> = modes.into_iter().map(|(l, i)| Mode::new(l, i)).collect();
        let e = Canonicalizer::new(&h).expression([(word, int(1))]);
        let weight = e.words().map(|w| word_weight(&h, w)).max().unwrap_or(0);
        prop_assume!(weight <= 9);
        let gens = quotient_reps(&h, n_diff, weight).unwrap();
        let mut s = Straightener::new(&h, &gens);
        let (out, trace) = s.straighten(&e).unwrap();
        prop_assert_eq!(evaluate(&h, &out), evaluate(&h, &e));
        prop_assert!(out.words().all(|w| is_normal(w, &gens, n_diff)));
        trace.check(&h, n_diff).unwrap();
    }

    #[test]
    fn pair_terms_have_smaller_indices_and_fixed_degree(
        u in partition(2),
        v in partition(2),
        m2 in -5i64..=-1,
        gap in 0i64..=3,
    ) {
        let h = Heisenberg::new();
        let m1 = m2 - gap;
        let (uv, vv) = (Vector::basis(u.clone()), Vector::basis(v.clone()));
        let op = straighten_pair(&h, &uv, m1, &vv, m2, 4, 4).unwrap();
        let degree = u.weight() + v.weight() - m1 - m2 - 2;
        for t in op.terms() {
            prop_assert_eq!(term_degree(&h, &t.kind), Some(degree));
        }
        for (_, li, ri) in op.product_terms() {
            prop_assert!(li.min(ri) < m1);
        }
        for w in 0..=4 {
            for b in h.basis(w) {
                let tail = Vector::basis(b);
                let direct = h.mode_action(&uv, m1, &h.mode_action(&vv, m2, &tail));
                prop_assert_eq!(op.apply(&h, &tail).unwrap(), direct);
            }
        }
    }
}
