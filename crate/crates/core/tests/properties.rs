//! Randomised laws for the relational calculus and the structures above it.

use proptest::prelude::*;

use relcp::catalog::named_groupoids;
use relcp::cpstar::measure::Measurement;
use relcp::cpstar::{is_inverse_respecting, CPMorphism};
use relcp::groupoid::Groupoid;
use relcp::relcat::{Carrier, Relation};

fn small_carrier(n: usize) -> Carrier {
    Carrier::from_atoms((0..n).map(|i| format!("c{i}"))).expect("atoms are distinct")
}

fn relation_strategy(src: usize, tgt: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec((0..src, 0..tgt), 0..=src * tgt).prop_map(move |pairs| {
        Relation::from_index_pairs(small_carrier(src), small_carrier(tgt), &pairs)
    })
}

/// Closes an arbitrary endo-relation on a groupoid carrier into an
/// inverse-respecting one.
fn close_up(g: &Groupoid, rel: &Relation) -> Relation {
    let mut out = rel.clone();
    loop {
        let mut grew = false;
        for (a, b) in out.pairs() {
            for (x, y) in [
                (g.inv(a), g.inv(b)),
                (g.ident_of_dom(a), g.ident_of_dom(b)),
                (g.ident_of_cod(a), g.ident_of_cod(b)),
            ] {
                if !out.contains(x, y) {
                    out.insert(x, y);
                    grew = true;
                }
            }
        }
        if !grew {
            return out;
        }
    }
}

fn small_groupoid() -> impl Strategy<Value = Groupoid> {
    let pool: Vec<Groupoid> =
        named_groupoids().into_iter().filter(|g| g.morphism_count() <= 6).collect();
    (0..pool.len()).prop_map(move |i| pool[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_is_involutive(r in relation_strategy(4, 3)) {
        prop_assert_eq!(r.dagger().dagger(), r);
    }

    #[test]
    fn composition_is_associative(
        r in relation_strategy(3, 4),
        s in relation_strategy(4, 2),
        t in relation_strategy(2, 5),
    ) {
        let left = r.then(&s).unwrap().then(&t).unwrap();
        let right = r.then(&s.then(&t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dagger_reverses_composition(
        r in relation_strategy(3, 4),
        s in relation_strategy(4, 2),
    ) {
        let lhs = r.then(&s).unwrap().dagger();
        let rhs = s.dagger().then(&r.dagger()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dagger_distributes_over_tensor(
        r in relation_strategy(2, 3),
        s in relation_strategy(3, 2),
    ) {
        prop_assert_eq!(r.tensor(&s).dagger(), r.dagger().tensor(&s.dagger()));
    }

    #[test]
    fn union_is_idempotent_and_commutative(
        r in relation_strategy(3, 3),
        s in relation_strategy(3, 3),
    ) {
        prop_assert_eq!(r.union(&r).unwrap(), r.clone());
        prop_assert_eq!(r.union(&s).unwrap(), s.union(&r).unwrap());
    }

    #[test]
    fn closure_composes_inside_the_category(
        g in small_groupoid(),
        seed in proptest::collection::vec((0usize..6, 0usize..6), 0..6),
    ) {
        let n = g.morphism_count();
        let pairs: Vec<(usize, usize)> =
            seed.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let raw = Relation::from_index_pairs(g.carrier().clone(), g.carrier().clone(), &pairs);
        let closed = close_up(&g, &raw);
        prop_assert!(is_inverse_respecting(&g, &g, &closed));
        let m = CPMorphism::new(g.clone(), g.clone(), closed).expect("closure is respected");
        let composed = m.then(&m).expect("carriers line up");
        prop_assert!(is_inverse_respecting(&g, &g, composed.rel()));
    }

    #[test]
    fn measurement_channels_stay_inside_the_category(
        g in small_groupoid(),
        mask in 1u32..63,
    ) {
        let n = g.morphism_count();
        let chosen: Vec<usize> = (0..n).filter(|&m| mask & (1 << m) != 0).collect();
        prop_assume!(!chosen.is_empty());
        // One part per domain object keeps the family well formed.
        let mut parts: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for m in chosen {
            parts.entry(g.dom(m)).or_default().push(m);
        }
        let m = Measurement::new(&g, parts.into_values().collect()).expect("parts are disjoint");
        prop_assert!(is_inverse_respecting(&g, &g, &m.channel()));
        prop_assert!(is_inverse_respecting(&g, &m.outcome_groupoid(), &m.destructive()));
    }
}
