//! Broadcastability of groupoids.
//!
//! A broadcasting map sends a groupoid into its tensor square so that
//! discarding either output leg gives back the input exactly, and — the
//! essential constraint — the map itself lives in the category: it must be
//! inverse-respecting as a relation into the product groupoid. Groupoids
//! admit such a map precisely when every morphism is an endomorphism; the
//! decision procedure both constructs the canonical map on the positive
//! side and proves nonexistence by an exhaustive constraint search on the
//! negative side.

use crate::cpstar::is_inverse_respecting;
use crate::groupoid::Groupoid;
use crate::relcat::{Carrier, Relation};

/// The outcome of deciding broadcastability.
#[derive(Debug, Clone)]
pub struct BroadcastDecision {
    pub broadcastable: bool,
    /// A verified broadcasting map, when one exists.
    pub map: Option<Relation>,
    /// A forced-pair derivation of impossibility, when none exists.
    pub refutation: Option<String>,
    /// Whether nonexistence was confirmed by the exhaustive search (as
    /// opposed to the structural argument alone).
    pub exhaustive: bool,
    /// Candidate seeds examined by the search.
    pub nodes_examined: u64,
}

/// The effect discarding a groupoid state: relates identities to the
/// monoidal unit.
pub fn counit_relation(g: &Groupoid) -> Relation {
    let mut r = Relation::empty(g.carrier().clone(), Carrier::unit());
    for e in g.identities() {
        r.insert(e, 0);
    }
    r
}

/// Both marginals of a candidate map `G -> G (x) G`: discarding the first
/// leg and discarding the second.
pub fn marginals(g: &Groupoid, b: &Relation) -> (Relation, Relation) {
    let id = Relation::identity(g.carrier());
    let counit = counit_relation(g);
    let first = b.then(&counit.tensor(&id)).expect("marginal carriers line up");
    let second = b.then(&id.tensor(&counit)).expect("marginal carriers line up");
    (first, second)
}

/// Whether `b` is a broadcasting map for `g`: both marginals are the
/// identity and the relation respects inverses into the product groupoid.
pub fn is_broadcasting_map(g: &Groupoid, b: &Relation) -> bool {
    let product = Groupoid::product(g, g);
    if b.src() != g.carrier() || b.tgt() != product.carrier() {
        return false;
    }
    let id = Relation::identity(g.carrier());
    let (m1, m2) = marginals(g, b);
    m1 == id && m2 == id && is_inverse_respecting(g, &product, b)
}

/// The canonical candidate map: each morphism is paired with its domain
/// identity on either side.
///
/// Its marginals are the identity for *every* groupoid; what fails on
/// non-endomorphisms is closure under inverses, which is exactly where
/// broadcastability dies.
pub fn canonical_broadcast_map(g: &Groupoid) -> Relation {
    let n = g.morphism_count();
    let product_carrier = g.carrier().tensor(g.carrier());
    let mut b = Relation::empty(g.carrier().clone(), product_carrier);
    for f in 0..n {
        let e = g.ident_of_dom(f);
        b.insert(f, e * n + f);
        b.insert(f, f * n + e);
    }
    b
}

/// Decides whether a groupoid admits a broadcasting map.
///
/// Positive answers come with the canonical map, verified. Negative answers
/// always carry a forced-pair refutation; when the groupoid has at most
/// `exhaustive_limit` morphisms the search additionally confirms that no
/// inverse-respecting assignment satisfies both marginal constraints.
pub fn decide_broadcastable(g: &Groupoid, exhaustive_limit: usize) -> BroadcastDecision {
    if g.is_totally_disconnected() {
        let map = canonical_broadcast_map(g);
        assert!(is_broadcasting_map(g, &map), "canonical map must broadcast endomorphism-only groupoids");
        return BroadcastDecision {
            broadcastable: true,
            map: Some(map),
            refutation: None,
            exhaustive: true,
            nodes_examined: 0,
        };
    }

    let refutation = Some(refutation_chain(g));
    if g.morphism_count() <= exhaustive_limit {
        let (found, nodes) = search_broadcasting_map(g);
        match found {
            // Unreachable for connected non-endomorphisms, but if the search
            // ever produced a verified map we would have to believe it.
            Some(map) if is_broadcasting_map(g, &map) => BroadcastDecision {
                broadcastable: true,
                map: Some(map),
                refutation: None,
                exhaustive: true,
                nodes_examined: nodes,
            },
            _ => BroadcastDecision {
                broadcastable: false,
                map: None,
                refutation,
                exhaustive: true,
                nodes_examined: nodes,
            },
        }
    } else {
        BroadcastDecision {
            broadcastable: false,
            map: None,
            refutation,
            exhaustive: false,
            nodes_examined: 0,
        }
    }
}

/// Spells out, for a concrete non-endomorphism, why every candidate map is
/// contradictory.
fn refutation_chain(g: &Groupoid) -> String {
    let f = (0..g.morphism_count())
        .find(|&m| g.dom(m) != g.cod(m))
        .expect("a non-broadcastable groupoid has a non-endomorphism");
    let (x, y) = (g.dom(f), g.cod(f));
    let (ex, ey) = (g.identity_of(x), g.identity_of(y));
    format!(
        "take {f}: {x} -> {y}; the first marginal forces ({f}, ({ex}, {f})) into any \
         broadcasting map, inverse closure then forces ({fi}, ({ex}, {fi})), and identity \
         closure forces ({ey}, ({ex}, {ey})); the second marginal of {ey} would then \
         contain {ex} != {ey}",
        f = g.label(f),
        x = g.objects()[x],
        y = g.objects()[y],
        ex = g.label(ex),
        ey = g.label(ey),
        fi = g.label(g.inv(f)),
    )
}

/// Exhaustive existence search over inverse-respecting candidates.
///
/// Any broadcasting map must contain, for every morphism `f`, a coverage
/// seed `(f, (x, f))` with `x` an identity and one `(f, (f, y))` with `y`
/// an identity, must avoid every cell whose identity-legged pair breaks a
/// marginal, and must be closed under the two inverse-respecting rules.
/// The search branches over coverage seeds, saturates the closure of each
/// choice, and rejects branches that hit a forbidden cell; the union of the
/// surviving closures is returned (and later re-verified).
fn search_broadcasting_map(g: &Groupoid) -> (Option<Relation>, u64) {
    let n = g.morphism_count();
    let is_id = |m: usize| g.is_identity(m);
    // Static forbidden cells from the two marginal upper bounds.
    let forbidden = |f: usize, x: usize, y: usize| -> bool {
        (is_id(x) && y != f) || (is_id(y) && x != f)
    };
    let closure_of = |f: usize, x: usize, y: usize| -> Vec<(usize, usize, usize)> {
        let mut cells = vec![(f, x, y)];
        let mut i = 0;
        while i < cells.len() {
            let (cf, cx, cy) = cells[i];
            i += 1;
            for next in [
                (g.inv(cf), g.inv(cx), g.inv(cy)),
                (g.ident_of_dom(cf), g.ident_of_dom(cx), g.ident_of_dom(cy)),
            ] {
                if !cells.contains(&next) {
                    cells.push(next);
                }
            }
        }
        cells
    };

    let mut nodes = 0u64;
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for f in 0..n {
        let mut satisfy = |seed_of: &dyn Fn(usize) -> (usize, usize)| -> bool {
            for e in g.identities() {
                nodes += 1;
                let (x, y) = seed_of(e);
                let cells = closure_of(f, x, y);
                if cells.iter().all(|&(cf, cx, cy)| !forbidden(cf, cx, cy)) {
                    chosen.extend(cells.iter().map(|&(cf, cx, cy)| (cf, cx * n + cy)));
                    return true;
                }
            }
            false
        };
        // First marginal coverage: (f, (x, f)); second: (f, (f, y)).
        if !satisfy(&|e| (e, f)) || !satisfy(&|e| (f, e)) {
            return (None, nodes);
        }
    }
    let rel = Relation::from_index_pairs(
        g.carrier().clone(),
        g.carrier().tensor(g.carrier()),
        &chosen,
    );
    (Some(rel), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_map_broadcasts_unions_of_groups() {
        for g in [
            Groupoid::cyclic(2),
            Groupoid::symmetric(3),
            Groupoid::discrete(3),
            Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(3), Groupoid::cyclic(3)]),
        ] {
            let map = canonical_broadcast_map(&g);
            assert!(is_broadcasting_map(&g, &map), "canonical map fails on {}", g.name());
        }
    }

    #[test]
    fn marginals_alone_do_not_suffice() {
        // On a connected groupoid the canonical map still has identity
        // marginals; it is the inverse-respecting condition that fails.
        let g = Groupoid::indiscrete(2);
        let map = canonical_broadcast_map(&g);
        let id = Relation::identity(g.carrier());
        let (m1, m2) = marginals(&g, &map);
        assert_eq!(m1, id);
        assert_eq!(m2, id);
        assert!(!is_broadcasting_map(&g, &map));
    }

    #[test]
    fn dichotomy_follows_endomorphism_structure() {
        for (g, expect) in [
            (Groupoid::cyclic(4), true),
            (Groupoid::symmetric(3), true),
            (Groupoid::discrete(2), true),
            (Groupoid::indiscrete(2), false),
            (Groupoid::indiscrete(3), false),
            (
                Groupoid::disjoint_union_prefixed(
                    "m",
                    &[Groupoid::cyclic(2), Groupoid::indiscrete(2)],
                ),
                false,
            ),
        ] {
            let d = decide_broadcastable(&g, 40);
            assert_eq!(d.broadcastable, expect, "on {}", g.name());
            assert!(d.exhaustive);
            if expect {
                assert!(d.map.is_some());
            } else {
                assert!(d.refutation.is_some());
                assert!(d.nodes_examined > 0);
            }
        }
    }

    #[test]
    fn oversized_refusals_still_carry_the_argument() {
        let g = Groupoid::indiscrete(3);
        let d = decide_broadcastable(&g, 2);
        assert!(!d.broadcastable);
        assert!(!d.exhaustive);
        let text = d.refutation.unwrap();
        assert!(text.contains("marginal"));
    }
}
