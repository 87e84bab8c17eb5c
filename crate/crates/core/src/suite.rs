//! The consolidated verification suite.
//!
//! Eleven named criteria cover the whole development: each one runs a
//! self-contained batch of exact checks over the catalogue and reports pass
//! or fail with a one-line account of what was examined. Every criterion
//! carries a wall-clock bound that the acceptance tests enforce; the bounds
//! are part of the contract, so a slow decision procedure is a failure even
//! when its answers are right.

use std::time::{Duration, Instant};

use crate::bitcommit::{builtin_protocol, AdversaryClass, BindingVerdict};
use crate::catalog::{named_groupoids, subsystem_triples};
use crate::cpstar::broadcast::{decide_broadcastable, is_broadcasting_map};
use crate::cpstar::measure::{all_families, Measurement};
use crate::cpstar::signalling::{
    kinematic_independence, kinematic_independence_structural, no_signalling,
    no_signalling_exhaustive, FamilyScope,
};
use crate::cpstar::{
    closed_states, copyable_states, copyable_states_bruteforce, entanglement_witness,
    is_closed_state, isolated_object_states,
};
use crate::fhilb::{
    diagonal_structure, matrix_algebra_structure, raw_matrix_algebra,
    verify_commutative_broadcast, FhilbError,
};
use crate::frobenius::{
    frobenius_of_groupoid, groupoid_from_frobenius, is_commutative,
    is_special_symmetric_frobenius, FrobeniusData,
};
use crate::groupoid::Groupoid;
use crate::relcat::{name, Elem, Relation};

/// One named criterion with its wall-clock bound.
pub struct Criterion {
    pub name: &'static str,
    pub bound: Duration,
    run: fn() -> (bool, String),
}

/// The outcome of running one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub bound: Duration,
}

impl CriterionResult {
    /// Whether the criterion passed inside its time bound.
    pub fn within_bound(&self) -> bool {
        self.elapsed <= self.bound
    }
}

/// Every criterion, in reporting order.
pub fn criteria() -> Vec<Criterion> {
    fn c(name: &'static str, secs: u64, run: fn() -> (bool, String)) -> Criterion {
        Criterion { name, bound: Duration::from_secs(secs), run }
    }
    vec![
        c("frobenius-correspondence", 1, frobenius_correspondence),
        c("broadcast-dichotomy", 10, broadcast_dichotomy),
        c("classicality-hierarchy", 1, classicality_hierarchy),
        c("copyable-states", 5, copyable_states_criterion),
        c("bit-commitment", 1, bit_commitment),
        c("nonlocality-witness", 1, nonlocality_witness),
        c("measurement-semantics", 5, measurement_semantics),
        c("ns-ki-equivalence", 30, ns_ki_equivalence),
        c("non-causal-ns", 30, non_causal_ns),
        c("fhilb-structures", 5, fhilb_structures),
        c("ns-search-completeness", 60, ns_search_completeness),
    ]
}

/// Runs every criterion and records timings.
pub fn run_all() -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .map(|c| {
            let start = Instant::now();
            let (passed, detail) = (c.run)();
            CriterionResult {
                name: c.name,
                passed,
                detail,
                elapsed: start.elapsed(),
                bound: c.bound,
            }
        })
        .collect()
}

/// Runs a single criterion by name.
pub fn run_criterion(criterion: &str) -> Option<CriterionResult> {
    criteria().into_iter().find(|c| c.name == criterion).map(|c| {
        let start = Instant::now();
        let (passed, detail) = (c.run)();
        CriterionResult { name: c.name, passed, detail, elapsed: start.elapsed(), bound: c.bound }
    })
}

// ---------------------------------------------------------------------------
// Criterion bodies
// ---------------------------------------------------------------------------

fn frobenius_correspondence() -> (bool, String) {
    let groupoids = named_groupoids();
    for g in &groupoids {
        let d = frobenius_of_groupoid(g);
        if !is_special_symmetric_frobenius(&d) {
            return (false, format!("{} does not induce a special symmetric structure", g.name()));
        }
        match groupoid_from_frobenius(&d) {
            Ok(back) if back.same_structure(g) => {}
            Ok(_) => return (false, format!("{} does not round-trip", g.name())),
            Err(e) => return (false, format!("{} fails extraction: {e}", g.name())),
        }
        if is_commutative(&d) != g.is_disjoint_union_of_abelian_groups() {
            return (
                false,
                format!("{}: commutativity disagrees with abelian-union shape", g.name()),
            );
        }
    }
    // A damaged multiplication must be rejected, not silently repaired.
    let z2 = Groupoid::cyclic(2);
    let good = frobenius_of_groupoid(&z2);
    let mut bad_mult = good.mult().clone();
    bad_mult.insert(1 * 2 + 1, 1);
    let damaged = FrobeniusData::new(z2.carrier().clone(), bad_mult, good.unit().clone())
        .expect("carriers still line up");
    if groupoid_from_frobenius(&damaged).is_ok() {
        return (false, "a damaged multiplication was accepted".into());
    }
    (
        true,
        format!(
            "{} groupoids round-trip; commutativity tracks abelian unions; damaged structures rejected",
            groupoids.len()
        ),
    )
}

fn broadcast_dichotomy() -> (bool, String) {
    let groupoids = named_groupoids();
    let (mut positives, mut negatives) = (0usize, 0usize);
    for g in &groupoids {
        let decision = decide_broadcastable(g, 16);
        if decision.broadcastable != g.is_totally_disconnected() {
            return (
                false,
                format!("{}: broadcastability disagrees with the endomorphism test", g.name()),
            );
        }
        if !decision.exhaustive {
            return (false, format!("{}: decision was not exhaustive", g.name()));
        }
        if decision.broadcastable {
            match &decision.map {
                Some(map) if is_broadcasting_map(g, map) => positives += 1,
                _ => return (false, format!("{}: missing or invalid broadcasting map", g.name())),
            }
        } else {
            if decision.refutation.is_none() {
                return (false, format!("{}: missing refutation", g.name()));
            }
            if g.morphism_count() <= 16 && decision.nodes_examined == 0 {
                return (false, format!("{}: no search was performed", g.name()));
            }
            negatives += 1;
        }
    }
    (true, format!("{positives} broadcastable with verified maps, {negatives} refuted by search"))
}

fn classicality_hierarchy() -> (bool, String) {
    for g in named_groupoids() {
        let discrete = g.is_discrete();
        let abelian_union = g.is_disjoint_union_of_abelian_groups();
        let broadcastable = decide_broadcastable(&g, 16).broadcastable;
        if discrete && !abelian_union {
            return (false, format!("{} is discrete but not an abelian union", g.name()));
        }
        if abelian_union && !broadcastable {
            return (false, format!("{} is an abelian union but not broadcastable", g.name()));
        }
    }
    // Both inclusions are strict, and the outer level is not everything.
    let z2 = Groupoid::cyclic(2);
    if z2.is_discrete() || !z2.is_disjoint_union_of_abelian_groups() {
        return (false, "Z2 should separate discrete from abelian unions".into());
    }
    let s3 = Groupoid::symmetric(3);
    if s3.is_disjoint_union_of_abelian_groups() || !decide_broadcastable(&s3, 16).broadcastable {
        return (false, "S3 should separate abelian unions from broadcastable".into());
    }
    let ind = Groupoid::indiscrete(2);
    if decide_broadcastable(&ind, 16).broadcastable {
        return (false, "a connected two-object groupoid must not broadcast".into());
    }
    (true, "discrete < abelian unions < broadcastable, with strictness witnessed".into())
}

fn copyable_states_criterion() -> (bool, String) {
    let mut brute_checked = 0usize;
    for g in named_groupoids() {
        if copyable_states(&g) != isolated_object_states(&g) {
            return (
                false,
                format!("{}: copyable states differ from isolated endo-homsets", g.name()),
            );
        }
        if g.morphism_count() <= 12 {
            if copyable_states(&g) != copyable_states_bruteforce(&g) {
                return (false, format!("{}: brute-force oracle disagrees", g.name()));
            }
            brute_checked += 1;
        }
    }
    for (name, count) in [("Z2", 3usize), ("indiscrete2", 5), ("S3", 17)] {
        let g = crate::catalog::groupoid_by_name(name).expect("catalogue name");
        let found = closed_states(&g).len();
        if found != count {
            return (false, format!("{name}: expected {count} closed states, found {found}"));
        }
    }
    let z6 = Groupoid::cyclic(6);
    let sub = vec![0, 3];
    if !is_closed_state(&z6, &sub) || copyable_states(&z6).contains(&sub) {
        return (false, "the order-two subgroup of Z6 must be closed but not copyable".into());
    }
    (true, format!("copyables match isolated homsets everywhere; {brute_checked} brute-force agreements; pinned closed-state counts hold"))
}

fn bit_commitment() -> (bool, String) {
    let p = builtin_protocol();
    if !p.check_sound().sound {
        return (false, "the built-in protocol is not sound".into());
    }
    let concealing = p.check_concealing();
    let expected_marginal = vec![Elem::tuple(["x", "x"]), Elem::tuple(["y", "y"])];
    if !concealing.concealing || concealing.h_marginal != expected_marginal {
        return (false, "the built-in protocol does not conceal as pinned".into());
    }
    let sizes = |f: Vec<Vec<usize>>| f.into_iter().map(|v| v.len()).collect::<Vec<_>>();
    if sizes(p.fibers(p.heads())) != vec![1, 2, 2, 4]
        || sizes(p.fibers(p.tails())) != vec![4, 2, 2, 1]
    {
        return (false, "fiber profiles differ from the pinned values".into());
    }
    for class in [
        AdversaryClass::FunctionGraphs,
        AdversaryClass::BijectionGraphs,
        AdversaryClass::Isometries,
    ] {
        if !matches!(p.check_binding(class, 1_000_000).verdict, BindingVerdict::Binding { .. }) {
            return (false, format!("binding fails against {}", class.name()));
        }
    }
    let unrestricted = p.check_binding(AdversaryClass::AllCpMorphisms, 5_000_000);
    let note = match unrestricted.verdict {
        BindingVerdict::Binding { .. } => {
            return (false, "unrestricted channels must admit a cheat".into())
        }
        BindingVerdict::CheatFound { ref cheat, .. } => {
            format!("unrestricted cheat of {} pairs found", cheat.size())
        }
        BindingVerdict::Inconclusive { .. } => "unrestricted search hit its budget".into(),
    };
    (true, format!("sound, concealing, bound for three restricted classes; {note}"))
}

fn nonlocality_witness() -> (bool, String) {
    let g = Groupoid::indiscrete(2);
    let cup = name(&Relation::identity(g.carrier()));
    match entanglement_witness(&g, &g, &cup) {
        Ok(Some(w)) if w.left == Elem::tuple(["0", "1"]) && w.right == Elem::tuple(["0", "1"]) => {}
        other => return (false, format!("cup state witness mismatch: {other:?}")),
    }
    // A full product state carries no witness.
    let product = Groupoid::product(&g, &g);
    let everything: Vec<(usize, usize)> =
        (0..product.morphism_count()).map(|m| (0, m)).collect();
    let full = Relation::from_index_pairs(
        crate::relcat::Carrier::unit(),
        product.carrier().clone(),
        &everything,
    );
    if entanglement_witness(&g, &g, &full) != Ok(None) {
        return (false, "the full product state should show no witness".into());
    }
    // Classical correlation over a discrete pair is witness-free too.
    let d = Groupoid::discrete(2);
    let corr = name(&Relation::identity(d.carrier()));
    if entanglement_witness(&d, &d, &corr) != Ok(None) {
        return (false, "classical correlation should show no witness".into());
    }
    (true, "cup state certified entangled; product and classical states carry no witness".into())
}

fn measurement_semantics() -> (bool, String) {
    // The conjugation channel and the pairing formulation agree everywhere.
    let mut families_checked = 0usize;
    for g in [Groupoid::cyclic(3), Groupoid::discrete(2), Groupoid::indiscrete(2)] {
        let mors: Vec<usize> = (0..g.morphism_count()).collect();
        for parts in all_families(&mors) {
            let m = Measurement::new(&g, parts).expect("families are well formed");
            if m.channel() != m.channel_via_pairing() {
                return (false, format!("channel formulations disagree on {}", g.name()));
            }
            if m.is_causal() != m.is_causal_structural() {
                return (false, format!("causality formulations disagree on {}", g.name()));
            }
            families_checked += 1;
        }
    }
    // Family counts on three and four morphisms are pinned.
    if all_families(&[0, 1, 2]).len() != 14 || all_families(&[0, 1, 2, 3]).len() != 51 {
        return (false, "family counts differ from the pinned values".into());
    }
    // Conjugating by a reflection swaps the three-cycles.
    let s3 = Groupoid::symmetric(3);
    let label = |l: &str| s3.morphism_by_label(&Elem::atom(l)).unwrap();
    let m = Measurement::new(&s3, vec![vec![label("e"), label("(12)")]]).unwrap();
    let channel = m.channel();
    if !channel.contains(label("(123)"), label("(132)")) {
        return (false, "conjugation by (12) should carry (123) to (132)".into());
    }
    (true, format!("{families_checked} families agree on channels and causality; counts pinned"))
}

fn ns_ki_equivalence() -> (bool, String) {
    let mut holds = 0usize;
    let mut fails = 0usize;
    for t in subsystem_triples() {
        let (a, b) = match (t.left(), t.right()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return (false, format!("{}: subsystems do not build", t.name)),
        };
        let ki = kinematic_independence(&a, &b);
        if ki != kinematic_independence_structural(&a, &b) {
            return (false, format!("{}: independence formulations disagree", t.name));
        }
        let ns = no_signalling(&a, &b, FamilyScope::Causal);
        if ki != ns.holds {
            return (
                false,
                format!(
                    "{}: independence is {ki} but causal no-signalling is {}",
                    t.name, ns.holds
                ),
            );
        }
        if ns.holds {
            holds += 1;
        } else {
            fails += 1;
        }
    }
    (true, format!("independence matches causal no-signalling on all triples ({holds} hold, {fails} fail together)"))
}

fn non_causal_ns() -> (bool, String) {
    for t in subsystem_triples() {
        let (a, b) = (t.left().expect("builds"), t.right().expect("builds"));
        let expected = t.parent().is_group()
            && a.subgroupoid().is_trivial()
            && b.subgroupoid().is_trivial();
        let ns = no_signalling(&a, &b, FamilyScope::All);
        if ns.holds != expected {
            return (
                false,
                format!(
                    "{}: no-signalling over all families is {}, expected {expected}",
                    t.name, ns.holds
                ),
            );
        }
    }
    // The separating example: independence holds on the discrete pair, yet
    // an unrestricted family signals by losing an outcome.
    let t = subsystem_triples().into_iter().find(|t| t.name == "discrete2-full").unwrap();
    let (a, b) = (t.left().unwrap(), t.right().unwrap());
    if !kinematic_independence(&a, &b) {
        return (false, "the discrete pair should be kinematically independent".into());
    }
    let ns = no_signalling(&a, &b, FamilyScope::All);
    if ns.holds || ns.witness.is_none() {
        return (false, "the discrete pair should fail with an explicit witness".into());
    }
    (true, "unrestricted no-signalling holds exactly for the trivial group case; discrete pair separates it from independence".into())
}

fn fhilb_structures() -> (bool, String) {
    for n in 1..=4 {
        let s = diagonal_structure(n);
        if !s.violated_axioms(1e-12).is_empty() {
            return (false, format!("diagonal structure {n} fails an axiom"));
        }
        if let Err(e) = verify_commutative_broadcast(&s, 20, 1e-9, 7) {
            return (false, format!("diagonal structure {n} fails broadcast: {e}"));
        }
    }
    for n in 2..=3 {
        let s = matrix_algebra_structure(n);
        if !s.violated_axioms(1e-9).is_empty() {
            return (false, format!("matrix algebra {n} fails an axiom"));
        }
        let expected = 1.0 / (n as f64).sqrt();
        if (s.commutativity_residual() - expected).abs() > 1e-12 {
            return (false, format!("matrix algebra {n} has an unexpected commutativity residual"));
        }
        match verify_commutative_broadcast(&s, 20, 0.1, 7) {
            Err(FhilbError::NotCommutative { residual }) if residual > 0.1 => {}
            other => {
                return (false, format!("matrix algebra {n} was not refused: {other:?}"))
            }
        }
        if (raw_matrix_algebra(n).speciality_residual() - (n as f64 - 1.0)).abs() > 1e-12 {
            return (false, format!("unnormalised algebra {n} misses the pinned residual"));
        }
    }
    let permuted = diagonal_structure(3).permuted(&[2, 0, 1]);
    if verify_commutative_broadcast(&permuted, 10, 1e-9, 11).is_err() {
        return (false, "a permuted diagonal structure should still broadcast".into());
    }
    (true, "diagonal structures broadcast; matrix algebras are refused with pinned residuals".into())
}

fn ns_search_completeness() -> (bool, String) {
    let mut families = 0u64;
    for t in subsystem_triples() {
        if t.parent().morphism_count() > 8 {
            continue;
        }
        let (a, b) = (t.left().expect("builds"), t.right().expect("builds"));
        for scope in [FamilyScope::Causal, FamilyScope::All] {
            let reduced = no_signalling(&a, &b, scope);
            let exhaustive = no_signalling_exhaustive(&a, &b, scope);
            if reduced.holds != exhaustive.holds {
                return (
                    false,
                    format!("{}: reduced and exhaustive checks disagree ({scope:?})", t.name),
                );
            }
            families += exhaustive.families_checked;
        }
    }
    (true, format!("reduced families decide exactly like {families} exhaustively enumerated ones"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_have_unique_names_and_bounds() {
        let cs = criteria();
        assert_eq!(cs.len(), 11);
        let names: std::collections::BTreeSet<&str> = cs.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), cs.len());
        assert!(cs.iter().all(|c| c.bound >= Duration::from_secs(1)));
    }

    #[test]
    fn single_criterion_lookup_works() {
        let r = run_criterion("nonlocality-witness").expect("criterion exists");
        assert!(r.passed, "{}", r.detail);
        assert!(run_criterion("nonesuch").is_none());
    }
}
