//! The category of groupoids and inverse-respecting relations.
//!
//! A relation `R` between the morphism carriers of two groupoids is
//! *inverse-respecting* when `(g, h) in R` implies both
//! `(g^-1, h^-1) in R` and `(id_dom g, id_dom h) in R`. These are exactly
//! the completely positive maps of the relational calculus: states are
//! inverse-respecting relations out of the trivial groupoid and correspond
//! to subsets closed under inverses and endpoint identities.
//!
//! This module provides the morphism type and its algebra, subsystems (wide
//! subgroupoids together with their inclusion maps), the enumeration of
//! closed and copyable states, and an entanglement witness for states of
//! product groupoids. Submodules cover broadcasting ([`broadcast`]),
//! measurements ([`measure`]) and no-signalling ([`signalling`]).

pub mod broadcast;
pub mod measure;
pub mod signalling;

use thiserror::Error;

use crate::groupoid::{Groupoid, GroupoidError, SubgroupoidRef};
use crate::relcat::{Carrier, Elem, RelError, Relation};

/// Errors raised when building or combining inverse-respecting relations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CpError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    /// The relation breaks closure under inverses or endpoint identities.
    #[error("relation is not inverse-respecting: {0}")]
    NotInverseRespecting(String),
    /// A morphism subset does not qualify as a subsystem.
    #[error("not a subsystem: {0}")]
    NotSubsystem(String),
    /// A measurement family is malformed.
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    /// A commitment protocol breaks one of its structural invariants.
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
}

pub type CpResult<T> = Result<T, CpError>;

/// Reports the first closure violation of a candidate relation, if any.
///
/// Checked conditions, for every related pair `(g, h)`: the inverse pair
/// `(g^-1, h^-1)` and the domain-identity pair `(id_dom g, id_dom h)` must
/// also be related. Closure under codomain identities follows by applying
/// the domain rule to the inverse pair.
pub fn inverse_respecting_violation(
    src: &Groupoid,
    tgt: &Groupoid,
    rel: &Relation,
) -> Option<String> {
    for (g, h) in rel.pairs() {
        let inv = (src.inv(g), tgt.inv(h));
        if !rel.contains(inv.0, inv.1) {
            return Some(format!(
                "({}, {}) is related but the inverse pair ({}, {}) is not",
                src.label(g),
                tgt.label(h),
                src.label(inv.0),
                tgt.label(inv.1)
            ));
        }
        let ids = (src.ident_of_dom(g), tgt.ident_of_dom(h));
        if !rel.contains(ids.0, ids.1) {
            return Some(format!(
                "({}, {}) is related but the identity pair ({}, {}) is not",
                src.label(g),
                tgt.label(h),
                src.label(ids.0),
                tgt.label(ids.1)
            ));
        }
    }
    None
}

/// Whether a relation between two groupoid carriers is inverse-respecting.
pub fn is_inverse_respecting(src: &Groupoid, tgt: &Groupoid, rel: &Relation) -> bool {
    inverse_respecting_violation(src, tgt, rel).is_none()
}

/// An inverse-respecting relation between two groupoids.
///
/// Values of this type are validated on construction and closed under
/// composition, tensor and dagger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPMorphism {
    src: Groupoid,
    tgt: Groupoid,
    rel: Relation,
}

impl CPMorphism {
    pub fn new(src: Groupoid, tgt: Groupoid, rel: Relation) -> CpResult<Self> {
        if rel.src() != src.carrier() || rel.tgt() != tgt.carrier() {
            return Err(CpError::Rel(RelError::CarrierMismatch {
                expected: format!("{} -> {}", src.carrier().describe(), tgt.carrier().describe()),
                found: format!("{} -> {}", rel.src().describe(), rel.tgt().describe()),
            }));
        }
        if let Some(detail) = inverse_respecting_violation(&src, &tgt, &rel) {
            return Err(CpError::NotInverseRespecting(detail));
        }
        Ok(CPMorphism { src, tgt, rel })
    }

    /// The identity relation on a groupoid.
    pub fn identity(g: &Groupoid) -> Self {
        CPMorphism {
            src: g.clone(),
            tgt: g.clone(),
            rel: Relation::identity(g.carrier()),
        }
    }

    /// A state of `g` from a closed morphism subset.
    pub fn state(g: &Groupoid, mors: &[usize]) -> CpResult<Self> {
        CPMorphism::new(Groupoid::unit_groupoid(), g.clone(), state_relation(g, mors))
    }

    pub fn src(&self) -> &Groupoid {
        &self.src
    }

    pub fn tgt(&self) -> &Groupoid {
        &self.tgt
    }

    pub fn rel(&self) -> &Relation {
        &self.rel
    }

    /// Diagrammatic composition; the middle groupoids must agree.
    pub fn then(&self, other: &CPMorphism) -> CpResult<CPMorphism> {
        let rel = self.rel.then(&other.rel)?;
        debug_assert!(is_inverse_respecting(&self.src, &other.tgt, &rel));
        Ok(CPMorphism { src: self.src.clone(), tgt: other.tgt.clone(), rel })
    }

    /// Tensor product on the product groupoids.
    pub fn tensor(&self, other: &CPMorphism) -> CPMorphism {
        CPMorphism {
            src: Groupoid::product(&self.src, &other.src),
            tgt: Groupoid::product(&self.tgt, &other.tgt),
            rel: self.rel.tensor(&other.rel),
        }
    }

    /// The converse relation, again inverse-respecting.
    pub fn dagger(&self) -> CPMorphism {
        CPMorphism { src: self.tgt.clone(), tgt: self.src.clone(), rel: self.rel.dagger() }
    }

    /// Whether the relation is an isometry (`R^t R` is the source identity).
    pub fn is_isometry(&self) -> bool {
        self.rel.then(&self.rel.dagger()).expect("middle carrier matches")
            == Relation::identity(self.src.carrier())
    }
}

/// Whether an inverse-respecting relation preserves the algebra structure.
///
/// Two extra conditions beyond closure: multiplicativity — whenever
/// `(g1, h1)` and `(g2, h2)` are related and both composites `g1 g2` and
/// `h1 h2` exist, the composite pair is related — and unitality — the image
/// of the source identities is exactly the set of target identities.
pub fn is_star_homomorphism(m: &CPMorphism) -> bool {
    let (src, tgt, rel) = (&m.src, &m.tgt, &m.rel);
    let pairs = rel.pairs();
    for &(g1, h1) in &pairs {
        for &(g2, h2) in &pairs {
            if let (Some(g), Some(h)) = (src.compose(g1, g2), tgt.compose(h1, h2)) {
                if !rel.contains(g, h) {
                    return false;
                }
            }
        }
    }
    let mut unit_image: Vec<usize> =
        src.identities().into_iter().flat_map(|e| rel.image_of(e)).collect();
    unit_image.sort_unstable();
    unit_image.dedup();
    unit_image == tgt.identities()
}

// ---------------------------------------------------------------------------
// Subsystems
// ---------------------------------------------------------------------------

/// A subsystem: a wide subgroupoid together with its inclusion map.
#[derive(Debug, Clone)]
pub struct Subsystem {
    sub: SubgroupoidRef,
    groupoid: Groupoid,
}

impl Subsystem {
    /// Wraps a wide subgroupoid; rejects subsets that miss objects.
    pub fn new(sub: SubgroupoidRef) -> CpResult<Self> {
        if !sub.is_wide() {
            return Err(CpError::NotSubsystem(format!(
                "the subgroupoid touches {} of {} objects",
                sub.objects().len(),
                sub.parent().object_count()
            )));
        }
        let groupoid = sub.to_groupoid();
        Ok(Subsystem { sub, groupoid })
    }

    /// Subsystem from parent morphism indices.
    pub fn from_morphisms(parent: &Groupoid, mors: &[usize]) -> CpResult<Self> {
        Subsystem::new(SubgroupoidRef::new(parent, mors.to_vec())?)
    }

    pub fn subgroupoid(&self) -> &SubgroupoidRef {
        &self.sub
    }

    /// The subsystem as a groupoid of its own.
    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn parent(&self) -> &Groupoid {
        self.sub.parent()
    }

    /// The inclusion as an inverse-respecting relation.
    pub fn inclusion(&self) -> CPMorphism {
        let rel = Relation::from_index_pairs(
            self.groupoid.carrier().clone(),
            self.parent().carrier().clone(),
            &self
                .sub
                .morphisms()
                .iter()
                .enumerate()
                .map(|(i, &p)| (i, p))
                .collect::<Vec<_>>(),
        );
        CPMorphism::new(self.groupoid.clone(), self.parent().clone(), rel)
            .expect("inclusions of closed subsets are inverse-respecting")
    }
}

/// Whether a morphism subset is a subsystem: closed and wide.
pub fn is_subsystem(parent: &Groupoid, mors: &[usize]) -> bool {
    SubgroupoidRef::new(parent, mors.to_vec()).map(|s| s.is_wide()).unwrap_or(false)
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Whether a morphism subset is a closed state: closed under inverses and
/// the identities of the endpoints of its members.
pub fn is_closed_state(g: &Groupoid, mors: &[usize]) -> bool {
    let member = |m: usize| mors.contains(&m);
    mors.iter().all(|&m| {
        member(g.inv(m)) && member(g.ident_of_dom(m)) && member(g.ident_of_cod(m))
    })
}

/// The relation `I -> G` picking out a morphism subset.
pub fn state_relation(g: &Groupoid, mors: &[usize]) -> Relation {
    let pairs: Vec<(usize, usize)> = mors.iter().map(|&m| (0, m)).collect();
    Relation::from_index_pairs(Carrier::unit(), g.carrier().clone(), &pairs)
}

/// Enumerates every closed state of a groupoid, sorted lexicographically.
///
/// The enumeration works orbit by orbit: identities are free choices, and a
/// non-identity inverse orbit `{m, m^-1}` may join only when the identities
/// of its endpoints are already in. The count grows quickly with the number
/// of objects, so the function asserts desk-scale inputs.
pub fn closed_states(g: &Groupoid) -> Vec<Vec<usize>> {
    let objects = g.object_count();
    assert!(objects <= 16, "closed-state enumeration is restricted to at most 16 objects");
    let idents = g.identities();
    // Non-identity inverse orbits with the objects they require.
    let mut orbits: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for m in 0..g.morphism_count() {
        if g.is_identity(m) || g.inv(m) < m {
            continue;
        }
        let mut members = vec![m];
        if g.inv(m) != m {
            members.push(g.inv(m));
        }
        let mut required = vec![g.dom(m), g.cod(m)];
        required.dedup();
        orbits.push((members, required));
    }
    let mut out = Vec::new();
    for obj_mask in 0u32..(1 << objects) {
        let has = |x: usize| obj_mask >> x & 1 == 1;
        let allowed: Vec<&(Vec<usize>, Vec<usize>)> =
            orbits.iter().filter(|(_, req)| req.iter().all(|&x| has(x))).collect();
        assert!(
            allowed.len() <= 24,
            "closed-state enumeration is restricted to at most 24 usable orbits"
        );
        let base: Vec<usize> =
            (0..objects).filter(|&x| has(x)).map(|x| idents[x]).collect();
        for orbit_mask in 0u32..(1 << allowed.len()) {
            let mut state = base.clone();
            for (i, (members, _)) in allowed.iter().enumerate() {
                if orbit_mask >> i & 1 == 1 {
                    state.extend_from_slice(members);
                }
            }
            state.sort_unstable();
            out.push(state);
        }
    }
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Copyable states
// ---------------------------------------------------------------------------

/// Enumerates the copyable states of a groupoid.
///
/// A state `s` is copyable when comultiplying it yields `s (x) s` and the
/// counit sends it to the trivial effect. Unfolded to morphism subsets this
/// says: every ordered pair from `s` composes back into `s`, nothing
/// outside `s (x) s` multiplies into `s`, and `s` contains an identity. The
/// result is sorted lexicographically.
pub fn copyable_states(g: &Groupoid) -> Vec<Vec<usize>> {
    closed_states(g)
        .into_iter()
        .filter(|s| is_copyable_subset(g, s))
        .collect()
}

fn is_copyable_subset(g: &Groupoid, s: &[usize]) -> bool {
    let member = |m: usize| s.contains(&m);
    // Counit equation: the state must hit an identity.
    if !s.iter().any(|&m| g.is_identity(m)) {
        return false;
    }
    // Comultiplication equation, both inclusions at once.
    for a in 0..g.morphism_count() {
        for b in 0..g.morphism_count() {
            let in_product = member(a) && member(b);
            let multiplies_in = g.compose(a, b).map(member).unwrap_or(false);
            if in_product != multiplies_in {
                return false;
            }
        }
    }
    true
}

/// Brute-force oracle for [`copyable_states`]: tries *every* subset of
/// morphisms (not only closed ones) and tests the copyability equations as
/// literal relation equalities.
pub fn copyable_states_bruteforce(g: &Groupoid) -> Vec<Vec<usize>> {
    let n = g.morphism_count();
    assert!(n <= 12, "brute-force copyable enumeration is restricted to 12 morphisms");
    let d = crate::frobenius::frobenius_of_groupoid(g);
    let comult = d.comult();
    let counit = d.counit();
    let point = Relation::identity(&Carrier::unit());
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let mors: Vec<usize> = (0..n).filter(|&m| mask >> m & 1 == 1).collect();
        let s = state_relation(g, &mors);
        let copied = s.then(&comult).expect("carriers line up");
        let discarded = s.then(&counit).expect("carriers line up");
        if copied == s.tensor(&s) && discarded == point {
            out.push(mors);
        }
    }
    out.sort();
    out
}

/// The copyable states predicted by structure alone: one per isolated
/// object (an object whose connected component is a single object), given
/// by that object's endomorphisms.
pub fn isolated_object_states(g: &Groupoid) -> Vec<Vec<usize>> {
    let comp = g.object_components();
    let mut out = Vec::new();
    for x in 0..g.object_count() {
        let isolated = (0..g.object_count()).all(|y| y == x || comp[y] != comp[x]);
        if isolated {
            let endos: Vec<usize> =
                (0..g.morphism_count()).filter(|&m| g.dom(m) == x && g.cod(m) == x).collect();
            out.push(endos);
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Entanglement
// ---------------------------------------------------------------------------

/// A pair of morphisms certifying that a state of a product groupoid cannot
/// be a union of product states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntanglementWitness {
    pub left: Elem,
    pub right: Elem,
}

/// Tests a state of the product groupoid `a (x) b` for entanglement.
///
/// Every union of product states is closed under replacing a related pair
/// `(f, g)` with `(id_dom f, id_cod g)`; the first pair (in carrier order)
/// violating this closure is returned and certifies entanglement. `None`
/// means the test is inconclusive (the state may still be entangled in
/// principle, though not for the examples exercised here). Fails if the
/// state is not a closed state of the product groupoid.
pub fn entanglement_witness(
    a: &Groupoid,
    b: &Groupoid,
    state: &Relation,
) -> CpResult<Option<EntanglementWitness>> {
    let product = Groupoid::product(a, b);
    if state.src() != &Carrier::unit() || state.tgt() != product.carrier() {
        return Err(CpError::Rel(RelError::CarrierMismatch {
            expected: format!("I -> {}", product.carrier().describe()),
            found: format!("{} -> {}", state.src().describe(), state.tgt().describe()),
        }));
    }
    let mors = state.image_of(0);
    if let Some(detail) =
        inverse_respecting_violation(&Groupoid::unit_groupoid(), &product, state)
    {
        return Err(CpError::NotInverseRespecting(detail));
    }
    let nb = b.morphism_count();
    for &m in &mors {
        let (f, g) = (m / nb, m % nb);
        let marker = a.ident_of_dom(f) * nb + b.ident_of_cod(g);
        if !state.contains(0, marker) {
            return Ok(Some(EntanglementWitness {
                left: a.label(f).clone(),
                right: b.label(g).clone(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcat::name;

    #[test]
    fn identity_and_composition_are_inverse_respecting() {
        let g = Groupoid::symmetric(3);
        let id = CPMorphism::identity(&g);
        let composed = id.then(&id).unwrap();
        assert_eq!(composed.rel(), id.rel());
    }

    #[test]
    fn missing_inverse_pair_is_rejected() {
        let g = Groupoid::indiscrete(2);
        let f = g.morphism_by_label(&Elem::tuple(["0", "1"])).unwrap();
        let rel = Relation::from_index_pairs(
            g.carrier().clone(),
            g.carrier().clone(),
            &[(f, f)],
        );
        let err = CPMorphism::new(g.clone(), g.clone(), rel).unwrap_err();
        assert!(matches!(err, CpError::NotInverseRespecting(_)));
    }

    #[test]
    fn star_homomorphism_conditions_are_separated() {
        let z2 = Groupoid::cyclic(2);
        let mk = |pairs: &[(usize, usize)]| {
            CPMorphism::new(
                z2.clone(),
                z2.clone(),
                Relation::from_index_pairs(z2.carrier().clone(), z2.carrier().clone(), pairs),
            )
            .unwrap()
        };
        // The identity graph is a star homomorphism.
        assert!(is_star_homomorphism(&CPMorphism::identity(&z2)));
        // Relating the identity to everything breaks unitality.
        assert!(!is_star_homomorphism(&mk(&[(0, 0), (0, 1)])));
        // Adding (1, 0) instead breaks multiplicativity: composing (0, 1)
        // with (1, 0) would need (1, 1).
        assert!(!is_star_homomorphism(&mk(&[(0, 0), (0, 1), (1, 0)])));
        // The full relation also fails unitality, for the same reason as
        // above: the identity reaches a non-identity.
        assert!(!is_star_homomorphism(&mk(&[(0, 0), (0, 1), (1, 0), (1, 1)])));
        // Collapsing everything onto the identity is a star homomorphism.
        assert!(is_star_homomorphism(&mk(&[(0, 0), (1, 0)])));
    }

    #[test]
    fn wide_subgroupoids_are_subsystems_and_inclusions_behave() {
        let z6 = Groupoid::cyclic(6);
        let sub = SubgroupoidRef::from_labels(&z6, &[Elem::atom("0"), Elem::atom("3")]).unwrap();
        let sys = Subsystem::new(sub).unwrap();
        let inc = sys.inclusion();
        assert!(inc.is_isometry());
        assert!(is_star_homomorphism(&inc));

        let union =
            Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(3), Groupoid::cyclic(3)]);
        let half = SubgroupoidRef::from_labels(
            &union,
            &[Elem::atom("0.0"), Elem::atom("0.1"), Elem::atom("0.2")],
        )
        .unwrap();
        assert!(matches!(Subsystem::new(half), Err(CpError::NotSubsystem(_))));
    }

    #[test]
    fn subsystem_exactly_when_inclusion_is_isometric_star_homomorphism() {
        let g = Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(2), Groupoid::cyclic(3)]);
        for sub in crate::groupoid::all_subgroupoids(&g) {
            if sub.morphisms().is_empty() {
                continue;
            }
            let wide = sub.is_wide();
            let sys = Subsystem { groupoid: sub.to_groupoid(), sub: sub.clone() };
            let inc = sys.inclusion();
            assert_eq!(wide, inc.is_isometry() && is_star_homomorphism(&inc));
        }
    }

    #[test]
    fn closed_state_counts_match_hand_counts() {
        // S3: the identity plus any set of inverse orbits, or nothing.
        assert_eq!(closed_states(&Groupoid::symmetric(3)).len(), 17);
        // Two objects: empty, two single identities, both, everything.
        assert_eq!(closed_states(&Groupoid::indiscrete(2)).len(), 5);
        // Z2: empty, {e}, {e,a}.
        assert_eq!(closed_states(&Groupoid::cyclic(2)).len(), 3);
    }

    #[test]
    fn copyable_states_are_isolated_endo_homsets() {
        for g in [
            Groupoid::cyclic(2),
            Groupoid::cyclic(6),
            Groupoid::symmetric(3),
            Groupoid::discrete(3),
            Groupoid::indiscrete(2),
            Groupoid::indiscrete(3),
            Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(3), Groupoid::cyclic(3)]),
            Groupoid::disjoint_union_prefixed("m", &[Groupoid::cyclic(2), Groupoid::indiscrete(2)]),
        ] {
            assert_eq!(copyable_states(&g), isolated_object_states(&g), "on {}", g.name());
        }
    }

    #[test]
    fn brute_force_oracle_agrees_on_small_groupoids() {
        for g in [
            Groupoid::cyclic(2),
            Groupoid::cyclic(3),
            Groupoid::symmetric(3),
            Groupoid::discrete(3),
            Groupoid::indiscrete(2),
            Groupoid::indiscrete(3),
            Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(3), Groupoid::cyclic(3)]),
        ] {
            assert_eq!(copyable_states(&g), copyable_states_bruteforce(&g), "on {}", g.name());
        }
    }

    #[test]
    fn subgroups_are_not_copyable() {
        let z6 = Groupoid::cyclic(6);
        let sub = vec![0, 3];
        assert!(is_closed_state(&z6, &sub));
        assert!(!is_copyable_subset(&z6, &sub));
        // The whole group is the unique copyable state.
        assert_eq!(copyable_states(&z6), vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn cup_state_of_indiscrete_pair_is_entangled() {
        let g = Groupoid::indiscrete(2);
        let state = name(&Relation::identity(g.carrier()));
        let w = entanglement_witness(&g, &g, &state).unwrap().unwrap();
        assert_eq!(w.left, Elem::tuple(["0", "1"]));
        assert_eq!(w.right, Elem::tuple(["0", "1"]));
    }

    #[test]
    fn product_and_classical_states_show_no_witness() {
        let g = Groupoid::indiscrete(2);
        // Full product state: everything related to everything.
        let full: Vec<usize> = (0..g.morphism_count() * g.morphism_count()).collect();
        let product_state = state_relation(&Groupoid::product(&g, &g), &full);
        assert_eq!(entanglement_witness(&g, &g, &product_state).unwrap(), None);

        // Classical correlation on a discrete pair.
        let d = Groupoid::discrete(2);
        let corr = name(&Relation::identity(d.carrier()));
        assert_eq!(entanglement_witness(&d, &d, &corr).unwrap(), None);
    }

    #[test]
    fn unclosed_states_are_rejected_by_the_witness() {
        let g = Groupoid::indiscrete(2);
        let product = Groupoid::product(&g, &g);
        let f = g.morphism_by_label(&Elem::tuple(["0", "1"])).unwrap();
        let lone = state_relation(&product, &[f * g.morphism_count() + f]);
        assert!(matches!(
            entanglement_witness(&g, &g, &lone),
            Err(CpError::NotInverseRespecting(_))
        ));
    }
}
