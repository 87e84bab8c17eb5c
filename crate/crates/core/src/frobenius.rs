//! Frobenius structures on relational carriers and their correspondence
//! with groupoids.
//!
//! A structure is a multiplication `A (x) A -> A` together with a unit
//! `I -> A`; comultiplication and counit are their daggers. The axioms
//! checked here are associativity, the two unit laws, the Frobenius law,
//! symmetry and speciality. Groupoids induce such structures by letting the
//! multiplication relate `(g, h)` to the composite "`h` first, then `g`",
//! and every structure satisfying all six axioms arises this way: the
//! extraction direction recovers objects from the unit's image and endpoint
//! data from how identities act.

use std::fmt;

use crate::groupoid::{Groupoid, GroupoidError, GroupoidResult};
use crate::relcat::{swap, Carrier, RelError, RelResult, Relation};

/// The equations a multiplication/unit pair can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrobeniusAxiom {
    Associativity,
    LeftUnit,
    RightUnit,
    FrobeniusLaw,
    Symmetry,
    Speciality,
}

impl fmt::Display for FrobeniusAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FrobeniusAxiom::Associativity => "associativity",
            FrobeniusAxiom::LeftUnit => "left unit law",
            FrobeniusAxiom::RightUnit => "right unit law",
            FrobeniusAxiom::FrobeniusLaw => "Frobenius law",
            FrobeniusAxiom::Symmetry => "symmetry",
            FrobeniusAxiom::Speciality => "speciality",
        };
        f.write_str(name)
    }
}

/// A candidate Frobenius structure: a carrier with multiplication and unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusData {
    carrier: Carrier,
    mult: Relation,
    unit: Relation,
}

fn seq(a: &Relation, b: &Relation) -> Relation {
    a.then(b).expect("carriers match by construction")
}

impl FrobeniusData {
    /// Wraps a multiplication `A (x) A -> A` and unit `I -> A`, checking
    /// only the endpoint carriers (the axioms are checked separately).
    pub fn new(carrier: Carrier, mult: Relation, unit: Relation) -> RelResult<Self> {
        let square = carrier.tensor(&carrier);
        if mult.src() != &square || mult.tgt() != &carrier {
            return Err(RelError::CarrierMismatch {
                expected: format!("{} -> {}", square.describe(), carrier.describe()),
                found: format!("{} -> {}", mult.src().describe(), mult.tgt().describe()),
            });
        }
        if unit.src() != &Carrier::unit() || unit.tgt() != &carrier {
            return Err(RelError::CarrierMismatch {
                expected: format!("I -> {}", carrier.describe()),
                found: format!("{} -> {}", unit.src().describe(), unit.tgt().describe()),
            });
        }
        Ok(FrobeniusData { carrier, mult, unit })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn mult(&self) -> &Relation {
        &self.mult
    }

    pub fn unit(&self) -> &Relation {
        &self.unit
    }

    /// Comultiplication: the dagger of the multiplication.
    pub fn comult(&self) -> Relation {
        self.mult.dagger()
    }

    /// Counit: the dagger of the unit.
    pub fn counit(&self) -> Relation {
        self.unit.dagger()
    }
}

/// The Frobenius structure induced by a groupoid on its morphism carrier.
///
/// The multiplication relates the pair element `(g, h)` to the composite
/// "`h` first, then `g`" whenever the composite exists; the unit relates the
/// monoidal unit to every identity morphism.
pub fn frobenius_of_groupoid(g: &Groupoid) -> FrobeniusData {
    let carrier = g.carrier().clone();
    let square = carrier.tensor(&carrier);
    let n = g.morphism_count();
    let mut mult = Relation::empty(square, carrier.clone());
    for a in 0..n {
        for b in 0..n {
            if let Some(k) = g.compose(a, b) {
                mult.insert(a * n + b, k);
            }
        }
    }
    let mut unit = Relation::empty(Carrier::unit(), carrier.clone());
    for e in g.identities() {
        unit.insert(0, e);
    }
    FrobeniusData { carrier, mult, unit }
}

/// Checks all six axioms and returns the violated ones, in a fixed order.
pub fn violated_axioms(d: &FrobeniusData) -> Vec<FrobeniusAxiom> {
    let a = &d.carrier;
    let id_a = Relation::identity(a);
    let m = &d.mult;
    let u = &d.unit;
    let cm = d.comult();
    let mut out = Vec::new();

    // m (m (x) 1) = m (1 (x) m), both sides A (x) A (x) A -> A.
    if seq(&m.tensor(&id_a), m) != seq(&id_a.tensor(m), m) {
        out.push(FrobeniusAxiom::Associativity);
    }
    // m (u (x) 1) = 1, as I (x) A -> A with the strict unit carrier.
    if seq(&u.tensor(&id_a), m) != id_a {
        out.push(FrobeniusAxiom::LeftUnit);
    }
    if seq(&id_a.tensor(u), m) != id_a {
        out.push(FrobeniusAxiom::RightUnit);
    }
    // (1 (x) m)(cm (x) 1) = cm m = (m (x) 1)(1 (x) cm).
    let middle = seq(m, &cm);
    if seq(&cm.tensor(&id_a), &id_a.tensor(m)) != middle
        || seq(&id_a.tensor(&cm), &m.tensor(&id_a)) != middle
    {
        out.push(FrobeniusAxiom::FrobeniusLaw);
    }
    // Counit absorbs the swap.
    let counit_m = seq(m, &d.counit());
    if seq(&swap(a, a), &counit_m) != counit_m {
        out.push(FrobeniusAxiom::Symmetry);
    }
    // cm m = 1.
    if seq(&cm, m) != id_a {
        out.push(FrobeniusAxiom::Speciality);
    }
    out
}

/// Whether the data satisfies all six Frobenius axioms.
pub fn is_special_symmetric_frobenius(d: &FrobeniusData) -> bool {
    violated_axioms(d).is_empty()
}

/// Whether the multiplication is commutative (`m swap = m`).
///
/// This is not one of the six structural axioms: groupoid-induced
/// structures are commutative exactly when the groupoid is a disjoint union
/// of abelian groups.
pub fn is_commutative(d: &FrobeniusData) -> bool {
    seq(&swap(&d.carrier, &d.carrier), &d.mult) == d.mult
}

/// Recovers a groupoid from a verified Frobenius structure.
///
/// Fails with [`GroupoidError::NotFrobenius`] when an axiom is violated.
/// Objects of the result are named after the identity elements found in the
/// unit's image, so a round trip through [`frobenius_of_groupoid`] agrees
/// with the original up to object names.
pub fn groupoid_from_frobenius(d: &FrobeniusData) -> GroupoidResult<Groupoid> {
    let violations = violated_axioms(d);
    if !violations.is_empty() {
        return Err(GroupoidError::NotFrobenius(violations));
    }
    let carrier = &d.carrier;
    let n = carrier.len();
    let idents: Vec<usize> = d.unit.image_of(0);
    let obj_pos = |e: usize| idents.iter().position(|&u| u == e);

    let endpoint = |g: usize, on_right: bool| -> GroupoidResult<usize> {
        let acting: Vec<usize> = idents
            .iter()
            .copied()
            .filter(|&u| {
                let pair = if on_right { g * n + u } else { u * n + g };
                d.mult.contains(pair, g)
            })
            .collect();
        match acting.as_slice() {
            [u] => Ok(obj_pos(*u).expect("identity list covers the unit image")),
            _ => Err(GroupoidError::InvalidSpec(format!(
                "{} identity elements act trivially on the {} of {}",
                acting.len(),
                if on_right { "right" } else { "left" },
                carrier.elem(g)
            ))),
        }
    };

    let mut mors = Vec::with_capacity(n);
    for g in 0..n {
        let dom = endpoint(g, true)?;
        let cod = endpoint(g, false)?;
        mors.push((carrier.elem(g).clone(), dom, cod));
    }

    let mut table = vec![None; n * n];
    for g in 0..n {
        for h in 0..n {
            match d.mult.image_of(g * n + h).as_slice() {
                [] => {}
                [k] => table[g * n + h] = Some(*k),
                _ => {
                    return Err(GroupoidError::InvalidSpec(format!(
                        "multiplication is not single-valued on ({}, {})",
                        carrier.elem(g),
                        carrier.elem(h)
                    )));
                }
            }
        }
    }

    let objects = idents.iter().map(|&u| carrier.elem(u).to_string()).collect();
    Groupoid::from_parts("extracted", objects, mors, move |g, h| table[g * n + h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcat::Elem;

    fn assert_round_trip(g: &Groupoid) {
        let d = frobenius_of_groupoid(g);
        assert_eq!(violated_axioms(&d), vec![], "axioms fail for {}", g.name());
        let back = groupoid_from_frobenius(&d).expect("extraction succeeds");
        assert!(back.same_structure(g), "round trip changed {}", g.name());
    }

    #[test]
    fn groupoid_structures_satisfy_all_axioms() {
        for g in [
            Groupoid::cyclic(1),
            Groupoid::cyclic(4),
            Groupoid::symmetric(3),
            Groupoid::discrete(3),
            Groupoid::indiscrete(2),
            Groupoid::indiscrete(3),
            Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(2), Groupoid::indiscrete(2)]),
        ] {
            assert_round_trip(&g);
        }
    }

    #[test]
    fn multiplication_chains_indiscrete_pairs() {
        let g = Groupoid::indiscrete_on("A", vec!["a".into(), "b".into(), "c".into()]);
        let d = frobenius_of_groupoid(&g);
        let square = g.carrier().tensor(g.carrier());
        let image = |x: &Elem, y: &Elem| -> Vec<Elem> {
            let i = square.index_of(&x.join(y)).unwrap();
            d.mult().image_of(i).into_iter().map(|j| g.carrier().elem(j).clone()).collect()
        };
        // (b,c) composed after (a,b) is (a,c).
        assert_eq!(
            image(&Elem::tuple(["b", "c"]), &Elem::tuple(["a", "b"])),
            vec![Elem::tuple(["a", "c"])]
        );
        // (b,c) after (b,a) is undefined.
        assert!(image(&Elem::tuple(["b", "c"]), &Elem::tuple(["b", "a"])).is_empty());
    }

    #[test]
    fn unit_collects_identities() {
        let g = Groupoid::discrete(2);
        let d = frobenius_of_groupoid(&g);
        let image: Vec<&Elem> = d.unit().image_of(0).into_iter().map(|j| g.carrier().elem(j)).collect();
        assert_eq!(image, vec![&Elem::atom("id_1"), &Elem::atom("id_2")]);
    }

    #[test]
    fn commutativity_tracks_abelianness_and_disconnection() {
        let comm = |g: &Groupoid| is_commutative(&frobenius_of_groupoid(g));
        assert!(comm(&Groupoid::cyclic(6)));
        assert!(comm(&Groupoid::disjoint_union_prefixed(
            "u",
            &[Groupoid::cyclic(2), Groupoid::cyclic(3)]
        )));
        assert!(!comm(&Groupoid::symmetric(3)));
        assert!(!comm(&Groupoid::indiscrete(2)));
    }

    #[test]
    fn damaged_multiplication_is_detected() {
        let g = Groupoid::cyclic(2);
        let good = frobenius_of_groupoid(&g);
        // Drop the pair ((1,1), 0): "1" loses its inverse action.
        let square = g.carrier().tensor(g.carrier());
        let bad_src = square.index_of(&Elem::tuple(["1", "1"])).unwrap();
        let bad_tgt = g.carrier().index_of(&Elem::atom("0")).unwrap();
        let mut mult = Relation::empty(square, g.carrier().clone());
        for (i, j) in good.mult().pairs() {
            if (i, j) != (bad_src, bad_tgt) {
                mult.insert(i, j);
            }
        }
        let bad = FrobeniusData::new(g.carrier().clone(), mult, good.unit().clone()).unwrap();
        let violations = violated_axioms(&bad);
        assert!(!violations.is_empty());
        let err = groupoid_from_frobenius(&bad).unwrap_err();
        assert!(matches!(err, GroupoidError::NotFrobenius(_)));
    }

    #[test]
    fn monoid_multiplication_is_not_frobenius() {
        // Two-element absorbing monoid on {e, a}: a . a = a.
        let carrier = Carrier::from_atoms(["e", "a"]).unwrap();
        let square = carrier.tensor(&carrier);
        let pairs: Vec<(Elem, Elem)> = [("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a"), ("a", "a", "a")]
            .into_iter()
            .map(|(x, y, z)| (Elem::tuple([x, y]), Elem::atom(z)))
            .collect();
        let mult = Relation::from_pairs(square, carrier.clone(), &pairs).unwrap();
        let unit = Relation::from_pairs(
            Carrier::unit(),
            carrier.clone(),
            &[(Elem::unit(), Elem::atom("e"))],
        )
        .unwrap();
        let d = FrobeniusData::new(carrier, mult, unit).unwrap();
        assert!(!is_special_symmetric_frobenius(&d));
        // The absorbing element breaks the Frobenius law: comultiplying it
        // reaches pairs no composite can reproduce.
        assert!(violated_axioms(&d).contains(&FrobeniusAxiom::FrobeniusLaw));
    }

    #[test]
    fn extraction_keeps_carrier_order_and_names_objects_by_identities() {
        let g = Groupoid::cyclic(3);
        let d = frobenius_of_groupoid(&g);
        let back = groupoid_from_frobenius(&d).unwrap();
        assert_eq!(back.objects(), &["0".to_string()]);
        assert_eq!(back.carrier(), g.carrier());
    }
}
