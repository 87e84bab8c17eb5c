//! A fixed catalogue of small groupoids and subsystem pairs.
//!
//! The verification suite and the command-line interface both draw their
//! examples from here, so every object has a stable name and a
//! deterministic construction order.

use crate::cpstar::{CpResult, Subsystem};
use crate::groupoid::{Groupoid, SubgroupoidRef};
use crate::relcat::Elem;

/// Every named groupoid, in catalogue order.
pub fn named_groupoids() -> Vec<Groupoid> {
    let mut out: Vec<Groupoid> = (1..=6).map(Groupoid::cyclic).collect();
    out.push(Groupoid::symmetric(3));
    out.extend((1..=4).map(Groupoid::discrete));
    out.extend((2..=4).map(Groupoid::indiscrete));
    out.push(Groupoid::disjoint_union_prefixed(
        "Z3+Z3",
        &[Groupoid::cyclic(3), Groupoid::cyclic(3)],
    ));
    out.push(Groupoid::disjoint_union_prefixed(
        "Z2+Z3",
        &[Groupoid::cyclic(2), Groupoid::cyclic(3)],
    ));
    out.push(Groupoid::disjoint_union_prefixed(
        "Z2+indiscrete2",
        &[Groupoid::cyclic(2), Groupoid::indiscrete(2)],
    ));
    out
}

/// Looks a catalogue groupoid up by its name.
pub fn groupoid_by_name(name: &str) -> Option<Groupoid> {
    named_groupoids().into_iter().find(|g| g.name() == name)
}

/// The names of all catalogue groupoids, in order.
pub fn groupoid_names() -> Vec<String> {
    named_groupoids().iter().map(|g| g.name().to_string()).collect()
}

/// A parent groupoid with two wide subsystems, used in the independence and
/// signalling experiments.
#[derive(Debug, Clone)]
pub struct SubsystemTriple {
    pub name: &'static str,
    parent: Groupoid,
    left_labels: Vec<Elem>,
    right_labels: Vec<Elem>,
}

impl SubsystemTriple {
    fn new(
        name: &'static str,
        parent: Groupoid,
        left: &[&str],
        right: &[&str],
    ) -> SubsystemTriple {
        let to_elems = |labels: &[&str]| labels.iter().map(|l| Elem::atom(*l)).collect();
        SubsystemTriple {
            name,
            parent,
            left_labels: to_elems(left),
            right_labels: to_elems(right),
        }
    }

    pub fn parent(&self) -> &Groupoid {
        &self.parent
    }

    pub fn left(&self) -> CpResult<Subsystem> {
        Subsystem::new(SubgroupoidRef::from_labels(&self.parent, &self.left_labels)?)
    }

    pub fn right(&self) -> CpResult<Subsystem> {
        Subsystem::new(SubgroupoidRef::from_labels(&self.parent, &self.right_labels)?)
    }
}

/// The catalogue of experiment triples, in order.
pub fn subsystem_triples() -> Vec<SubsystemTriple> {
    vec![
        SubsystemTriple::new(
            "Z6-disjoint-subgroups",
            Groupoid::cyclic(6),
            &["0", "3"],
            &["0", "2", "4"],
        ),
        SubsystemTriple::new(
            "S3-noncommuting-subgroups",
            Groupoid::symmetric(3),
            &["e", "(12)"],
            &["e", "(123)", "(132)"],
        ),
        SubsystemTriple::new(
            "discrete2-full",
            Groupoid::discrete(2),
            &["id_1", "id_2"],
            &["id_1", "id_2"],
        ),
        SubsystemTriple::new("Z2-trivial", Groupoid::cyclic(2), &["0"], &["0"]),
        SubsystemTriple::new(
            "Z4-shared-subgroup",
            Groupoid::cyclic(4),
            &["0", "2"],
            &["0", "2"],
        ),
        SubsystemTriple::new(
            "S3-shared-cyclic",
            Groupoid::symmetric(3),
            &["e", "(123)", "(132)"],
            &["e", "(123)", "(132)"],
        ),
        SubsystemTriple::new(
            "Z3+Z3-crossed",
            Groupoid::disjoint_union_prefixed("Z3+Z3", &[Groupoid::cyclic(3), Groupoid::cyclic(3)]),
            &["0.0", "0.1", "0.2", "1.0"],
            &["0.0", "1.0", "1.1", "1.2"],
        ),
        SubsystemTriple::new(
            "S3-reflection-vs-trivial",
            Groupoid::symmetric(3),
            &["e", "(12)"],
            &["e"],
        ),
    ]
}

/// Looks an experiment triple up by its name.
pub fn triple_by_name(name: &str) -> Option<SubsystemTriple> {
    subsystem_triples().into_iter().find(|t| t.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn groupoid_names_are_unique_and_resolvable() {
        let names = groupoid_names();
        let set: BTreeSet<&String> = names.iter().collect();
        assert_eq!(set.len(), names.len());
        for n in &names {
            assert!(groupoid_by_name(n).is_some(), "{n} does not resolve");
        }
        assert!(groupoid_by_name("Z6").unwrap().is_group());
        assert!(groupoid_by_name("nonesuch").is_none());
    }

    #[test]
    fn abelian_union_predicate_matches_known_shapes() {
        let expectations = [
            ("Z6", true),
            ("S3", false),
            ("discrete3", true),
            ("indiscrete2", false),
            ("Z2+Z3", true),
            ("Z2+indiscrete2", false),
        ];
        for (name, expected) in expectations {
            let g = groupoid_by_name(name).unwrap();
            assert_eq!(
                g.is_disjoint_union_of_abelian_groups(),
                expected,
                "{name} misclassified"
            );
        }
    }

    #[test]
    fn triples_resolve_to_wide_subsystems() {
        let triples = subsystem_triples();
        assert_eq!(triples.len(), 8);
        let names: BTreeSet<&str> = triples.iter().map(|t| t.name).collect();
        assert_eq!(names.len(), triples.len());
        for t in &triples {
            let left = t.left().unwrap_or_else(|e| panic!("{}: {e}", t.name));
            let right = t.right().unwrap_or_else(|e| panic!("{}: {e}", t.name));
            assert!(left.subgroupoid().is_wide());
            assert!(right.subgroupoid().is_wide());
        }
        assert!(triple_by_name("Z2-trivial").is_some());
        assert!(triple_by_name("nonesuch").is_none());
    }
}
