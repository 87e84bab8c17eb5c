//! Measurement families on groupoids.
//!
//! A measurement is a family of pairwise disjoint, nonempty subsets of the
//! morphisms. It induces two relations: the *channel*, which conjugates
//! each morphism through same-part pairs and describes the state after the
//! measurement, and the *destructive* form, which forgets the state and
//! keeps only the outcome index. A measurement is causal when discarding
//! its outcome is the same as discarding the state; for the destructive
//! relation this is the counit-preservation equation, and it is equivalent
//! to a pair of structural conditions checked independently here.

use crate::cpstar::{CpError, CpResult};
use crate::groupoid::Groupoid;
use crate::relcat::Relation;

use super::broadcast::counit_relation;

/// A validated measurement family on a groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    parent: Groupoid,
    parts: Vec<Vec<usize>>,
}

impl Measurement {
    /// Validates a family: at least one part, every part nonempty, indices
    /// in range, parts pairwise disjoint. Parts are sorted on the way in.
    pub fn new(parent: &Groupoid, parts: Vec<Vec<usize>>) -> CpResult<Self> {
        if parts.is_empty() {
            return Err(CpError::InvalidMeasurement("a family needs at least one part".into()));
        }
        let mut seen = vec![false; parent.morphism_count()];
        let mut cleaned = Vec::with_capacity(parts.len());
        for (i, mut part) in parts.into_iter().enumerate() {
            part.sort_unstable();
            part.dedup();
            if part.is_empty() {
                return Err(CpError::InvalidMeasurement(format!("part {i} is empty")));
            }
            for &m in &part {
                if m >= parent.morphism_count() {
                    return Err(CpError::InvalidMeasurement(format!(
                        "part {i} refers to morphism index {m}, out of range"
                    )));
                }
                if seen[m] {
                    return Err(CpError::InvalidMeasurement(format!(
                        "morphism {} appears in more than one part",
                        parent.label(m)
                    )));
                }
                seen[m] = true;
            }
            cleaned.push(part);
        }
        Ok(Measurement { parent: parent.clone(), parts: cleaned })
    }

    pub fn parent(&self) -> &Groupoid {
        &self.parent
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// The outcome system: one classical point per part.
    pub fn outcome_groupoid(&self) -> Groupoid {
        Groupoid::discrete(self.parts.len())
    }

    /// The measurement channel `G -> G`: `f` is sent to every
    /// `g^-1 . f . h` with `g` and `h` drawn from the same part.
    pub fn channel(&self) -> Relation {
        let g = &self.parent;
        let mut rel = Relation::empty(g.carrier().clone(), g.carrier().clone());
        for part in &self.parts {
            for &gm in part {
                let gi = g.inv(gm);
                for &hm in part {
                    for f in 0..g.morphism_count() {
                        if let Some(fh) = g.compose(f, hm) {
                            if let Some(k) = g.compose(gi, fh) {
                                rel.insert(f, k);
                            }
                        }
                    }
                }
            }
        }
        rel
    }

    /// Independent formulation of the channel: `f` relates to `k` when some
    /// same-part pair satisfies `g . k = f . h` with both sides defined.
    pub fn channel_via_pairing(&self) -> Relation {
        let g = &self.parent;
        let n = g.morphism_count();
        let mut rel = Relation::empty(g.carrier().clone(), g.carrier().clone());
        for f in 0..n {
            for k in 0..n {
                let hit = self.parts.iter().any(|part| {
                    part.iter().any(|&gm| {
                        part.iter().any(|&hm| {
                            match (g.compose(gm, k), g.compose(f, hm)) {
                                (Some(a), Some(b)) => a == b,
                                _ => false,
                            }
                        })
                    })
                });
                if hit {
                    rel.insert(f, k);
                }
            }
        }
        rel
    }

    /// The destructive measurement `G -> X`: `f` relates to outcome `i`
    /// when `f = g . h^-1` for some `g, h` in part `i`.
    pub fn destructive(&self) -> Relation {
        let g = &self.parent;
        let outcomes = self.outcome_groupoid();
        let mut rel = Relation::empty(g.carrier().clone(), outcomes.carrier().clone());
        for (i, part) in self.parts.iter().enumerate() {
            for &gm in part {
                for &hm in part {
                    if let Some(f) = g.compose(gm, g.inv(hm)) {
                        rel.insert(f, i);
                    }
                }
            }
        }
        rel
    }

    /// Causality as the counit equation: discarding the outcome of the
    /// destructive measurement equals discarding the state directly.
    pub fn is_causal(&self) -> bool {
        let outcomes = self.outcome_groupoid();
        let discard_outcome = self
            .destructive()
            .then(&counit_relation(&outcomes))
            .expect("outcome carriers line up");
        discard_outcome == counit_relation(&self.parent)
    }

    /// Structural characterisation of causality: within each part the
    /// domains are pairwise distinct, and every object is the codomain of
    /// some part member.
    pub fn is_causal_structural(&self) -> bool {
        let g = &self.parent;
        let doms_distinct = self.parts.iter().all(|part| {
            let mut doms: Vec<usize> = part.iter().map(|&m| g.dom(m)).collect();
            doms.sort_unstable();
            doms.windows(2).all(|w| w[0] != w[1])
        });
        let covered = (0..g.object_count()).all(|x| {
            self.parts.iter().any(|part| part.iter().any(|&m| g.cod(m) == x))
        });
        doms_distinct && covered
    }
}

/// Enumerates every measurement family on a morphism subset: all set
/// partitions of all nonempty subsets. Intended for oracle-style
/// exhaustive checks on small inputs.
pub fn all_families(mors: &[usize]) -> Vec<Vec<Vec<usize>>> {
    assert!(mors.len() <= 8, "family enumeration is restricted to 8 morphisms");
    let mut out = Vec::new();
    let n = mors.len();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| mors[i]).collect();
        partitions_into(&subset, &mut Vec::new(), &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn partitions_into(rest: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    match rest.first() {
        None => {
            let mut parts = acc.clone();
            parts.sort();
            out.push(parts);
        }
        Some(&first) => {
            let tail = &rest[1..];
            for i in 0..acc.len() {
                acc[i].push(first);
                partitions_into(tail, acc, out);
                acc[i].pop();
            }
            acc.push(vec![first]);
            partitions_into(tail, acc, out);
            acc.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcat::Elem;

    fn by_labels(g: &Groupoid, parts: &[&[&str]]) -> Measurement {
        let idx = |l: &str| g.morphism_by_label(&Elem::atom(l)).unwrap();
        Measurement::new(g, parts.iter().map(|p| p.iter().map(|l| idx(l)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn malformed_families_are_rejected() {
        let g = Groupoid::cyclic(3);
        assert!(matches!(
            Measurement::new(&g, vec![]),
            Err(CpError::InvalidMeasurement(_))
        ));
        assert!(matches!(
            Measurement::new(&g, vec![vec![0], vec![]]),
            Err(CpError::InvalidMeasurement(_))
        ));
        assert!(matches!(
            Measurement::new(&g, vec![vec![0, 1], vec![1]]),
            Err(CpError::InvalidMeasurement(_))
        ));
        assert!(matches!(
            Measurement::new(&g, vec![vec![7]]),
            Err(CpError::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn group_channel_conjugates() {
        let s3 = Groupoid::symmetric(3);
        let m = by_labels(&s3, &[&["(12)"]]);
        let channel = m.channel();
        let idx = |l: &str| s3.morphism_by_label(&Elem::atom(l)).unwrap();
        // Conjugating (123) by (12) gives (132).
        assert_eq!(channel.image_of(idx("(123)")), vec![idx("(132)")]);
        // The identity is fixed.
        assert_eq!(channel.image_of(idx("e")), vec![idx("e")]);
    }

    #[test]
    fn pairing_formulation_agrees_with_conjugation() {
        let samples: Vec<(Groupoid, Vec<Vec<usize>>)> = vec![
            (Groupoid::symmetric(3), vec![vec![0], vec![1, 2]]),
            (Groupoid::symmetric(3), vec![vec![0, 3], vec![5]]),
            (Groupoid::cyclic(6), vec![vec![0, 3], vec![1]]),
            (Groupoid::indiscrete(3), vec![vec![0, 1], vec![4, 5]]),
            (
                Groupoid::disjoint_union_prefixed("u", &[Groupoid::cyclic(2), Groupoid::cyclic(3)]),
                vec![vec![0, 2], vec![1, 3]],
            ),
        ];
        for (g, parts) in samples {
            let m = Measurement::new(&g, parts).unwrap();
            assert_eq!(m.channel(), m.channel_via_pairing(), "on {}", g.name());
        }
    }

    #[test]
    fn causality_equation_matches_structure_on_all_small_families() {
        for g in [Groupoid::indiscrete(2), Groupoid::discrete(2), Groupoid::cyclic(3)] {
            let mors: Vec<usize> = (0..g.morphism_count()).collect();
            for parts in all_families(&mors) {
                let m = Measurement::new(&g, parts).unwrap();
                assert_eq!(m.is_causal(), m.is_causal_structural(), "on {}", g.name());
            }
        }
    }

    #[test]
    fn causal_channels_preserve_discarding() {
        let g = Groupoid::indiscrete(2);
        let mors: Vec<usize> = (0..g.morphism_count()).collect();
        for parts in all_families(&mors) {
            let m = Measurement::new(&g, parts).unwrap();
            if m.is_causal() {
                let lhs = m.channel().then(&counit_relation(&g)).unwrap();
                assert_eq!(lhs, counit_relation(&g));
            }
        }
    }

    #[test]
    fn destructive_outcomes_on_a_partition_of_z2() {
        let z2 = Groupoid::cyclic(2);
        let m = by_labels(&z2, &[&["0"], &["1"]]);
        let d = m.destructive();
        // Only the identity arises as g . h^-1 within singleton parts, and
        // it arises in both, so both outcomes stay possible.
        assert_eq!(d.image_of(0), vec![0, 1]);
        assert_eq!(d.image_of(1), Vec::<usize>::new());
        assert!(m.is_causal());
    }

    #[test]
    fn family_enumeration_counts_match_bell_numbers() {
        // Families on n elements: partitions of every subset, which total
        // the Bell number of n + 1, minus one for the empty family.
        assert_eq!(all_families(&[0, 1, 2]).len(), 14);
        assert_eq!(all_families(&[0, 1, 2, 3]).len(), 51);
    }
}
