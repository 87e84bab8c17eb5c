//! JSON descriptions of groupoids, experiments and protocols.
//!
//! Input files describe a groupoid by construction kind — named group,
//! indiscrete, discrete, disjoint union, or an explicit morphism list with
//! a composition table — and experiments reference morphisms by label.
//! Explicit descriptions do not list identities or inverses; both are
//! inferred during validation and missing ones are reported by name.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcommit::{protocol_from_object_pairs, BitCommitmentProtocol};
use crate::cpstar::measure::Measurement;
use crate::cpstar::{CpError, Subsystem};
use crate::groupoid::{Groupoid, GroupoidError};
use crate::relcat::{Carrier, Elem, Relation};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cp(#[from] CpError),
    #[error("invalid spec: {0}")]
    Invalid(String),
}

pub type SpecResult<T> = Result<T, SpecError>;

/// A morphism label: either a bare atom or a tuple of atoms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelSpec {
    Atom(String),
    Tuple(Vec<String>),
}

impl LabelSpec {
    pub fn to_elem(&self) -> Elem {
        match self {
            LabelSpec::Atom(a) => Elem::atom(a.clone()),
            LabelSpec::Tuple(atoms) => Elem::tuple(atoms.iter().cloned()),
        }
    }
}

/// One morphism of an explicit groupoid description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub label: LabelSpec,
    pub dom: String,
    pub cod: String,
}

/// A groupoid description, dispatched on `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupoidSpec {
    /// A one-object groupoid: either a known name (`Z<n>` or `S<n>`) or an
    /// explicit element list with a Cayley table (`table[g][h]` is the
    /// composite applying `h` first).
    Group {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        elements: Option<Vec<String>>,
        #[serde(default)]
        table: Option<Vec<Vec<usize>>>,
    },
    /// One morphism between every ordered pair of objects.
    Indiscrete {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        objects: Option<Vec<String>>,
        #[serde(default)]
        count: Option<usize>,
    },
    /// Identities only.
    Discrete { count: usize },
    /// Disjoint union of parts, with atoms prefixed per part.
    Union {
        #[serde(default)]
        name: Option<String>,
        parts: Vec<GroupoidSpec>,
    },
    /// Arbitrary objects and morphisms with a partial composition table of
    /// `[g, h, g-after-h]` label triples.
    Explicit {
        #[serde(default)]
        name: Option<String>,
        objects: Vec<String>,
        morphisms: Vec<MorphismSpec>,
        compose: Vec<[LabelSpec; 3]>,
    },
}

/// Builds the groupoid a description denotes.
pub fn groupoid_from_spec(spec: &GroupoidSpec) -> SpecResult<Groupoid> {
    match spec {
        GroupoidSpec::Group { name, elements, table } => match (name, elements, table) {
            (Some(n), None, None) => group_by_name(n),
            (name, Some(elements), Some(table)) => {
                let labels = elements.iter().map(|e| Elem::atom(e.clone())).collect();
                Ok(Groupoid::from_group_table(
                    name.clone().unwrap_or_else(|| "group".into()),
                    labels,
                    table.clone(),
                )?)
            }
            _ => Err(SpecError::Invalid(
                "a group needs either a known name or both elements and a table".into(),
            )),
        },
        GroupoidSpec::Indiscrete { name, objects, count } => {
            let objects = match (objects, count) {
                (Some(objs), None) => objs.clone(),
                (None, Some(n)) => (0..*n).map(|i| i.to_string()).collect(),
                _ => {
                    return Err(SpecError::Invalid(
                        "an indiscrete groupoid needs exactly one of objects or count".into(),
                    ))
                }
            };
            if objects.is_empty() {
                return Err(SpecError::Invalid("indiscrete groupoids need an object".into()));
            }
            let name = name.clone().unwrap_or_else(|| format!("indiscrete{}", objects.len()));
            Ok(Groupoid::indiscrete_on(name, objects))
        }
        GroupoidSpec::Discrete { count } => {
            if *count == 0 {
                return Err(SpecError::Invalid("discrete groupoids need an object".into()));
            }
            Ok(Groupoid::discrete(*count))
        }
        GroupoidSpec::Union { name, parts } => {
            if parts.is_empty() {
                return Err(SpecError::Invalid("a union needs at least one part".into()));
            }
            let built: Vec<Groupoid> =
                parts.iter().map(groupoid_from_spec).collect::<SpecResult<_>>()?;
            Ok(Groupoid::disjoint_union_prefixed(
                name.clone().unwrap_or_else(|| "union".into()),
                &built,
            ))
        }
        GroupoidSpec::Explicit { name, objects, morphisms, compose } => {
            let object_index = |o: &str| -> SpecResult<usize> {
                objects.iter().position(|x| x == o).ok_or_else(|| {
                    SpecError::Invalid(format!("morphism endpoint {o} is not a listed object"))
                })
            };
            let mut mors = Vec::with_capacity(morphisms.len());
            for m in morphisms {
                mors.push((m.label.to_elem(), object_index(&m.dom)?, object_index(&m.cod)?));
            }
            let mor_index = |l: &LabelSpec| -> SpecResult<usize> {
                let e = l.to_elem();
                mors.iter().position(|(label, _, _)| label == &e).ok_or_else(|| {
                    SpecError::Invalid(format!("composition entry {e} is not a listed morphism"))
                })
            };
            let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for [g, h, k] in compose {
                let key = (mor_index(g)?, mor_index(h)?);
                let value = mor_index(k)?;
                if let Some(&previous) = table.get(&key) {
                    if previous != value {
                        return Err(SpecError::Invalid(format!(
                            "conflicting composites listed for {} after {}",
                            g.to_elem(),
                            h.to_elem()
                        )));
                    }
                }
                table.insert(key, value);
            }
            Ok(Groupoid::from_parts(
                name.clone().unwrap_or_else(|| "explicit".into()),
                objects.clone(),
                mors,
                move |g, h| table.get(&(g, h)).copied(),
            )?)
        }
    }
}

fn group_by_name(name: &str) -> SpecResult<Groupoid> {
    if let Some(rest) = name.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            if n >= 1 {
                return Ok(Groupoid::cyclic(n));
            }
        }
    }
    if let Some(rest) = name.strip_prefix('S') {
        if let Ok(n) = rest.parse::<usize>() {
            if (1..=4).contains(&n) {
                return Ok(Groupoid::symmetric(n));
            }
        }
    }
    Err(SpecError::Invalid(format!(
        "unknown group name {name}; use Z<n>, S<1..4>, or give elements and a table"
    )))
}

pub fn groupoid_from_json(text: &str) -> SpecResult<Groupoid> {
    let spec: GroupoidSpec = serde_json::from_str(text)?;
    groupoid_from_spec(&spec)
}

fn resolve_labels(parent: &Groupoid, labels: &[LabelSpec]) -> SpecResult<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            let e = l.to_elem();
            parent.morphism_by_label(&e).ok_or_else(|| {
                SpecError::Invalid(format!("label {e} does not name a morphism of {}", parent.name()))
            })
        })
        .collect()
}

/// A parent with two wide subsystems, as read from a file.
#[derive(Debug, Clone)]
pub struct SubsystemExperiment {
    pub parent: Groupoid,
    pub left: Subsystem,
    pub right: Subsystem,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SubsystemsFile {
    groupoid: GroupoidSpec,
    left: Vec<LabelSpec>,
    right: Vec<LabelSpec>,
}

pub fn subsystems_from_json(text: &str) -> SpecResult<SubsystemExperiment> {
    let file: SubsystemsFile = serde_json::from_str(text)?;
    let parent = groupoid_from_spec(&file.groupoid)?;
    let left = Subsystem::from_morphisms(&parent, &resolve_labels(&parent, &file.left)?)?;
    let right = Subsystem::from_morphisms(&parent, &resolve_labels(&parent, &file.right)?)?;
    Ok(SubsystemExperiment { parent, left, right })
}

/// A measurement family on a parent groupoid, as read from a file.
#[derive(Debug, Clone)]
pub struct MeasurementExperiment {
    pub parent: Groupoid,
    pub measurement: Measurement,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasurementFile {
    groupoid: GroupoidSpec,
    parts: Vec<Vec<LabelSpec>>,
}

pub fn measurement_from_json(text: &str) -> SpecResult<MeasurementExperiment> {
    let file: MeasurementFile = serde_json::from_str(text)?;
    let parent = groupoid_from_spec(&file.groupoid)?;
    let parts = file
        .parts
        .iter()
        .map(|p| resolve_labels(&parent, p))
        .collect::<SpecResult<Vec<_>>>()?;
    let measurement = Measurement::new(&parent, parts)?;
    Ok(MeasurementExperiment { parent, measurement })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProtocolFile {
    alice: GroupoidSpec,
    bob: GroupoidSpec,
    /// Object-name pairs inducing the heads commitment.
    heads: Vec<(String, String)>,
    tails: Vec<(String, String)>,
}

pub fn protocol_from_json(text: &str) -> SpecResult<BitCommitmentProtocol> {
    let file: ProtocolFile = serde_json::from_str(text)?;
    let alice = groupoid_from_spec(&file.alice)?;
    let bob = groupoid_from_spec(&file.bob)?;
    let resolve = |g: &Groupoid, o: &str| -> SpecResult<usize> {
        g.objects().iter().position(|x| x == o).ok_or_else(|| {
            SpecError::Invalid(format!("object {o} does not occur in {}", g.name()))
        })
    };
    let pairs = |list: &[(String, String)]| -> SpecResult<Vec<(usize, usize)>> {
        list.iter().map(|(a, b)| Ok((resolve(&alice, a)?, resolve(&bob, b)?))).collect()
    };
    let heads = pairs(&file.heads)?;
    let tails = pairs(&file.tails)?;
    Ok(protocol_from_object_pairs(&alice, &bob, &heads, &tails)?)
}

/// A state of a product groupoid, as read from a file.
#[derive(Debug, Clone)]
pub struct ProductStateExperiment {
    pub left: Groupoid,
    pub right: Groupoid,
    pub state: Relation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProductStateFile {
    left: GroupoidSpec,
    right: GroupoidSpec,
    /// Labels of product morphisms in the state.
    state: Vec<LabelSpec>,
}

pub fn product_state_from_json(text: &str) -> SpecResult<ProductStateExperiment> {
    let file: ProductStateFile = serde_json::from_str(text)?;
    let left = groupoid_from_spec(&file.left)?;
    let right = groupoid_from_spec(&file.right)?;
    let product = Groupoid::product(&left, &right);
    let mors = resolve_labels(&product, &file.state)?;
    let pairs: Vec<(usize, usize)> = mors.iter().map(|&m| (0, m)).collect();
    let state = Relation::from_index_pairs(Carrier::unit(), product.carrier().clone(), &pairs);
    Ok(ProductStateExperiment { left, right, state })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups_and_builders_parse() {
        let z6 = groupoid_from_json(r#"{ "kind": "group", "name": "Z6" }"#).unwrap();
        assert!(z6.same_structure(&Groupoid::cyclic(6)));
        let s3 = groupoid_from_json(r#"{ "kind": "group", "name": "S3" }"#).unwrap();
        assert!(s3.same_structure(&Groupoid::symmetric(3)));
        let ind = groupoid_from_json(r#"{ "kind": "indiscrete", "objects": ["x", "y"] }"#).unwrap();
        assert!(ind.same_structure(&Groupoid::indiscrete_on("i", vec!["x".into(), "y".into()])));
        let disc = groupoid_from_json(r#"{ "kind": "discrete", "count": 3 }"#).unwrap();
        assert!(disc.same_structure(&Groupoid::discrete(3)));
        let union = groupoid_from_json(
            r#"{ "kind": "union", "parts": [
                { "kind": "group", "name": "Z2" },
                { "kind": "group", "name": "Z3" } ] }"#,
        )
        .unwrap();
        assert!(union.same_structure(&Groupoid::disjoint_union_prefixed(
            "u",
            &[Groupoid::cyclic(2), Groupoid::cyclic(3)]
        )));
    }

    #[test]
    fn cayley_tables_parse() {
        let klein = groupoid_from_json(
            r#"{ "kind": "group", "name": "K4",
                 "elements": ["e", "a", "b", "c"],
                 "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]] }"#,
        )
        .unwrap();
        assert!(klein.is_group());
        assert!(klein.is_disjoint_union_of_abelian_groups());
        assert_eq!(klein.morphism_count(), 4);
    }

    #[test]
    fn explicit_groupoids_infer_identities_and_inverses() {
        let z2 = groupoid_from_json(
            r#"{ "kind": "explicit", "objects": ["o"],
                 "morphisms": [
                    { "label": "e", "dom": "o", "cod": "o" },
                    { "label": "a", "dom": "o", "cod": "o" } ],
                 "compose": [["e","e","e"],["e","a","a"],["a","e","a"],["a","a","e"]] }"#,
        )
        .unwrap();
        assert!(z2.is_group());
        let e = z2.morphism_by_label(&Elem::atom("e")).unwrap();
        let a = z2.morphism_by_label(&Elem::atom("a")).unwrap();
        assert!(z2.is_identity(e));
        assert_eq!(z2.inv(a), a);
        assert_eq!(z2.compose(a, a), Some(e));
    }

    #[test]
    fn explicit_errors_name_the_offender() {
        // The missing inverse for `a` surfaces during validation.
        let err = groupoid_from_json(
            r#"{ "kind": "explicit", "objects": ["o"],
                 "morphisms": [
                    { "label": "e", "dom": "o", "cod": "o" },
                    { "label": "a", "dom": "o", "cod": "o" } ],
                 "compose": [["e","e","e"],["e","a","a"],["a","e","a"],["a","a","a"]] }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains('a'), "unexpected message: {err}");

        let err = groupoid_from_json(r#"{ "kind": "group", "name": "Q8" }"#).unwrap_err();
        assert!(err.to_string().contains("Q8"));

        let err = groupoid_from_json(
            r#"{ "kind": "explicit", "objects": ["o"],
                 "morphisms": [{ "label": "e", "dom": "o", "cod": "o" }],
                 "compose": [["e","e","e"],["f","e","e"]] }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains('f'));
    }

    #[test]
    fn experiment_files_resolve_labels() {
        let exp = subsystems_from_json(
            r#"{ "groupoid": { "kind": "group", "name": "Z6" },
                 "left": ["0", "3"], "right": ["0", "2", "4"] }"#,
        )
        .unwrap();
        assert_eq!(exp.left.groupoid().morphism_count(), 2);
        assert_eq!(exp.right.groupoid().morphism_count(), 3);

        let m = measurement_from_json(
            r#"{ "groupoid": { "kind": "group", "name": "S3" },
                 "parts": [["e", "(12)"], ["(123)"]] }"#,
        )
        .unwrap();
        assert_eq!(m.measurement.parts().len(), 2);

        let bad = subsystems_from_json(
            r#"{ "groupoid": { "kind": "group", "name": "Z6" },
                 "left": ["7"], "right": ["0"] }"#,
        )
        .unwrap_err();
        assert!(bad.to_string().contains('7'));
    }

    #[test]
    fn protocol_files_build_protocols() {
        let p = protocol_from_json(
            r#"{ "alice": { "kind": "indiscrete", "objects": ["0", "1", "2"] },
                 "bob": { "kind": "indiscrete", "objects": ["x", "y"] },
                 "heads": [["0","x"], ["1","y"], ["2","y"]],
                 "tails": [["0","y"], ["1","x"], ["2","x"]] }"#,
        )
        .unwrap();
        assert!(p.check_sound().sound);
        assert!(p.check_concealing().concealing);
    }

    #[test]
    fn product_state_files_build_states() {
        let exp = product_state_from_json(
            r#"{ "left": { "kind": "indiscrete", "objects": ["0", "1"] },
                 "right": { "kind": "indiscrete", "objects": ["0", "1"] },
                 "state": [["0","0","0","0"], ["0","1","0","1"],
                           ["1","0","1","0"], ["1","1","1","1"]] }"#,
        )
        .unwrap();
        assert_eq!(exp.state.size(), 4);
    }
}
