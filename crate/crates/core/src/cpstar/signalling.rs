//! Kinematic independence and no-signalling for pairs of subsystems.
//!
//! Two wide subgroupoids are *kinematically independent* when their
//! morphisms commute: a composite of one with the other is defined in one
//! order exactly when it is defined in the other, and then both orders
//! agree. A pair is *no-signalling* when measuring one subsystem never
//! disturbs the morphisms of the other: for every measurement family on
//! one side, the measurement channel fixes each morphism of the other side
//! exactly.
//!
//! The quantifier over families is tamed by a reduction: a violating family
//! always yields a violating family in a small reduced class (singletons
//! and pairs when arbitrary families are allowed; minimal covering
//! singleton families and identity-padded pair families when only causal
//! ones are). The reduction is itself cross-checked against full family
//! enumeration in the test suite.

use crate::cpstar::measure::{all_families, Measurement};
use crate::cpstar::Subsystem;
use crate::groupoid::Groupoid;
use crate::relcat::Elem;

/// Which measurement families the no-signalling quantifier ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyScope {
    /// Only causal (counit-preserving) families.
    Causal,
    /// Every family, causal or not.
    All,
}

/// A concrete no-signalling violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsWitness {
    /// Whether the measured side is the first subsystem of the pair.
    pub measured_first: bool,
    /// The violating family, parts listed by morphism label.
    pub parts: Vec<Vec<Elem>>,
    /// The other side's morphism that is disturbed.
    pub state: Elem,
    /// What the measurement channel turns that morphism into.
    pub image: Vec<Elem>,
}

/// Verdict of a no-signalling check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsOutcome {
    pub holds: bool,
    pub witness: Option<NsWitness>,
    pub families_checked: u64,
}

fn assert_same_parent(a: &Subsystem, b: &Subsystem) {
    assert!(
        a.parent() == b.parent(),
        "no-signalling and independence need subsystems of one groupoid"
    );
}

/// Kinematic independence, checked directly from the commutation property.
pub fn kinematic_independence(a: &Subsystem, b: &Subsystem) -> bool {
    assert_same_parent(a, b);
    let g = a.parent();
    a.subgroupoid().morphisms().iter().all(|&am| {
        b.subgroupoid().morphisms().iter().all(|&bm| {
            match (g.compose(am, bm), g.compose(bm, am)) {
                (Some(x), Some(y)) => x == y,
                (None, None) => true,
                _ => false,
            }
        })
    })
}

/// Structural characterisation of kinematic independence: both subsystems
/// consist of endomorphisms only, and at each object their endomorphisms
/// commute elementwise.
pub fn kinematic_independence_structural(a: &Subsystem, b: &Subsystem) -> bool {
    assert_same_parent(a, b);
    let g = a.parent();
    if !a.groupoid().is_totally_disconnected() || !b.groupoid().is_totally_disconnected() {
        return false;
    }
    (0..g.object_count()).all(|x| {
        let at = |sys: &Subsystem| -> Vec<usize> {
            sys.subgroupoid()
                .morphisms()
                .iter()
                .copied()
                .filter(|&m| g.dom(m) == x && g.cod(m) == x)
                .collect()
        };
        at(a).iter().all(|&am| at(b).iter().all(|&bm| g.compose(am, bm) == g.compose(bm, am)))
    })
}

/// Applies one family to the other side's morphisms; returns the first
/// disturbed morphism with its channel image.
fn family_disturbs(m: &Measurement, other: &[usize]) -> Option<(usize, Vec<usize>)> {
    let channel = m.channel();
    other.iter().copied().find_map(|b| {
        let image = channel.image_of(b);
        (image != vec![b]).then_some((b, image))
    })
}

/// The reduced family class that is complete for violations.
///
/// With arbitrary families allowed, a violating family always contains a
/// one- or two-element part witnessing the violation, and the singleton or
/// pair family built from it violates too. Under the causal restriction,
/// "adds a wrong morphism" violations survive in an identity-padded pair
/// family, and "loses the morphism" violations survive in a minimal
/// covering singleton family picked from the original parts.
fn reduced_families(a: &Subsystem, scope: FamilyScope) -> Vec<Vec<Vec<usize>>> {
    let g = a.parent();
    let mors = a.subgroupoid().morphisms();
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    match scope {
        FamilyScope::All => {
            for (i, &h) in mors.iter().enumerate() {
                out.push(vec![vec![h]]);
                for &k in &mors[i + 1..] {
                    out.push(vec![vec![h, k]]);
                }
            }
        }
        FamilyScope::Causal => {
            // Minimal covering singleton families: one codomain witness per
            // object, all combinations.
            let candidates: Vec<Vec<usize>> = (0..g.object_count())
                .map(|y| mors.iter().copied().filter(|&m| g.cod(m) == y).collect())
                .collect();
            let total: usize = candidates.iter().map(Vec::len).product();
            assert!(total <= 65536, "covering-family enumeration is restricted to desk scale");
            let mut choice = vec![0usize; candidates.len()];
            loop {
                let family: Vec<Vec<usize>> =
                    choice.iter().enumerate().map(|(y, &i)| vec![candidates[y][i]]).collect();
                out.push(family);
                let mut pos = 0;
                loop {
                    if pos == choice.len() {
                        break;
                    }
                    choice[pos] += 1;
                    if choice[pos] < candidates[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == choice.len() {
                    break;
                }
            }
            // Identity-padded pair families.
            for (i, &h) in mors.iter().enumerate() {
                for &k in &mors[i..] {
                    if h != k && g.dom(h) == g.dom(k) {
                        continue;
                    }
                    let part0: Vec<usize> = if h == k { vec![h] } else { vec![h, k] };
                    let covered: Vec<usize> = part0.iter().map(|&m| g.cod(m)).collect();
                    let mut family = vec![part0];
                    for y in 0..g.object_count() {
                        if !covered.contains(&y) {
                            family.push(vec![g.identity_of(y)]);
                        }
                    }
                    out.push(family);
                }
            }
        }
    }
    for family in &mut out {
        for part in family.iter_mut() {
            part.sort_unstable();
        }
        family.sort();
    }
    out.sort();
    out.dedup();
    out
}

fn run_families(
    families: Vec<Vec<Vec<usize>>>,
    parent: &Groupoid,
    other: &[usize],
    measured_first: bool,
    scope: FamilyScope,
    families_checked: &mut u64,
) -> Option<NsWitness> {
    for parts in families {
        let m = Measurement::new(parent, parts.clone()).expect("reduced families are valid");
        if scope == FamilyScope::Causal && !m.is_causal() {
            continue;
        }
        *families_checked += 1;
        if let Some((state, image)) = family_disturbs(&m, other) {
            let labels = |v: &[usize]| v.iter().map(|&i| parent.label(i).clone()).collect();
            return Some(NsWitness {
                measured_first,
                parts: parts.iter().map(|p| labels(p)).collect(),
                state: parent.label(state).clone(),
                image: labels(&image),
            });
        }
    }
    None
}

/// Decides no-signalling for a pair of subsystems using the reduced family
/// class, measuring each side in turn.
pub fn no_signalling(a: &Subsystem, b: &Subsystem, scope: FamilyScope) -> NsOutcome {
    assert_same_parent(a, b);
    let mut families_checked = 0;
    for (measured, other, first) in [(a, b, true), (b, a, false)] {
        let witness = run_families(
            reduced_families(measured, scope),
            measured.parent(),
            other.subgroupoid().morphisms(),
            first,
            scope,
            &mut families_checked,
        );
        if let Some(w) = witness {
            return NsOutcome { holds: false, witness: Some(w), families_checked };
        }
    }
    NsOutcome { holds: true, witness: None, families_checked }
}

/// Oracle variant quantifying over *every* family on each side. Restricted
/// to subsystems with at most eight morphisms.
pub fn no_signalling_exhaustive(a: &Subsystem, b: &Subsystem, scope: FamilyScope) -> NsOutcome {
    assert_same_parent(a, b);
    let mut families_checked = 0;
    for (measured, other, first) in [(a, b, true), (b, a, false)] {
        let witness = run_families(
            all_families(measured.subgroupoid().morphisms()),
            measured.parent(),
            other.subgroupoid().morphisms(),
            first,
            scope,
            &mut families_checked,
        );
        if let Some(w) = witness {
            return NsOutcome { holds: false, witness: Some(w), families_checked };
        }
    }
    NsOutcome { holds: true, witness: None, families_checked }
}
