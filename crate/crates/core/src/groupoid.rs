//! Finite groupoids with validated composition tables.
//!
//! A groupoid here is a finite set of objects, a finite set of labelled
//! morphisms with domain and codomain, a partial composition defined exactly
//! on codomain/domain-matching pairs, and a total inverse. `g.compose(h)`
//! follows the convention that `h` acts first: it is defined precisely when
//! `cod(h) = dom(g)`.
//!
//! Every constructor funnels through the same validator, so a value of type
//! [`Groupoid`] always satisfies associativity, identity and inverse laws.
//! The morphism labels double as the elements of the groupoid's carrier in
//! the relation calculus.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::frobenius::FrobeniusAxiom;
use crate::relcat::{Carrier, Elem};

/// Errors raised by groupoid construction and subgroupoid selection.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    /// The described data does not form a groupoid; the message names the
    /// offending entries.
    #[error("invalid groupoid: {0}")]
    InvalidSpec(String),
    /// A morphism subset is not closed under composition, inverses or the
    /// identities of the objects it touches.
    #[error("morphism set is not closed: {0}")]
    NotClosed(String),
    /// Relational data fails the Frobenius axioms, listing the violated
    /// equations.
    #[error("not a special symmetric dagger Frobenius structure: violated {0:?}")]
    NotFrobenius(Vec<FrobeniusAxiom>),
}

pub type GroupoidResult<T> = Result<T, GroupoidError>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Mor {
    label: Elem,
    dom: usize,
    cod: usize,
}

#[derive(Debug)]
struct GroupoidInner {
    name: String,
    objects: Vec<String>,
    mors: Vec<Mor>,
    /// `compose[g * n + h]` is the index of `g` after `h`, when defined.
    compose: Vec<Option<u32>>,
    inv: Vec<u32>,
    /// Identity morphism index per object.
    ident: Vec<u32>,
    carrier: Carrier,
}

/// A validated finite groupoid. Cloning is cheap (shared storage).
#[derive(Debug, Clone)]
pub struct Groupoid(Arc<GroupoidInner>);

impl Groupoid {
    // -----------------------------------------------------------------------
    // Construction
    // -----------------------------------------------------------------------

    /// Builds and validates a groupoid from raw parts.
    ///
    /// `mors` lists `(label, dom, cod)` triples; `compose(g, h)` must return
    /// the composite "`h` first, then `g`" exactly when `cod(h) = dom(g)`.
    /// Identities and inverses are derived from the table and validated.
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        mors: Vec<(Elem, usize, usize)>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> GroupoidResult<Self> {
        let name = name.into();
        let n = mors.len();
        let mors: Vec<Mor> =
            mors.into_iter().map(|(label, dom, cod)| Mor { label, dom, cod }).collect();
        for (i, m) in mors.iter().enumerate() {
            if m.dom >= objects.len() || m.cod >= objects.len() {
                return Err(GroupoidError::InvalidSpec(format!(
                    "morphism {} (index {i}) has out-of-range endpoints",
                    m.label
                )));
            }
        }
        let carrier = Carrier::new(mors.iter().map(|m| m.label.clone()).collect())
            .map_err(|e| GroupoidError::InvalidSpec(e.to_string()))?;

        // Composition must be defined exactly on matching pairs, with the
        // right endpoints.
        let mut table = vec![None; n * n];
        for g in 0..n {
            for h in 0..n {
                let matching = mors[h].cod == mors[g].dom;
                match compose(g, h) {
                    Some(k) if !matching => {
                        return Err(GroupoidError::InvalidSpec(format!(
                            "composite {} after {} is defined (as {}) but codomain and domain do not match",
                            mors[g].label, mors[h].label, mors.get(k).map(|m| m.label.to_string()).unwrap_or_else(|| format!("#{k}"))
                        )));
                    }
                    None if matching => {
                        return Err(GroupoidError::InvalidSpec(format!(
                            "composite {} after {} is undefined although codomain and domain match",
                            mors[g].label, mors[h].label
                        )));
                    }
                    Some(k) => {
                        if k >= n {
                            return Err(GroupoidError::InvalidSpec(format!(
                                "composite {} after {} points outside the morphism list",
                                mors[g].label, mors[h].label
                            )));
                        }
                        if mors[k].dom != mors[h].dom || mors[k].cod != mors[g].cod {
                            return Err(GroupoidError::InvalidSpec(format!(
                                "composite {} after {} = {} has wrong endpoints",
                                mors[g].label, mors[h].label, mors[k].label
                            )));
                        }
                        table[g * n + h] = Some(k as u32);
                    }
                    None => {}
                }
            }
        }

        // Associativity over all composable triples.
        for g in 0..n {
            for h in 0..n {
                if mors[h].cod != mors[g].dom {
                    continue;
                }
                let gh = table[g * n + h].unwrap() as usize;
                for k in 0..n {
                    if mors[k].cod != mors[h].dom {
                        continue;
                    }
                    let hk = table[h * n + k].unwrap() as usize;
                    let left = table[gh * n + k].unwrap();
                    let right = table[g * n + hk].unwrap();
                    if left != right {
                        return Err(GroupoidError::InvalidSpec(format!(
                            "associativity fails on ({}, {}, {})",
                            mors[g].label, mors[h].label, mors[k].label
                        )));
                    }
                }
            }
        }

        // One neutral endomorphism per object.
        let mut ident = vec![u32::MAX; objects.len()];
        for x in 0..objects.len() {
            let candidate = (0..n).find(|&e| {
                mors[e].dom == x
                    && mors[e].cod == x
                    && (0..n).all(|f| {
                        (mors[f].cod != x || table[e * n + f] == Some(f as u32))
                            && (mors[f].dom != x || table[f * n + e] == Some(f as u32))
                    })
            });
            match candidate {
                Some(e) => ident[x] = e as u32,
                None => {
                    return Err(GroupoidError::InvalidSpec(format!(
                        "object {} has no identity morphism",
                        objects[x]
                    )));
                }
            }
        }

        // Total two-sided inverses.
        let mut inv = vec![u32::MAX; n];
        for g in 0..n {
            let e_dom = ident[mors[g].dom];
            let e_cod = ident[mors[g].cod];
            let candidate = (0..n).find(|&h| {
                table[h * n + g] == Some(e_dom) && table[g * n + h] == Some(e_cod)
            });
            match candidate {
                Some(h) => inv[g] = h as u32,
                None => {
                    return Err(GroupoidError::InvalidSpec(format!(
                        "morphism {} has no inverse",
                        mors[g].label
                    )));
                }
            }
        }

        Ok(Groupoid(Arc::new(GroupoidInner {
            name,
            objects,
            mors,
            compose: table,
            inv,
            ident,
            carrier,
        })))
    }

    /// A one-object groupoid from a group Cayley table.
    ///
    /// `table[i][j]` is the index of the product "`j` first, then `i`".
    pub fn from_group_table(
        name: impl Into<String>,
        labels: Vec<Elem>,
        table: Vec<Vec<usize>>,
    ) -> GroupoidResult<Self> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupoidError::InvalidSpec(format!(
                "Cayley table must be {n} x {n}"
            )));
        }
        let mors = labels.into_iter().map(|l| (l, 0, 0)).collect();
        Groupoid::from_parts(name, vec!["o".to_string()], mors, |g, h| Some(table[g][h]))
    }

    /// The cyclic group of order `n` with morphisms `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic groups need at least one element");
        let labels = (0..n).map(|i| Elem::atom(i.to_string())).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Groupoid::from_group_table(format!("Z{n}"), labels, table)
            .expect("cyclic group table is valid")
    }

    /// The symmetric group on points `1..=n` as a one-object groupoid.
    ///
    /// Morphism labels use cycle notation (`e`, `(12)`, `(123)`, ...), and
    /// composition applies the right factor first.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=4).contains(&n), "symmetric groups are built for 1 <= n <= 4");
        let perms = permutations(n);
        let labels = perms.iter().map(|p| Elem::atom(cycle_notation(p))).collect();
        let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| {
                        let composite: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
                        index_of(&composite)
                    })
                    .collect()
            })
            .collect();
        Groupoid::from_group_table(format!("S{n}"), labels, table)
            .expect("symmetric group table is valid")
    }

    /// The discrete groupoid on `n` objects: identities only.
    pub fn discrete(n: usize) -> Self {
        let objects: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mors = (0..n).map(|i| (Elem::atom(format!("id_{}", i + 1)), i, i)).collect();
        Groupoid::from_parts(format!("discrete{n}"), objects, mors, |g, h| {
            (g == h).then_some(g)
        })
        .expect("discrete groupoid is valid")
    }

    /// The indiscrete groupoid on the given objects: exactly one morphism
    /// `(a,b): a -> b` for every ordered pair of objects.
    pub fn indiscrete_on(name: impl Into<String>, objects: Vec<String>) -> Self {
        let n = objects.len();
        assert!(n >= 1, "indiscrete groupoids need at least one object");
        let mut mors = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mors.push((Elem::tuple([objects[a].clone(), objects[b].clone()]), a, b));
            }
        }
        // (b,c) after (a,b) is (a,c): indices g = b*n + c, h = a*n + b.
        Groupoid::from_parts(name, objects, mors, move |g, h| {
            let (gb, gc) = (g / n, g % n);
            let (ha, hb) = (h / n, h % n);
            (hb == gb).then_some(ha * n + gc)
        })
        .expect("indiscrete groupoid is valid")
    }

    /// The indiscrete groupoid on objects `0..n`.
    pub fn indiscrete(n: usize) -> Self {
        Groupoid::indiscrete_on(format!("indiscrete{n}"), (0..n).map(|i| i.to_string()).collect())
    }

    /// The one-object, one-morphism groupoid whose carrier is the unit
    /// carrier.
    pub fn unit_groupoid() -> Self {
        Groupoid::from_parts(
            "unit",
            vec!["*".to_string()],
            vec![(Elem::unit(), 0, 0)],
            |_, _| Some(0),
        )
        .expect("unit groupoid is valid")
    }

    /// Disjoint union, relabelling every atom with a part prefix
    /// (`0.`, `1.`, ...) so that label collisions cannot occur.
    pub fn disjoint_union_prefixed(name: impl Into<String>, parts: &[Groupoid]) -> Self {
        let relabelled: Vec<Groupoid> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| p.relabel_atoms(&format!("{i}.")))
            .collect();
        Groupoid::disjoint_union_strict(name, &relabelled)
            .expect("prefixed parts cannot collide")
    }

    /// Disjoint union keeping all labels; fails if object names or morphism
    /// labels collide across parts.
    pub fn disjoint_union_strict(
        name: impl Into<String>,
        parts: &[Groupoid],
    ) -> GroupoidResult<Self> {
        let mut objects = Vec::new();
        let mut mors = Vec::new();
        let mut part_of = Vec::new();
        let mut mor_base = Vec::new();
        let mut obj_base = Vec::new();
        for (pi, p) in parts.iter().enumerate() {
            obj_base.push(objects.len());
            mor_base.push(mors.len());
            for o in p.objects() {
                if objects.contains(o) {
                    return Err(GroupoidError::InvalidSpec(format!(
                        "object name {o} occurs in more than one union part"
                    )));
                }
                objects.push(o.clone());
            }
            for m in 0..p.morphism_count() {
                mors.push((
                    p.label(m).clone(),
                    obj_base[pi] + p.dom(m),
                    obj_base[pi] + p.cod(m),
                ));
                part_of.push(pi);
            }
        }
        let parts_owned: Vec<Groupoid> = parts.to_vec();
        Groupoid::from_parts(name, objects, mors, move |g, h| {
            let pg = part_of[g];
            if part_of[h] != pg {
                return None;
            }
            parts_owned[pg]
                .compose(g - mor_base[pg], h - mor_base[pg])
                .map(|k| k + mor_base[pg])
        })
    }

    /// Product groupoid: objects are object pairs, morphisms compose
    /// componentwise, and the morphism carrier is the tensor product of the
    /// factor carriers.
    pub fn product(a: &Groupoid, b: &Groupoid) -> Self {
        let (no_b, nm_b) = (b.object_count(), b.morphism_count());
        let mut objects = Vec::with_capacity(a.object_count() * no_b);
        for x in a.objects() {
            for y in b.objects() {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut mors = Vec::with_capacity(a.morphism_count() * nm_b);
        for f in 0..a.morphism_count() {
            for g in 0..b.morphism_count() {
                mors.push((
                    a.label(f).join(b.label(g)),
                    a.dom(f) * no_b + b.dom(g),
                    a.cod(f) * no_b + b.cod(g),
                ));
            }
        }
        let (ac, bc) = (a.clone(), b.clone());
        Groupoid::from_parts(
            format!("{}x{}", a.name(), b.name()),
            objects,
            mors,
            move |g, h| {
                let (g1, g2) = (g / nm_b, g % nm_b);
                let (h1, h2) = (h / nm_b, h % nm_b);
                match (ac.compose(g1, h1), bc.compose(g2, h2)) {
                    (Some(k1), Some(k2)) => Some(k1 * nm_b + k2),
                    _ => None,
                }
            },
        )
        .expect("product of valid groupoids is valid")
    }

    fn relabel_atoms(&self, prefix: &str) -> Groupoid {
        let objects = self.objects().iter().map(|o| format!("{prefix}{o}")).collect();
        let mors = (0..self.morphism_count())
            .map(|m| {
                let atoms: Vec<String> =
                    self.label(m).atoms().iter().map(|a| format!("{prefix}{a}")).collect();
                (Elem::tuple(atoms), self.dom(m), self.cod(m))
            })
            .collect();
        let this = self.clone();
        Groupoid::from_parts(format!("{prefix}{}", self.name()), objects, mors, move |g, h| {
            this.compose(g, h)
        })
        .expect("relabelling preserves validity")
    }

    /// Same structure with a different display name.
    pub fn renamed(&self, name: impl Into<String>) -> Groupoid {
        let this = self.clone();
        Groupoid::from_parts(
            name,
            self.objects().to_vec(),
            (0..self.morphism_count())
                .map(|m| (self.label(m).clone(), self.dom(m), self.cod(m)))
                .collect(),
            move |g, h| this.compose(g, h),
        )
        .expect("renaming preserves validity")
    }

    // -----------------------------------------------------------------------
    // Accessors
    // -----------------------------------------------------------------------

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn objects(&self) -> &[String] {
        &self.0.objects
    }

    pub fn object_count(&self) -> usize {
        self.0.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.0.mors.len()
    }

    pub fn label(&self, m: usize) -> &Elem {
        &self.0.mors[m].label
    }

    pub fn dom(&self, m: usize) -> usize {
        self.0.mors[m].dom
    }

    pub fn cod(&self, m: usize) -> usize {
        self.0.mors[m].cod
    }

    /// The composite "`h` first, then `g`", when `cod(h) = dom(g)`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.0.compose[g * self.morphism_count() + h].map(|k| k as usize)
    }

    pub fn inv(&self, m: usize) -> usize {
        self.0.inv[m] as usize
    }

    /// The identity morphism of an object.
    pub fn identity_of(&self, object: usize) -> usize {
        self.0.ident[object] as usize
    }

    /// The identity on the domain of a morphism.
    pub fn ident_of_dom(&self, m: usize) -> usize {
        self.identity_of(self.dom(m))
    }

    /// The identity on the codomain of a morphism.
    pub fn ident_of_cod(&self, m: usize) -> usize {
        self.identity_of(self.cod(m))
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity_of(self.dom(m)) == m
    }

    /// All identity morphisms, in object order.
    pub fn identities(&self) -> Vec<usize> {
        self.0.ident.iter().map(|&e| e as usize).collect()
    }

    /// The morphism carrier: labels in morphism order.
    pub fn carrier(&self) -> &Carrier {
        &self.0.carrier
    }

    pub fn morphism_by_label(&self, label: &Elem) -> Option<usize> {
        self.carrier().index_of(label)
    }

    // -----------------------------------------------------------------------
    // Structure predicates
    // -----------------------------------------------------------------------

    /// Whether every morphism is an endomorphism.
    pub fn is_totally_disconnected(&self) -> bool {
        (0..self.morphism_count()).all(|m| self.dom(m) == self.cod(m))
    }

    /// One-object groupoids are exactly the groups.
    pub fn is_group(&self) -> bool {
        self.object_count() == 1
    }

    /// Whether the groupoid has only identity morphisms.
    pub fn is_discrete(&self) -> bool {
        (0..self.morphism_count()).all(|m| self.is_identity(m))
    }

    /// Whether the groupoid is a disjoint union of abelian groups: every
    /// morphism is an endomorphism and endomorphisms of the same object
    /// commute.
    pub fn is_disjoint_union_of_abelian_groups(&self) -> bool {
        if !self.is_totally_disconnected() {
            return false;
        }
        let n = self.morphism_count();
        (0..n).all(|g| {
            (0..n)
                .filter(|&h| self.dom(h) == self.dom(g))
                .all(|h| self.compose(g, h) == self.compose(h, g))
        })
    }

    /// Connected-component index per object.
    pub fn object_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.object_count()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for m in 0..self.morphism_count() {
            let (a, b) = (find(&mut parent, self.dom(m)), find(&mut parent, self.cod(m)));
            if a != b {
                parent[a] = b;
            }
        }
        let mut canon = vec![usize::MAX; self.object_count()];
        let mut next = 0;
        (0..self.object_count())
            .map(|x| {
                let root = find(&mut parent, x);
                if canon[root] == usize::MAX {
                    canon[root] = next;
                    next += 1;
                }
                canon[root]
            })
            .collect()
    }

    /// Structural equality that ignores object names.
    ///
    /// Objects are identified through their identity morphisms, so two
    /// groupoids are considered the same when their morphism lists, endpoint
    /// assignments, composition tables and inverses coincide.
    pub fn same_structure(&self, other: &Groupoid) -> bool {
        let n = self.morphism_count();
        if other.morphism_count() != n || other.object_count() != self.object_count() {
            return false;
        }
        (0..n).all(|m| {
            self.label(m) == other.label(m)
                && self.identity_of(self.dom(m)) == other.identity_of(other.dom(m))
                && self.identity_of(self.cod(m)) == other.identity_of(other.cod(m))
                && self.inv(m) == other.inv(m)
        }) && self.0.compose == other.0.compose
    }
}

impl PartialEq for Groupoid {
    /// Full structural equality including object names (display name
    /// excluded).
    fn eq(&self, other: &Self) -> bool {
        self.0.objects == other.0.objects
            && self.0.mors == other.0.mors
            && self.0.compose == other.0.compose
    }
}

impl Eq for Groupoid {}

impl fmt::Display for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "groupoid {} ({} objects, {} morphisms)",
            self.name(),
            self.object_count(),
            self.morphism_count()
        )?;
        for m in 0..self.morphism_count() {
            writeln!(
                f,
                "  {}: {} -> {}",
                self.label(m),
                self.objects()[self.dom(m)],
                self.objects()[self.cod(m)]
            )?;
        }
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            for x in 0..n {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        out.push('(');
        for c in &cycle {
            out.push_str(&(c + 1).to_string());
        }
        out.push(')');
    }
    if out.is_empty() { "e".to_string() } else { out }
}

// ---------------------------------------------------------------------------
// Subgroupoids
// ---------------------------------------------------------------------------

/// A subgroupoid given by a closed morphism subset of a parent groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupoidRef {
    parent: Groupoid,
    /// Parent morphism indices, sorted.
    mors: Vec<usize>,
    /// Parent object indices touched by the subset, sorted.
    objects: Vec<usize>,
}

impl SubgroupoidRef {
    /// Validates that the subset is closed under composition, inverses and
    /// the identities of every object it touches.
    pub fn new(parent: &Groupoid, mut mors: Vec<usize>) -> GroupoidResult<Self> {
        mors.sort_unstable();
        mors.dedup();
        let inside = |m: usize| mors.binary_search(&m).is_ok();
        for &g in &mors {
            if g >= parent.morphism_count() {
                return Err(GroupoidError::NotClosed(format!(
                    "morphism index {g} is out of range"
                )));
            }
            if !inside(parent.inv(g)) {
                return Err(GroupoidError::NotClosed(format!(
                    "{} is included but its inverse {} is not",
                    parent.label(g),
                    parent.label(parent.inv(g))
                )));
            }
            for e in [parent.ident_of_dom(g), parent.ident_of_cod(g)] {
                if !inside(e) {
                    return Err(GroupoidError::NotClosed(format!(
                        "{} is included but the identity {} is not",
                        parent.label(g),
                        parent.label(e)
                    )));
                }
            }
            for &h in &mors {
                if let Some(k) = parent.compose(g, h) {
                    if !inside(k) {
                        return Err(GroupoidError::NotClosed(format!(
                            "{} and {} are included but their composite {} is not",
                            parent.label(g),
                            parent.label(h),
                            parent.label(k)
                        )));
                    }
                }
            }
        }
        let mut objects: Vec<usize> =
            mors.iter().flat_map(|&m| [parent.dom(m), parent.cod(m)]).collect();
        objects.sort_unstable();
        objects.dedup();
        Ok(SubgroupoidRef { parent: parent.clone(), mors, objects })
    }

    /// Subgroupoid selected by morphism labels.
    pub fn from_labels(parent: &Groupoid, labels: &[Elem]) -> GroupoidResult<Self> {
        let mut mors = Vec::with_capacity(labels.len());
        for l in labels {
            match parent.morphism_by_label(l) {
                Some(m) => mors.push(m),
                None => {
                    return Err(GroupoidError::NotClosed(format!(
                        "label {l} does not name a morphism of {}",
                        parent.name()
                    )));
                }
            }
        }
        SubgroupoidRef::new(parent, mors)
    }

    /// The wide subgroupoid of all identities.
    pub fn trivial_wide(parent: &Groupoid) -> Self {
        SubgroupoidRef::new(parent, parent.identities())
            .expect("identity subset is always closed")
    }

    /// The whole parent as a subgroupoid of itself.
    pub fn full(parent: &Groupoid) -> Self {
        SubgroupoidRef::new(parent, (0..parent.morphism_count()).collect())
            .expect("the full morphism set is closed")
    }

    pub fn parent(&self) -> &Groupoid {
        &self.parent
    }

    /// Parent morphism indices of the subset, sorted.
    pub fn morphisms(&self) -> &[usize] {
        &self.mors
    }

    /// Parent object indices touched by the subset, sorted.
    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    /// Wide subgroupoids touch every object of the parent.
    pub fn is_wide(&self) -> bool {
        self.objects.len() == self.parent.object_count()
    }

    /// Whether the subset contains only identity morphisms.
    pub fn is_trivial(&self) -> bool {
        self.mors.iter().all(|&m| self.parent.is_identity(m))
    }

    /// Materialises the subgroupoid as a groupoid of its own, keeping the
    /// parent's labels and object names.
    pub fn to_groupoid(&self) -> Groupoid {
        let objects: Vec<String> =
            self.objects.iter().map(|&o| self.parent.objects()[o].clone()).collect();
        let obj_pos = |o: usize| self.objects.binary_search(&o).unwrap();
        let mors = self
            .mors
            .iter()
            .map(|&m| {
                (self.parent.label(m).clone(), obj_pos(self.parent.dom(m)), obj_pos(self.parent.cod(m)))
            })
            .collect();
        let parent = self.parent.clone();
        let subset = self.mors.clone();
        Groupoid::from_parts(
            format!("{}|{}", self.parent.name(), self.mors.len()),
            objects,
            mors,
            move |g, h| {
                parent
                    .compose(subset[g], subset[h])
                    .map(|k| subset.binary_search(&k).expect("closure was validated"))
            },
        )
        .expect("a closed subset forms a groupoid")
    }

    /// Parent index of the `i`-th subgroupoid morphism.
    pub fn parent_index(&self, i: usize) -> usize {
        self.mors[i]
    }
}

/// Whether a morphism subset is a wide subgroupoid of `parent`.
pub fn is_wide_subgroupoid(parent: &Groupoid, mors: &[usize]) -> GroupoidResult<bool> {
    Ok(SubgroupoidRef::new(parent, mors.to_vec())?.is_wide())
}

/// Enumerates every subgroupoid (closed morphism subset) of a groupoid.
///
/// Intended for small groupoids; the subset enumeration is exhaustive.
pub fn all_subgroupoids(parent: &Groupoid) -> Vec<SubgroupoidRef> {
    let n = parent.morphism_count();
    assert!(n <= 16, "subgroupoid enumeration is restricted to at most 16 morphisms");
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let mors: Vec<usize> = (0..n).filter(|&m| mask >> m & 1 == 1).collect();
        if let Ok(sub) = SubgroupoidRef::new(parent, mors) {
            out.push(sub);
        }
    }
    out
}
