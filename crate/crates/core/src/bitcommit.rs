//! A bit-commitment protocol over groupoid states, checked exhaustively.
//!
//! Alice and Bob share a product system. A commitment to heads or tails is
//! a closed state of the product, induced by a set of object pairs; a
//! classical record system accompanies the protocol, built so that its only
//! copyable states are the two commitments. The security questions are:
//!
//! * *soundness* — the unveiling channel returns each honest commitment
//!   unchanged;
//! * *concealing* — Bob's marginals of the two commitments coincide, so
//!   the committed bit is invisible on his side;
//! * *binding* — no cheating channel on Alice's side, drawn from a given
//!   adversary class of inverse-respecting relations, converts one
//!   commitment into the other.
//!
//! Binding is decided by cardinality arguments on the fibers of the
//! commitments over Bob's morphisms where possible, and otherwise by an
//! exhaustive three-state constraint search with an explicit node budget;
//! running out of budget yields an inconclusive verdict, never a claim of
//! security.

use std::collections::{BTreeSet, HashSet};

use crate::cpstar::broadcast::{counit_relation, decide_broadcastable};
use crate::cpstar::{
    closed_states, copyable_states, inverse_respecting_violation, is_closed_state,
    is_inverse_respecting, state_relation, CpError, CpResult,
};
use crate::groupoid::Groupoid;
use crate::relcat::{Elem, Relation};

/// Restrictions on the cheating channels quantified over in the binding
/// check. Every class is additionally intersected with the
/// inverse-respecting relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryClass {
    /// Graphs of functions: every source morphism has exactly one image.
    FunctionGraphs,
    /// Graphs of bijections: exactly one image and one preimage each.
    BijectionGraphs,
    /// Isometries: total, with pairwise disjoint images.
    Isometries,
    /// No restriction beyond inverse-respecting.
    AllCpMorphisms,
}

impl AdversaryClass {
    pub fn name(self) -> &'static str {
        match self {
            AdversaryClass::FunctionGraphs => "functions",
            AdversaryClass::BijectionGraphs => "bijections",
            AdversaryClass::Isometries => "isometries",
            AdversaryClass::AllCpMorphisms => "all cp morphisms",
        }
    }

    /// Allowed images per source morphism.
    fn row_bounds(self, n: usize) -> (usize, usize) {
        match self {
            AdversaryClass::FunctionGraphs | AdversaryClass::BijectionGraphs => (1, 1),
            AdversaryClass::Isometries => (1, n),
            AdversaryClass::AllCpMorphisms => (0, n),
        }
    }

    /// Allowed preimages per target morphism.
    fn col_bounds(self, n: usize) -> (usize, usize) {
        match self {
            AdversaryClass::BijectionGraphs => (1, 1),
            AdversaryClass::Isometries => (0, 1),
            AdversaryClass::FunctionGraphs | AdversaryClass::AllCpMorphisms => (0, n),
        }
    }

    /// Whether a relation satisfies the class shape (ignoring the
    /// inverse-respecting requirement, which is checked separately).
    pub fn admits(self, rel: &Relation) -> bool {
        let n = rel.src().len();
        let (rmin, rmax) = self.row_bounds(n);
        let (cmin, cmax) = self.col_bounds(n);
        let rows_ok =
            (0..rel.src().len()).all(|i| (rmin..=rmax).contains(&rel.image_of(i).len()));
        let dag = rel.dagger();
        let cols_ok =
            (0..rel.tgt().len()).all(|j| (cmin..=cmax).contains(&dag.image_of(j).len()));
        rows_ok && cols_ok
    }
}

/// Which commitment a cheating channel is asked to convert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheatDirection {
    HeadsToTails,
    TailsToHeads,
}

/// The result of a binding check against one adversary class.
#[derive(Debug, Clone)]
pub enum BindingVerdict {
    /// No cheat exists in the class; the refutation explains why.
    Binding { refutation: String },
    /// A verified cheating channel.
    CheatFound { direction: CheatDirection, cheat: Relation },
    /// The search exceeded its node budget before deciding.
    Inconclusive { budget: u64 },
}

#[derive(Debug, Clone)]
pub struct BindingOutcome {
    pub verdict: BindingVerdict,
    pub nodes_examined: u64,
}

#[derive(Debug, Clone)]
pub struct SoundOutcome {
    pub sound: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConcealingOutcome {
    pub concealing: bool,
    /// Bob's view of the heads commitment, by label.
    pub h_marginal: Vec<Elem>,
    /// Bob's view of the tails commitment, by label.
    pub t_marginal: Vec<Elem>,
}

/// Combined report over the standard adversary ladder.
#[derive(Debug, Clone)]
pub struct SecurityReport {
    pub sound: SoundOutcome,
    pub concealing: ConcealingOutcome,
    pub bindings: Vec<(AdversaryClass, BindingOutcome)>,
}

/// A validated commitment protocol.
#[derive(Debug, Clone)]
pub struct BitCommitmentProtocol {
    alice: Groupoid,
    bob: Groupoid,
    product: Groupoid,
    h: Vec<usize>,
    t: Vec<usize>,
    unveil: Relation,
    classical: Groupoid,
    h_hat: Vec<usize>,
    t_hat: Vec<usize>,
}

impl BitCommitmentProtocol {
    pub fn alice(&self) -> &Groupoid {
        &self.alice
    }

    pub fn bob(&self) -> &Groupoid {
        &self.bob
    }

    pub fn product(&self) -> &Groupoid {
        &self.product
    }

    /// Heads commitment, as product morphism indices.
    pub fn heads(&self) -> &[usize] {
        &self.h
    }

    /// Tails commitment, as product morphism indices.
    pub fn tails(&self) -> &[usize] {
        &self.t
    }

    pub fn unveil(&self) -> &Relation {
        &self.unveil
    }

    /// The classical record system.
    pub fn classical(&self) -> &Groupoid {
        &self.classical
    }

    /// Replaces the unveiling channel and revalidates.
    pub fn with_unveil(mut self, unveil: Relation) -> CpResult<Self> {
        self.unveil = unveil;
        self.validate()?;
        Ok(self)
    }

    /// Checks every structural invariant of the protocol.
    pub fn validate(&self) -> CpResult<()> {
        let invalid = |msg: String| Err(CpError::InvalidProtocol(msg));
        if self.product != Groupoid::product(&self.alice, &self.bob) {
            return invalid("the shared system is not the product of the two sides".into());
        }
        for (name, state) in [("heads", &self.h), ("tails", &self.t)] {
            if state.is_empty() || state.iter().any(|&m| m >= self.product.morphism_count()) {
                return invalid(format!("the {name} commitment is empty or out of range"));
            }
            if !is_closed_state(&self.product, state) {
                return invalid(format!("the {name} commitment is not a closed state"));
            }
        }
        if self.h == self.t {
            return invalid("the two commitments coincide".into());
        }

        // The classical record: a broadcastable system whose labels come
        // from the shared carrier and whose copyable states are exactly the
        // two commitments.
        if !self.classical.is_totally_disconnected() {
            return invalid("the record system has a non-endomorphism".into());
        }
        if !decide_broadcastable(&self.classical, 0).broadcastable {
            return invalid("the record system is not broadcastable".into());
        }
        for m in 0..self.classical.morphism_count() {
            if self.product.morphism_by_label(self.classical.label(m)).is_none() {
                return invalid(format!(
                    "record label {} does not occur in the shared carrier",
                    self.classical.label(m)
                ));
            }
        }
        let copyables = copyable_states(&self.classical);
        let mut expected = vec![self.h_hat.clone(), self.t_hat.clone()];
        expected.sort();
        if copyables != expected {
            return invalid(format!(
                "the record system has {} copyable states where exactly the two commitments were expected",
                copyables.len()
            ));
        }
        let label_set = |g: &Groupoid, mors: &[usize]| -> BTreeSet<Elem> {
            mors.iter().map(|&m| g.label(m).clone()).collect()
        };
        if label_set(&self.classical, &self.h_hat) != label_set(&self.product, &self.h)
            || label_set(&self.classical, &self.t_hat) != label_set(&self.product, &self.t)
        {
            return invalid("record states do not match the commitments label for label".into());
        }

        // The unveiling channel must live in the category and must not
        // merge states.
        if self.unveil.src() != self.product.carrier()
            || self.unveil.tgt() != self.product.carrier()
        {
            return invalid("the unveiling channel is not an endo-channel of the shared system".into());
        }
        if let Some(detail) =
            inverse_respecting_violation(&self.product, &self.product, &self.unveil)
        {
            return Err(CpError::NotInverseRespecting(detail));
        }
        let n = self.product.morphism_count();
        let words = n.div_ceil(64);
        let rows: Vec<Vec<usize>> = (0..n).map(|m| self.unveil.image_of(m)).collect();
        let mut images: HashSet<Vec<u64>> = HashSet::new();
        for s in closed_states(&self.product) {
            let mut mask = vec![0u64; words];
            for &m in &s {
                for &j in &rows[m] {
                    mask[j / 64] |= 1 << (j % 64);
                }
            }
            if !images.insert(mask) {
                return invalid("the unveiling channel merges two closed states".into());
            }
        }
        Ok(())
    }

    /// Whether unveiling returns both honest commitments unchanged.
    pub fn check_sound(&self) -> SoundOutcome {
        for (name, state) in [("heads", &self.h), ("tails", &self.t)] {
            let image = state_relation(&self.product, state)
                .then(&self.unveil)
                .expect("carriers line up")
                .image_of(0);
            if &image != state {
                return SoundOutcome {
                    sound: false,
                    failure: Some(format!("unveiling disturbs the {name} commitment")),
                };
            }
        }
        SoundOutcome { sound: true, failure: None }
    }

    /// Bob's marginal of a commitment: what remains after discarding
    /// Alice's side.
    pub fn bob_marginal(&self, state: &[usize]) -> Vec<Elem> {
        let rel = state_relation(&self.product, state)
            .then(&counit_relation(&self.alice).tensor(&Relation::identity(self.bob.carrier())))
            .expect("marginal carriers line up");
        rel.image_of(0).into_iter().map(|m| self.bob.label(m).clone()).collect()
    }

    /// Whether the two commitments look identical on Bob's side.
    pub fn check_concealing(&self) -> ConcealingOutcome {
        let h_marginal = self.bob_marginal(&self.h);
        let t_marginal = self.bob_marginal(&self.t);
        ConcealingOutcome { concealing: h_marginal == t_marginal, h_marginal, t_marginal }
    }

    /// The fibers of a commitment over Bob's morphisms, in carrier order:
    /// for each of Bob's morphisms, the Alice morphisms paired with it.
    pub fn fibers(&self, state: &[usize]) -> Vec<Vec<usize>> {
        let nb = self.bob.morphism_count();
        let mut fibers = vec![Vec::new(); nb];
        for &m in state {
            fibers[m % nb].push(m / nb);
        }
        fibers
    }

    /// Searches the adversary class for a channel on Alice's side carrying
    /// one commitment exactly onto the other, in either direction.
    pub fn check_binding(&self, class: AdversaryClass, budget: u64) -> BindingOutcome {
        let mut nodes_total = 0u64;
        let mut refutations = Vec::new();
        for direction in [CheatDirection::HeadsToTails, CheatDirection::TailsToHeads] {
            let (src, tgt) = match direction {
                CheatDirection::HeadsToTails => (self.fibers(&self.h), self.fibers(&self.t)),
                CheatDirection::TailsToHeads => (self.fibers(&self.t), self.fibers(&self.h)),
            };
            if let Some(reason) = self.fiber_cardinality_refutation(class, &src, &tgt) {
                refutations.push(format!("{direction:?}: {reason}"));
                continue;
            }
            match self.search_cheat(class, &src, &tgt, budget) {
                SearchResult::Found(cheat, nodes) => {
                    nodes_total += nodes;
                    self.assert_cheat(class, direction, &cheat);
                    return BindingOutcome {
                        verdict: BindingVerdict::CheatFound { direction, cheat },
                        nodes_examined: nodes_total,
                    };
                }
                SearchResult::Exhausted(nodes) => {
                    nodes_total += nodes;
                    refutations.push(format!(
                        "{direction:?}: exhaustive search over {nodes} assignments found no channel"
                    ));
                }
                SearchResult::BudgetExceeded(nodes) => {
                    nodes_total += nodes;
                    return BindingOutcome {
                        verdict: BindingVerdict::Inconclusive { budget },
                        nodes_examined: nodes_total,
                    };
                }
            }
        }
        BindingOutcome {
            verdict: BindingVerdict::Binding { refutation: refutations.join("; ") },
            nodes_examined: nodes_total,
        }
    }

    /// Cardinality obstruction: classes whose members cannot grow (or
    /// shrink) images are refuted by a single fiber size comparison.
    fn fiber_cardinality_refutation(
        &self,
        class: AdversaryClass,
        src: &[Vec<usize>],
        tgt: &[Vec<usize>],
    ) -> Option<String> {
        let n = self.alice.morphism_count();
        let (_, rmax) = class.row_bounds(n);
        let (_, cmax) = class.col_bounds(n);
        for b in 0..src.len() {
            // Each source morphism contributes at most rmax images.
            if src[b].len() * rmax < tgt[b].len() {
                return Some(format!(
                    "over {} the source fiber has {} morphisms and cannot cover the {} required",
                    self.bob.label(b),
                    src[b].len(),
                    tgt[b].len()
                ));
            }
            // Each target morphism absorbs at most cmax sources, and every
            // source in the fiber needs an image inside the target fiber
            // when rows are total.
            let (rmin, _) = class.row_bounds(n);
            if rmin >= 1 && tgt[b].len() * cmax < src[b].len() {
                return Some(format!(
                    "over {} the target fiber has {} morphisms and cannot absorb the {} mapped into it",
                    self.bob.label(b),
                    tgt[b].len(),
                    src[b].len()
                ));
            }
        }
        None
    }

    fn assert_cheat(&self, class: AdversaryClass, direction: CheatDirection, cheat: &Relation) {
        assert!(
            is_inverse_respecting(&self.alice, &self.alice, cheat),
            "search returned a channel outside the category"
        );
        assert!(class.admits(cheat), "search returned a channel outside the class");
        let (src, tgt) = match direction {
            CheatDirection::HeadsToTails => (&self.h, &self.t),
            CheatDirection::TailsToHeads => (&self.t, &self.h),
        };
        let moved = state_relation(&self.product, src)
            .then(&cheat.tensor(&Relation::identity(self.bob.carrier())))
            .expect("carriers line up");
        assert_eq!(
            moved,
            state_relation(&self.product, tgt),
            "search returned a channel that does not convert the commitment"
        );
    }

    fn search_cheat(
        &self,
        class: AdversaryClass,
        src: &[Vec<usize>],
        tgt: &[Vec<usize>],
        budget: u64,
    ) -> SearchResult {
        let n = self.alice.morphism_count();
        let mut engine = CheatSearch {
            g: &self.alice,
            n,
            cells: vec![Cell::Unknown; n * n],
            row_bounds: class.row_bounds(n),
            col_bounds: class.col_bounds(n),
            coverage: Vec::new(),
            nodes: 0,
            budget,
        };
        // Image restriction: a source morphism lying in several fibers may
        // only reach the intersection of the target fibers.
        for b in 0..src.len() {
            let allowed: Vec<bool> = {
                let mut mask = vec![false; n];
                for &a in &tgt[b] {
                    mask[a] = true;
                }
                mask
            };
            for &a in &src[b] {
                for c in 0..n {
                    if !allowed[c] && !engine.set(a, c, Cell::Out) {
                        return SearchResult::Exhausted(engine.nodes);
                    }
                }
            }
            for &c in &tgt[b] {
                engine.coverage.push((c, src[b].clone()));
            }
        }
        engine.run()
    }

    /// Full security sweep over the standard adversary ladder.
    pub fn check_secure(&self, budget: u64) -> SecurityReport {
        SecurityReport {
            sound: self.check_sound(),
            concealing: self.check_concealing(),
            bindings: [
                AdversaryClass::FunctionGraphs,
                AdversaryClass::BijectionGraphs,
                AdversaryClass::Isometries,
                AdversaryClass::AllCpMorphisms,
            ]
            .into_iter()
            .map(|c| (c, self.check_binding(c, budget)))
            .collect(),
        }
    }
}

/// Builds a protocol from object-pair lists.
///
/// Each commitment is the closed state of all product morphisms between its
/// object pairs. The classical record is the disjoint union of two
/// one-object groupoids whose morphisms borrow the commitment labels, with
/// the componentwise cyclic group structure on pair indices.
pub fn protocol_from_object_pairs(
    alice: &Groupoid,
    bob: &Groupoid,
    h_objects: &[(usize, usize)],
    t_objects: &[(usize, usize)],
) -> CpResult<BitCommitmentProtocol> {
    let product = Groupoid::product(alice, bob);
    let state_of = |objs: &[(usize, usize)]| -> CpResult<Vec<usize>> {
        for &(a, b) in objs {
            if a >= alice.object_count() || b >= bob.object_count() {
                return Err(CpError::InvalidProtocol(format!(
                    "object pair ({a}, {b}) is out of range"
                )));
            }
        }
        let mut mors = Vec::new();
        for &(a1, b1) in objs {
            for &(a2, b2) in objs {
                let po1 = a1 * bob.object_count() + b1;
                let po2 = a2 * bob.object_count() + b2;
                let m = (0..product.morphism_count())
                    .find(|&m| product.dom(m) == po1 && product.cod(m) == po2)
                    .ok_or_else(|| {
                        CpError::InvalidProtocol(format!(
                            "no morphism between object pairs ({a1},{b1}) and ({a2},{b2})"
                        ))
                    })?;
                mors.push(m);
            }
        }
        mors.sort_unstable();
        mors.dedup();
        Ok(mors)
    };
    let h = state_of(h_objects)?;
    let t = state_of(t_objects)?;

    let record_group = |name: &str, objs: &[(usize, usize)]| -> CpResult<Groupoid> {
        let k = objs.len();
        let label_of = |i: usize, j: usize| -> CpResult<Elem> {
            let (a1, b1) = objs[i];
            let (a2, b2) = objs[j];
            let po1 = a1 * bob.object_count() + b1;
            let po2 = a2 * bob.object_count() + b2;
            let m = (0..product.morphism_count())
                .find(|&m| product.dom(m) == po1 && product.cod(m) == po2)
                .ok_or_else(|| CpError::InvalidProtocol("missing record label".into()))?;
            Ok(product.label(m).clone())
        };
        let mut mors = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                mors.push((label_of(i, j)?, 0, 0));
            }
        }
        // One object carrying the commitment name, with componentwise
        // addition on pair indices as the group structure.
        let g = Groupoid::from_parts(name, vec![name.to_string()], mors, move |g, h| {
            let (i1, j1) = (g / k, g % k);
            let (i2, j2) = (h / k, h % k);
            Some(((i1 + i2) % k) * k + (j1 + j2) % k)
        })?;
        Ok(g)
    };
    let classical = Groupoid::disjoint_union_strict(
        "record",
        &[record_group("H", h_objects)?, record_group("T", t_objects)?],
    )?;
    let h_hat: Vec<usize> = (0..h.len()).collect();
    let t_hat: Vec<usize> = (h.len()..h.len() + t.len()).collect();

    let protocol = BitCommitmentProtocol {
        alice: alice.clone(),
        bob: bob.clone(),
        unveil: Relation::identity(product.carrier()),
        product,
        h,
        t,
        classical,
        h_hat,
        t_hat,
    };
    protocol.validate()?;
    Ok(protocol)
}

/// The built-in protocol: Alice holds a three-object connected system, Bob
/// a two-object one, and the commitments pair Alice's objects with Bob's in
/// two complementary ways.
pub fn builtin_protocol() -> BitCommitmentProtocol {
    let alice = Groupoid::indiscrete_on("A", vec!["0".into(), "1".into(), "2".into()]);
    let bob = Groupoid::indiscrete_on("B", vec!["x".into(), "y".into()]);
    protocol_from_object_pairs(&alice, &bob, &[(0, 0), (1, 1), (2, 1)], &[(0, 1), (1, 0), (2, 0)])
        .expect("the built-in protocol validates")
}

// ---------------------------------------------------------------------------
// Constraint search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Unknown,
    In,
    Out,
}

enum SearchResult {
    Found(Relation, u64),
    Exhausted(u64),
    BudgetExceeded(u64),
}

/// Three-state search for an inverse-respecting relation with prescribed
/// fiber images and row/column cardinality bounds.
struct CheatSearch<'a> {
    g: &'a Groupoid,
    n: usize,
    cells: Vec<Cell>,
    row_bounds: (usize, usize),
    col_bounds: (usize, usize),
    /// Each entry `(c, rows)` demands an `In` cell at `(r, c)` for some
    /// listed row.
    coverage: Vec<(usize, Vec<usize>)>,
    nodes: u64,
    budget: u64,
}

impl CheatSearch<'_> {
    fn get(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.n + c]
    }

    /// Sets a cell, returning false on contradiction. `In` assignments are
    /// immediately closed under the inverse-respecting rules.
    fn set(&mut self, r: usize, c: usize, v: Cell) -> bool {
        match (self.get(r, c), v) {
            (Cell::Unknown, _) => {}
            (cur, want) => return cur == want,
        }
        self.cells[r * self.n + c] = v;
        if v == Cell::In {
            let inv = (self.g.inv(r), self.g.inv(c));
            let ids = (self.g.ident_of_dom(r), self.g.ident_of_dom(c));
            if !self.set(inv.0, inv.1, Cell::In) || !self.set(ids.0, ids.1, Cell::In) {
                return false;
            }
        } else {
            // The inverse rule is an involution, so its contrapositive is
            // immediate.
            let inv = (self.g.inv(r), self.g.inv(c));
            if !self.set(inv.0, inv.1, Cell::Out) {
                return false;
            }
        }
        true
    }

    /// Applies counting rules until nothing changes; false on conflict.
    fn saturate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for r in 0..self.n {
                let (ins, unknowns): (Vec<usize>, Vec<usize>) = {
                    let mut i = Vec::new();
                    let mut u = Vec::new();
                    for c in 0..self.n {
                        match self.get(r, c) {
                            Cell::In => i.push(c),
                            Cell::Unknown => u.push(c),
                            Cell::Out => {}
                        }
                    }
                    (i, u)
                };
                let (rmin, rmax) = self.row_bounds;
                if ins.len() > rmax || ins.len() + unknowns.len() < rmin {
                    return false;
                }
                if ins.len() == rmax {
                    for c in unknowns {
                        if !self.set(r, c, Cell::Out) {
                            return false;
                        }
                        changed = true;
                    }
                } else if ins.len() + unknowns.len() == rmin && !unknowns.is_empty() {
                    for c in unknowns {
                        if !self.set(r, c, Cell::In) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            for c in 0..self.n {
                let (ins, unknowns): (Vec<usize>, Vec<usize>) = {
                    let mut i = Vec::new();
                    let mut u = Vec::new();
                    for r in 0..self.n {
                        match self.get(r, c) {
                            Cell::In => i.push(r),
                            Cell::Unknown => u.push(r),
                            Cell::Out => {}
                        }
                    }
                    (i, u)
                };
                let (cmin, cmax) = self.col_bounds;
                if ins.len() > cmax || ins.len() + unknowns.len() < cmin {
                    return false;
                }
                if ins.len() == cmax {
                    for r in unknowns {
                        if !self.set(r, c, Cell::Out) {
                            return false;
                        }
                        changed = true;
                    }
                } else if ins.len() + unknowns.len() == cmin && !unknowns.is_empty() {
                    for r in unknowns {
                        if !self.set(r, c, Cell::In) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            for i in 0..self.coverage.len() {
                let (c, rows) = self.coverage[i].clone();
                if rows.iter().any(|&r| self.get(r, c) == Cell::In) {
                    continue;
                }
                let open: Vec<usize> =
                    rows.iter().copied().filter(|&r| self.get(r, c) == Cell::Unknown).collect();
                match open.as_slice() {
                    [] => return false,
                    [r] => {
                        if !self.set(*r, c, Cell::In) {
                            return false;
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(mut self) -> SearchResult {
        if !self.saturate() {
            return SearchResult::Exhausted(self.nodes);
        }
        match self.dfs() {
            Ok(Some(rel)) => SearchResult::Found(rel, self.nodes),
            Ok(None) => SearchResult::Exhausted(self.nodes),
            Err(()) => SearchResult::BudgetExceeded(self.nodes),
        }
    }

    /// Branches on the first undetermined cell; `Err` signals budget
    /// exhaustion.
    fn dfs(&mut self) -> Result<Option<Relation>, ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let next = self.cells.iter().position(|&c| c == Cell::Unknown);
        let Some(pos) = next else {
            return Ok(self.finish());
        };
        let (r, c) = (pos / self.n, pos % self.n);
        for v in [Cell::In, Cell::Out] {
            let saved = self.cells.clone();
            if self.set(r, c, v) && self.saturate() {
                if let Some(rel) = self.dfs()? {
                    return Ok(Some(rel));
                }
            }
            self.cells = saved;
        }
        Ok(None)
    }

    /// Verifies a complete assignment and assembles the relation.
    fn finish(&self) -> Option<Relation> {
        let row_count =
            |r: usize| (0..self.n).filter(|&c| self.get(r, c) == Cell::In).count();
        let col_count =
            |c: usize| (0..self.n).filter(|&r| self.get(r, c) == Cell::In).count();
        let (rmin, rmax) = self.row_bounds;
        let (cmin, cmax) = self.col_bounds;
        if !(0..self.n).all(|r| (rmin..=rmax).contains(&row_count(r)))
            || !(0..self.n).all(|c| (cmin..=cmax).contains(&col_count(c)))
        {
            return None;
        }
        if !self
            .coverage
            .iter()
            .all(|(c, rows)| rows.iter().any(|&r| self.get(r, *c) == Cell::In))
        {
            return None;
        }
        let mut pairs = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) == Cell::In {
                    pairs.push((r, c));
                }
            }
        }
        Some(Relation::from_index_pairs(
            self.g.carrier().clone(),
            self.g.carrier().clone(),
            &pairs,
        ))
    }
}
