//! Finite carriers and exact binary relations between them.
//!
//! Carriers are ordered finite sets of tuple-shaped elements. The tensor
//! product concatenates tuples, so iterated products are strictly
//! associative and the one-element unit carrier (whose sole element is the
//! empty tuple) is a strict unit. Relations are stored as bitsets and all
//! equalities are exact set equalities; there is no numerical tolerance
//! anywhere in this module.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Errors raised by carrier construction and relation algebra.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelError {
    /// Two relations were composed or compared across different carriers.
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: String, found: String },
    /// A pair referred to an element absent from the relevant carrier.
    #[error("element {element} is not in carrier {carrier}")]
    ElementNotInCarrier { element: String, carrier: String },
    /// A carrier was built with a repeated element identifier.
    #[error("duplicate element {element} in carrier")]
    DuplicateElement { element: String },
}

/// Result alias for relation-algebra operations.
pub type RelResult<T> = Result<T, RelError>;

// ---------------------------------------------------------------------------
// Elements and carriers
// ---------------------------------------------------------------------------

/// An element of a carrier: a flat tuple of atoms.
///
/// Plain elements are single atoms, elements of a tensor product are the
/// concatenations of the factor tuples, and the unit carrier's element is
/// the empty tuple (printed `*`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    atoms: Vec<String>,
}

impl Elem {
    /// Single-atom element.
    pub fn atom(name: impl Into<String>) -> Self {
        Elem { atoms: vec![name.into()] }
    }

    /// The empty tuple, the element of the unit carrier.
    pub fn unit() -> Self {
        Elem { atoms: Vec::new() }
    }

    /// Tuple concatenation, the element-level tensor product.
    pub fn join(&self, other: &Elem) -> Elem {
        let mut atoms = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        atoms.extend_from_slice(&self.atoms);
        atoms.extend_from_slice(&other.atoms);
        Elem { atoms }
    }

    /// Element from an explicit atom list.
    pub fn tuple<I: IntoIterator<Item = S>, S: Into<String>>(atoms: I) -> Self {
        Elem { atoms: atoms.into_iter().map(Into::into).collect() }
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atoms.len() {
            0 => write!(f, "*"),
            1 => write!(f, "{}", self.atoms[0]),
            _ => write!(f, "({})", self.atoms.join(",")),
        }
    }
}

#[derive(Debug)]
struct CarrierInner {
    elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
}

/// An ordered finite set of elements.
///
/// Cloning is cheap (shared storage). Equality compares the element lists,
/// so independently built carriers with the same elements in the same order
/// are equal.
#[derive(Debug, Clone)]
pub struct Carrier(Arc<CarrierInner>);

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elems == other.0.elems
    }
}

impl Eq for Carrier {}

impl Carrier {
    /// Carrier from an element list; identifiers must be pairwise distinct.
    pub fn new(elems: Vec<Elem>) -> RelResult<Self> {
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(RelError::DuplicateElement { element: e.to_string() });
            }
        }
        Ok(Carrier(Arc::new(CarrierInner { elems, index })))
    }

    /// Carrier of single-atom elements.
    pub fn from_atoms<I: IntoIterator<Item = S>, S: Into<String>>(atoms: I) -> RelResult<Self> {
        Carrier::new(atoms.into_iter().map(Elem::atom).collect())
    }

    /// The fixed one-element unit carrier.
    pub fn unit() -> Self {
        Carrier::new(vec![Elem::unit()]).expect("unit carrier is well formed")
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.0.elems[i]
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0.elems
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.0.index.get(e).copied()
    }

    /// Tensor product: all joins, in row-major order.
    ///
    /// The element at index `i * other.len() + j` is
    /// `self.elem(i).join(other.elem(j))`, so index arithmetic and element
    /// structure always agree.
    pub fn tensor(&self, other: &Carrier) -> Carrier {
        let mut elems = Vec::with_capacity(self.len() * other.len());
        for a in self.elems() {
            for b in other.elems() {
                elems.push(a.join(b));
            }
        }
        Carrier::new(elems).expect("tensor of valid carriers has distinct elements")
    }

    /// Short printable summary, used in error messages.
    pub fn describe(&self) -> String {
        const SHOW: usize = 4;
        let mut parts: Vec<String> = self.elems().iter().take(SHOW).map(|e| e.to_string()).collect();
        if self.len() > SHOW {
            parts.push(format!("... {} elements", self.len()));
        }
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems().iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Bit matrices
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Bits { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn or_row_from(&mut self, r: usize, src: &Bits, src_row: usize) {
        let base = r * self.words_per_row;
        let other = src.row(src_row);
        for (w, o) in self.data[base..base + self.words_per_row].iter_mut().zip(other) {
            *w |= o;
        }
    }

    fn row_indices(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &word) in self.row(r).iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    fn count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }
}

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

/// An exact binary relation between two carriers.
///
/// Equality requires equal source carrier, equal target carrier and equal
/// pair sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    src: Carrier,
    tgt: Carrier,
    bits: Bits,
}

impl Relation {
    /// The empty relation.
    pub fn empty(src: Carrier, tgt: Carrier) -> Self {
        let bits = Bits::new(src.len(), tgt.len());
        Relation { src, tgt, bits }
    }

    /// The identity relation on a carrier.
    pub fn identity(carrier: &Carrier) -> Self {
        let mut r = Relation::empty(carrier.clone(), carrier.clone());
        for i in 0..carrier.len() {
            r.bits.set(i, i);
        }
        r
    }

    /// Relation from explicit element pairs.
    pub fn from_pairs(src: Carrier, tgt: Carrier, pairs: &[(Elem, Elem)]) -> RelResult<Self> {
        let mut r = Relation::empty(src, tgt);
        for (a, b) in pairs {
            let i = r.src.index_of(a).ok_or_else(|| RelError::ElementNotInCarrier {
                element: a.to_string(),
                carrier: r.src.describe(),
            })?;
            let j = r.tgt.index_of(b).ok_or_else(|| RelError::ElementNotInCarrier {
                element: b.to_string(),
                carrier: r.tgt.describe(),
            })?;
            r.bits.set(i, j);
        }
        Ok(r)
    }

    /// Relation from index pairs (positions in the carriers).
    pub fn from_index_pairs(src: Carrier, tgt: Carrier, pairs: &[(usize, usize)]) -> Self {
        let mut r = Relation::empty(src, tgt);
        for &(i, j) in pairs {
            r.bits.set(i, j);
        }
        r
    }

    pub fn src(&self) -> &Carrier {
        &self.src
    }

    pub fn tgt(&self) -> &Carrier {
        &self.tgt
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits.set(i, j);
    }

    /// Number of related pairs.
    pub fn size(&self) -> usize {
        self.bits.count()
    }

    /// All related index pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.src.len() {
            for j in self.bits.row_indices(i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Images of a source index.
    pub fn image_of(&self, i: usize) -> Vec<usize> {
        self.bits.row_indices(i)
    }

    /// Diagrammatic composition: `self` first, then `other`.
    ///
    /// For relations `self: A -> B` and `other: B -> C` this is the usual
    /// relational composite `A -> C`; the middle carriers must be equal.
    pub fn then(&self, other: &Relation) -> RelResult<Relation> {
        if self.tgt != other.src {
            return Err(RelError::CarrierMismatch {
                expected: self.tgt.describe(),
                found: other.src.describe(),
            });
        }
        let mut out = Relation::empty(self.src.clone(), other.tgt.clone());
        for i in 0..self.src.len() {
            for b in self.bits.row_indices(i) {
                out.bits.or_row_from(i, &other.bits, b);
            }
        }
        Ok(out)
    }

    /// The converse relation with source and target swapped.
    pub fn dagger(&self) -> Relation {
        let mut out = Relation::empty(self.tgt.clone(), self.src.clone());
        for (i, j) in self.pairs() {
            out.bits.set(j, i);
        }
        out
    }

    /// Transpose, which for relations coincides with [`Relation::dagger`].
    pub fn transpose(&self) -> Relation {
        self.dagger()
    }

    /// Conjugation fixes pair sets: carriers here are self-dual.
    pub fn conjugate(&self) -> Relation {
        self.clone()
    }

    /// Tensor product of relations on the tensor product of carriers.
    pub fn tensor(&self, other: &Relation) -> Relation {
        let src = self.src.tensor(&other.src);
        let tgt = self.tgt.tensor(&other.tgt);
        let mut out = Relation::empty(src, tgt);
        let (sn, tn) = (other.src.len(), other.tgt.len());
        for (a, b) in self.pairs() {
            for (c, d) in other.pairs() {
                out.bits.set(a * sn + c, b * tn + d);
            }
        }
        out
    }

    /// Set union of two parallel relations.
    pub fn union(&self, other: &Relation) -> RelResult<Relation> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(RelError::CarrierMismatch {
                expected: format!("{} -> {}", self.src.describe(), self.tgt.describe()),
                found: format!("{} -> {}", other.src.describe(), other.tgt.describe()),
            });
        }
        let mut out = self.clone();
        for (w, o) in out.bits.data.iter_mut().zip(&other.bits.data) {
            *w |= o;
        }
        Ok(out)
    }

    /// Whether every pair of `self` also lies in `other`.
    pub fn is_subrelation_of(&self, other: &Relation) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.bits.data.iter().zip(&other.bits.data).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Display for Relation {
    /// Pairs sorted by carrier position, the canonical printing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(i, j)| format!("({},{})", self.src.elem(i), self.tgt.elem(j)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Compact structure
// ---------------------------------------------------------------------------

/// The cup of a carrier: the relation `I -> A (x) A` pairing the unit
/// element with every diagonal pair.
pub fn cup(carrier: &Carrier) -> Relation {
    let unit = Carrier::unit();
    let sq = carrier.tensor(carrier);
    let mut r = Relation::empty(unit, sq);
    let n = carrier.len();
    for i in 0..n {
        r.bits.set(0, i * n + i);
    }
    r
}

/// The cap of a carrier, the dagger of its cup.
pub fn cap(carrier: &Carrier) -> Relation {
    cup(carrier).dagger()
}

/// The symmetry `A (x) B -> B (x) A`.
pub fn swap(a: &Carrier, b: &Carrier) -> Relation {
    let src = a.tensor(b);
    let tgt = b.tensor(a);
    let mut r = Relation::empty(src, tgt);
    let (n, m) = (a.len(), b.len());
    for i in 0..n {
        for j in 0..m {
            r.bits.set(i * m + j, j * n + i);
        }
    }
    r
}

/// The name of a relation `r: A -> B`, a state `I -> A (x) B`.
pub fn name(r: &Relation) -> Relation {
    let unit = Carrier::unit();
    let prod = r.src().tensor(r.tgt());
    let mut out = Relation::empty(unit, prod);
    let m = r.tgt().len();
    for (i, j) in r.pairs() {
        out.bits.set(0, i * m + j);
    }
    out
}

/// Recovers a relation `A -> B` from a state on `A (x) B`.
pub fn unname(state: &Relation, a: &Carrier, b: &Carrier) -> RelResult<Relation> {
    let expected = a.tensor(b);
    if state.src() != &Carrier::unit() || state.tgt() != &expected {
        return Err(RelError::CarrierMismatch {
            expected: expected.describe(),
            found: state.tgt().describe(),
        });
    }
    let mut out = Relation::empty(a.clone(), b.clone());
    let m = b.len();
    for (_, j) in state.pairs() {
        out.bits.set(j / m, j % m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Carrier {
        Carrier::from_atoms(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn unit_carrier_is_fixed() {
        assert_eq!(Carrier::unit(), Carrier::unit());
        assert_eq!(Carrier::unit().len(), 1);
        assert_eq!(Carrier::unit().elem(0).to_string(), "*");
    }

    #[test]
    fn duplicate_elements_rejected() {
        let err = Carrier::from_atoms(["a", "a"]).unwrap_err();
        assert_eq!(err, RelError::DuplicateElement { element: "a".into() });
    }

    #[test]
    fn composition_matches_hand_example() {
        let c = abc();
        let r = Relation::from_pairs(c.clone(), c.clone(), &[(Elem::atom("a"), Elem::atom("b"))])
            .unwrap();
        let s = Relation::from_pairs(c.clone(), c.clone(), &[(Elem::atom("b"), Elem::atom("c"))])
            .unwrap();
        let rs = r.then(&s).unwrap();
        assert_eq!(rs.to_string(), "{(a,c)}");
        let id = Relation::identity(&c);
        assert_eq!(r.then(&id).unwrap(), r);
        assert_eq!(id.then(&r).unwrap(), r);
    }

    #[test]
    fn composition_rejects_carrier_mismatch() {
        let c = abc();
        let d = Carrier::from_atoms(["x"]).unwrap();
        let r = Relation::empty(c.clone(), c);
        let s = Relation::empty(d.clone(), d);
        assert!(matches!(r.then(&s), Err(RelError::CarrierMismatch { .. })));
    }

    #[test]
    fn from_pairs_rejects_foreign_elements() {
        let c = abc();
        let err = Relation::from_pairs(c.clone(), c, &[(Elem::atom("z"), Elem::atom("a"))])
            .unwrap_err();
        assert!(matches!(err, RelError::ElementNotInCarrier { .. }));
    }

    #[test]
    fn dagger_is_involutive_and_reverses_known_pairs() {
        let c = abc();
        let r = Relation::from_pairs(
            c.clone(),
            c,
            &[(Elem::atom("a"), Elem::atom("b")), (Elem::atom("a"), Elem::atom("c"))],
        )
        .unwrap();
        assert_eq!(r.dagger().dagger(), r);
        assert_eq!(r.dagger().to_string(), "{(b,a), (c,a)}");
    }

    #[test]
    fn cup_over_two_elements() {
        let c = Carrier::from_atoms(["p", "q"]).unwrap();
        assert_eq!(cup(&c).to_string(), "{(*,(p,p)), (*,(q,q))}");
    }

    #[test]
    fn cap_after_cup_is_unit_identity() {
        let c = abc();
        let composite = cup(&c).then(&cap(&c)).unwrap();
        assert_eq!(composite, Relation::identity(&Carrier::unit()));
        assert_eq!(composite.to_string(), "{(*,*)}");
    }

    #[test]
    fn snake_equations_hold_up_to_size_six() {
        for n in 1..=6 {
            let atoms: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let c = Carrier::from_atoms(atoms).unwrap();
            let id = Relation::identity(&c);
            // (cap (x) id) after (id (x) cup) on A.
            let left = id.tensor(&cup(&c)).then(&cap(&c).tensor(&id)).unwrap();
            assert_eq!(left, id, "first snake fails at size {n}");
            // (id (x) cap) after (cup (x) id) on A.
            let right = cup(&c).tensor(&id).then(&id.tensor(&cap(&c))).unwrap();
            assert_eq!(right, id, "second snake fails at size {n}");
        }
    }

    #[test]
    fn tensor_of_identities_is_identity_of_tensor() {
        let c = abc();
        let d = Carrier::from_atoms(["x", "y"]).unwrap();
        assert_eq!(
            Relation::identity(&c).tensor(&Relation::identity(&d)),
            Relation::identity(&c.tensor(&d))
        );
    }

    #[test]
    fn swap_is_its_own_inverse_up_to_sides() {
        let c = abc();
        let d = Carrier::from_atoms(["x", "y"]).unwrap();
        let s = swap(&c, &d);
        let back = swap(&d, &c);
        assert_eq!(s.then(&back).unwrap(), Relation::identity(&c.tensor(&d)));
    }

    #[test]
    fn name_unname_round_trip() {
        let c = abc();
        let d = Carrier::from_atoms(["x", "y"]).unwrap();
        let r = Relation::from_pairs(
            c.clone(),
            d.clone(),
            &[(Elem::atom("a"), Elem::atom("y")), (Elem::atom("b"), Elem::atom("x"))],
        )
        .unwrap();
        let state = name(&r);
        assert_eq!(unname(&state, &c, &d).unwrap(), r);
    }
}
