//! Exact calculus for finite relations and finite groupoids.
//!
//! The crate is organised around one dagger compact category: finite carriers
//! and binary relations between them ([`relcat`]). Finite groupoids
//! ([`groupoid`]) induce special symmetric dagger Frobenius structures on
//! their morphism carriers ([`frobenius`]), and inverse-respecting relations
//! between groupoids form the category in which the interesting questions
//! live ([`cpstar`]): which objects admit broadcasting maps, what their
//! copyable states are, which relations are entangled, how measurements act,
//! and when a pair of subsystems is no-signalling. On top of that sit an
//! exhaustively checkable bit-commitment protocol ([`bitcommit`]) and a small
//! floating-point verifier for the matrix-algebra analogues of the same
//! structures ([`fhilb`]).
//!
//! Everything outside [`fhilb`] is exact: relations are bitsets, equality is
//! set equality, and every decision procedure either enumerates its whole
//! search space or carries an independent confirmation search.

pub mod bitcommit;
pub mod catalog;
pub mod cpstar;
pub mod fhilb;
pub mod frobenius;
pub mod report;
pub mod specfile;
pub mod suite;
pub mod groupoid;
pub mod relcat;
