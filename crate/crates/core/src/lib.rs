//! Exact counting of complete exceptional sequences for Dynkin diagrams.
//!
//! The count `e(Δ)` — equivalently the number of maximal chains in the
//! noncrossing partition lattice of type Δ, or the number of factorizations
//! of a Coxeter element into rank-many reflections — is computed by three
//! mutually checking routes:
//!
//! * closed forms per family ([`counting::e_closed`]),
//! * the vertex-deletion recursion combined with the shuffle rule
//!   ([`counting::e_recursive`]),
//! * an exhaustive Weyl-group search over reflection factorizations
//!   ([`weyl::RootSystem::count_chain_factorizations`]).
//!
//! All arithmetic is exact integer arithmetic; there is no floating point
//! anywhere in the crate. The [`series`] module carries the binomial
//! convolutions and the Abel expansion that the classical-family closed
//! forms rest on, and [`cli`] is the command-line front end.

pub mod cli;
pub mod counting;
pub mod diagram;
pub mod series;
pub mod weyl;

pub use counting::Count;
pub use diagram::{parse_diagram, ConnectedDiagram, Diagram, Family};
