//! Certified non-orderability of Dehn fillings of one-cusped manifolds.
//!
//! The pipeline checks first homology, certifies word identities by relator
//! insertion, replays a sign-case analysis over left orderings, enumerates
//! the finite quotient obtained by killing the peripheral subgroup, and
//! assembles per-slope verdicts into a replayable certificate bundle.

pub mod abelian;
pub mod bundle;
pub mod coset;
pub mod filling;
pub mod identity;
pub mod manifold;
pub mod order;
pub mod pipeline;
pub mod presentation;
pub mod word;

pub use presentation::Presentation;
pub use word::{Alphabet, DefinitionTable, Letter, Word, WordError};
