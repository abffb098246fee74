//! Decision procedures for generalized conjugacy, twisted conjugacy and
//! orbit (Brinkmann) problems on groups of the form `G x| Z`.
//!
//! Conventions: morphisms act on the right (`g.phi`), conjugation is
//! `g^x = x^-1 g x`, and the semidirect relation is `t^-1 a t = a.phi`.

pub mod error;
pub mod group;
pub mod lattice;
pub mod morphism;
pub mod oracle;
pub mod problem;
pub mod reduction;
pub mod separability;
pub mod solvers;
pub mod stallings;
pub mod target;
pub mod verdict;
pub mod word;

pub use error::{Error, Result};
pub use group::{Element, Family, Group};
pub use lattice::{IntMatrix, Lattice};
pub use morphism::{InnerWitness, Morphism};
pub use problem::{ProblemInstance, ProblemKind};
pub use reduction::{lower_gcp, ReductionPlan};
pub use solvers::solve;
pub use stallings::StallingsAutomaton;
pub use target::{SlicedTarget, Subgroup, Target};
pub use verdict::{certify, Budget, Outcome, QuotientSpec, Refutation, Verdict, Witness};
pub use word::{parse_word, Letter, Word};
