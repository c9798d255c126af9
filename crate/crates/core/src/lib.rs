//! Prism permutations: permutations whose Bruhat principal order ideal
//! factors as a two-element chain times another poset.
//!
//! The crate implements three independent classifiers for this class and the
//! machinery each one needs:
//!
//! - [`words`]: reduced words, unconfined letters, letter deletion, and the
//!   four canonical word forms — a permutation is a prism iff some support
//!   letter is unconfined in its reduced words;
//! - [`patterns`]: an occurrence engine for classical, mesh, and calibrated
//!   mesh patterns, plus the eight-pattern catalog whose containment (for
//!   some parameter `i`) characterizes prisms;
//! - [`posets`]: Bruhat comparison, principal order ideals with Hasse
//!   covers, direct products, poset isomorphism, and the decomposition
//!   oracle `B(w) ≅ chain2 × B(v)`.
//!
//! [`prism`] ties the three together with cross-checked classification and
//! the boolean degree/core decomposition; [`enumerate`] counts the classes
//! over all of `S_n`; [`dot`] renders marked Hasse diagrams.
//!
//! Positions, values, and generator indices are 1-based throughout. Products
//! of permutations are compositions with the right factor applied first, so
//! the word `i1 … ik` denotes `σ_{i1} ∘ … ∘ σ_{ik}`.

pub mod dot;
pub mod enumerate;
pub mod error;
pub mod patterns;
pub mod perm;
pub mod posets;
pub mod prism;
pub mod words;

pub use enumerate::{enumerate as enumerate_sn, CountRow, FibRow, Method};
pub use error::{Error, Result};
pub use patterns::{CalibratedMeshPattern, MeshPattern, Occurrence};
pub use perm::Permutation;
pub use posets::Poset;
pub use prism::{ClassificationRecord, MethodSet};
pub use words::Word;
