//! Core library of the linwit toolkit: a symbolic substrate for
//! intuitionistic linear logic over finite types, sequent checkers, the
//! Girard-style embeddings of intuitionistic logic, a parameterised
//! functional interpretation with pluggable exponential modalities, witness
//! extraction from checked derivations, and a finite-model evaluation
//! oracle.
//!
//! Every value is immutable after construction and every operation is
//! pure; fresh-name supplies are passed explicitly.  Independent checks,
//! interpretations and extractions may therefore run concurrently, and a
//! model stream may be partitioned across workers with results combined
//! by conjunction.

pub mod calculus;
pub mod corpus;
pub mod embed;
pub mod extract;
pub mod fixtures;
pub mod formula;
pub mod interp;
pub mod modality;
pub mod model;
pub mod normalize;
pub mod principles;
pub mod sexpr;
pub mod standard;
pub mod subst;
pub mod surface;
pub mod term;
pub mod types;

pub use calculus::{check_derivation, CheckError, Derivation, Rule, Sequent};
pub use formula::{Formula, SystemId};
pub use interp::{interpret, InterpretedFormula};
pub use modality::{modality_by_name, Modality};
pub use subst::FreshSupply;
pub use term::{Term, TypedVar};
pub use types::FiniteType;
