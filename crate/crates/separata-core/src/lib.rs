//! Proof search for propositional abstract separation logics via labelled
//! sequent calculi, with structural rules synthesized from declarative
//! frame axioms, a substitution-based search calculus, and a finite
//! Kripke-model checker used as an independent semantic oracle.

pub mod axiom;
pub mod calculus;
pub mod formula;
pub mod hilbert;
pub mod label;
pub mod parser;
pub mod prover;
pub mod rules;
pub mod semantics;
pub mod sequent;

pub use axiom::{builtin_system, FrameAxiom, SystemConfig};
pub use formula::Formula;
pub use label::Label;
pub use parser::parse;
pub use prover::{prove, Budget, Proof, SearchOptions, Verdict};
pub use semantics::KripkeModel;
pub use sequent::{RelAtom, Sequent};
