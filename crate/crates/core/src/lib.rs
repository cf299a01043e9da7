//! Inference with finite choice assessments.
//!
//! An assessment lists statements of the form "from `V ∪ W`, the options in
//! `W` were rejected". This crate decides whether such statements can come
//! from a coherent choice function and evaluates the most conservative
//! coherent choice function agreeing with them (the natural extension) on
//! new option sets.
//!
//! The pipeline is: assessment → conjunctive generator ([`generators`]) →
//! disjunctive generator, consumed lazily or simplified and materialised →
//! LP feasibility checks ([`feasibility`]) that decide consistency and which
//! options are chosen ([`choice`]). The [`models`] module synthesises
//! ground-truth choice functions from sets of lower expectations.

pub mod choice;
pub mod deadline;
pub mod error;
pub mod feasibility;
pub mod generators;
pub mod models;
pub mod options;
pub mod simplex;

pub use choice::{check_consistency, is_chosen, is_consistent_generator, natural_extension, ChoiceResult, Method, Pipeline};
pub use deadline::Deadline;
pub use error::{Error, Result};
pub use feasibility::{g_ord, in_natural_extension, is_feasible, option_ord};
pub use generators::{ConjGenerator, DisjGenerator, DisjStream};
pub use options::{
    leq, rescale_assessment, strictly_less, translate_set, Assessment, AssessmentPair, OptionSet, OptionSetDoc,
    OptionVec, ToleranceConfig,
};
pub use simplex::{DenseSimplex, FeasibilitySolver, LpOutcome};
