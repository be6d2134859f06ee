//! Feasibility-graded arithmetic and dissipative proof theory.
//!
//! The crate models an agent whose grasp of the natural number series fades
//! out gradually instead of stopping at a wall. Three layers build on one
//! another:
//!
//! * fuzzy initial segments (`fis`): membership functions from the naturals
//!   into exact unit-interval rationals, with structural checks, rescaling
//!   transforms, a feasibility radius, and defuzzification into a finite
//!   saturating arithmetic;
//! * a dissipative proof kernel (`derivation`, `ttp`, `search`): Hilbert and
//!   natural-deduction derivations whose credibility erodes at each rule
//!   application according to a truth transfer policy, with bounded
//!   exhaustive proof search and feasible-consistency checks;
//! * vague semantics (`semantics`): finite fuzzy first-order structures, a
//!   degree evaluator coupled to a transfer policy, model checking, a
//!   soundness auditor, and a term-model builder.
//!
//! All arithmetic is exact; there is no floating point in the crate.

pub mod derivation;
pub mod fis;
pub mod formula;
pub mod measure;
pub mod nat;
pub mod normalize;
pub mod rat;
pub mod saturated;
pub mod search;
pub mod semantics;
pub mod sexpr;
pub mod syntax;
pub mod term;
pub mod term_model;
pub mod theory;
pub mod ttp;

pub use derivation::{Calculus, CheckReport, Derivation, LeafKind, Node, RuleId};
pub use fis::{FeasibilityClass, FisDescriptor, FisError};
pub use formula::Formula;
pub use measure::{credibility, ComplexityKind, CredibilityMeasure, MeasureError, TransformKind};
pub use nat::{NatError, Natural};
pub use normalize::{normalize, NormalizeError};
pub use rat::{RatError, UnitRational};
pub use saturated::{SatNum, SaturatedArithmetic};
pub use search::{
    feasible_consequence, feasibly_consistent, well_behaved_probe, ConsequenceReport,
    ConsequenceStatus, ConsistencyReport, ConsistencyStatus, ProbeVerdict, SearchBudget,
    SearchError, WellBehavedReport,
};
pub use semantics::{
    check_t_model, soundness_audit, AuditReport, DegreeReport, FuzzyStructure, SemanticsError,
    TModelReport,
};
pub use term::{Interpretation, Signature, Term, TermError};
pub use term_model::{build_term_model, CompletionPolicy, TermModel, TermModelError};
pub use theory::{Theory, TheoryError};
pub use ttp::{validate_ttp, PolicyKind, TruthTransferPolicy, TtpError, TtpReport};
