//! Fuzzy first-order structures and vague satisfaction.
//!
//! A structure interprets predicates as fuzzy subsets of tuples over a finite
//! domain, and is coupled to the truth transfer policy that grades its
//! connectives: conjunction and existential degrees are exactly what a
//! one-step proof through the corresponding introduction rule would transfer,
//! negation is the complement, falsum is 0. With the zero-decay policy and
//! crisp tables this collapses to classical two-valued truth.
//!
//! Satisfaction means positive degree; strong satisfaction means degree 1.
//! A structure models a theory when every axiom is strongly satisfied.

use crate::derivation::RuleId;
use crate::formula::Formula;
use crate::measure::{credibility, CredibilityMeasure, MeasureError};
use crate::nat::Natural;
use crate::rat::UnitRational;
use crate::search::{enumerate_derivations, SearchBudget, SearchError};
use crate::term::{Term, SUCC_SYMBOL};
use crate::theory::{Theory, TheoryError};
use crate::ttp::TruthTransferPolicy;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("no function interpretation for `{0}`")]
    UnknownFunction(String),
    #[error("no predicate interpretation for `{0}`")]
    UnknownPredicate(String),
    #[error("function `{name}` expects {expected} arguments, got {got}")]
    FunctionArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("predicate `{name}` expects {expected} arguments, got {got}")]
    PredicateArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("function `{name}` is not total: no value for ({tuple})")]
    FunctionNotTotal { name: String, tuple: String },
    #[error("formula has the free variable `{0}`")]
    OpenFormula(String),
    #[error("numeral {0} is too large to evaluate through the successor table")]
    NumeralTooLarge(Natural),
    #[error("equality takes exactly two arguments")]
    EqualityArity,
    #[error("duplicate domain element `{0}`")]
    DuplicateElement(String),
    #[error("structure is not a model of `{theory}`: axiom `{axiom}` has degree {degree}")]
    ModelMismatch {
        theory: String,
        axiom: String,
        degree: UnitRational,
    },
    #[error("the structure is coupled to a different transfer policy than the measure")]
    PolicyMismatch,
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Function interpretations: explicit tables, or the closed-form saturating
/// arithmetic over a numeric domain (tables over a thousand elements squared
/// would be absurd to spell out).
#[derive(Debug, Clone, PartialEq, Eq)]
enum FnInterp {
    Table {
        arity: usize,
        map: BTreeMap<Vec<usize>, usize>,
    },
    SatSucc,
    SatAdd,
    SatMul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PredInterp {
    arity: usize,
    entries: BTreeMap<Vec<usize>, UnitRational>,
    default: UnitRational,
}

/// One predicate table row, rendered with element names.
pub type PredicateRow<'a> = (Vec<&'a str>, &'a UnitRational);

/// A finite fuzzy first-order structure coupled to a transfer policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyStructure {
    name: String,
    domain: Vec<String>,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, FnInterp>,
    predicates: BTreeMap<String, PredInterp>,
    ttp: TruthTransferPolicy,
    /// When the domain is the saturating segment `{0..bound, top}`, the
    /// numeral shortcut: element k at index k, top at index bound+1.
    numeric_bound: Option<usize>,
    /// Raw degree overrides for exact closed formulas. This exists solely so
    /// auditors can exhibit structures that break the degree constraints.
    overrides: BTreeMap<Formula, UnitRational>,
}

impl FuzzyStructure {
    pub fn new(name: &str, domain: Vec<String>, ttp: TruthTransferPolicy) -> Result<Self, SemanticsError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &domain {
            if !seen.insert(e.clone()) {
                return Err(SemanticsError::DuplicateElement(e.clone()));
            }
        }
        Ok(FuzzyStructure {
            name: name.into(),
            domain,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
            ttp,
            numeric_bound: None,
            overrides: BTreeMap::new(),
        })
    }

    /// The finite cut of the naturals at `bound`, with saturating successor,
    /// addition and multiplication, and elements named `0..=bound` plus
    /// `top`.
    pub fn saturating_cut(name: &str, bound: usize, ttp: TruthTransferPolicy) -> Self {
        let mut domain: Vec<String> = (0..=bound).map(|n| n.to_string()).collect();
        domain.push("top".into());
        let mut constants = BTreeMap::new();
        constants.insert("0".to_string(), 0usize);
        let mut functions = BTreeMap::new();
        functions.insert(SUCC_SYMBOL.to_string(), FnInterp::SatSucc);
        functions.insert("+".to_string(), FnInterp::SatAdd);
        functions.insert("*".to_string(), FnInterp::SatMul);
        FuzzyStructure {
            name: name.into(),
            domain,
            constants,
            functions,
            predicates: BTreeMap::new(),
            ttp,
            numeric_bound: Some(bound),
            overrides: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn ttp(&self) -> &TruthTransferPolicy {
        &self.ttp
    }

    /// The saturation bound when the domain is a numeric cut.
    pub fn numeric_bound(&self) -> Option<usize> {
        self.numeric_bound
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &str)> {
        self.constants
            .iter()
            .map(|(name, &idx)| (name.as_str(), self.domain[idx].as_str()))
    }

    /// Predicate tables as element names: `(name, arity, entries, default)`.
    pub fn predicate_tables(
        &self,
    ) -> impl Iterator<Item = (&str, usize, Vec<PredicateRow<'_>>, &UnitRational)> {
        self.predicates.iter().map(|(name, interp)| {
            let entries = interp
                .entries
                .iter()
                .map(|(tuple, degree)| {
                    let named: Vec<&str> =
                        tuple.iter().map(|&i| self.domain[i].as_str()).collect();
                    (named, degree)
                })
                .collect();
            (name.as_str(), interp.arity, entries, &interp.default)
        })
    }

    /// Table-backed function interpretations as element names; saturating
    /// closed-form functions are not listed (see [`Self::numeric_bound`]).
    pub fn function_tables(
        &self,
    ) -> impl Iterator<Item = (&str, usize, Vec<(Vec<&str>, &str)>)> {
        self.functions.iter().filter_map(|(name, interp)| match interp {
            FnInterp::Table { arity, map } => {
                let rows = map
                    .iter()
                    .map(|(tuple, &result)| {
                        let named: Vec<&str> =
                            tuple.iter().map(|&i| self.domain[i].as_str()).collect();
                        (named, self.domain[result].as_str())
                    })
                    .collect();
                Some((name.as_str(), *arity, rows))
            }
            _ => None,
        })
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&Formula, &UnitRational)> {
        self.overrides.iter()
    }

    pub fn element(&self, name: &str) -> Result<usize, SemanticsError> {
        self.domain
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| SemanticsError::UnknownElement(name.into()))
    }

    pub fn add_constant(&mut self, name: &str, element: &str) -> Result<(), SemanticsError> {
        let idx = self.element(element)?;
        self.constants.insert(name.into(), idx);
        Ok(())
    }

    /// Register a function by explicit table; the table must be total.
    pub fn add_function(
        &mut self,
        name: &str,
        arity: usize,
        entries: Vec<(Vec<String>, String)>,
    ) -> Result<(), SemanticsError> {
        let mut map = BTreeMap::new();
        for (args, value) in entries {
            if args.len() != arity {
                return Err(SemanticsError::FunctionArity {
                    name: name.into(),
                    expected: arity,
                    got: args.len(),
                });
            }
            let tuple = args
                .iter()
                .map(|a| self.element(a))
                .collect::<Result<Vec<_>, _>>()?;
            map.insert(tuple, self.element(&value)?);
        }
        // totality check over the finite domain
        let mut picks = vec![0usize; arity];
        loop {
            if !map.contains_key(&picks) {
                let tuple = picks
                    .iter()
                    .map(|&i| self.domain[i].clone())
                    .collect::<Vec<_>>()
                    .join(" ");
                return Err(SemanticsError::FunctionNotTotal { name: name.into(), tuple });
            }
            let mut i = arity;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < self.domain.len() {
                    break;
                }
                picks[i] = 0;
            }
            if done || arity == 0 {
                break;
            }
        }
        self.functions.insert(name.into(), FnInterp::Table { arity, map });
        Ok(())
    }

    /// Register a fuzzy predicate; unlisted tuples get the default degree.
    pub fn add_predicate(
        &mut self,
        name: &str,
        arity: usize,
        entries: Vec<(Vec<String>, UnitRational)>,
        default: UnitRational,
    ) -> Result<(), SemanticsError> {
        let mut map = BTreeMap::new();
        for (args, degree) in entries {
            if args.len() != arity {
                return Err(SemanticsError::PredicateArity {
                    name: name.into(),
                    expected: arity,
                    got: args.len(),
                });
            }
            let tuple = args
                .iter()
                .map(|a| self.element(a))
                .collect::<Result<Vec<_>, _>>()?;
            map.insert(tuple, degree);
        }
        self.predicates
            .insert(name.into(), PredInterp { arity, entries: map, default });
        Ok(())
    }

    pub(crate) fn add_predicate_raw(
        &mut self,
        name: &str,
        arity: usize,
        entries: BTreeMap<Vec<usize>, UnitRational>,
        default: UnitRational,
    ) {
        self.predicates
            .insert(name.into(), PredInterp { arity, entries, default });
    }

    /// Pin the degree of an exact closed formula, bypassing the canonical
    /// recursion. Canonical structures have no business calling this; the
    /// auditor uses it to build counterexamples.
    pub fn add_override(&mut self, formula: Formula, degree: UnitRational) {
        self.overrides.insert(formula, degree);
    }

    fn numeral_element(&self, n: &Natural) -> Result<usize, SemanticsError> {
        if let Some(bound) = self.numeric_bound {
            return Ok(match usize::try_from(n) {
                Ok(k) if k <= bound => k,
                _ => bound + 1,
            });
        }
        // chase the successor table from the constant 0
        let mut current = *self
            .constants
            .get("0")
            .ok_or_else(|| SemanticsError::UnknownConstant("0".into()))?;
        let steps = usize::try_from(n)
            .map_err(|_| SemanticsError::NumeralTooLarge(n.clone()))?;
        if steps > (1 << 20) {
            return Err(SemanticsError::NumeralTooLarge(n.clone()));
        }
        for _ in 0..steps {
            current = self.apply_function(SUCC_SYMBOL, &[current])?;
        }
        Ok(current)
    }

    fn apply_function(&self, name: &str, args: &[usize]) -> Result<usize, SemanticsError> {
        let interp = self
            .functions
            .get(name)
            .ok_or_else(|| SemanticsError::UnknownFunction(name.into()))?;
        match interp {
            FnInterp::Table { arity, map } => {
                if args.len() != *arity {
                    return Err(SemanticsError::FunctionArity {
                        name: name.into(),
                        expected: *arity,
                        got: args.len(),
                    });
                }
                map.get(args).copied().ok_or_else(|| SemanticsError::FunctionNotTotal {
                    name: name.into(),
                    tuple: args
                        .iter()
                        .map(|&i| self.domain[i].clone())
                        .collect::<Vec<_>>()
                        .join(" "),
                })
            }
            FnInterp::SatSucc | FnInterp::SatAdd | FnInterp::SatMul => {
                let bound = self.numeric_bound.expect("saturating structure");
                let top = bound + 1;
                let expected = if matches!(interp, FnInterp::SatSucc) { 1 } else { 2 };
                if args.len() != expected {
                    return Err(SemanticsError::FunctionArity {
                        name: name.into(),
                        expected,
                        got: args.len(),
                    });
                }
                if args.contains(&top) {
                    return Ok(top);
                }
                let value = match interp {
                    FnInterp::SatSucc => args[0] + 1,
                    FnInterp::SatAdd => args[0] + args[1],
                    FnInterp::SatMul => args[0] * args[1],
                    FnInterp::Table { .. } => unreachable!(),
                };
                Ok(if value <= bound { value } else { top })
            }
        }
    }

    fn eval_term(&self, term: &Term, env: &BTreeMap<String, usize>) -> Result<usize, SemanticsError> {
        match term {
            Term::Num(n) => self.numeral_element(n),
            Term::Var(v) => env
                .get(v)
                .copied()
                .ok_or_else(|| SemanticsError::OpenFormula(v.clone())),
            Term::App(name, args) => {
                if args.is_empty() {
                    if let Some(&idx) = self.constants.get(name) {
                        return Ok(idx);
                    }
                }
                let values = args
                    .iter()
                    .map(|a| self.eval_term(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply_function(name, &values)
            }
        }
    }

    fn atom_degree(&self, pred: &str, args: &[usize]) -> Result<UnitRational, SemanticsError> {
        if pred == "=" {
            if args.len() != 2 {
                return Err(SemanticsError::EqualityArity);
            }
            return Ok(if args[0] == args[1] {
                UnitRational::one()
            } else {
                UnitRational::zero()
            });
        }
        let interp = self
            .predicates
            .get(pred)
            .ok_or_else(|| SemanticsError::UnknownPredicate(pred.into()))?;
        if args.len() != interp.arity {
            return Err(SemanticsError::PredicateArity {
                name: pred.into(),
                expected: interp.arity,
                got: args.len(),
            });
        }
        Ok(interp
            .entries
            .get(args)
            .cloned()
            .unwrap_or_else(|| interp.default.clone()))
    }

    /// Canonical degree of a closed formula.
    pub fn eval_degree(&self, formula: &Formula) -> Result<UnitRational, SemanticsError> {
        if let Some(v) = formula.free_vars().first() {
            return Err(SemanticsError::OpenFormula(v.clone()));
        }
        self.eval_env(formula, &BTreeMap::new())
    }

    fn eval_env(
        &self,
        formula: &Formula,
        env: &BTreeMap<String, usize>,
    ) -> Result<UnitRational, SemanticsError> {
        if env.is_empty() {
            if let Some(d) = self.overrides.get(formula) {
                return Ok(d.clone());
            }
        }
        match formula {
            Formula::Falsum => Ok(UnitRational::zero()),
            Formula::Atom { pred, args } => {
                let values = args
                    .iter()
                    .map(|a| self.eval_term(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.atom_degree(pred, &values)
            }
            Formula::And(l, r) => {
                let dl = self.eval_env(l, env)?;
                let dr = self.eval_env(r, env)?;
                Ok(self.ttp.apply(RuleId::AndIntro, &[dl, dr]))
            }
            Formula::Not(b) => Ok(self.eval_env(b, env)?.complement()),
            Formula::Implies(l, r) => {
                // derived connective: not (A and not B)
                let dl = self.eval_env(l, env)?;
                let dr_neg = self.eval_env(r, env)?.complement();
                Ok(self.ttp.apply(RuleId::AndIntro, &[dl, dr_neg]).complement())
            }
            Formula::Exists(var, body) => {
                let mut best = UnitRational::zero();
                for idx in 0..self.domain.len() {
                    let mut inner = env.clone();
                    inner.insert(var.clone(), idx);
                    let d = self.eval_env(body, &inner)?;
                    let transferred = self.ttp.apply(RuleId::ExistsIntro, &[d]);
                    if transferred > best {
                        best = transferred;
                    }
                }
                Ok(best)
            }
        }
    }

    /// Degree plus the satisfaction flags.
    pub fn report(&self, formula: &Formula) -> Result<DegreeReport, SemanticsError> {
        let degree = self.eval_degree(formula)?;
        Ok(DegreeReport {
            satisfied: !degree.is_zero(),
            strongly_satisfied: degree.is_one(),
            formula: formula.clone(),
            degree,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub formula: Formula,
    pub degree: UnitRational,
    pub satisfied: bool,
    pub strongly_satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct TModelReport {
    pub is_model: bool,
    /// Axioms (or schema instances) that are not strongly satisfied.
    pub failures: Vec<(String, UnitRational)>,
    pub axioms_checked: usize,
}

/// Is the structure a model of the theory, i.e. every axiom and in-bound
/// schema instance strongly satisfied?
pub fn check_t_model(
    structure: &FuzzyStructure,
    theory: &Theory,
) -> Result<TModelReport, SemanticsError> {
    let axioms = theory.expanded_axioms_capped(1 << 22)?;
    let mut failures = Vec::new();
    for (name, formula) in &axioms {
        let degree = structure.eval_degree(formula)?;
        if !degree.is_one() {
            failures.push((name.clone(), degree));
        }
    }
    Ok(TModelReport {
        is_model: failures.is_empty(),
        failures,
        axioms_checked: axioms.len(),
    })
}

#[derive(Debug, Clone)]
pub struct AuditViolation {
    pub conclusion: Formula,
    pub degree: UnitRational,
    pub credibility: UnitRational,
    pub witness: crate::derivation::Derivation,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub derivations_checked: usize,
    pub violations: Vec<AuditViolation>,
}

/// Exhaustive soundness audit: enumerate every valid assumption-free
/// derivation from the theory within the budget, and require the degree of
/// each conclusion to be at least the derivation's credibility.
///
/// Errors with `ModelMismatch` unless the structure models the theory (the
/// per-proof inequality starts from strongly satisfied leaves), and with
/// `PolicyMismatch` when a policy-generated measure disagrees with the
/// policy the structure is coupled to.
pub fn soundness_audit(
    structure: &FuzzyStructure,
    theory: &Theory,
    measure: &CredibilityMeasure,
    budget: &SearchBudget,
) -> Result<AuditReport, SemanticsError> {
    if let Some(policy) = measure.ttp() {
        if policy != structure.ttp() {
            return Err(SemanticsError::PolicyMismatch);
        }
    }
    let model = check_t_model(structure, theory)?;
    if !model.is_model {
        let (axiom, degree) = model.failures[0].clone();
        return Err(SemanticsError::ModelMismatch {
            theory: theory.name.clone(),
            axiom,
            degree,
        });
    }
    let enumeration = enumerate_derivations(theory, budget)?;
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for derivation in enumeration.hilbert.iter().chain(enumeration.nd.iter()) {
        checked += 1;
        let cred = credibility(measure, derivation)?;
        let degree = structure.eval_degree(&derivation.conclusion)?;
        if degree < cred {
            violations.push(AuditViolation {
                conclusion: derivation.conclusion.clone(),
                degree,
                credibility: cred,
                witness: derivation.clone(),
            });
        }
    }
    // deterministic report order: smallest witness first
    violations.sort_by(|a, b| {
        a.witness
            .node_count()
            .cmp(&b.witness.node_count())
            .then_with(|| a.conclusion.cmp(&b.conclusion))
    });
    Ok(AuditReport { derivations_checked: checked, violations })
}
