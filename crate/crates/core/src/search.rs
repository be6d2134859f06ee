//! Bounded exhaustive proof search.
//!
//! The search space is the subformula closure of the theory, the goal and
//! falsum, with existentials instantiated by enumerated terms up to a bound.
//! Inside that universe the search relaxes rule applications in synchronized
//! rounds: after round `r` every formula's entry is the best credibility any
//! derivation of depth at most `r` can give it. Built-in policies are
//! monotone, so the dynamic program computes the true optimum over all
//! derivations inside the universe; a fixpoint before the depth budget means
//! the space was exhausted.
//!
//! `NotFound` is always budget-relative: it is never a refutation unless the
//! fixpoint was reached, and even then it only speaks for the explored
//! universe. Search never builds assumption-discharging derivations; negation
//! introduction lives in checked proofs only.

use crate::derivation::{Derivation, LeafKind, RuleId};
use crate::formula::Formula;
use crate::measure::{credibility, ComplexityKind, CredibilityMeasure, MeasureError};
use crate::nat::Natural;
use crate::rat::UnitRational;
use crate::theory::Theory;
use crate::ttp::TruthTransferPolicy;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("goal formula has the free variable `{0}`")]
    OpenGoal(String),
    #[error("schema `{name}` expands to {instances} instances, over the cap {cap}")]
    SchemaTooLarge { name: String, instances: u64, cap: u64 },
    #[error("search universe exceeded {cap} formulas")]
    UniverseTooLarge { cap: usize },
    #[error("derivation enumeration exceeded {cap} trees")]
    EnumerationTooLarge { cap: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Explicit resource bounds for a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum derivation depth explored (leaves are depth 0).
    pub max_depth: usize,
    /// Formulas above this symbol count stay outside the universe.
    pub max_formula_size: u64,
    /// Existentials are instantiated with terms of length up to this bound.
    pub term_bound: usize,
    /// Hard cap on the universe size.
    pub max_universe: usize,
    /// Hard cap for exhaustive derivation enumeration.
    pub max_derivations: usize,
}

impl SearchBudget {
    pub fn with_depth(max_depth: usize) -> SearchBudget {
        SearchBudget {
            max_depth,
            max_formula_size: 1 << 16,
            term_bound: 24,
            max_universe: 1 << 20,
            max_derivations: 1 << 20,
        }
    }
}

/// Outcome of a consequence search.
#[derive(Debug, Clone)]
pub enum ConsequenceStatus {
    /// A credibility-1 witness was found.
    Strong { witness: Derivation },
    /// A positive-credibility witness was found; `credibility` is exact.
    Feasible {
        credibility: UnitRational,
        witness: Derivation,
    },
    /// No positive-credibility derivation within the budget. `exhausted`
    /// reports whether the universe reached a fixpoint below the depth
    /// budget; without it this is not evidence of non-derivability.
    NotFound { exhausted: bool },
}

impl ConsequenceStatus {
    pub fn found(&self) -> bool {
        !matches!(self, ConsequenceStatus::NotFound { .. })
    }
}

#[derive(Debug, Clone)]
pub struct ConsequenceReport {
    pub status: ConsequenceStatus,
    pub rounds: usize,
    pub exhausted: bool,
}

/// Outcome of a consistency search.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // refutations carry their witness tree
pub enum ConsistencyStatus {
    /// No positive-credibility proof of falsum within the budget.
    ConsistentWithinBudget { exhausted: bool },
    Refuted {
        credibility: UnitRational,
        witness: Derivation,
    },
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub status: ConsistencyStatus,
    pub rounds: usize,
    pub exhausted: bool,
}

/// Cost metric minimized alongside credibility (tie-breaking, and the
/// complexity input of factorable measures).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CostKind {
    Nodes,
    Symbols,
}

impl CostKind {
    fn leaf_cost(self, formula: &Formula) -> Natural {
        match self {
            CostKind::Nodes => Natural::from(1u32),
            CostKind::Symbols => formula.symbol_count(),
        }
    }

    fn rule_cost(self, conclusion: &Formula, premise_costs: &[&Natural]) -> Natural {
        let own = match self {
            CostKind::Nodes => Natural::from(1u32),
            CostKind::Symbols => conclusion.symbol_count(),
        };
        premise_costs.iter().fold(own, |acc, c| acc + *c)
    }
}

/// The searchable rule spaces; one derivation never mixes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Space {
    Hilbert,
    NaturalDeduction,
}

/// A rule application template inside the universe.
#[derive(Debug, Clone)]
enum Edge {
    Mp {
        implication: Formula,
        antecedent: Formula,
        conclusion: Formula,
    },
    AndIntro {
        left: Formula,
        right: Formula,
        conclusion: Formula,
    },
    AndElimL {
        premise: Formula,
        conclusion: Formula,
    },
    AndElimR {
        premise: Formula,
        conclusion: Formula,
    },
    NotElim {
        affirmation: Formula,
        negation: Formula,
    },
    ExistsIntro {
        instance: Formula,
        conclusion: Formula,
    },
}

impl Edge {
    fn rule(&self) -> RuleId {
        match self {
            Edge::Mp { .. } => RuleId::Mp,
            Edge::AndIntro { .. } => RuleId::AndIntro,
            Edge::AndElimL { .. } => RuleId::AndElimL,
            Edge::AndElimR { .. } => RuleId::AndElimR,
            Edge::NotElim { .. } => RuleId::NotElim,
            Edge::ExistsIntro { .. } => RuleId::ExistsIntro,
        }
    }

    fn premises(&self) -> Vec<&Formula> {
        match self {
            Edge::Mp { implication, antecedent, .. } => vec![implication, antecedent],
            Edge::AndIntro { left, right, .. } => vec![left, right],
            Edge::AndElimL { premise, .. } | Edge::AndElimR { premise, .. } => vec![premise],
            Edge::NotElim { affirmation, negation } => vec![affirmation, negation],
            Edge::ExistsIntro { instance, .. } => vec![instance],
        }
    }

    fn conclusion(&self) -> Formula {
        match self {
            Edge::Mp { conclusion, .. }
            | Edge::AndIntro { conclusion, .. }
            | Edge::AndElimL { conclusion, .. }
            | Edge::AndElimR { conclusion, .. }
            | Edge::ExistsIntro { conclusion, .. } => conclusion.clone(),
            Edge::NotElim { .. } => Formula::Falsum,
        }
    }
}

#[derive(Debug, Clone)]
enum How {
    Leaf(LeafKind),
    Rule { id: RuleId, premises: Vec<Formula> },
}

/// Best known way to derive a formula.
#[derive(Debug, Clone)]
pub struct SearchEntry {
    pub credibility: UnitRational,
    pub cost: Natural,
    pub depth: usize,
    how: How,
}

/// Saturation result for one rule space.
#[derive(Debug, Clone)]
pub struct SaturationTable {
    entries: BTreeMap<Formula, SearchEntry>,
    pub rounds: usize,
    pub exhausted: bool,
}

impl SaturationTable {
    pub fn entry(&self, formula: &Formula) -> Option<&SearchEntry> {
        self.entries.get(formula)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Formula, &SearchEntry)> {
        self.entries.iter()
    }

    /// Rebuild the recorded best derivation of a formula.
    pub fn witness(&self, formula: &Formula) -> Option<Derivation> {
        let entry = self.entries.get(formula)?;
        Some(match &entry.how {
            How::Leaf(kind) => Derivation {
                conclusion: formula.clone(),
                node: crate::derivation::Node::Leaf(kind.clone()),
            },
            How::Rule { id, premises } => {
                let parts: Vec<Derivation> = premises
                    .iter()
                    .map(|p| self.witness(p).expect("recorded premise"))
                    .collect();
                rebuild(*id, formula, parts)
            }
        })
    }
}

fn rebuild(id: RuleId, conclusion: &Formula, mut parts: Vec<Derivation>) -> Derivation {
    match id {
        RuleId::Mp => {
            let antecedent = parts.pop().expect("two premises");
            let implication = parts.pop().expect("two premises");
            Derivation::mp(implication, antecedent)
        }
        RuleId::AndIntro => {
            let right = parts.pop().expect("two premises");
            let left = parts.pop().expect("two premises");
            Derivation::and_intro(left, right)
        }
        RuleId::AndElimL => Derivation::and_elim_l(parts.pop().expect("one premise")),
        RuleId::AndElimR => Derivation::and_elim_r(parts.pop().expect("one premise")),
        RuleId::NotElim => {
            let negation = parts.pop().expect("two premises");
            let affirmation = parts.pop().expect("two premises");
            Derivation::not_elim(affirmation, negation)
        }
        RuleId::ExistsIntro => {
            Derivation::exists_intro(conclusion.clone(), parts.pop().expect("one premise"))
        }
        RuleId::Axiom | RuleId::NotIntro => unreachable!("not a search rule"),
    }
}

/// The formula universe plus everything derived from it.
pub struct Universe {
    formulas: BTreeSet<Formula>,
    /// Axiom and schema-instance leaves (shared by both calculi).
    axiom_leaves: Vec<(Formula, LeafKind)>,
    /// Instances recorded for each existential in the universe.
    exists_instances: BTreeMap<Formula, Vec<Formula>>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }
}

/// Build the subformula-closed universe for a theory and optional goal.
pub fn build_universe(
    theory: &Theory,
    goal: Option<&Formula>,
    budget: &SearchBudget,
) -> Result<Universe, SearchError> {
    let max_size = Natural::from(budget.max_formula_size);
    let mut axiom_leaves = Vec::new();
    let mut seeds: Vec<Formula> = Vec::new();

    for axiom in &theory.axioms {
        axiom_leaves.push((axiom.formula.clone(), LeafKind::TheoryAxiom(axiom.name.clone())));
        seeds.push(axiom.formula.clone());
    }
    for schema in &theory.schemas {
        let bound = u64::try_from(&schema.bound).map_err(|_| SearchError::SchemaTooLarge {
            name: schema.name.clone(),
            instances: u64::MAX,
            cap: budget.max_universe as u64,
        })?;
        let per_var = bound + 1;
        let total = per_var.checked_pow(schema.vars.len() as u32).unwrap_or(u64::MAX);
        if total > budget.max_universe as u64 {
            return Err(SearchError::SchemaTooLarge {
                name: schema.name.clone(),
                instances: total,
                cap: budget.max_universe as u64,
            });
        }
        let arity = schema.vars.len();
        let mut values = vec![0u64; arity];
        loop {
            let naturals: Vec<Natural> = values.iter().map(|v| Natural::from(*v)).collect();
            let formula = theory
                .instantiate_schema(&schema.name, &naturals)
                .expect("in-bound instance");
            axiom_leaves.push((
                formula.clone(),
                LeafKind::SchemaInstance(schema.name.clone(), naturals),
            ));
            seeds.push(formula);
            let mut i = arity;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if values[i] < bound {
                    values[i] += 1;
                    break;
                }
                values[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    if let Some(g) = goal {
        seeds.push(g.clone());
    }
    seeds.push(Formula::Falsum);

    let mut formulas = BTreeSet::new();
    let mut exists_instances: BTreeMap<Formula, Vec<Formula>> = BTreeMap::new();
    let mut worklist = seeds;
    while let Some(f) = worklist.pop() {
        if f.symbol_count() > max_size || formulas.contains(&f) {
            continue;
        }
        if formulas.len() >= budget.max_universe {
            return Err(SearchError::UniverseTooLarge { cap: budget.max_universe });
        }
        formulas.insert(f.clone());
        match &f {
            Formula::Falsum | Formula::Atom { .. } => {}
            Formula::And(l, r) | Formula::Implies(l, r) => {
                worklist.push((**l).clone());
                worklist.push((**r).clone());
            }
            Formula::Not(b) => worklist.push((**b).clone()),
            Formula::Exists(var, body) => {
                let mut instances = Vec::new();
                // instantiate with the unary numerals within the term bound
                for value in 0..budget.term_bound as u64 {
                    let mut env = BTreeMap::new();
                    env.insert(var.clone(), crate::term::Term::Num(Natural::from(value)));
                    let instance = body.substitute(&env);
                    if instance.is_closed() {
                        instances.push(instance.clone());
                        worklist.push(instance);
                    }
                }
                exists_instances.insert(f.clone(), instances);
            }
        }
    }

    // drop recorded instances that the size cap excluded
    for instances in exists_instances.values_mut() {
        instances.retain(|i| formulas.contains(i));
    }
    axiom_leaves.retain(|(f, _)| formulas.contains(f));

    Ok(Universe { formulas, axiom_leaves, exists_instances })
}

/// Extend a universe with every conjunction of its members, iterated
/// `rounds` times under the size cap. Exhaustive derivation enumeration
/// wants conjunction targets that plain subformula closure cannot see.
pub fn and_forward_close(
    universe: &mut Universe,
    rounds: usize,
    budget: &SearchBudget,
) -> Result<(), SearchError> {
    let max_size = Natural::from(budget.max_formula_size);
    for _ in 0..rounds {
        let snapshot: Vec<Formula> = universe.formulas.iter().cloned().collect();
        let mut added = false;
        for left in &snapshot {
            for right in &snapshot {
                let candidate = Formula::and(left.clone(), right.clone());
                if candidate.symbol_count() > max_size
                    || universe.formulas.contains(&candidate)
                {
                    continue;
                }
                if universe.formulas.len() >= budget.max_universe {
                    return Err(SearchError::UniverseTooLarge { cap: budget.max_universe });
                }
                universe.formulas.insert(candidate);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(())
}

fn logical_axiom_leaf(f: &Formula) -> Option<LeafKind> {
    if let Formula::Implies(a, rest) = f {
        // K: A => (B => A)
        if let Formula::Implies(b, a2) = &**rest {
            if a == a2 {
                return Some(LeafKind::LogicalK((**a).clone(), (**b).clone()));
            }
        }
        // DNE: not not A => A
        if let Formula::Not(n1) = &**a {
            if let Formula::Not(inner) = &**n1 {
                if **inner == **rest {
                    return Some(LeafKind::LogicalDne((**rest).clone()));
                }
            }
        }
        // S: (A => (B => C)) => ((A => B) => (A => C))
        if let (Formula::Implies(a1, bc), Formula::Implies(ab, ac)) = (&**a, &**rest) {
            if let (Formula::Implies(b1, c1), Formula::Implies(a2, b2), Formula::Implies(a3, c2)) =
                (&**bc, &**ab, &**ac)
            {
                if a1 == a2 && a1 == a3 && b1 == b2 && c1 == c2 {
                    return Some(LeafKind::LogicalS(
                        (**a1).clone(),
                        (**b1).clone(),
                        (**c1).clone(),
                    ));
                }
            }
        }
    }
    None
}

fn build_edges(universe: &Universe, space: Space) -> Vec<Edge> {
    let mut edges = Vec::new();
    for f in &universe.formulas {
        match space {
            Space::Hilbert => {
                if let Some((antecedent, consequent)) = f.as_implication() {
                    let conclusion = consequent.to_formula();
                    if universe.contains(antecedent) && universe.contains(&conclusion) {
                        edges.push(Edge::Mp {
                            implication: f.clone(),
                            antecedent: antecedent.clone(),
                            conclusion,
                        });
                    }
                }
            }
            Space::NaturalDeduction => match f {
                Formula::And(l, r) => {
                    if universe.contains(l) && universe.contains(r) {
                        edges.push(Edge::AndIntro {
                            left: (**l).clone(),
                            right: (**r).clone(),
                            conclusion: f.clone(),
                        });
                        edges.push(Edge::AndElimL {
                            premise: f.clone(),
                            conclusion: (**l).clone(),
                        });
                        edges.push(Edge::AndElimR {
                            premise: f.clone(),
                            conclusion: (**r).clone(),
                        });
                    }
                }
                Formula::Not(inner) => {
                    if universe.contains(inner) {
                        edges.push(Edge::NotElim {
                            affirmation: (**inner).clone(),
                            negation: f.clone(),
                        });
                    }
                }
                Formula::Exists(_, _) => {
                    if let Some(instances) = universe.exists_instances.get(f) {
                        for instance in instances {
                            edges.push(Edge::ExistsIntro {
                                instance: instance.clone(),
                                conclusion: f.clone(),
                            });
                        }
                    }
                }
                _ => {}
            },
        }
    }
    edges
}

/// Is `candidate` strictly better than `current` for the same formula?
fn better(candidate: &SearchEntry, current: &SearchEntry, candidate_rule: RuleId, current_rule: RuleId) -> bool {
    if candidate.credibility != current.credibility {
        return candidate.credibility > current.credibility;
    }
    if candidate.cost != current.cost {
        return candidate.cost < current.cost;
    }
    candidate_rule < current_rule
}

fn entry_rule(e: &SearchEntry) -> RuleId {
    match &e.how {
        How::Leaf(_) => RuleId::Axiom,
        How::Rule { id, .. } => *id,
    }
}

/// Saturate one rule space over a universe.
fn saturate(
    universe: &Universe,
    space: Space,
    policy: &TruthTransferPolicy,
    cost: CostKind,
    budget: &SearchBudget,
) -> SaturationTable {
    let edges = build_edges(universe, space);
    let mut premise_index: BTreeMap<&Formula, Vec<usize>> = BTreeMap::new();
    for (i, edge) in edges.iter().enumerate() {
        for p in edge.premises() {
            premise_index.entry(p).or_default().push(i);
        }
    }

    let mut entries: BTreeMap<Formula, SearchEntry> = BTreeMap::new();
    // depth-0 layer: theory axioms, schema instances, and (Hilbert only)
    // the logical axiom instances visible inside the universe
    for (formula, kind) in &universe.axiom_leaves {
        let candidate = SearchEntry {
            credibility: UnitRational::one(),
            cost: cost.leaf_cost(formula),
            depth: 0,
            how: How::Leaf(kind.clone()),
        };
        match entries.get(formula) {
            Some(existing)
                if !better(&candidate, existing, RuleId::Axiom, entry_rule(existing)) => {}
            _ => {
                entries.insert(formula.clone(), candidate);
            }
        }
    }
    if space == Space::Hilbert {
        for f in &universe.formulas {
            if entries.contains_key(f) {
                continue;
            }
            if let Some(kind) = logical_axiom_leaf(f) {
                entries.insert(
                    f.clone(),
                    SearchEntry {
                        credibility: UnitRational::one(),
                        cost: cost.leaf_cost(f),
                        depth: 0,
                        how: How::Leaf(kind),
                    },
                );
            }
        }
    }

    let mut changed: BTreeSet<Formula> = entries.keys().cloned().collect();
    let mut rounds = 0;
    let mut exhausted = false;

    for round in 1..=budget.max_depth {
        if changed.is_empty() {
            exhausted = true;
            break;
        }
        let affected: BTreeSet<usize> = changed
            .iter()
            .filter_map(|f| premise_index.get(f))
            .flatten()
            .copied()
            .collect();
        let mut pending: BTreeMap<Formula, (SearchEntry, RuleId)> = BTreeMap::new();
        for i in affected {
            let edge = &edges[i];
            let premises = edge.premises();
            let Some(premise_entries) = premises
                .iter()
                .map(|p| entries.get(p))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let creds: Vec<UnitRational> = premise_entries
                .iter()
                .map(|e| e.credibility.clone())
                .collect();
            let rule = edge.rule();
            let candidate = SearchEntry {
                credibility: policy.apply(rule, &creds),
                cost: cost.rule_cost(
                    &edge.conclusion(),
                    &premise_entries.iter().map(|e| &e.cost).collect::<Vec<_>>(),
                ),
                depth: round,
                how: How::Rule {
                    id: rule,
                    premises: premises.into_iter().cloned().collect(),
                },
            };
            let conclusion = edge.conclusion();
            let beats_table = match entries.get(&conclusion) {
                Some(existing) => better(&candidate, existing, rule, entry_rule(existing)),
                None => true,
            };
            if !beats_table {
                continue;
            }
            match pending.get(&conclusion) {
                Some((queued, queued_rule))
                    if !better(&candidate, queued, rule, *queued_rule) => {}
                _ => {
                    pending.insert(conclusion, (candidate, rule));
                }
            }
        }
        if pending.is_empty() {
            exhausted = true;
            rounds = round - 1;
            break;
        }
        rounds = round;
        changed = pending.keys().cloned().collect();
        for (formula, (entry, _)) in pending {
            entries.insert(formula, entry);
        }
    }
    if changed.is_empty() {
        exhausted = true;
    }

    SaturationTable { entries, rounds, exhausted }
}

/// Both rule spaces saturated over the same universe.
pub struct SearchOutcome {
    pub hilbert: SaturationTable,
    pub nd: SaturationTable,
}

impl SearchOutcome {
    pub fn exhausted(&self) -> bool {
        self.hilbert.exhausted && self.nd.exhausted
    }

    pub fn rounds(&self) -> usize {
        self.hilbert.rounds.max(self.nd.rounds)
    }

    /// Best entry for a formula across the two calculi; on equal credibility
    /// and cost the natural-deduction witness is preferred (a fixed order
    /// keeps outputs deterministic).
    pub fn best(&self, formula: &Formula) -> Option<(&SaturationTable, &SearchEntry)> {
        match (self.hilbert.entry(formula), self.nd.entry(formula)) {
            (Some(h), Some(n)) => {
                let hilbert_strictly_better = h.credibility > n.credibility
                    || (h.credibility == n.credibility && h.cost < n.cost);
                if hilbert_strictly_better {
                    Some((&self.hilbert, h))
                } else {
                    Some((&self.nd, n))
                }
            }
            (Some(h), None) => Some((&self.hilbert, h)),
            (None, Some(n)) => Some((&self.nd, n)),
            (None, None) => None,
        }
    }
}

/// Saturate both calculi for a theory under a policy-generated measure.
pub fn saturate_theory(
    theory: &Theory,
    policy: &TruthTransferPolicy,
    goal: Option<&Formula>,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    let universe = build_universe(theory, goal, budget)?;
    let hilbert = saturate(&universe, Space::Hilbert, policy, CostKind::Nodes, budget);
    let nd = saturate(&universe, Space::NaturalDeduction, policy, CostKind::Nodes, budget);
    Ok(SearchOutcome { hilbert, nd })
}

/// Resolve the effective policy and cost metric for a measure.
///
/// Factorable measures erode with complexity, so the search minimizes the
/// complexity metric under a zero-decay policy and grades the result through
/// the segment. Composed measures search as their inner measure: search
/// derivations are detour-free, so normalization fixes them.
fn search_plan(measure: &CredibilityMeasure) -> (TruthTransferPolicy, CostKind, bool) {
    match measure {
        CredibilityMeasure::FromTtp(p) => (p.clone(), CostKind::Nodes, false),
        CredibilityMeasure::Factored { complexity, .. } => {
            let cost = match complexity {
                ComplexityKind::NodeCount => CostKind::Nodes,
                ComplexityKind::SymbolCount => CostKind::Symbols,
            };
            (TruthTransferPolicy::zero_decay(), cost, false)
        }
        CredibilityMeasure::Composed { inner, transform } => {
            let (p, c, nd_only) = search_plan(inner);
            // normalization is defined for natural deduction only, so a
            // composed measure cannot grade a Hilbert witness
            let nd_only = nd_only || matches!(transform, crate::measure::TransformKind::Normalize);
            (p, c, nd_only)
        }
    }
}

/// Search for a feasible proof of `goal` from the theory.
pub fn feasible_consequence(
    theory: &Theory,
    measure: &CredibilityMeasure,
    goal: &Formula,
    budget: &SearchBudget,
) -> Result<ConsequenceReport, SearchError> {
    if let Some(var) = goal.free_vars().first() {
        return Err(SearchError::OpenGoal(var.clone()));
    }
    let (policy, cost, nd_only) = search_plan(measure);
    let universe = build_universe(theory, Some(goal), budget)?;
    let hilbert = if nd_only {
        SaturationTable { entries: BTreeMap::new(), rounds: 0, exhausted: true }
    } else {
        saturate(&universe, Space::Hilbert, &policy, cost, budget)
    };
    let nd = saturate(&universe, Space::NaturalDeduction, &policy, cost, budget);
    let outcome = SearchOutcome { hilbert, nd };

    let status = match outcome.best(goal) {
        None => ConsequenceStatus::NotFound { exhausted: outcome.exhausted() },
        Some((table, _)) => {
            let witness = table.witness(goal).expect("entry has witness");
            // grade the actual witness under the actual measure
            let cred = credibility(measure, &witness)?;
            if cred.is_zero() {
                // a zero-credibility proof is not a feasible proof
                ConsequenceStatus::NotFound { exhausted: outcome.exhausted() }
            } else if cred.is_one() {
                ConsequenceStatus::Strong { witness }
            } else {
                ConsequenceStatus::Feasible { credibility: cred, witness }
            }
        }
    };
    Ok(ConsequenceReport {
        status,
        rounds: outcome.rounds(),
        exhausted: outcome.exhausted(),
    })
}

/// Search for a feasible proof of falsum.
pub fn feasibly_consistent(
    theory: &Theory,
    measure: &CredibilityMeasure,
    budget: &SearchBudget,
) -> Result<ConsistencyReport, SearchError> {
    let report = feasible_consequence(theory, measure, &Formula::Falsum, budget)?;
    let status = match report.status {
        ConsequenceStatus::Strong { witness } => ConsistencyStatus::Refuted {
            credibility: UnitRational::one(),
            witness,
        },
        ConsequenceStatus::Feasible { credibility, witness } => {
            ConsistencyStatus::Refuted { credibility, witness }
        }
        ConsequenceStatus::NotFound { exhausted } => {
            ConsistencyStatus::ConsistentWithinBudget { exhausted }
        }
    };
    Ok(ConsistencyReport { status, rounds: report.rounds, exhausted: report.exhausted })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Both searches were conclusive and the corrected biconditional holds.
    Agree,
    /// Both searches were conclusive and the biconditional fails.
    Disagree,
    /// At least one side hit its budget; `tentative_agreement` reports how
    /// the budget-limited answers line up.
    Inconclusive { tentative_agreement: bool },
}

/// Probe for well-behavedness of the measure at one formula.
///
/// The corrected biconditional is tested: `goal` derivable iff the theory
/// extended with its negation is infeasibly consistent, i.e. refutable.
pub struct WellBehavedReport {
    pub derivable: ConsequenceReport,
    pub negation_consistency: ConsistencyReport,
    pub verdict: ProbeVerdict,
}

pub fn well_behaved_probe(
    theory: &Theory,
    measure: &CredibilityMeasure,
    goal: &Formula,
    budget: &SearchBudget,
) -> Result<WellBehavedReport, SearchError> {
    let derivable = feasible_consequence(theory, measure, goal, budget)?;

    let mut extended = theory.clone();
    let mut negation_name = String::from("negated-goal");
    while extended.axiom(&negation_name).is_some() {
        negation_name.push('\'');
    }
    extended
        .add_axiom(&negation_name, Formula::not(goal.clone()))
        .expect("goal is closed");
    let negation_consistency = feasibly_consistent(&extended, measure, budget)?;

    let lhs_yes = derivable.status.found();
    let lhs_conclusive = lhs_yes
        || matches!(derivable.status, ConsequenceStatus::NotFound { exhausted: true });
    let rhs_refuted = matches!(negation_consistency.status, ConsistencyStatus::Refuted { .. });
    let rhs_conclusive = rhs_refuted
        || matches!(
            negation_consistency.status,
            ConsistencyStatus::ConsistentWithinBudget { exhausted: true }
        );

    let agreement = lhs_yes == rhs_refuted;
    let verdict = if lhs_conclusive && rhs_conclusive {
        if agreement {
            ProbeVerdict::Agree
        } else {
            ProbeVerdict::Disagree
        }
    } else {
        ProbeVerdict::Inconclusive { tentative_agreement: agreement }
    };

    Ok(WellBehavedReport { derivable, negation_consistency, verdict })
}

/// Exhaustively enumerate the valid assumption-free derivations from a
/// theory, stratified by depth, for each calculus separately.
///
/// The universe is conjunction-forward-closed so that introduction rules
/// have targets beyond the subformula closure. Counts are capped by
/// `budget.max_derivations`.
pub fn enumerate_derivations(
    theory: &Theory,
    budget: &SearchBudget,
) -> Result<DerivationEnumeration, SearchError> {
    let mut universe = build_universe(theory, None, budget)?;
    and_forward_close(&mut universe, budget.max_depth, budget)?;
    let hilbert = enumerate_space(&universe, Space::Hilbert, budget)?;
    let nd = enumerate_space(&universe, Space::NaturalDeduction, budget)?;
    Ok(DerivationEnumeration { hilbert, nd })
}

pub struct DerivationEnumeration {
    pub hilbert: Vec<Derivation>,
    pub nd: Vec<Derivation>,
}

fn enumerate_space(
    universe: &Universe,
    space: Space,
    budget: &SearchBudget,
) -> Result<Vec<Derivation>, SearchError> {
    let edges = build_edges(universe, space);
    let mut all: Vec<Derivation> = Vec::new();
    // per formula, tree indices stratified by depth
    let mut by_depth: BTreeMap<Formula, Vec<Vec<usize>>> = BTreeMap::new();

    let push = |d: Derivation, depth: usize,
                all: &mut Vec<Derivation>,
                by_depth: &mut BTreeMap<Formula, Vec<Vec<usize>>>|
     -> Result<(), SearchError> {
        if all.len() >= budget.max_derivations {
            return Err(SearchError::EnumerationTooLarge { cap: budget.max_derivations });
        }
        let layers = by_depth.entry(d.conclusion.clone()).or_default();
        while layers.len() <= depth {
            layers.push(Vec::new());
        }
        layers[depth].push(all.len());
        all.push(d);
        Ok(())
    };

    for (formula, kind) in &universe.axiom_leaves {
        push(
            Derivation {
                conclusion: formula.clone(),
                node: crate::derivation::Node::Leaf(kind.clone()),
            },
            0,
            &mut all,
            &mut by_depth,
        )?;
    }
    if space == Space::Hilbert {
        for f in &universe.formulas {
            if let Some(kind) = logical_axiom_leaf(f) {
                push(
                    Derivation {
                        conclusion: f.clone(),
                        node: crate::derivation::Node::Leaf(kind),
                    },
                    0,
                    &mut all,
                    &mut by_depth,
                )?;
            }
        }
    }

    // collect the indices of a formula's trees at exactly `depth`, or at
    // every depth up to `depth`
    let exactly = |by_depth: &BTreeMap<Formula, Vec<Vec<usize>>>, f: &Formula, depth: usize| {
        by_depth
            .get(f)
            .and_then(|layers| layers.get(depth))
            .cloned()
            .unwrap_or_default()
    };
    let up_to = |by_depth: &BTreeMap<Formula, Vec<Vec<usize>>>, f: &Formula, depth: usize| {
        let mut out = Vec::new();
        if let Some(layers) = by_depth.get(f) {
            for layer in layers.iter().take(depth + 1) {
                out.extend_from_slice(layer);
            }
        }
        out
    };

    for depth in 1..=budget.max_depth {
        let mut fresh: Vec<Derivation> = Vec::new();
        for edge in &edges {
            let premises = edge.premises();
            let arity = premises.len();
            // each premise draws either from the frontier (exactly depth-1)
            // or from strictly older layers; at least one from the frontier
            for mask in 1u32..(1 << arity) {
                let pools: Vec<Vec<usize>> = premises
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        if mask & (1 << i) != 0 {
                            exactly(&by_depth, p, depth - 1)
                        } else if depth >= 2 {
                            up_to(&by_depth, p, depth - 2)
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                if pools.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut picks = vec![0usize; arity];
                loop {
                    let parts: Vec<Derivation> = picks
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| all[pools[i][p]].clone())
                        .collect();
                    if all.len() + fresh.len() >= budget.max_derivations {
                        return Err(SearchError::EnumerationTooLarge {
                            cap: budget.max_derivations,
                        });
                    }
                    fresh.push(rebuild(edge.rule(), &edge.conclusion(), parts));
                    let mut i = arity;
                    let mut done = false;
                    loop {
                        if i == 0 {
                            done = true;
                            break;
                        }
                        i -= 1;
                        picks[i] += 1;
                        if picks[i] < pools[i].len() {
                            break;
                        }
                        picks[i] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for d in fresh {
            push(d, depth, &mut all, &mut by_depth)?;
        }
    }

    Ok(all)
}
