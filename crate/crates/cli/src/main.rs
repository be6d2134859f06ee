//! Batch front end for the feasibility toolkit.
//!
//! Exit codes, uniformly: 0 when the queried property holds (or the answer
//! is consistent-within-budget), 1 when a violation or refutation was found,
//! 2 when the verdict is budget-limited, 3 on input or validation errors.
//! Identical inputs produce byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use feas_core::fis::{
    check_fis, check_weak_closure, defuzzify, dominates, feasibility_radius, DefuzzCut,
};
use feas_core::measure::CredibilityMeasure;
use feas_core::normalize::normalize_trace;
use feas_core::search::{
    feasible_consequence, feasibly_consistent, well_behaved_probe, ConsequenceStatus,
    ConsistencyStatus, ProbeVerdict, SearchBudget,
};
use feas_core::semantics::{check_t_model, soundness_audit};
use feas_core::syntax::{
    parse_fis, parse_formula, parse_proof, parse_structure, parse_theory, parse_ttp, print_fis,
    print_formula, print_proof, print_structure,
};
use feas_core::term_model::{build_term_model, CompletionPolicy};
use feas_core::ttp::validate_ttp;
use feas_core::{derivation, Interpretation, Signature};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "feas",
    version,
    about = "Fuzzy initial segments, dissipative proofs, and vague-truth models",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format: human text or line-delimited key=value records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Fuzzy initial segments: checks, transforms, radius, defuzzification.
    Fis {
        #[command(subcommand)]
        cmd: FisCmd,
    },
    /// Proof checking, credibility, and normalization.
    Proof {
        #[command(subcommand)]
        cmd: ProofCmd,
    },
    /// Truth transfer policies.
    Ttp {
        #[command(subcommand)]
        cmd: TtpCmd,
    },
    /// Feasible consequence, consistency, and well-behavedness probes.
    Theory {
        #[command(subcommand)]
        cmd: TheoryCmd,
    },
    /// Fuzzy structures: evaluation, model checks, audits, term models.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SigChoice {
    /// 0 and successor only.
    Unary,
    /// Unary plus addition.
    Add,
    /// Unary plus multiplication.
    Mul,
    /// Unary plus addition and multiplication.
    Arith,
}

impl SigChoice {
    fn build(self) -> Signature {
        let extra: &[(&str, usize)] = match self {
            SigChoice::Unary => &[],
            SigChoice::Add => &[("+", 2)],
            SigChoice::Mul => &[("*", 2)],
            SigChoice::Arith => &[("+", 2), ("*", 2)],
        };
        Signature::with_symbols(extra).expect("built-in signatures are well-formed")
    }
}

#[derive(Subcommand)]
enum FisCmd {
    /// Check the segment conditions up to a horizon.
    Check {
        /// Segment spec, e.g. "(linear 5)".
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 4096)]
        horizon: u64,
    },
    /// Feasibility radius over the closed terms of a signature.
    Radius {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = SigChoice::Unary)]
        sig: SigChoice,
        /// Term length bound.
        #[arg(long, default_value_t = 24)]
        bound: usize,
    },
    /// Weak closure of the segment under a signature's symbols.
    Closure {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = SigChoice::Unary)]
        sig: SigChoice,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Does the second segment dominate the first?
    Dominates {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        spec2: String,
        #[arg(long, default_value_t = 1024)]
        horizon: u64,
    },
    /// The binary-notation rescaling of a segment.
    Rescale {
        #[arg(long)]
        spec: String,
    },
    /// The small-numbers cut of a segment.
    Small {
        #[arg(long)]
        spec: String,
    },
    /// Collapse a segment into a saturating finite arithmetic.
    Defuzzify {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = CutChoice::Support)]
        cut: CutChoice,
        /// Probe bound for locating the collapse boundary.
        #[arg(long, default_value_t = 4096)]
        bound: usize,
    },
    /// Evaluate the membership degree at a point.
    Eval {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        at: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutChoice {
    Support,
    Strong,
}

#[derive(Args)]
struct ProofInputs {
    /// Theory file.
    #[arg(long)]
    theory: PathBuf,
    /// Proof file.
    #[arg(long)]
    proof: PathBuf,
}

#[derive(Subcommand)]
enum ProofCmd {
    /// Check a proof against a theory.
    Check {
        #[command(flatten)]
        inputs: ProofInputs,
    },
    /// Credibility of a proof under a transfer policy.
    Cred {
        #[command(flatten)]
        inputs: ProofInputs,
        /// Policy spec, e.g. "(erosion 1/1024)".
        #[arg(long)]
        ttp: String,
    },
    /// Remove detours from a natural-deduction proof.
    Normalize {
        #[command(flatten)]
        inputs: ProofInputs,
    },
}

#[derive(Subcommand)]
enum TtpCmd {
    /// Check the admissibility conditions on an exhaustive rational grid.
    Validate {
        #[arg(long)]
        ttp: String,
        #[arg(long, default_value_t = 16)]
        grid_denominator: u64,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum derivation depth.
    #[arg(long, default_value_t = 16)]
    depth: usize,
    /// Term instantiation bound for existentials and term models.
    #[arg(long, default_value_t = 24)]
    term_bound: usize,
    /// Symbol-count cap for formulas admitted to the search universe.
    #[arg(long, default_value_t = 65536)]
    max_formula_size: u64,
}

impl BudgetArgs {
    fn build(&self) -> SearchBudget {
        let mut budget = SearchBudget::with_depth(self.depth);
        budget.term_bound = self.term_bound;
        budget.max_formula_size = self.max_formula_size;
        budget
    }
}

#[derive(Subcommand)]
enum TheoryCmd {
    /// Search for a feasible proof of a goal formula.
    Consequence {
        #[arg(long)]
        theory: PathBuf,
        /// Goal formula, e.g. "(F (num 2))".
        #[arg(long)]
        goal: String,
        #[arg(long)]
        ttp: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for a feasible proof of falsum.
    Consistency {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        ttp: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Probe the corrected well-behavedness biconditional at a goal.
    WellBehaved {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        ttp: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Evaluate the degree of a closed formula in a structure.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Are all axioms strongly satisfied?
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Exhaustive per-proof soundness audit within a budget.
    Audit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        ttp: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build the term model of a feasibly consistent theory.
    Termmodel {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        ttp: String,
        #[arg(long, value_enum, default_value_t = CompletionChoice::Negation)]
        completion: CompletionChoice,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompletionChoice {
    /// Undecided atoms get degree 0.
    Negation,
    /// Undecided atoms get degree 1.
    Affirmation,
}

/// Outcome of a command: what to print and how to exit.
struct Outcome {
    exit: u8,
    /// (key, value) pairs, printed as records or rendered as human text.
    fields: Vec<(String, String)>,
    /// Human-mode lines printed verbatim instead of the fields.
    human: Vec<String>,
}

impl Outcome {
    fn new(exit: u8) -> Outcome {
        Outcome { exit, fields: Vec::new(), human: Vec::new() }
    }

    fn field(mut self, key: &str, value: impl ToString) -> Outcome {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    fn line(mut self, text: impl Into<String>) -> Outcome {
        self.human.push(text.into());
        self
    }
}

struct Failure {
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { message: e.to_string() }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { message: format!("{}: {e}", path.display()) })
}

fn nat_u64(n: u64) -> feas_core::Natural {
    feas_core::Natural::from(n)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Fis { cmd } => run_fis(cmd),
        Command::Proof { cmd } => run_proof(cmd),
        Command::Ttp { cmd } => run_ttp(cmd),
        Command::Theory { cmd } => run_theory(cmd),
        Command::Model { cmd } => run_model(cmd),
    }
}

fn run_fis(cmd: &FisCmd) -> Result<Outcome, Failure> {
    match cmd {
        FisCmd::Check { spec, horizon } => {
            let g = parse_fis(spec)?;
            let report = check_fis(&g, *horizon)?;
            let exit = if report.is_fis { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("is_fis", report.is_fis)
                .field("is_strict", report.is_strict)
                .field("is_regular", report.is_regular)
                .field("horizon", report.horizon);
            if let Some((n, v)) = &report.first_violation {
                out = out.field("first_violation_at", n).field("violation", v);
            }
            let human = format!(
                "is-fis: {} (strict: {}, regular: {}, horizon {})",
                report.is_fis, report.is_strict, report.is_regular, report.horizon
            );
            out = out.line(human);
            if let Some((n, v)) = &report.first_violation {
                out = out.line(format!("first violation at {n}: {v}"));
            }
            Ok(out)
        }
        FisCmd::Radius { spec, sig, bound } => {
            let g = parse_fis(spec)?;
            let report =
                feasibility_radius(&g, &sig.build(), &Interpretation::standard(), *bound)?;
            let mut out = Outcome::new(0)
                .field("radius", &report.radius)
                .field("horizon_limited", report.horizon_limited)
                .line(report.radius.to_string());
            if report.horizon_limited {
                out = out.line("horizon-limited: true");
            }
            Ok(out)
        }
        FisCmd::Closure { spec, sig, bound } => {
            let g = parse_fis(spec)?;
            let report =
                check_weak_closure(&g, &sig.build(), &Interpretation::standard(), *bound)?;
            let exit = if report.closed { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("closed", report.closed)
                .field("strict_witness_found", report.strict_witness.is_some());
            out = out.line(if report.closed { "closed" } else { "violation" });
            if let Some(v) = &report.violation {
                let args: Vec<String> = v.args.iter().map(|a| a.to_string()).collect();
                out = out
                    .field("violation_symbol", &v.symbol)
                    .field("violation_args", args.join(","))
                    .field("violation_result", &v.result)
                    .line(format!(
                        "{}({}) = {} has degree 0",
                        v.symbol,
                        args.join(", "),
                        v.result
                    ));
            }
            if let Some((term, value)) = &report.strict_witness {
                out = out
                    .field("strict_witness_value", value)
                    .line(format!(
                        "strict witness: {} with value {}",
                        feas_core::syntax::print_term(term),
                        value
                    ));
            }
            Ok(out)
        }
        FisCmd::Dominates { spec, spec2, horizon } => {
            let g = parse_fis(spec)?;
            let g2 = parse_fis(spec2)?;
            let report = dominates(&g, &g2, *horizon)?;
            let exit = if report.weak { 0 } else { 1 };
            Ok(Outcome::new(exit)
                .field("weak", report.weak)
                .field("strict_pointwise", report.strict_pointwise)
                .line(format!(
                    "weak: {} strict-pointwise: {}",
                    report.weak, report.strict_pointwise
                )))
        }
        FisCmd::Rescale { spec } => {
            let g = parse_fis(spec)?.log_rescale();
            let text = print_fis(&g);
            Ok(Outcome::new(0).field("spec", &text).line(text))
        }
        FisCmd::Small { spec } => {
            let g = parse_fis(spec)?.small_cut();
            let text = print_fis(&g);
            Ok(Outcome::new(0).field("spec", &text).line(text))
        }
        FisCmd::Defuzzify { spec, cut, bound } => {
            let g = parse_fis(spec)?;
            let cut = match cut {
                CutChoice::Support => DefuzzCut::Support,
                CutChoice::Strong => DefuzzCut::Strong,
            };
            let arithmetic = defuzzify(&g, cut, *bound)?;
            let elements: Vec<String> =
                arithmetic.elements().iter().map(|e| e.to_string()).collect();
            Ok(Outcome::new(0)
                .field("radius", arithmetic.radius())
                .field("element_count", arithmetic.element_count())
                .field("elements", elements.join(","))
                .line(format!(
                    "radius {} with {} elements: {}",
                    arithmetic.radius(),
                    arithmetic.element_count(),
                    elements.join(" ")
                )))
        }
        FisCmd::Eval { spec, at } => {
            let g = parse_fis(spec)?;
            let degree = g.evaluate(&nat_u64(*at))?;
            let class = g.classify(&nat_u64(*at))?;
            Ok(Outcome::new(0)
                .field("degree", &degree)
                .field("class", class)
                .line(format!("{degree} ({class})")))
        }
    }
}

fn run_proof(cmd: &ProofCmd) -> Result<Outcome, Failure> {
    match cmd {
        ProofCmd::Check { inputs } => {
            let theory = parse_theory(&read_file(&inputs.theory)?)?;
            let proof = parse_proof(&read_file(&inputs.proof)?, &theory)?;
            let report = derivation::check_derivation(&proof, &theory);
            let exit = if report.valid { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("valid", report.valid)
                .field("conclusion", print_formula(&proof.conclusion));
            out = out.line(if report.valid {
                format!("valid: concludes {}", print_formula(&proof.conclusion))
            } else {
                "invalid".to_string()
            });
            if let Some(reason) = &report.reason {
                let path: Vec<String> = report.path.iter().map(usize::to_string).collect();
                out = out
                    .field("reason", reason)
                    .field("path", path.join("."))
                    .line(format!("at premise path [{}]: {reason}", path.join(" ")));
            }
            Ok(out)
        }
        ProofCmd::Cred { inputs, ttp } => {
            let theory = parse_theory(&read_file(&inputs.theory)?)?;
            let proof = parse_proof(&read_file(&inputs.proof)?, &theory)?;
            let report = derivation::check_derivation(&proof, &theory);
            if !report.valid {
                return Err(Failure {
                    message: format!(
                        "proof is invalid: {}",
                        report.reason.unwrap_or_else(|| "malformed".into())
                    ),
                });
            }
            let policy = parse_ttp(ttp)?;
            let measure = CredibilityMeasure::FromTtp(policy);
            let cred = feas_core::measure::credibility(&measure, &proof)?;
            Ok(Outcome::new(0).field("credibility", &cred).line(cred.to_string()))
        }
        ProofCmd::Normalize { inputs } => {
            let theory = parse_theory(&read_file(&inputs.theory)?)?;
            let proof = parse_proof(&read_file(&inputs.proof)?, &theory)?;
            let (normal, trace) = normalize_trace(&proof)?;
            let steps: Vec<String> = trace.iter().map(usize::to_string).collect();
            Ok(Outcome::new(0)
                .field("steps", trace.len().saturating_sub(1))
                .field("node_counts", steps.join(","))
                .field("proof", print_proof(&normal))
                .line(print_proof(&normal)))
        }
    }
}

fn run_ttp(cmd: &TtpCmd) -> Result<Outcome, Failure> {
    match cmd {
        TtpCmd::Validate { ttp, grid_denominator } => {
            let policy = parse_ttp(ttp)?;
            let report = validate_ttp(&policy, *grid_denominator)?;
            let exit = if report.ok { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("ok", report.ok)
                .field("grid_denominator", report.grid_denominator)
                .field("violations", report.violations.len());
            out = out.line(if report.ok {
                format!("admissible on the 1/{} grid", report.grid_denominator)
            } else {
                format!("{} violations", report.violations.len())
            });
            if let Some(v) = report.violations.first() {
                let point: Vec<String> = v.point.iter().map(|p| p.to_string()).collect();
                out = out
                    .field("witness_rule", v.rule.name())
                    .field("witness_point", point.join(","))
                    .field("witness_condition", v.condition)
                    .line(format!(
                        "first witness: {} at ({}): {}",
                        v.rule.name(),
                        point.join(", "),
                        v.condition
                    ));
            }
            Ok(out)
        }
    }
}

fn run_theory(cmd: &TheoryCmd) -> Result<Outcome, Failure> {
    match cmd {
        TheoryCmd::Consequence { theory, goal, ttp, budget } => {
            let theory = parse_theory(&read_file(theory)?)?;
            let goal = parse_formula(goal)?;
            let measure = CredibilityMeasure::FromTtp(parse_ttp(ttp)?);
            let report = feasible_consequence(&theory, &measure, &goal, &budget.build())?;
            let out = match report.status {
                ConsequenceStatus::Strong { witness } => Outcome::new(0)
                    .field("status", "strong")
                    .field("credibility", "1")
                    .field("witness", print_proof(&witness))
                    .line("strong")
                    .line(format!("witness: {}", print_proof(&witness))),
                ConsequenceStatus::Feasible { credibility, witness } => Outcome::new(0)
                    .field("status", "feasible")
                    .field("credibility", &credibility)
                    .field("witness", print_proof(&witness))
                    .line(format!("feasible with credibility {credibility}"))
                    .line(format!("witness: {}", print_proof(&witness))),
                ConsequenceStatus::NotFound { exhausted } => {
                    let exit = if exhausted { 1 } else { 2 };
                    Outcome::new(exit)
                        .field("status", "not-found")
                        .field("exhausted", exhausted)
                        .line(if exhausted {
                            "not derivable within the explored universe"
                        } else {
                            "not found within budget"
                        })
                }
            };
            Ok(out.field("rounds", report.rounds))
        }
        TheoryCmd::Consistency { theory, ttp, budget } => {
            let theory = parse_theory(&read_file(theory)?)?;
            let measure = CredibilityMeasure::FromTtp(parse_ttp(ttp)?);
            let report = feasibly_consistent(&theory, &measure, &budget.build())?;
            let out = match report.status {
                ConsistencyStatus::ConsistentWithinBudget { exhausted } => Outcome::new(0)
                    .field("status", "consistent-within-budget")
                    .field("exhausted", exhausted)
                    .line("consistent-within-budget"),
                ConsistencyStatus::Refuted { credibility, witness } => Outcome::new(1)
                    .field("status", "refuted")
                    .field("credibility", &credibility)
                    .field("witness", print_proof(&witness))
                    .line(format!("refuted with credibility {credibility}"))
                    .line(format!("witness: {}", print_proof(&witness))),
            };
            Ok(out.field("rounds", report.rounds))
        }
        TheoryCmd::WellBehaved { theory, goal, ttp, budget } => {
            let theory = parse_theory(&read_file(theory)?)?;
            let goal = parse_formula(goal)?;
            let measure = CredibilityMeasure::FromTtp(parse_ttp(ttp)?);
            let report = well_behaved_probe(&theory, &measure, &goal, &budget.build())?;
            let derivable = report.derivable.status.found();
            let refuted =
                matches!(report.negation_consistency.status, ConsistencyStatus::Refuted { .. });
            let (exit, verdict) = match report.verdict {
                ProbeVerdict::Agree => (0, "agree".to_string()),
                ProbeVerdict::Disagree => (1, "disagree".to_string()),
                ProbeVerdict::Inconclusive { tentative_agreement } => {
                    (2, format!("inconclusive (tentative agreement: {tentative_agreement})"))
                }
            };
            Ok(Outcome::new(exit)
                .field("derivable", derivable)
                .field("negation_refuted", refuted)
                .field("verdict", &verdict)
                .line(format!(
                    "derivable: {derivable}, negation refuted: {refuted}, verdict: {verdict}"
                )))
        }
    }
}

fn run_model(cmd: &ModelCmd) -> Result<Outcome, Failure> {
    match cmd {
        ModelCmd::Eval { model, formula } => {
            let structure = parse_structure(&read_file(model)?)?;
            let formula = parse_formula(formula)?;
            let report = structure.report(&formula)?;
            Ok(Outcome::new(0)
                .field("degree", &report.degree)
                .field("satisfied", report.satisfied)
                .field("strongly_satisfied", report.strongly_satisfied)
                .line(format!(
                    "{} (satisfied: {}, strong: {})",
                    report.degree, report.satisfied, report.strongly_satisfied
                )))
        }
        ModelCmd::Check { model, theory } => {
            let structure = parse_structure(&read_file(model)?)?;
            let theory = parse_theory(&read_file(theory)?)?;
            let report = check_t_model(&structure, &theory)?;
            let exit = if report.is_model { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("is_model", report.is_model)
                .field("axioms_checked", report.axioms_checked)
                .line(if report.is_model {
                    format!("model of {} ({} axioms)", theory.name, report.axioms_checked)
                } else {
                    format!("not a model of {}", theory.name)
                });
            for (name, degree) in report.failures.iter().take(5) {
                out = out
                    .field("failed_axiom", name)
                    .line(format!("axiom {name} has degree {degree}"));
            }
            Ok(out)
        }
        ModelCmd::Audit { model, theory, ttp, budget } => {
            let structure = parse_structure(&read_file(model)?)?;
            let theory = parse_theory(&read_file(theory)?)?;
            let measure = CredibilityMeasure::FromTtp(parse_ttp(ttp)?);
            let report = soundness_audit(&structure, &theory, &measure, &budget.build())?;
            let exit = if report.violations.is_empty() { 0 } else { 1 };
            let mut out = Outcome::new(exit)
                .field("derivations_checked", report.derivations_checked)
                .field("violations", report.violations.len())
                .line(format!(
                    "{} derivations checked, {} violations",
                    report.derivations_checked,
                    report.violations.len()
                ));
            if let Some(v) = report.violations.first() {
                out = out
                    .field("witness_conclusion", print_formula(&v.conclusion))
                    .field("witness_degree", &v.degree)
                    .field("witness_credibility", &v.credibility)
                    .line(format!(
                        "{} has degree {} below credibility {}",
                        print_formula(&v.conclusion),
                        v.degree,
                        v.credibility
                    ));
            }
            Ok(out)
        }
        ModelCmd::Termmodel { theory, ttp, completion, budget } => {
            let theory = parse_theory(&read_file(theory)?)?;
            let measure = CredibilityMeasure::FromTtp(parse_ttp(ttp)?);
            let completion = match completion {
                CompletionChoice::Negation => CompletionPolicy::AdjoinNegation,
                CompletionChoice::Affirmation => CompletionPolicy::AdjoinAffirmation,
            };
            let model = build_term_model(&theory, &measure, &budget.build(), completion)?;
            let exit = if model.model_report.is_model { 0 } else { 1 };
            let rendered = print_structure(&model.structure);
            let mut out = Outcome::new(exit)
                .field("is_model", model.model_report.is_model)
                .field("axioms_checked", model.model_report.axioms_checked);
            for line in rendered.lines() {
                out = out.line(line.to_string());
            }
            out.fields.push(("structure".into(), rendered.replace('\n', " ")));
            if !model.model_report.is_model {
                let (name, degree) = &model.model_report.failures[0];
                out = out
                    .field("failed_axiom", name)
                    .line(format!("; axiom {name} is not strong: degree {degree}"));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            match cli.format {
                Format::Human => {
                    for line in &outcome.human {
                        println!("{line}");
                    }
                }
                Format::Records => {
                    let mut buffer = String::new();
                    for (key, value) in &outcome.fields {
                        writeln!(buffer, "{key}={value}").expect("string write");
                    }
                    print!("{buffer}");
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(3)
        }
    }
}
