//! Text syntax for every artifact kind, over one s-expression reader.
//!
//! Segments: `(linear 5)`, `(sharp 3)`, `(log-rescale G)`, `(small G)`,
//! `(shift 10 G)`, `(table ((0 1) (1 3/4)) 0)`.
//!
//! Formulas: `false`, `P`, `(F (num 8))`, `(not f)`, `(and f g)`,
//! `(=> f g)`, `(exists x f)`. Terms: `0`, `(S t)`, `(+ t t)`, `(* t t)`,
//! `(num k)`, bound variables by name, schema variables as `?n`.
//!
//! Theories: `(axiom name f)` and `(schema name template :bound k)` forms;
//! a schema without `:bound` is rejected (infinite axiom schemas are not a
//! thing here).
//!
//! Proofs: `(axiom name)`, `(schema-inst name k ...)`, `(assume u f)`,
//! `(ax-k f g)`, `(ax-s f g h)`, `(ax-dne f)`, `(mp p q)`,
//! `(and-intro p q)`, `(and-elim-l p)`, `(and-elim-r p)`,
//! `(not-elim p q)`, `(not-intro u p)` or `(not-intro u f p)`,
//! `(exists-intro f p)`.
//!
//! Policies: `(zero-decay)`, `(erosion 1/1024)`, `(product)`,
//! `(constant 1/2)`, `(max-premise)`, `(per-rule (mp P) ... (default P))`.
//!
//! Structures: `(domain 0 1 2 top)` or `(saturating-cut 1024)`,
//! `(const zero 0)`, `(fun S ((0 1) (1 2) (2 top) (top top)))`,
//! `(pred F ((0 1) (1 1023/1024)) :default 0)`, `(ttp (erosion 1/1024))`,
//! `(override f 1/2)`.

use crate::derivation::{Derivation, LeafKind, Node, RuleId};
use crate::fis::FisDescriptor;
use crate::formula::Formula;
use crate::nat::Natural;
use crate::rat::UnitRational;
use crate::semantics::FuzzyStructure;
use crate::sexpr::{parse_many, parse_one, Sexpr, SexprError, Span};
use crate::term::Term;
use crate::theory::Theory;
use crate::ttp::{PolicyKind, TruthTransferPolicy};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub span: Option<Span>,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(f, "{span}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl From<SexprError> for SyntaxError {
    fn from(e: SexprError) -> Self {
        let span = match e {
            SexprError::UnclosedParen { span }
            | SexprError::UnexpectedClose { span }
            | SexprError::Trailing { span } => Some(span),
            SexprError::Empty => None,
        };
        SyntaxError { span, message: e.to_string() }
    }
}

fn err<T>(span: Span, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { span: Some(span), message: message.into() })
}

fn expect_atom<'a>(e: &'a Sexpr, what: &str) -> Result<&'a str, SyntaxError> {
    e.atom()
        .ok_or_else(|| SyntaxError { span: Some(e.span()), message: format!("expected {what}") })
}

fn head(e: &Sexpr) -> Result<(&str, &[Sexpr]), SyntaxError> {
    let items = e
        .list()
        .ok_or_else(|| SyntaxError { span: Some(e.span()), message: "expected a list".into() })?;
    let first = items
        .first()
        .ok_or_else(|| SyntaxError { span: Some(e.span()), message: "empty list".into() })?;
    Ok((expect_atom(first, "a keyword")?, &items[1..]))
}

fn arity(span: Span, args: &[Sexpr], want: usize, what: &str) -> Result<(), SyntaxError> {
    if args.len() != want {
        return err(span, format!("{what} takes {want} arguments, got {}", args.len()));
    }
    Ok(())
}

pub fn parse_natural_atom(e: &Sexpr) -> Result<Natural, SyntaxError> {
    let text = expect_atom(e, "a natural number")?;
    text.parse::<Natural>().map_err(|_| SyntaxError {
        span: Some(e.span()),
        message: format!("`{text}` is not a natural number"),
    })
}

pub fn parse_unit_rational_atom(e: &Sexpr) -> Result<UnitRational, SyntaxError> {
    let text = expect_atom(e, "a rational in [0,1]")?;
    parse_unit_rational_str(text).map_err(|m| SyntaxError { span: Some(e.span()), message: m })
}

pub fn parse_unit_rational_str(text: &str) -> Result<UnitRational, String> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: Natural = numer
        .parse()
        .map_err(|_| format!("`{text}` is not a rational number"))?;
    let d: Natural = denom
        .parse()
        .map_err(|_| format!("`{text}` is not a rational number"))?;
    UnitRational::new(n, d).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- segments

pub fn parse_fis(input: &str) -> Result<FisDescriptor, SyntaxError> {
    fis_from_sexpr(&parse_one(input)?)
}

pub fn fis_from_sexpr(e: &Sexpr) -> Result<FisDescriptor, SyntaxError> {
    let (keyword, args) = head(e)?;
    let span = e.span();
    match keyword {
        "linear" => {
            arity(span, args, 1, "linear")?;
            let width = parse_natural_atom(&args[0])?;
            if width.is_zero() {
                return err(args[0].span(), "linear width must be positive");
            }
            Ok(FisDescriptor::Linear { width })
        }
        "sharp" => {
            arity(span, args, 1, "sharp")?;
            let index = parse_natural_atom(&args[0])?;
            let index = u32::try_from(&index)
                .map_err(|_| SyntaxError {
                    span: Some(args[0].span()),
                    message: "sharp tower index is far beyond the guard".into(),
                })?;
            Ok(FisDescriptor::SharpTower { index })
        }
        "log-rescale" => {
            arity(span, args, 1, "log-rescale")?;
            Ok(fis_from_sexpr(&args[0])?.log_rescale())
        }
        "small" => {
            arity(span, args, 1, "small")?;
            Ok(fis_from_sexpr(&args[0])?.small_cut())
        }
        "shift" => {
            arity(span, args, 2, "shift")?;
            let start = parse_natural_atom(&args[0])?;
            Ok(fis_from_sexpr(&args[1])?.shifted(start))
        }
        "table" => {
            arity(span, args, 2, "table")?;
            let rows = args[0].list().ok_or_else(|| SyntaxError {
                span: Some(args[0].span()),
                message: "table entries must be a list of (key value) pairs".into(),
            })?;
            let mut entries = Vec::new();
            for row in rows {
                let pair = row.list().filter(|p| p.len() == 2).ok_or_else(|| SyntaxError {
                    span: Some(row.span()),
                    message: "table entry must be (key value)".into(),
                })?;
                entries.push((parse_natural_atom(&pair[0])?, parse_unit_rational_atom(&pair[1])?));
            }
            let tail = parse_unit_rational_atom(&args[1])?;
            FisDescriptor::table(entries, tail)
                .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })
        }
        other => err(span, format!("unknown segment constructor `{other}`")),
    }
}

pub fn print_fis(g: &FisDescriptor) -> String {
    match g {
        FisDescriptor::Linear { width } => format!("(linear {width})"),
        FisDescriptor::SharpTower { index } => format!("(sharp {index})"),
        FisDescriptor::LogRescale { inner } => format!("(log-rescale {})", print_fis(inner)),
        FisDescriptor::SmallCut { inner } => format!("(small {})", print_fis(inner)),
        FisDescriptor::Shifted { inner, start } => {
            format!("(shift {start} {})", print_fis(inner))
        }
        FisDescriptor::Table { entries, tail } => {
            let rows: Vec<String> = entries
                .iter()
                .map(|(k, v)| format!("({k} {v})"))
                .collect();
            format!("(table ({}) {tail})", rows.join(" "))
        }
    }
}

// ------------------------------------------------------- terms and formulas


pub fn term_from_sexpr(e: &Sexpr, bound: &[String]) -> Result<Term, SyntaxError> {
    match e {
        Sexpr::Atom(text, span) => {
            if let Ok(n) = text.parse::<Natural>() {
                return Ok(Term::Num(n));
            }
            if let Some(var) = text.strip_prefix('?') {
                if var.is_empty() {
                    return err(*span, "`?` needs a variable name");
                }
                return Ok(Term::Var(var.into()));
            }
            if bound.iter().any(|b| b == text) {
                return Ok(Term::Var(text.clone()));
            }
            // an unbound bare symbol is a constant of the signature
            Ok(Term::App(text.clone(), Vec::new()))
        }
        Sexpr::List(items, span) => {
            let first = items
                .first()
                .ok_or_else(|| SyntaxError { span: Some(*span), message: "empty term".into() })?;
            let name = expect_atom(first, "a function symbol")?;
            if name == "num" {
                arity(*span, &items[1..], 1, "num")?;
                return Ok(Term::Num(parse_natural_atom(&items[1])?));
            }
            let args = items[1..]
                .iter()
                .map(|a| term_from_sexpr(a, bound))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::app(name, args))
        }
    }
}

pub fn print_term(t: &Term) -> String {
    match t {
        // short numerals keep the successor spelling; long ones use the sugar
        Term::Num(n) => match u64::try_from(n) {
            Ok(0) => "0".into(),
            Ok(k) if k <= 4 => {
                let mut out = String::from("0");
                for _ in 0..k {
                    out = format!("(S {out})");
                }
                out
            }
            _ => format!("(num {n})"),
        },
        Term::Var(v) => format!("?{v}"),
        Term::App(name, args) => {
            if args.is_empty() {
                name.clone()
            } else {
                let parts: Vec<String> = args.iter().map(print_term).collect();
                format!("({name} {})", parts.join(" "))
            }
        }
    }
}

pub fn parse_formula(input: &str) -> Result<Formula, SyntaxError> {
    formula_from_sexpr(&parse_one(input)?, &[])
}

pub fn formula_from_sexpr(e: &Sexpr, bound: &[String]) -> Result<Formula, SyntaxError> {
    match e {
        Sexpr::Atom(text, _) => match text.as_str() {
            "false" | "bot" => Ok(Formula::Falsum),
            _ => Ok(Formula::atom0(text)),
        },
        Sexpr::List(items, span) => {
            let first = items
                .first()
                .ok_or_else(|| SyntaxError { span: Some(*span), message: "empty formula".into() })?;
            let keyword = expect_atom(first, "a connective or predicate")?;
            let args = &items[1..];
            match keyword {
                "not" => {
                    arity(*span, args, 1, "not")?;
                    Ok(Formula::not(formula_from_sexpr(&args[0], bound)?))
                }
                "and" => {
                    arity(*span, args, 2, "and")?;
                    Ok(Formula::and(
                        formula_from_sexpr(&args[0], bound)?,
                        formula_from_sexpr(&args[1], bound)?,
                    ))
                }
                "=>" => {
                    arity(*span, args, 2, "=>")?;
                    Ok(Formula::implies(
                        formula_from_sexpr(&args[0], bound)?,
                        formula_from_sexpr(&args[1], bound)?,
                    ))
                }
                "exists" => {
                    arity(*span, args, 2, "exists")?;
                    let var = expect_atom(&args[0], "a variable name")?;
                    let mut inner = bound.to_vec();
                    inner.push(var.to_string());
                    Ok(Formula::exists(var, formula_from_sexpr(&args[1], &inner)?))
                }
                pred => {
                    let terms = args
                        .iter()
                        .map(|a| term_from_sexpr(a, bound))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::atom(pred, terms))
                }
            }
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    match f {
        Formula::Falsum => "false".into(),
        Formula::Atom { pred, args } => {
            if args.is_empty() {
                pred.clone()
            } else {
                let parts: Vec<String> = args.iter().map(print_term).collect();
                format!("({pred} {})", parts.join(" "))
            }
        }
        Formula::And(l, r) => format!("(and {} {})", print_formula(l), print_formula(r)),
        Formula::Not(b) => format!("(not {})", print_formula(b)),
        Formula::Implies(l, r) => format!("(=> {} {})", print_formula(l), print_formula(r)),
        Formula::Exists(v, b) => format!("(exists {v} {})", print_formula(b)),
    }
}

// ----------------------------------------------------------------- theories

pub fn parse_theory(input: &str) -> Result<Theory, SyntaxError> {
    let forms = parse_many(input)?;
    let mut theory = Theory::new("theory");
    for form in &forms {
        let (keyword, args) = head(form)?;
        let span = form.span();
        match keyword {
            "theory" => {
                arity(span, args, 1, "theory")?;
                theory.name = expect_atom(&args[0], "a theory name")?.to_string();
            }
            "axiom" => {
                arity(span, args, 2, "axiom")?;
                let name = expect_atom(&args[0], "an axiom name")?;
                let formula = formula_from_sexpr(&args[1], &[])?;
                theory
                    .add_axiom(name, formula)
                    .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })?;
            }
            "schema" => {
                if args.len() != 4 || args[2].atom() != Some(":bound") {
                    return err(
                        span,
                        "schema needs (schema name template :bound k); \
                         infinite axiom schemas are forbidden",
                    );
                }
                let name = expect_atom(&args[0], "a schema name")?;
                let template = formula_from_sexpr(&args[1], &[])?;
                let bound = parse_natural_atom(&args[3])?;
                theory
                    .add_schema(name, template, bound)
                    .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })?;
            }
            other => return err(span, format!("unknown theory form `{other}`")),
        }
    }
    Ok(theory)
}

pub fn print_theory(t: &Theory) -> String {
    let mut out = format!("(theory {})\n", t.name);
    for axiom in &t.axioms {
        out.push_str(&format!("(axiom {} {})\n", axiom.name, print_formula(&axiom.formula)));
    }
    for schema in &t.schemas {
        out.push_str(&format!(
            "(schema {} {} :bound {})\n",
            schema.name,
            print_formula(&schema.template),
            schema.bound
        ));
    }
    out
}

// ------------------------------------------------------------------- proofs

pub fn parse_proof(input: &str, theory: &Theory) -> Result<Derivation, SyntaxError> {
    proof_from_sexpr(&parse_one(input)?, theory)
}

fn proof_from_sexpr(e: &Sexpr, theory: &Theory) -> Result<Derivation, SyntaxError> {
    let (keyword, args) = head(e)?;
    let span = e.span();
    match keyword {
        "axiom" => {
            arity(span, args, 1, "axiom")?;
            let name = expect_atom(&args[0], "an axiom name")?;
            Derivation::axiom(theory, name).ok_or_else(|| SyntaxError {
                span: Some(span),
                message: format!("`{name}` is not an axiom of {}", theory.name),
            })
        }
        "schema-inst" => {
            if args.is_empty() {
                return err(span, "schema-inst needs a schema name and values");
            }
            let name = expect_atom(&args[0], "a schema name")?;
            let values = args[1..]
                .iter()
                .map(parse_natural_atom)
                .collect::<Result<Vec<_>, _>>()?;
            Derivation::schema_instance(theory, name, values).ok_or_else(|| SyntaxError {
                span: Some(span),
                message: format!("not a valid instance of schema `{name}`"),
            })
        }
        "assume" => {
            arity(span, args, 2, "assume")?;
            let label = expect_atom(&args[0], "an assumption label")?;
            let formula = formula_from_sexpr(&args[1], &[])?;
            Ok(Derivation::assumption(label, formula))
        }
        "ax-k" => {
            arity(span, args, 2, "ax-k")?;
            let a = formula_from_sexpr(&args[0], &[])?;
            let b = formula_from_sexpr(&args[1], &[])?;
            Ok(Derivation {
                conclusion: Formula::implies(a.clone(), Formula::implies(b.clone(), a.clone())),
                node: Node::Leaf(LeafKind::LogicalK(a, b)),
            })
        }
        "ax-s" => {
            arity(span, args, 3, "ax-s")?;
            let a = formula_from_sexpr(&args[0], &[])?;
            let b = formula_from_sexpr(&args[1], &[])?;
            let c = formula_from_sexpr(&args[2], &[])?;
            Ok(Derivation {
                conclusion: Formula::implies(
                    Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone())),
                    Formula::implies(
                        Formula::implies(a.clone(), b.clone()),
                        Formula::implies(a.clone(), c.clone()),
                    ),
                ),
                node: Node::Leaf(LeafKind::LogicalS(a, b, c)),
            })
        }
        "ax-dne" => {
            arity(span, args, 1, "ax-dne")?;
            let a = formula_from_sexpr(&args[0], &[])?;
            Ok(Derivation {
                conclusion: Formula::implies(Formula::not(Formula::not(a.clone())), a.clone()),
                node: Node::Leaf(LeafKind::LogicalDne(a)),
            })
        }
        "mp" => {
            arity(span, args, 2, "mp")?;
            Ok(Derivation::mp(
                proof_from_sexpr(&args[0], theory)?,
                proof_from_sexpr(&args[1], theory)?,
            ))
        }
        "and-intro" => {
            arity(span, args, 2, "and-intro")?;
            Ok(Derivation::and_intro(
                proof_from_sexpr(&args[0], theory)?,
                proof_from_sexpr(&args[1], theory)?,
            ))
        }
        "and-elim-l" => {
            arity(span, args, 1, "and-elim-l")?;
            Ok(Derivation::and_elim_l(proof_from_sexpr(&args[0], theory)?))
        }
        "and-elim-r" => {
            arity(span, args, 1, "and-elim-r")?;
            Ok(Derivation::and_elim_r(proof_from_sexpr(&args[0], theory)?))
        }
        "not-elim" => {
            arity(span, args, 2, "not-elim")?;
            Ok(Derivation::not_elim(
                proof_from_sexpr(&args[0], theory)?,
                proof_from_sexpr(&args[1], theory)?,
            ))
        }
        "not-intro" => match args.len() {
            2 => {
                let label = expect_atom(&args[0], "an assumption label")?;
                let body = proof_from_sexpr(&args[1], theory)?;
                let assumed = find_assumption(&body, label).ok_or_else(|| SyntaxError {
                    span: Some(span),
                    message: format!(
                        "no assumption labelled `{label}` in the subproof; \
                         use (not-intro {label} <formula> <proof>) for vacuous discharge"
                    ),
                })?;
                Ok(Derivation::not_intro(label, assumed, body))
            }
            3 => {
                let label = expect_atom(&args[0], "an assumption label")?;
                let assumed = formula_from_sexpr(&args[1], &[])?;
                let body = proof_from_sexpr(&args[2], theory)?;
                Ok(Derivation::not_intro(label, assumed, body))
            }
            n => err(span, format!("not-intro takes 2 or 3 arguments, got {n}")),
        },
        "exists-intro" => {
            arity(span, args, 2, "exists-intro")?;
            let target = formula_from_sexpr(&args[0], &[])?;
            Ok(Derivation::exists_intro(target, proof_from_sexpr(&args[1], theory)?))
        }
        other => err(span, format!("unknown proof form `{other}`")),
    }
}

fn find_assumption(d: &Derivation, label: &str) -> Option<Formula> {
    match &d.node {
        Node::Leaf(LeafKind::Assumption(l)) if l == label => Some(d.conclusion.clone()),
        Node::Leaf(_) => None,
        Node::Rule { premises, .. } => {
            premises.iter().find_map(|p| find_assumption(p, label))
        }
    }
}

pub fn print_proof(d: &Derivation) -> String {
    match &d.node {
        Node::Leaf(kind) => match kind {
            LeafKind::TheoryAxiom(name) => format!("(axiom {name})"),
            LeafKind::SchemaInstance(name, values) => {
                let vs: Vec<String> = values.iter().map(Natural::to_string).collect();
                format!("(schema-inst {name} {})", vs.join(" "))
            }
            LeafKind::LogicalK(a, b) => {
                format!("(ax-k {} {})", print_formula(a), print_formula(b))
            }
            LeafKind::LogicalS(a, b, c) => format!(
                "(ax-s {} {} {})",
                print_formula(a),
                print_formula(b),
                print_formula(c)
            ),
            LeafKind::LogicalDne(a) => format!("(ax-dne {})", print_formula(a)),
            LeafKind::Assumption(label) => {
                format!("(assume {label} {})", print_formula(&d.conclusion))
            }
        },
        Node::Rule { id, premises, discharge } => match id {
            RuleId::NotIntro => {
                let label = discharge.as_deref().unwrap_or("_");
                let assumed = match &d.conclusion {
                    Formula::Not(inner) => print_formula(inner),
                    other => print_formula(other),
                };
                format!("(not-intro {label} {assumed} {})", print_proof(&premises[0]))
            }
            RuleId::ExistsIntro => format!(
                "(exists-intro {} {})",
                print_formula(&d.conclusion),
                print_proof(&premises[0])
            ),
            _ => {
                let parts: Vec<String> = premises.iter().map(print_proof).collect();
                format!("({} {})", id.name(), parts.join(" "))
            }
        },
    }
}

// ----------------------------------------------------------------- policies

pub fn parse_ttp(input: &str) -> Result<TruthTransferPolicy, SyntaxError> {
    ttp_from_sexpr(&parse_one(input)?)
}

fn policy_kind_from_sexpr(e: &Sexpr) -> Result<PolicyKind, SyntaxError> {
    let (keyword, args) = head(e)?;
    let span = e.span();
    match keyword {
        "zero-decay" => {
            arity(span, args, 0, "zero-decay")?;
            Ok(PolicyKind::ZeroDecay)
        }
        "erosion" => {
            arity(span, args, 1, "erosion")?;
            Ok(PolicyKind::Erosion(parse_unit_rational_atom(&args[0])?))
        }
        "product" => {
            arity(span, args, 0, "product")?;
            Ok(PolicyKind::Product)
        }
        "constant" => {
            arity(span, args, 1, "constant")?;
            Ok(PolicyKind::Constant(parse_unit_rational_atom(&args[0])?))
        }
        "max-premise" => {
            arity(span, args, 0, "max-premise")?;
            Ok(PolicyKind::MaxPremise)
        }
        other => err(span, format!("unknown policy `{other}`")),
    }
}

fn rule_by_name(name: &str) -> Option<RuleId> {
    TruthTransferPolicy::checkable_rules()
        .into_iter()
        .find(|r| r.name() == name)
}

fn ttp_from_sexpr(e: &Sexpr) -> Result<TruthTransferPolicy, SyntaxError> {
    let (keyword, args) = head(e)?;
    let span = e.span();
    match keyword {
        "per-rule" => {
            let mut policy = TruthTransferPolicy::zero_decay();
            for clause in args {
                let items = clause.list().filter(|i| i.len() == 2).ok_or_else(|| {
                    SyntaxError {
                        span: Some(clause.span()),
                        message: "per-rule clause must be (rule policy)".into(),
                    }
                })?;
                let target = expect_atom(&items[0], "a rule name or `default`")?;
                let kind = policy_kind_from_sexpr(&items[1])?;
                if target == "default" {
                    let overrides = policy.overrides().clone();
                    policy = TruthTransferPolicy::uniform(kind);
                    for (rule, k) in overrides {
                        policy = policy.with_rule(rule, k);
                    }
                } else {
                    let rule = rule_by_name(target).ok_or_else(|| SyntaxError {
                        span: Some(items[0].span()),
                        message: format!("unknown rule `{target}`"),
                    })?;
                    policy = policy.with_rule(rule, kind);
                }
            }
            Ok(policy)
        }
        "erosion" => {
            // the uniform constructor enforces 0 < E < 1
            arity(span, args, 1, "erosion")?;
            let e = parse_unit_rational_atom(&args[0])?;
            TruthTransferPolicy::erosion(e)
                .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })
        }
        _ => Ok(TruthTransferPolicy::uniform(policy_kind_from_sexpr(e)?)),
    }
}

pub fn print_ttp(p: &TruthTransferPolicy) -> String {
    if p.overrides().is_empty() {
        return p.default_policy().to_string();
    }
    let mut parts: Vec<String> = p
        .overrides()
        .iter()
        .map(|(rule, kind)| format!("({} {kind})", rule.name()))
        .collect();
    parts.push(format!("(default {})", p.default_policy()));
    format!("(per-rule {})", parts.join(" "))
}

// --------------------------------------------------------------- structures

pub fn parse_structure(input: &str) -> Result<FuzzyStructure, SyntaxError> {
    let forms = parse_many(input)?;
    let mut ttp = TruthTransferPolicy::zero_decay();
    let mut name = String::from("structure");
    // two passes: the policy and domain shape first, then the tables
    let mut domain: Option<Vec<String>> = None;
    let mut saturating: Option<usize> = None;
    for form in &forms {
        let (keyword, args) = head(form)?;
        let span = form.span();
        match keyword {
            "structure" => {
                arity(span, args, 1, "structure")?;
                name = expect_atom(&args[0], "a structure name")?.to_string();
            }
            "ttp" => {
                arity(span, args, 1, "ttp")?;
                ttp = ttp_from_sexpr(&args[0])?;
            }
            "domain" => {
                let elements = args
                    .iter()
                    .map(|a| expect_atom(a, "an element name").map(str::to_string))
                    .collect::<Result<Vec<_>, _>>()?;
                if elements.is_empty() {
                    return err(span, "domain must not be empty");
                }
                domain = Some(elements);
            }
            "saturating-cut" => {
                arity(span, args, 1, "saturating-cut")?;
                let bound = parse_natural_atom(&args[0])?;
                let bound = usize::try_from(&bound).map_err(|_| SyntaxError {
                    span: Some(args[0].span()),
                    message: "saturating-cut bound is too large".into(),
                })?;
                saturating = Some(bound);
            }
            _ => {}
        }
    }

    let mut structure = match (saturating, domain) {
        (Some(bound), None) => FuzzyStructure::saturating_cut(&name, bound, ttp),
        (None, Some(elements)) => FuzzyStructure::new(&name, elements, ttp)
            .map_err(|e| SyntaxError { span: None, message: e.to_string() })?,
        (Some(_), Some(_)) => {
            return Err(SyntaxError {
                span: None,
                message: "give either (domain ...) or (saturating-cut n), not both".into(),
            })
        }
        (None, None) => {
            return Err(SyntaxError {
                span: None,
                message: "structure needs (domain ...) or (saturating-cut n)".into(),
            })
        }
    };

    for form in &forms {
        let (keyword, args) = head(form)?;
        let span = form.span();
        match keyword {
            "structure" | "ttp" | "domain" | "saturating-cut" => {}
            "const" => {
                arity(span, args, 2, "const")?;
                let cname = expect_atom(&args[0], "a constant name")?;
                let element = expect_atom(&args[1], "an element name")?;
                structure
                    .add_constant(cname, element)
                    .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })?;
            }
            "fun" => {
                arity(span, args, 2, "fun")?;
                let fname = expect_atom(&args[0], "a function name")?;
                let rows = args[1].list().ok_or_else(|| SyntaxError {
                    span: Some(args[1].span()),
                    message: "fun needs a list of (args... result) rows".into(),
                })?;
                let mut entries = Vec::new();
                let mut fn_arity = None;
                for row in rows {
                    let cells = row.list().ok_or_else(|| SyntaxError {
                        span: Some(row.span()),
                        message: "fun row must be a list".into(),
                    })?;
                    if cells.len() < 2 {
                        return err(row.span(), "fun row needs arguments and a result");
                    }
                    let names = cells
                        .iter()
                        .map(|c| expect_atom(c, "an element name").map(str::to_string))
                        .collect::<Result<Vec<_>, _>>()?;
                    let (result, arguments) = names.split_last().expect("checked length");
                    fn_arity.get_or_insert(arguments.len());
                    entries.push((arguments.to_vec(), result.clone()));
                }
                let fn_arity = fn_arity
                    .ok_or_else(|| SyntaxError {
                        span: Some(span),
                        message: "fun needs at least one row".into(),
                    })?;
                structure
                    .add_function(fname, fn_arity, entries)
                    .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })?;
            }
            "pred" => {
                if args.len() < 2 {
                    return err(span, "pred needs a name and an entry list");
                }
                let pname = expect_atom(&args[0], "a predicate name")?;
                let rows = args[1].list().ok_or_else(|| SyntaxError {
                    span: Some(args[1].span()),
                    message: "pred needs a list of (args... degree) rows".into(),
                })?;
                let mut default = UnitRational::zero();
                let mut declared_arity: Option<usize> = None;
                let mut i = 2;
                while i < args.len() {
                    match args[i].atom() {
                        Some(":default") if i + 1 < args.len() => {
                            default = parse_unit_rational_atom(&args[i + 1])?;
                            i += 2;
                        }
                        Some(":arity") if i + 1 < args.len() => {
                            let a = parse_natural_atom(&args[i + 1])?;
                            declared_arity = Some(usize::try_from(&a).unwrap_or(usize::MAX));
                            i += 2;
                        }
                        _ => return err(args[i].span(), "expected :default or :arity"),
                    }
                }
                let mut entries = Vec::new();
                let mut seen_arity = declared_arity;
                for row in rows {
                    let cells = row.list().ok_or_else(|| SyntaxError {
                        span: Some(row.span()),
                        message: "pred row must be a list".into(),
                    })?;
                    if cells.is_empty() {
                        return err(row.span(), "pred row needs a degree");
                    }
                    let (last, arguments) = cells.split_last().expect("checked length");
                    let names = arguments
                        .iter()
                        .map(|c| expect_atom(c, "an element name").map(str::to_string))
                        .collect::<Result<Vec<_>, _>>()?;
                    seen_arity.get_or_insert(names.len());
                    entries.push((names, parse_unit_rational_atom(last)?));
                }
                let pred_arity = seen_arity.ok_or_else(|| SyntaxError {
                    span: Some(span),
                    message: "pred with no rows needs :arity".into(),
                })?;
                structure
                    .add_predicate(pname, pred_arity, entries, default)
                    .map_err(|e| SyntaxError { span: Some(span), message: e.to_string() })?;
            }
            "override" => {
                arity(span, args, 2, "override")?;
                let formula = formula_from_sexpr(&args[0], &[])?;
                let degree = parse_unit_rational_atom(&args[1])?;
                structure.add_override(formula, degree);
            }
            other => return err(span, format!("unknown structure form `{other}`")),
        }
    }
    Ok(structure)
}

/// Render a structure as a structure file that parses back.
pub fn print_structure(m: &FuzzyStructure) -> String {
    let mut out = format!("(structure {})\n", m.name());
    out.push_str(&format!("(ttp {})\n", print_ttp(m.ttp())));
    match m.numeric_bound() {
        Some(bound) => out.push_str(&format!("(saturating-cut {bound})\n")),
        None => {
            out.push_str(&format!("(domain {})\n", m.domain().join(" ")));
            for (name, element) in m.constants() {
                out.push_str(&format!("(const {name} {element})\n"));
            }
            for (name, _, rows) in m.function_tables() {
                let cells: Vec<String> = rows
                    .iter()
                    .map(|(args, result)| format!("({} {result})", args.join(" ")))
                    .collect();
                out.push_str(&format!("(fun {name} ({}))\n", cells.join(" ")));
            }
        }
    }
    for (name, arity, entries, default) in m.predicate_tables() {
        let cells: Vec<String> = entries
            .iter()
            .map(|(args, degree)| {
                if args.is_empty() {
                    format!("({degree})")
                } else {
                    format!("({} {degree})", args.join(" "))
                }
            })
            .collect();
        out.push_str(&format!(
            "(pred {name} ({}) :default {default} :arity {arity})\n",
            cells.join(" ")
        ));
    }
    for (formula, degree) in m.overrides() {
        out.push_str(&format!("(override {} {degree})\n", print_formula(formula)));
    }
    out
}
