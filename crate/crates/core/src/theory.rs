//! Theories: named closed axioms plus bounded axiom schemas.
//!
//! A schema is a formula template with term variables and an explicit
//! instantiation bound; the variables range over the unary numerals
//! `0..=bound`. Infinite axiom lists are deliberately not expressible.

use crate::formula::Formula;
use crate::nat::Natural;
use crate::term::Term;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("axiom `{0}` is not closed")]
    OpenAxiom(String),
    #[error("duplicate axiom or schema name `{0}`")]
    DuplicateName(String),
    #[error("schema `{0}` has no template variables; declare it as a plain axiom")]
    SchemaWithoutVariables(String),
    #[error("no axiom or schema named `{0}`")]
    UnknownName(String),
    #[error("schema `{name}` instantiated outside its bound: {value} > {bound}")]
    OutsideBound {
        name: String,
        value: Natural,
        bound: Natural,
    },
    #[error("schema `{name}` expects {expected} arguments, got {got}")]
    InstanceArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("schema `{name}` expands to {instances} instances, over the cap {cap}")]
    ExpansionTooLarge {
        name: String,
        instances: u64,
        cap: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: String,
    pub template: Formula,
    /// Template variables in first-occurrence order.
    pub vars: Vec<String>,
    /// Each variable ranges over the numerals `0..=bound`.
    pub bound: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub name: String,
    pub axioms: Vec<Axiom>,
    pub schemas: Vec<AxiomSchema>,
}

impl Theory {
    pub fn new(name: &str) -> Theory {
        Theory { name: name.into(), axioms: Vec::new(), schemas: Vec::new() }
    }

    pub fn with_axiom(mut self, name: &str, formula: Formula) -> Result<Theory, TheoryError> {
        self.add_axiom(name, formula)?;
        Ok(self)
    }

    pub fn add_axiom(&mut self, name: &str, formula: Formula) -> Result<(), TheoryError> {
        if !formula.is_closed() {
            return Err(TheoryError::OpenAxiom(name.into()));
        }
        if self.names().any(|n| n == name) {
            return Err(TheoryError::DuplicateName(name.into()));
        }
        self.axioms.push(Axiom { name: name.into(), formula });
        Ok(())
    }

    pub fn add_schema(
        &mut self,
        name: &str,
        template: Formula,
        bound: Natural,
    ) -> Result<(), TheoryError> {
        let vars = template.free_vars();
        if vars.is_empty() {
            return Err(TheoryError::SchemaWithoutVariables(name.into()));
        }
        if self.names().any(|n| n == name) {
            return Err(TheoryError::DuplicateName(name.into()));
        }
        self.schemas.push(AxiomSchema { name: name.into(), template, vars, bound });
        Ok(())
    }

    fn names(&self) -> impl Iterator<Item = &str> {
        self.axioms
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.schemas.iter().map(|s| s.name.as_str()))
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn schema(&self, name: &str) -> Option<&AxiomSchema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    /// One schema instance from explicit variable values (in `vars` order).
    pub fn instantiate_schema(
        &self,
        name: &str,
        values: &[Natural],
    ) -> Result<Formula, TheoryError> {
        let schema = self
            .schema(name)
            .ok_or_else(|| TheoryError::UnknownName(name.into()))?;
        if values.len() != schema.vars.len() {
            return Err(TheoryError::InstanceArity {
                name: name.into(),
                expected: schema.vars.len(),
                got: values.len(),
            });
        }
        let mut env = BTreeMap::new();
        for (var, value) in schema.vars.iter().zip(values) {
            if value > &schema.bound {
                return Err(TheoryError::OutsideBound {
                    name: name.into(),
                    value: value.clone(),
                    bound: schema.bound.clone(),
                });
            }
            env.insert(var.clone(), Term::Num(value.clone()));
        }
        Ok(schema.template.substitute(&env))
    }

    /// Is the formula an axiom or a schema instance within bounds?
    pub fn is_axiom_instance(&self, formula: &Formula) -> bool {
        if self.axioms.iter().any(|a| &a.formula == formula) {
            return true;
        }
        self.schemas.iter().any(|s| s.matches(formula))
    }

    /// Every axiom, with schema instances expanded within their bounds.
    /// Instances are yielded in schema order and ascending variable values.
    ///
    /// Panics if a schema expands to more than 2^22 instances; use
    /// [`Theory::expanded_axioms_capped`] to handle that case.
    pub fn expanded_axioms(&self) -> Vec<(String, Formula)> {
        self.expanded_axioms_capped(1 << 22).expect("expansion within default cap")
    }

    pub fn expanded_axioms_capped(
        &self,
        cap: u64,
    ) -> Result<Vec<(String, Formula)>, TheoryError> {
        let mut out: Vec<(String, Formula)> = self
            .axioms
            .iter()
            .map(|a| (a.name.clone(), a.formula.clone()))
            .collect();
        for schema in &self.schemas {
            let bound = u64::try_from(&schema.bound).map_err(|_| {
                TheoryError::ExpansionTooLarge {
                    name: schema.name.clone(),
                    instances: u64::MAX,
                    cap,
                }
            })?;
            let arity = schema.vars.len();
            let total = (bound + 1).checked_pow(arity as u32).unwrap_or(u64::MAX);
            if total > cap {
                return Err(TheoryError::ExpansionTooLarge {
                    name: schema.name.clone(),
                    instances: total,
                    cap,
                });
            }
            let mut values = vec![0u64; arity];
            loop {
                let naturals: Vec<Natural> = values.iter().map(|v| Natural::from(*v)).collect();
                let formula = self
                    .instantiate_schema(&schema.name, &naturals)
                    .expect("in-bound instantiation");
                let label = format!(
                    "{}[{}]",
                    schema.name,
                    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                );
                out.push((label, formula));
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
        Ok(out)
    }
}

impl AxiomSchema {
    /// Syntactic one-way match of the template against a closed formula,
    /// checking the bindings are numerals within the bound.
    pub fn matches(&self, formula: &Formula) -> bool {
        let mut bindings = BTreeMap::new();
        if !match_formula(&self.template, formula, &mut bindings) {
            return false;
        }
        self.vars.iter().all(|v| match bindings.get(v) {
            Some(Term::Num(n)) => n <= &self.bound,
            _ => false,
        })
    }
}

fn match_formula(
    pattern: &Formula,
    target: &Formula,
    bindings: &mut BTreeMap<String, Term>,
) -> bool {
    match (pattern, target) {
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Atom { pred: p, args: pa }, Formula::Atom { pred: q, args: qa }) => {
            p == q
                && pa.len() == qa.len()
                && pa.iter().zip(qa).all(|(a, b)| a.match_against(b, bindings))
        }
        (Formula::And(pl, pr), Formula::And(tl, tr))
        | (Formula::Implies(pl, pr), Formula::Implies(tl, tr)) => {
            match_formula(pl, tl, bindings) && match_formula(pr, tr, bindings)
        }
        (Formula::Not(p), Formula::Not(t)) => match_formula(p, t, bindings),
        (Formula::Exists(pv, pb), Formula::Exists(tv, tb)) => {
            pv == tv && match_formula(pb, tb, bindings)
        }
        _ => false,
    }
}

/// The scaled-down feasibility theory used across tests and examples:
/// a feasibility predicate that holds at 0, steps forward one at a time,
/// and is denied at `2^k`.
pub fn feasibility_theory(k: u32) -> Theory {
    let big = Natural::from(1u64) << k;
    let mut theory = Theory::new(&format!("feas{k}"));
    theory
        .add_axiom("f0", Formula::atom("F", vec![Term::zero()]))
        .unwrap();
    theory
        .add_schema(
            "step",
            Formula::implies(
                Formula::atom("F", vec![Term::Var("n".into())]),
                Formula::atom("F", vec![Term::succ(Term::Var("n".into()))]),
            ),
            big.clone(),
        )
        .unwrap();
    theory
        .add_axiom(
            "top",
            Formula::not(Formula::atom("F", vec![Term::Num(big)])),
        )
        .unwrap();
    theory
}
