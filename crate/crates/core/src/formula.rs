//! First-order formulas over the connective set `{∧, ¬, ∃}` plus implication.
//!
//! Implication is primitive only for the Hilbert calculus; the semantics
//! treats it as the derived `¬(A ∧ ¬B)`. Subtrees are shared through `Arc`
//! so that formula universes built during search stay cheap to clone.

use crate::nat::Natural;
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Falsum,
    Atom { pred: String, args: Vec<Term> },
    And(Arc<Formula>, Arc<Formula>),
    Not(Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Exists(String, Arc<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom { pred: pred.into(), args }
    }

    pub fn atom0(pred: &str) -> Formula {
        Formula::atom(pred, vec![])
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    // a constructor, not std::ops::Not on a formula value
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Arc::new(l), Arc::new(r))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.into(), Arc::new(body))
    }

    /// View a formula as an implication: `¬A` counts as `A ⇒ ⊥`.
    /// This is what modus ponens matches against in the Hilbert calculus.
    pub fn as_implication(&self) -> Option<(&Formula, FormulaRef<'_>)> {
        match self {
            Formula::Implies(a, b) => Some((a, FormulaRef::Borrowed(b))),
            Formula::Not(a) => Some((a, FormulaRef::Falsum)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Falsum => {}
                Formula::Atom { args, .. } => {
                    let mut vars = Vec::new();
                    for a in args {
                        a.free_vars(&mut vars);
                    }
                    for v in vars {
                        if !bound.contains(&v) && !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
                Formula::And(l, r) | Formula::Implies(l, r) => {
                    go(l, bound, out);
                    go(r, bound, out);
                }
                Formula::Not(b) => go(b, bound, out),
                Formula::Exists(v, b) => {
                    bound.push(v.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Substitute closed terms for free variables (quantified occurrences are
    /// untouched; the callers never substitute a captured name).
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Formula {
        match self {
            Formula::Falsum => Formula::Falsum,
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args.iter().map(|a| a.substitute(env)).collect(),
            },
            Formula::And(l, r) => Formula::and(l.substitute(env), r.substitute(env)),
            Formula::Not(b) => Formula::not(b.substitute(env)),
            Formula::Implies(l, r) => Formula::implies(l.substitute(env), r.substitute(env)),
            Formula::Exists(v, b) => {
                if env.contains_key(v) {
                    let mut inner = env.clone();
                    inner.remove(v);
                    Formula::Exists(v.clone(), Arc::new(b.substitute(&inner)))
                } else {
                    Formula::Exists(v.clone(), Arc::new(b.substitute(env)))
                }
            }
        }
    }

    /// Total symbol occurrences, counting collapsed numerals at the length
    /// of their unary spelling.
    pub fn symbol_count(&self) -> Natural {
        match self {
            Formula::Falsum => Natural::from(1u32),
            Formula::Atom { args, .. } => args
                .iter()
                .fold(Natural::from(1u32), |acc, a| acc + a.length()),
            Formula::And(l, r) | Formula::Implies(l, r) => {
                Natural::from(1u32) + l.symbol_count() + r.symbol_count()
            }
            Formula::Not(b) => Natural::from(1u32) + b.symbol_count(),
            Formula::Exists(_, b) => Natural::from(2u32) + b.symbol_count(),
        }
    }

    /// Connective depth; atoms and falsum are depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Falsum | Formula::Atom { .. } => 0,
            Formula::And(l, r) | Formula::Implies(l, r) => 1 + l.depth().max(r.depth()),
            Formula::Not(b) | Formula::Exists(_, b) => 1 + b.depth(),
        }
    }

    /// Every subformula including the formula itself. Quantified bodies are
    /// reported as-is (with their bound variable free).
    pub fn subformulas(&self, out: &mut BTreeSet<Formula>) {
        out.insert(self.clone());
        match self {
            Formula::Falsum | Formula::Atom { .. } => {}
            Formula::And(l, r) | Formula::Implies(l, r) => {
                l.subformulas(out);
                r.subformulas(out);
            }
            Formula::Not(b) => b.subformulas(out),
            Formula::Exists(_, b) => b.subformulas(out),
        }
    }
}

/// Borrowed-or-falsum view used by [`Formula::as_implication`].
pub enum FormulaRef<'a> {
    Borrowed(&'a Formula),
    Falsum,
}

impl FormulaRef<'_> {
    pub fn to_formula(&self) -> Formula {
        match self {
            FormulaRef::Borrowed(f) => (*f).clone(),
            FormulaRef::Falsum => Formula::Falsum,
        }
    }

    pub fn matches(&self, other: &Formula) -> bool {
        match self {
            FormulaRef::Borrowed(f) => *f == other,
            FormulaRef::Falsum => matches!(other, Formula::Falsum),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Falsum => write!(f, "false"),
            Formula::Atom { pred, args } => {
                if args.is_empty() {
                    write!(f, "{pred}")
                } else {
                    write!(f, "({pred}")?;
                    for a in args {
                        write!(f, " {a:?}")?;
                    }
                    write!(f, ")")
                }
            }
            Formula::And(l, r) => write!(f, "(and {l:?} {r:?})"),
            Formula::Not(b) => write!(f, "(not {b:?})"),
            Formula::Implies(l, r) => write!(f, "(=> {l:?} {r:?})"),
            Formula::Exists(v, b) => write!(f, "(exists {v} {b:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_view_covers_negation() {
        let a = Formula::atom0("A");
        let b = Formula::atom0("B");
        let imp = Formula::implies(a.clone(), b.clone());
        let (ant, con) = imp.as_implication().unwrap();
        assert_eq!(ant, &a);
        assert!(con.matches(&b));

        let neg = Formula::not(a.clone());
        let (ant, con) = neg.as_implication().unwrap();
        assert_eq!(ant, &a);
        assert!(con.matches(&Formula::Falsum));

        assert!(a.as_implication().is_none());
    }

    #[test]
    fn free_variables_respect_binders() {
        let f = Formula::exists("x", Formula::atom("P", vec![Term::Var("x".into())]));
        assert!(f.is_closed());
        let g = Formula::and(
            f.clone(),
            Formula::atom("Q", vec![Term::Var("y".into())]),
        );
        assert_eq!(g.free_vars(), vec!["y".to_string()]);
    }

    #[test]
    fn substitution_avoids_bound_occurrences() {
        let body = Formula::and(
            Formula::atom("P", vec![Term::Var("x".into())]),
            Formula::atom("Q", vec![Term::Var("y".into())]),
        );
        let f = Formula::exists("x", body);
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Term::num(1));
        env.insert("y".to_string(), Term::num(2));
        let g = f.substitute(&env);
        let expected = Formula::exists(
            "x",
            Formula::and(
                Formula::atom("P", vec![Term::Var("x".into())]),
                Formula::atom("Q", vec![Term::num(2)]),
            ),
        );
        assert_eq!(g, expected);
    }

    #[test]
    fn symbol_count_expands_numerals() {
        // F applied to the numeral 3: one predicate symbol plus S S S 0
        let f = Formula::atom("F", vec![Term::num(3)]);
        assert_eq!(f.symbol_count(), Natural::from(5u32));
        let g = Formula::not(f);
        assert_eq!(g.symbol_count(), Natural::from(6u32));
    }

    #[test]
    fn depth_counts_connectives() {
        let a = Formula::atom0("A");
        assert_eq!(a.depth(), 0);
        let f = Formula::and(Formula::not(a.clone()), a.clone());
        assert_eq!(f.depth(), 2);
    }
}
