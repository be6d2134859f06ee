//! The term algebra over a finite family of function symbols.
//!
//! Closed terms are generated from the constant `0` by the successor `S` and
//! whatever extra symbols a signature registers. Successor chains over ground
//! numerals are kept in a collapsed `Num` form so that large numerals stay
//! cheap to store and compare; the collapsed form still reports the length of
//! the unary spelling it stands for.

use crate::nat::Natural;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const ZERO_SYMBOL: &str = "0";
pub const SUCC_SYMBOL: &str = "S";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("symbol `{0}` registered twice")]
    DuplicateSymbol(String),
    #[error("term contains the unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no interpretation registered for `{0}`")]
    Uninterpreted(String),
}

/// A function symbol and its arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
}

/// A finite family of function symbols; always contains `0` and `S`.
///
/// Registration order is significant: term enumeration is deterministic and
/// breaks ties by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<SymbolDecl>,
}

impl Signature {
    /// Just `{0, S}`: the unary notation system.
    pub fn unary() -> Self {
        Signature {
            symbols: vec![
                SymbolDecl { name: ZERO_SYMBOL.into(), arity: 0 },
                SymbolDecl { name: SUCC_SYMBOL.into(), arity: 1 },
            ],
        }
    }

    /// `{0, S}` extended with the given symbols, in order.
    pub fn with_symbols(extra: &[(&str, usize)]) -> Result<Self, TermError> {
        let mut sig = Signature::unary();
        for (name, arity) in extra {
            sig.register(name, *arity)?;
        }
        Ok(sig)
    }

    pub fn register(&mut self, name: &str, arity: usize) -> Result<(), TermError> {
        if self.lookup(name).is_some() {
            return Err(TermError::DuplicateSymbol(name.into()));
        }
        self.symbols.push(SymbolDecl { name: name.into(), arity });
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<&SymbolDecl> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn symbols(&self) -> &[SymbolDecl] {
        &self.symbols
    }
}

/// Terms of the algebra. `Num(k)` is the collapsed unary numeral `S^k 0`.
///
/// Variables only appear inside formula templates (axiom schemas and
/// quantifier bodies); the enumeration and evaluation entry points insist on
/// closed terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Num(Natural),
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn zero() -> Term {
        Term::Num(Natural::zero())
    }

    pub fn num(n: u64) -> Term {
        Term::Num(Natural::from(n))
    }

    /// Smart constructor: collapses `0` and `S` over ground numerals.
    pub fn app(name: &str, args: Vec<Term>) -> Term {
        if name == ZERO_SYMBOL && args.is_empty() {
            return Term::zero();
        }
        if name == SUCC_SYMBOL && args.len() == 1 {
            if let Term::Num(n) = &args[0] {
                return Term::Num(n + 1u32);
            }
        }
        Term::App(name.into(), args)
    }

    pub fn succ(t: Term) -> Term {
        Term::app(SUCC_SYMBOL, vec![t])
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Num(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    /// Total count of symbol occurrences in the unary spelling.
    ///
    /// The numeral `S^k 0` has length `k + 1`. This is the length measure the
    /// feasibility radius is defined against; it is isolated here so a
    /// different measure (depth, say) would be a one-line change.
    pub fn length(&self) -> Natural {
        match self {
            Term::Num(n) => n + 1u32,
            Term::Var(_) => Natural::from(1u32),
            Term::App(_, args) => {
                args.iter().fold(Natural::from(1u32), |acc, a| acc + a.length())
            }
        }
    }

    /// Substitute closed terms for variables.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Num(_) => self.clone(),
            Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(name, args) => {
                Term::app(name, args.iter().map(|a| a.substitute(env)).collect())
            }
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Num(_) => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.free_vars(out);
                }
            }
        }
    }

    /// One-way matching: bind this pattern's variables so it equals `target`.
    /// Successor patterns peel collapsed numerals, so `S ?n` matches `Num(k+1)`
    /// with `?n -> Num(k)`.
    pub fn match_against(&self, target: &Term, bindings: &mut BTreeMap<String, Term>) -> bool {
        match (self, target) {
            (Term::Var(v), t) => {
                if let Some(bound) = bindings.get(v) {
                    bound == t
                } else {
                    bindings.insert(v.clone(), t.clone());
                    true
                }
            }
            (Term::Num(a), Term::Num(b)) => a == b,
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g
                    && fa.len() == ga.len()
                    && fa.iter().zip(ga).all(|(p, t)| p.match_against(t, bindings))
            }
            (Term::App(f, fa), Term::Num(n))
                if f == SUCC_SYMBOL && fa.len() == 1 && !n.is_zero() => {
                    fa[0].match_against(&Term::Num(n - 1u32), bindings)
                }
            _ => false,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(n) => write!(f, "Num({n})"),
            Term::Var(v) => write!(f, "?{v}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

type NatFn = Arc<dyn Fn(&[Natural]) -> Natural + Send + Sync>;

/// Total interpretations for function symbols.
///
/// `0`, `S`, `+` and `*` come pre-registered; anything else is supplied
/// programmatically (there is deliberately no user syntax for recursion
/// schemes).
#[derive(Clone)]
pub struct Interpretation {
    funcs: BTreeMap<String, (usize, NatFn)>,
}

impl Interpretation {
    pub fn standard() -> Self {
        let mut interp = Interpretation { funcs: BTreeMap::new() };
        interp.register(ZERO_SYMBOL, 0, |_| Natural::zero());
        interp.register(SUCC_SYMBOL, 1, |args| &args[0] + 1u32);
        interp.register("+", 2, |args| &args[0] + &args[1]);
        interp.register("*", 2, |args| &args[0] * &args[1]);
        interp
    }

    pub fn register<F>(&mut self, name: &str, arity: usize, f: F)
    where
        F: Fn(&[Natural]) -> Natural + Send + Sync + 'static,
    {
        self.funcs.insert(name.into(), (arity, Arc::new(f)));
    }

    pub fn apply(&self, name: &str, args: &[Natural]) -> Result<Natural, TermError> {
        let (arity, f) = self
            .funcs
            .get(name)
            .ok_or_else(|| TermError::Uninterpreted(name.into()))?;
        if args.len() != *arity {
            return Err(TermError::ArityMismatch {
                name: name.into(),
                expected: *arity,
                got: args.len(),
            });
        }
        Ok(f(args))
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Interpretation")
            .field("symbols", &self.funcs.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Evaluate a closed term to the natural number it denotes.
pub fn eval_term(term: &Term, interp: &Interpretation) -> Result<Natural, TermError> {
    match term {
        Term::Num(n) => Ok(n.clone()),
        Term::Var(v) => Err(TermError::UnboundVariable(v.clone())),
        Term::App(name, args) => {
            let values = args
                .iter()
                .map(|a| eval_term(a, interp))
                .collect::<Result<Vec<_>, _>>()?;
            interp.apply(name, &values)
        }
    }
}

/// Every well-formed closed term of length at most `max_len`, in
/// nondecreasing length order; within one length, ordered by the symbol
/// registration indices of the flattened spelling.
pub fn enumerate_terms(sig: &Signature, max_len: usize) -> Vec<Term> {
    // by_size[s] holds all terms of exact size s+1, already sorted.
    let mut by_size: Vec<Vec<Term>> = Vec::with_capacity(max_len);
    for size in 1..=max_len {
        let mut level: Vec<(Vec<usize>, Term)> = Vec::new();
        for (idx, decl) in sig.symbols().iter().enumerate() {
            if decl.arity == 0 {
                if size == 1 {
                    let t = Term::app(&decl.name, vec![]);
                    level.push((flatten_key(&t, sig), t));
                }
                continue;
            }
            if size < decl.arity + 1 {
                continue;
            }
            let mut parts = Vec::new();
            compositions(size - 1, decl.arity, &mut parts, &mut |split| {
                let child_lists: Vec<&Vec<Term>> =
                    split.iter().map(|s| &by_size[s - 1]).collect();
                let mut picks = vec![0usize; split.len()];
                loop {
                    let args: Vec<Term> = picks
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| child_lists[i][p].clone())
                        .collect();
                    let t = Term::app(&decl.name, args);
                    level.push((flatten_key(&t, sig), t));
                    // odometer over the child choices
                    let mut i = split.len();
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        picks[i] += 1;
                        if picks[i] < child_lists[i].len() {
                            break;
                        }
                        picks[i] = 0;
                    }
                }
            });
            let _ = idx;
        }
        level.sort_by(|a, b| a.0.cmp(&b.0));
        by_size.push(level.into_iter().map(|(_, t)| t).collect());
    }
    by_size.into_iter().flatten().collect()
}

/// Registration-index spelling of a term, used as the enumeration sort key.
fn flatten_key(term: &Term, sig: &Signature) -> Vec<usize> {
    fn go(t: &Term, sig: &Signature, out: &mut Vec<usize>) {
        match t {
            Term::Num(n) => {
                let succ = sig.lookup(SUCC_SYMBOL).map(|_| 1).unwrap_or(0);
                let mut k = n.clone();
                while !k.is_zero() {
                    out.push(succ);
                    k -= 1u32;
                }
                out.push(0); // `0` is always registered first
            }
            Term::Var(_) => out.push(usize::MAX),
            Term::App(name, args) => {
                let idx = sig
                    .symbols()
                    .iter()
                    .position(|s| &s.name == name)
                    .unwrap_or(usize::MAX);
                out.push(idx);
                for a in args {
                    go(a, sig, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(term, sig, &mut out);
    out
}

/// All ways to write `total` as `k` positive parts, in lexicographic order.
fn compositions(total: usize, k: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == 1 {
        if total >= 1 {
            prefix.push(total);
            f(prefix);
            prefix.pop();
        }
        return;
    }
    for first in 1..=total.saturating_sub(k - 1) {
        prefix.push(first);
        compositions(total - first, k - 1, prefix, f);
        prefix.pop();
    }
}

/// A value reachable by some closed term, with a smallest witness.
#[derive(Debug, Clone)]
pub struct ReachableValue {
    pub min_length: usize,
    pub witness: Term,
}

/// The values denoted by closed terms of length at most `max_len`, each with
/// a minimal-length witness term.
///
/// Works value-by-value rather than term-by-term: two terms with the same
/// value are interchangeable everywhere a degree function is applied, and the
/// value lattice stays small even where the raw term count explodes.
pub fn reachable_values(
    sig: &Signature,
    interp: &Interpretation,
    max_len: usize,
) -> Result<BTreeMap<Natural, ReachableValue>, TermError> {
    let mut settled: BTreeMap<Natural, ReachableValue> = BTreeMap::new();
    // by_len[l] lists the values first reached at length l+1.
    let mut by_len: Vec<Vec<Natural>> = vec![Vec::new(); max_len];

    let insert = |value: Natural,
                      len: usize,
                      witness: Term,
                      settled: &mut BTreeMap<Natural, ReachableValue>,
                      by_len: &mut Vec<Vec<Natural>>| {
        if len > max_len || settled.contains_key(&value) {
            return;
        }
        by_len[len - 1].push(value.clone());
        settled.insert(value, ReachableValue { min_length: len, witness });
    };

    for len in 1..=max_len {
        for decl in sig.symbols() {
            if decl.arity == 0 {
                if len == 1 {
                    let t = Term::app(&decl.name, vec![]);
                    let v = eval_term(&t, interp)?;
                    insert(v, 1, t, &mut settled, &mut by_len);
                }
                continue;
            }
            if len < decl.arity + 1 {
                continue;
            }
            // Children by minimal length, totalling len - 1.
            let mut parts = Vec::new();
            let mut results: Vec<(Natural, Vec<Natural>)> = Vec::new();
            compositions(len - 1, decl.arity, &mut parts, &mut |split| {
                let child_values: Vec<&Vec<Natural>> =
                    split.iter().map(|s| &by_len[s - 1]).collect();
                if child_values.iter().any(|c| c.is_empty()) {
                    return;
                }
                let mut picks = vec![0usize; split.len()];
                loop {
                    let args: Vec<Natural> = picks
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| child_values[i][p].clone())
                        .collect();
                    results.push((Natural::zero(), args));
                    let mut i = split.len();
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        picks[i] += 1;
                        if picks[i] < child_values[i].len() {
                            break;
                        }
                        picks[i] = 0;
                    }
                }
            });
            for (_, args) in results {
                let value = interp.apply(&decl.name, &args)?;
                if settled.contains_key(&value) {
                    continue;
                }
                let witness_args: Vec<Term> = args
                    .iter()
                    .map(|a| settled.get(a).expect("settled child").witness.clone())
                    .collect();
                let t = Term::app(&decl.name, witness_args);
                insert(value, len, t, &mut settled, &mut by_len);
            }
        }
    }
    Ok(settled)
}
