//! A bounded-quantifier formula language with one free set variable `X`,
//! number variables, and named finite set parameters.
//!
//! Evaluation always goes through the canonical index of the set interpreting
//! `X`: atoms `t in X` become bit tests against the index, so a formula is a
//! decidable predicate on indices.

mod parse;

pub use parse::{parse, parse_document};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::finset::{index_contains, FinSet, Universe, DEFAULT_ENUMERATION_CAP};

/// Number-valued terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Const(u64),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// Formulas over atoms `t in X`, `t in P`, `t = t'`, `t < t'`, the usual
/// connectives, and bounded quantifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    InSet(Term),
    InParam(String, Term),
    Eq(Term, Term),
    Lt(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Term, Box<Formula>),
    Exists(String, Term, Box<Formula>),
}

/// Named finite set parameters referenced by a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParameterTable {
    params: BTreeMap<String, FinSet>,
}

impl ParameterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, set: FinSet) -> Result<()> {
        if self.params.contains_key(name) {
            return Err(Error::InvalidInput(format!("duplicate parameter `{name}`")));
        }
        self.params.insert(name.to_string(), set);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FinSet> {
        self.params.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.params.keys().map(|s| s.as_str())
    }
}

/// An assignment of values to free number variables.
#[derive(Clone, Debug, Default)]
pub struct Env {
    bindings: Vec<(String, u64)>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, value: u64) {
        self.bindings.push((name.to_string(), value));
    }

    fn get(&self, name: &str) -> Option<u64> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
}

impl Term {
    fn free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                if !bound.iter().any(|b| b == v) {
                    out.insert(v.clone());
                }
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.free_vars(bound, out);
                b.free_vars(bound, out);
            }
        }
    }
}

impl Formula {
    /// Number variables not bound by any enclosing quantifier.
    pub fn free_number_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::InSet(t) => t.free_vars(bound, out),
            Formula::InParam(_, t) => t.free_vars(bound, out),
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.free_vars(bound, out);
                b.free_vars(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, t, body) | Formula::Exists(v, t, body) => {
                t.free_vars(bound, out);
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Names of set parameters referenced anywhere in the formula.
    pub fn param_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::InParam(name, _) => {
                out.insert(name.clone());
            }
            Formula::Not(f) => f.collect_params(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => body.collect_params(out),
            _ => {}
        }
    }

    /// True if every `t in X` atom occurs in negative polarity, which makes
    /// the formula downward closed in `X` regardless of the universe. Used as
    /// a structural certificate when exhaustive validation is out of budget.
    pub fn is_anti_monotone(&self) -> bool {
        self.polarity_ok(true)
    }

    fn mentions_set(&self) -> bool {
        match self {
            Formula::InSet(_) => true,
            Formula::Not(f) => f.mentions_set(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.mentions_set() || b.mentions_set(),
            Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => body.mentions_set(),
            _ => false,
        }
    }

    fn polarity_ok(&self, positive: bool) -> bool {
        match self {
            Formula::InSet(_) => !positive,
            Formula::Not(f) => f.polarity_ok(!positive),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.polarity_ok(positive) && b.polarity_ok(positive)
            }
            Formula::Implies(a, b) => a.polarity_ok(!positive) && b.polarity_ok(positive),
            // Both sides occur in both polarities; only safe if X is absent.
            Formula::Iff(a, b) => !a.mentions_set() && !b.mentions_set(),
            Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => body.polarity_ok(positive),
            _ => true,
        }
    }
}

fn eval_term(term: &Term, scope: &Env) -> Result<u64> {
    match term {
        Term::Const(c) => Ok(*c),
        Term::Var(v) => scope
            .get(v)
            .ok_or_else(|| Error::UnassignedVariable(v.clone())),
        Term::Add(a, b) => Ok(eval_term(a, scope)?.wrapping_add(eval_term(b, scope)?)),
        Term::Mul(a, b) => Ok(eval_term(a, scope)?.wrapping_mul(eval_term(b, scope)?)),
    }
}

/// Evaluates the formula with `X` interpreted as the set with canonical
/// index `n`. All declared free number variables must be assigned in `env`.
pub fn eval_hat(phi: &Formula, n: u64, env: &Env, params: &ParameterTable) -> Result<bool> {
    let mut scope = env.clone();
    eval_inner(phi, n, &mut scope, params)
}

fn eval_inner(phi: &Formula, n: u64, scope: &mut Env, params: &ParameterTable) -> Result<bool> {
    match phi {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::InSet(t) => Ok(index_contains(eval_term(t, scope)?, n)),
        Formula::InParam(name, t) => {
            let set = params
                .get(name)
                .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            let v = eval_term(t, scope)?;
            Ok(u32::try_from(v).map_or(false, |v| set.contains(v)))
        }
        Formula::Eq(a, b) => Ok(eval_term(a, scope)? == eval_term(b, scope)?),
        Formula::Lt(a, b) => Ok(eval_term(a, scope)? < eval_term(b, scope)?),
        Formula::Not(f) => Ok(!eval_inner(f, n, scope, params)?),
        Formula::And(a, b) => {
            Ok(eval_inner(a, n, scope, params)? && eval_inner(b, n, scope, params)?)
        }
        Formula::Or(a, b) => {
            Ok(eval_inner(a, n, scope, params)? || eval_inner(b, n, scope, params)?)
        }
        Formula::Implies(a, b) => {
            Ok(!eval_inner(a, n, scope, params)? || eval_inner(b, n, scope, params)?)
        }
        Formula::Iff(a, b) => {
            Ok(eval_inner(a, n, scope, params)? == eval_inner(b, n, scope, params)?)
        }
        Formula::Forall(v, bound, body) => {
            let b = eval_term(bound, scope)?;
            for val in 0..b {
                scope.bindings.push((v.clone(), val));
                let r = eval_inner(body, n, scope, params)?;
                scope.bindings.pop();
                if !r {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, bound, body) => {
            let b = eval_term(bound, scope)?;
            for val in 0..b {
                scope.bindings.push((v.clone(), val));
                let r = eval_inner(body, n, scope, params)?;
                scope.bindings.pop();
                if r {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Outcome of the exhaustive finite-character check over a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCharacterReport {
    pub holds_on_empty: bool,
    pub downward_closed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    EmptyFails,
    NotDownwardClosed { superset: FinSet, subset: FinSet },
}

impl FiniteCharacterReport {
    pub fn holds(&self) -> bool {
        self.holds_on_empty && self.downward_closed
    }
}

/// Exhaustively verifies over all subsets of the universe that the formula
/// holds on the empty set and is downward closed. On a finite universe this
/// is exactly the finite character property.
pub fn check_finite_character(
    phi: &Formula,
    universe: Universe,
    params: &ParameterTable,
) -> Result<FiniteCharacterReport> {
    let u = universe.size() as usize;
    if u > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationBudget {
            size: u,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    if let Some(v) = phi.free_number_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    let env = Env::new();
    let mut truth = vec![false; 1usize << u];
    for (mask, slot) in truth.iter_mut().enumerate() {
        *slot = eval_hat(phi, mask as u64, &env, params)?;
    }

    let holds_on_empty = truth[0];
    let mut counterexample = None;
    // One-element removals suffice: a downward chain from any superset to any
    // subset passes through them.
    'outer: for mask in 0..truth.len() {
        if !truth[mask] {
            continue;
        }
        for i in 0..u {
            if mask >> i & 1 == 1 && !truth[mask & !(1 << i)] {
                counterexample = Some(Counterexample::NotDownwardClosed {
                    superset: crate::finset::members(mask as u64),
                    subset: crate::finset::members((mask & !(1 << i)) as u64),
                });
                break 'outer;
            }
        }
    }
    let downward_closed = counterexample.is_none();
    if !holds_on_empty {
        counterexample = Some(Counterexample::EmptyFails);
    }
    Ok(FiniteCharacterReport {
        holds_on_empty,
        downward_closed,
        counterexample,
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::InSet(t) => write!(f, "{t} in X"),
            Formula::InParam(p, t) => write!(f, "{t} in {p}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::Not(inner) => write!(f, "not ({inner})"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Forall(v, t, body) => write!(f, "forall {v} < {t} . ({body})"),
            Formula::Exists(v, t, body) => write!(f, "exists {v} < {t} . ({body})"),
        }
    }
}
