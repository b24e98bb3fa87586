//! Shared helpers for the integration suites: a structurally independent
//! formula evaluator (interpreting the set variable as an explicit set, never
//! through its index) and seeded generators for instances.

#![allow(dead_code)]

use rand::Rng;

use maxext::closure::ClosureOperator;
use maxext::fcp::Property;
use maxext::finset::{FinSet, Universe};
use maxext::formula::{Formula, ParameterTable, Term};
use maxext::ndclosure::NdClosureOperator;

/// Evaluates a term under a name/value environment.
pub fn term_value(term: &Term, env: &[(String, u64)]) -> u64 {
    match term {
        Term::Const(c) => *c,
        Term::Var(v) => {
            env.iter()
                .rev()
                .find(|(n, _)| n == v)
                .unwrap_or_else(|| panic!("unassigned variable {v}"))
                .1
        }
        Term::Add(a, b) => term_value(a, env).wrapping_add(term_value(b, env)),
        Term::Mul(a, b) => term_value(a, env).wrapping_mul(term_value(b, env)),
    }
}

/// Direct evaluation with the set variable interpreted as an explicit set.
/// Shares no code with the library's index-based evaluator.
pub fn direct_eval(
    phi: &Formula,
    x: &FinSet,
    env: &mut Vec<(String, u64)>,
    params: &ParameterTable,
) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::InSet(t) => {
            u32::try_from(term_value(t, env)).map_or(false, |v| v < 64 && x.contains(v))
        }
        Formula::InParam(name, t) => {
            let set = params.get(name).expect("declared parameter");
            u32::try_from(term_value(t, env)).map_or(false, |v| set.contains(v))
        }
        Formula::Eq(a, b) => term_value(a, env) == term_value(b, env),
        Formula::Lt(a, b) => term_value(a, env) < term_value(b, env),
        Formula::Not(f) => !direct_eval(f, x, env, params),
        Formula::And(a, b) => direct_eval(a, x, env, params) && direct_eval(b, x, env, params),
        Formula::Or(a, b) => direct_eval(a, x, env, params) || direct_eval(b, x, env, params),
        Formula::Implies(a, b) => !direct_eval(a, x, env, params) || direct_eval(b, x, env, params),
        Formula::Iff(a, b) => direct_eval(a, x, env, params) == direct_eval(b, x, env, params),
        Formula::Forall(v, bound, body) => {
            let b = term_value(bound, env);
            (0..b).all(|val| {
                env.push((v.clone(), val));
                let r = direct_eval(body, x, env, params);
                env.pop();
                r
            })
        }
        Formula::Exists(v, bound, body) => {
            let b = term_value(bound, env);
            (0..b).any(|val| {
                env.push((v.clone(), val));
                let r = direct_eval(body, x, env, params);
                env.pop();
                r
            })
        }
    }
}

/// A random subset of `{0..size-1}`.
pub fn random_set(rng: &mut impl Rng, size: u32) -> FinSet {
    (0..size).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A random formula guaranteed to define a finite-character property: a
/// conjunction of forbidden-clause and bounded-cap shapes, all with the set
/// variable in negative polarity only.
pub fn random_fc_formula(rng: &mut impl Rng, universe: u32) -> Formula {
    let clauses = rng.gen_range(1..=3);
    let mut out: Option<Formula> = None;
    for _ in 0..clauses {
        let clause = if rng.gen_bool(0.7) {
            // not (a in X and b in X [and c in X])
            let k = rng.gen_range(2..=3);
            let mut atoms: Option<Formula> = None;
            for _ in 0..k {
                let e = rng.gen_range(0..universe) as u64;
                let atom = Formula::InSet(Term::Const(e));
                atoms = Some(match atoms {
                    None => atom,
                    Some(prev) => Formula::And(Box::new(prev), Box::new(atom)),
                });
            }
            Formula::Not(Box::new(atoms.unwrap()))
        } else {
            // forall y < u . (y in X -> y < t)   — caps membership below t
            let t = rng.gen_range(1..=universe) as u64;
            Formula::Forall(
                "y".into(),
                Term::Const(universe as u64),
                Box::new(Formula::Implies(
                    Box::new(Formula::InSet(Term::Var("y".into()))),
                    Box::new(Formula::Lt(Term::Var("y".into()), Term::Const(t))),
                )),
            )
        };
        out = Some(match out {
            None => clause,
            Some(prev) => Formula::And(Box::new(prev), Box::new(clause)),
        });
    }
    out.unwrap()
}

/// A validated property from [`random_fc_formula`].
pub fn random_property(rng: &mut impl Rng, universe: Universe) -> Property {
    let phi = random_fc_formula(rng, universe.size());
    Property::validated_formula(phi, ParameterTable::new(), universe)
        .expect("negative-polarity formulas have finite character")
}

/// A random deterministic operator with nonempty premises (so the empty set
/// is always closed).
pub fn random_operator(rng: &mut impl Rng, universe: Universe, max_rules: usize) -> ClosureOperator {
    let count = rng.gen_range(0..=max_rules);
    let rules = (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let premise: FinSet = (0..k)
                .map(|_| rng.gen_range(0..universe.size()))
                .collect();
            (premise, rng.gen_range(0..universe.size()))
        })
        .collect();
    ClosureOperator::new(rules, universe).expect("elements drawn inside the universe")
}

/// A random nondeterministic operator with nonempty premises.
pub fn random_nd_operator(
    rng: &mut impl Rng,
    universe: Universe,
    max_rules: usize,
) -> NdClosureOperator {
    let count = rng.gen_range(0..=max_rules);
    let rules = (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let premise: FinSet = (0..k)
                .map(|_| rng.gen_range(0..universe.size()))
                .collect();
            let c = rng.gen_range(1..=3);
            let choices: FinSet = (0..c)
                .map(|_| rng.gen_range(0..universe.size()))
                .collect();
            (premise, choices)
        })
        .collect();
    NdClosureOperator::new(rules, universe).expect("choices drawn inside the universe")
}
