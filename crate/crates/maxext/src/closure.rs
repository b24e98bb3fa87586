//! Deterministic finitary closure operators: rules with a finite premise set
//! and a single conclusion. Provides closedness tests, the least-closed-
//! superset fixpoint, the maximal closed extension construction, and the
//! prime-power range gadget.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fcp::{validate_function, Property};
use crate::finset::{FinSet, Universe};

/// A single rule: if the premise is contained, the conclusion must be too.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rule {
    pub premise: FinSet,
    pub conclusion: u32,
}

/// A finite list of rules over a working universe. Immutable after
/// construction; rules are normalized (sorted, deduplicated) and indexed by
/// premise element for worklist propagation.
#[derive(Clone, Debug)]
pub struct ClosureOperator {
    rules: Vec<Rule>,
    universe: Universe,
    /// rule ids triggered by each element appearing in a premise
    by_trigger: Vec<Vec<u32>>,
}

impl ClosureOperator {
    pub fn new(rules: Vec<(FinSet, u32)>, universe: Universe) -> Result<Self> {
        let mut normalized: Vec<Rule> = Vec::with_capacity(rules.len());
        for (premise, conclusion) in rules {
            universe.check(&premise)?;
            if conclusion >= universe.size() {
                return Err(Error::OutsideUniverse { elem: conclusion, size: universe.size() });
            }
            normalized.push(Rule { premise, conclusion });
        }
        normalized.sort();
        normalized.dedup();
        let mut by_trigger = vec![Vec::new(); universe.size() as usize];
        for (id, rule) in normalized.iter().enumerate() {
            for e in rule.premise.iter() {
                by_trigger[e as usize].push(id as u32);
            }
        }
        Ok(ClosureOperator { rules: normalized, universe, by_trigger })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// True iff every rule whose premise is contained in `x` has its
    /// conclusion in `x`.
    pub fn is_closed(&self, x: &FinSet) -> bool {
        self.rules
            .iter()
            .all(|r| !r.premise.is_subset_of(x) || x.contains(r.conclusion))
    }

    /// The least closed superset of `x` within the universe, by worklist
    /// propagation to fixpoint.
    pub fn cl(&self, x: &FinSet) -> FinSet {
        debug_assert!(self.universe.contains(x));
        let mut bits = BitSet::new(self.universe.size());
        let mut remaining = self.fresh_counters(&bits);
        let mut added = Vec::new();
        for e in x.iter() {
            self.propagate(e, &mut bits, &mut remaining, &mut added);
        }
        // empty-premise rules fire unconditionally
        for (id, rule) in self.rules.iter().enumerate() {
            if remaining[id] == 0 && rule.premise.is_empty() {
                self.propagate(rule.conclusion, &mut bits, &mut remaining, &mut added);
            }
        }
        bits.to_finset()
    }

    fn fresh_counters(&self, bits: &BitSet) -> Vec<u32> {
        self.rules
            .iter()
            .map(|r| r.premise.iter().filter(|&e| !bits.contains(e)).count() as u32)
            .collect()
    }

    /// Adds `start` and everything it forces to `bits`, recording every newly
    /// added element in `added` and keeping the premise counters in sync.
    fn propagate(
        &self,
        start: u32,
        bits: &mut BitSet,
        remaining: &mut [u32],
        added: &mut Vec<u32>,
    ) {
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            if !bits.insert(n) {
                continue;
            }
            added.push(n);
            for &id in &self.by_trigger[n as usize] {
                remaining[id as usize] -= 1;
                if remaining[id as usize] == 0 {
                    stack.push(self.rules[id as usize].conclusion);
                }
            }
        }
    }

    fn rollback(&self, added: &[u32], bits: &mut BitSet, remaining: &mut [u32]) {
        for &e in added.iter().rev() {
            bits.remove(e);
            for &id in &self.by_trigger[e as usize] {
                remaining[id as usize] += 1;
            }
        }
    }
}

/// Maximal closed extension: returns `B` with `start ⊆ B ⊆ ambient`, `B`
/// closed, satisfying the property, and maximal among such sets.
///
/// Scans candidate elements in ascending order; a candidate is kept exactly
/// when the closure of the current set plus the candidate stays inside
/// `ambient` and satisfies the property, in which case the current set is
/// replaced by that closure.
pub fn ce_maximal(
    ambient: &FinSet,
    start: &FinSet,
    phi: &Property,
    operator: &ClosureOperator,
) -> Result<FinSet> {
    if !start.is_subset_of(ambient) {
        return Err(Error::StartNotContained);
    }
    if !operator.is_closed(start) {
        return Err(Error::StartNotClosed);
    }
    if !phi.holds(start) {
        return Err(Error::StartNotSatisfying);
    }
    let size = operator.universe().size();
    operator.universe().check(ambient)?;

    let ambient_bits = BitSet::from_finset(ambient, size);
    let mut bits = BitSet::from_finset(start, size);
    let mut remaining = operator.fresh_counters(&bits);
    // `start` is closed, so all fully-satisfied rules already have their
    // conclusions present and the counters are consistent.

    for i in 0..size {
        if bits.contains(i) || !ambient_bits.contains(i) {
            continue;
        }
        let mut added = Vec::new();
        operator.propagate(i, &mut bits, &mut remaining, &mut added);
        let ok = added.iter().all(|&e| ambient_bits.contains(e)) && phi.holds_bits(&bits);
        if !ok {
            operator.rollback(&added, &mut bits, &mut remaining);
        }
    }
    Ok(bits.to_finset())
}

/// The first `count` primes.
pub(crate) fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().all(|&p| n % p != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Builds the range-encoding closure operator over prime power columns:
/// consecutive positive powers of each prime force one another, and the
/// power `p_i^(n+1)` forces 0 whenever `f(n) = i`. Chain rules are emitted
/// only where both powers fit in the universe; a kill rule whose power does
/// not fit is an error.
pub fn range_gadget_operator(f: &[(u32, u32)], universe: Universe) -> Result<ClosureOperator> {
    validate_function(f)?;
    let u = universe.size() as u64;
    let mut rules: Vec<(FinSet, u32)> = Vec::new();

    let mut ps: Vec<u64> = Vec::new();
    {
        let mut n = 2u64;
        while n < u {
            if ps.iter().all(|&p| n % p != 0) {
                ps.push(n);
            }
            n += 1;
        }
    }
    for &p in &ps {
        let mut q = p;
        while q.saturating_mul(p) < u {
            let next = q * p;
            rules.push((FinSet::singleton(q as u32), next as u32));
            rules.push((FinSet::singleton(next as u32), q as u32));
            q = next;
        }
    }

    for &(n, i) in f {
        let needed_primes = primes(i as usize + 1);
        let p = needed_primes[i as usize];
        let power = (0..=n).try_fold(1u64, |acc, _| acc.checked_mul(p));
        match power {
            Some(q) if q < u => rules.push((FinSet::singleton(q as u32), 0)),
            Some(q) => return Err(Error::UniverseTooSmall { size: universe.size(), needed: q + 1 }),
            None => return Err(Error::UniverseTooSmall { size: universe.size(), needed: u64::MAX }),
        }
    }
    ClosureOperator::new(rules, universe)
}

/// Operator file format: one rule per line, `{1,2} -> 5`, `{} -> 5` for an
/// empty premise, `#` comments. When `universe` is not given it is inferred
/// as one past the largest element mentioned.
pub fn parse_operator(text: &str, universe: Option<Universe>) -> Result<ClosureOperator> {
    let mut rules: Vec<(FinSet, u32)> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (premise, conclusion) = line
            .split_once("->")
            .ok_or_else(|| Error::InvalidInput(format!("expected `{{…}} -> n`, got `{line}`")))?;
        let premise = crate::finset::parse_set_literal(premise)?;
        let conclusion: u32 = conclusion.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("expected a conclusion element, got `{}`", conclusion.trim()))
        })?;
        rules.push((premise, conclusion));
    }
    let universe = match universe {
        Some(u) => u,
        None => {
            let max = rules
                .iter()
                .map(|(p, c)| p.max().unwrap_or(0).max(*c))
                .max()
                .unwrap_or(0);
            Universe::new(max + 1)?
        }
    };
    ClosureOperator::new(rules, universe)
}
