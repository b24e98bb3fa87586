//! Nondeterministic finitary closure operators: rules with a finite premise
//! and a nonempty choice set, of which a closed set must contain at least one
//! member. Includes the maximal-extension search and the (incomplete)
//! determinization to a deterministic operator.

use crate::bitset::BitSet;
use crate::closure::ClosureOperator;
use crate::error::{Error, Result};
use crate::fcp::Property;
use crate::finset::{FinSet, Universe};

/// Default node limit for the maximal-extension search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// A single rule: if the premise is contained, at least one choice must be.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NdRule {
    pub premise: FinSet,
    pub choices: FinSet,
}

#[derive(Clone, Debug)]
pub struct NdClosureOperator {
    rules: Vec<NdRule>,
    universe: Universe,
}

impl NdClosureOperator {
    /// Choice sets are truncated to the universe and must stay nonempty.
    pub fn new(rules: Vec<(FinSet, FinSet)>, universe: Universe) -> Result<Self> {
        let mut normalized = Vec::with_capacity(rules.len());
        for (premise, choices) in rules {
            universe.check(&premise)?;
            let choices: FinSet = choices.iter().filter(|&c| c < universe.size()).collect();
            if choices.is_empty() {
                return Err(Error::EmptyChoices);
            }
            normalized.push(NdRule { premise, choices });
        }
        normalized.sort();
        normalized.dedup();
        Ok(NdClosureOperator { rules: normalized, universe })
    }

    pub fn rules(&self) -> &[NdRule] {
        &self.rules
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn is_nclosed(&self, x: &FinSet) -> bool {
        self.rules
            .iter()
            .all(|r| !r.premise.is_subset_of(x) || r.choices.iter().any(|c| x.contains(c)))
    }

    fn is_nclosed_bits(&self, x: &BitSet, masks: &[(BitSet, BitSet)]) -> bool {
        masks
            .iter()
            .all(|(premise, choices)| !premise.is_subset_of(x) || choices.intersects(x))
    }

    fn rule_masks(&self) -> Vec<(BitSet, BitSet)> {
        let size = self.universe.size();
        self.rules
            .iter()
            .map(|r| {
                (
                    BitSet::from_finset(&r.premise, size),
                    BitSet::from_finset(&r.choices, size),
                )
            })
            .collect()
    }

    /// All closed subsets of `within`, in increasing index order.
    pub fn nclosed_family(&self, within: &FinSet) -> Result<Vec<FinSet>> {
        Ok(within
            .subsets()?
            .filter(|s| self.is_nclosed(s))
            .collect())
    }

    /// Replaces each choice set by a single element. Every set closed under
    /// the result is closed under `self`; the converse can fail, which is
    /// exactly why the nondeterministic extension problem is harder.
    pub fn determinize(&self, strategy: ChoiceStrategy) -> ClosureOperator {
        let rules = self
            .rules
            .iter()
            .map(|r| {
                let chosen = match strategy {
                    ChoiceStrategy::Least => r.choices.elements()[0],
                    ChoiceStrategy::Greatest => *r.choices.elements().last().unwrap(),
                };
                (r.premise.clone(), chosen)
            })
            .collect();
        ClosureOperator::new(rules, self.universe)
            .expect("choice elements lie inside the universe")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceStrategy {
    Least,
    Greatest,
}

/// Maximal closed extension under a nondeterministic operator.
///
/// For each candidate element in ascending order, searches for the
/// least-index closed set that contains the current set plus the candidate,
/// stays inside `ambient`, and satisfies the property; if one exists the
/// current set jumps to it. Candidate sets are enumerated in increasing
/// index order, so the chosen witness is deterministic. Every candidate
/// tested costs one node of the budget.
pub fn nce_maximal(
    ambient: &FinSet,
    start: &FinSet,
    phi: &Property,
    operator: &NdClosureOperator,
    budget: u64,
) -> Result<FinSet> {
    if !start.is_subset_of(ambient) {
        return Err(Error::StartNotContained);
    }
    if !operator.is_nclosed(start) {
        return Err(Error::StartNotClosed);
    }
    if !phi.holds(start) {
        return Err(Error::StartNotSatisfying);
    }
    let size = operator.universe().size();
    operator.universe().check(ambient)?;

    let masks = operator.rule_masks();
    let mut current = BitSet::from_finset(start, size);
    let mut nodes = 0u64;

    for i in 0..size {
        if current.contains(i) || !ambient.contains(i) {
            continue;
        }
        let free: Vec<u32> = ambient
            .iter()
            .filter(|&e| e != i && !current.contains(e))
            .collect();
        let total: u128 = 1u128 << free.len().min(127);
        let mut found = None;
        let mut mask: u128 = 0;
        while mask < total {
            nodes += 1;
            if nodes > budget {
                return Err(Error::SearchBudget { limit: budget });
            }
            let mut candidate = current.clone();
            candidate.insert(i);
            for (j, &e) in free.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    candidate.insert(e);
                }
            }
            if operator.is_nclosed_bits(&candidate, &masks) && phi.holds_bits(&candidate) {
                found = Some(candidate);
                break;
            }
            mask += 1;
        }
        if let Some(witness) = found {
            current = witness;
        }
    }
    Ok(current.to_finset())
}

/// Operator file format: one rule per line, `{1,2} -> {5,7,9}`, `#` comments.
/// When `universe` is not given it is inferred from the elements mentioned.
pub fn parse_operator(text: &str, universe: Option<Universe>) -> Result<NdClosureOperator> {
    let mut rules: Vec<(FinSet, FinSet)> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (premise, choices) = line
            .split_once("->")
            .ok_or_else(|| Error::InvalidInput(format!("expected `{{…}} -> {{…}}`, got `{line}`")))?;
        rules.push((
            crate::finset::parse_set_literal(premise)?,
            crate::finset::parse_set_literal(choices)?,
        ));
    }
    let universe = match universe {
        Some(u) => u,
        None => {
            let max = rules
                .iter()
                .map(|(p, c)| p.max().unwrap_or(0).max(c.max().unwrap_or(0)))
                .max()
                .unwrap_or(0);
            Universe::new(max + 1)?
        }
    };
    NdClosureOperator::new(rules, universe)
}

/// The escalation operator: the empty premise demands some member of the
/// ground segment, and any member demands every larger one. Its closed
/// subsets of `{0..k}` are exactly the final segments.
pub fn upset_operator(universe: Universe) -> NdClosureOperator {
    let ground = universe.ground_set();
    let mut rules = vec![(FinSet::empty(), ground.clone())];
    for i in 0..universe.size() {
        for j in i + 1..universe.size() {
            rules.push((FinSet::singleton(i), FinSet::singleton(j)));
        }
    }
    NdClosureOperator::new(rules, universe).expect("ground segment is nonempty")
}
