//! Brute-force oracles: exhaustive re-checks of everything the fast
//! constructions claim. Deliberately naive — these are the ground truth the
//! rest of the crate is tested against, and the `verify` CLI mode runs them
//! on demand.

use rand::Rng;

use crate::closure::ClosureOperator;
use crate::error::Result;
use crate::fcp::Property;
use crate::finset::FinSet;
use crate::ndclosure::NdClosureOperator;
use crate::orders::{JoinSemilattice, Poset};

/// The least closed superset by literal stage iteration: at each stage, add
/// every conclusion whose premise is contained, until nothing changes.
pub fn stage_closure(operator: &ClosureOperator, x: &FinSet) -> FinSet {
    let mut current = x.clone();
    loop {
        let additions: FinSet = operator
            .rules()
            .iter()
            .filter(|r| r.premise.is_subset_of(&current))
            .map(|r| r.conclusion)
            .collect();
        let next = current.union(&additions);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// All closed subsets of `within`, in increasing index order.
pub fn closed_subsets(operator: &ClosureOperator, within: &FinSet) -> Result<Vec<FinSet>> {
    Ok(within
        .subsets()?
        .filter(|s| operator.is_closed(s))
        .collect())
}

/// Exhaustive maximality for a bare property: `b` qualifies and no strict
/// superset within `ambient` does.
pub fn is_maximal_subset(ambient: &FinSet, b: &FinSet, phi: &Property) -> Result<bool> {
    if !b.is_subset_of(ambient) || !phi.holds(b) {
        return Ok(false);
    }
    for candidate in ambient.subsets()? {
        if b.is_strict_subset_of(&candidate) && phi.holds(&candidate) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One-element-extension maximality: no single added element keeps the
/// property. For a certified finite-character property this is equivalent to
/// full maximality, and it scales to universes where enumeration does not.
pub fn is_maximal_by_extension(ambient: &FinSet, b: &FinSet, phi: &Property) -> bool {
    b.is_subset_of(ambient)
        && phi.holds(b)
        && ambient
            .iter()
            .all(|a| b.contains(a) || !phi.holds(&b.inserted(a)))
}

/// Exhaustive three-part check for the deterministic extension: closed,
/// qualifying, and maximal among closed qualifying sets between `start` and
/// `ambient`.
pub fn is_maximal_closed_extension(
    ambient: &FinSet,
    start: &FinSet,
    b: &FinSet,
    phi: &Property,
    operator: &ClosureOperator,
) -> Result<bool> {
    if !start.is_subset_of(b) || !b.is_subset_of(ambient) {
        return Ok(false);
    }
    if !operator.is_closed(b) || !phi.holds(b) {
        return Ok(false);
    }
    for candidate in ambient.subsets()? {
        if b.is_strict_subset_of(&candidate)
            && operator.is_closed(&candidate)
            && phi.holds(&candidate)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The same three-part check for the nondeterministic extension.
pub fn is_maximal_nclosed_extension(
    ambient: &FinSet,
    start: &FinSet,
    b: &FinSet,
    phi: &Property,
    operator: &NdClosureOperator,
) -> Result<bool> {
    if !start.is_subset_of(b) || !b.is_subset_of(ambient) {
        return Ok(false);
    }
    if !operator.is_nclosed(b) || !phi.holds(b) {
        return Ok(false);
    }
    for candidate in operator.nclosed_family(ambient)? {
        if b.is_strict_subset_of(&candidate) && phi.holds(&candidate) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All ideals of the semilattice, in increasing index order.
pub fn semilattice_ideals(lattice: &JoinSemilattice) -> Result<Vec<FinSet>> {
    let ground: FinSet = (0..lattice.size()).collect();
    Ok(ground.subsets()?.filter(|s| lattice.is_ideal(s)).collect())
}

/// All ideals of the poset, in increasing index order.
pub fn poset_ideals(poset: &Poset) -> Result<Vec<FinSet>> {
    let ground: FinSet = (0..poset.size()).collect();
    Ok(ground.subsets()?.filter(|s| poset.is_ideal(s)).collect())
}

/// Maximal among proper ideals: no proper ideal strictly contains `b`.
pub fn is_maximal_proper_ideal(lattice: &JoinSemilattice, b: &FinSet) -> Result<bool> {
    if !lattice.is_ideal(b) || b.contains(lattice.top()) {
        return Ok(false);
    }
    Ok(semilattice_ideals(lattice)?
        .iter()
        .all(|i| i.contains(lattice.top()) || !b.is_strict_subset_of(i)))
}

/// Maximal among all ideals of the poset.
pub fn is_maximal_poset_ideal(poset: &Poset, b: &FinSet) -> Result<bool> {
    if !poset.is_ideal(b) {
        return Ok(false);
    }
    Ok(poset_ideals(poset)?.iter().all(|i| !b.is_strict_subset_of(i)))
}

/// A uniformly random subset of `within`.
pub fn random_subset<R: Rng>(rng: &mut R, within: &FinSet) -> FinSet {
    within.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Sampled stand-in for [`is_maximal_nclosed_extension`] when `ambient` is
/// beyond the enumeration cap: random supersets of `b` within `ambient` must
/// all fail to be closed qualifying sets. One-sided — can only ever refute.
pub fn sampled_maximal_nclosed<R: Rng>(
    ambient: &FinSet,
    b: &FinSet,
    phi: &Property,
    operator: &NdClosureOperator,
    rng: &mut R,
    samples: u32,
) -> bool {
    if !operator.is_nclosed(b) || !phi.holds(b) {
        return false;
    }
    let free = ambient.difference(b);
    for _ in 0..samples {
        let extra = random_subset(rng, &free);
        if extra.is_empty() {
            continue;
        }
        let candidate = b.union(&extra);
        if operator.is_nclosed(&candidate) && phi.holds(&candidate) {
            return false;
        }
    }
    true
}
