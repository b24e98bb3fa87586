//! Finite join-semilattices and posets, their ideals, and the reduction of
//! maximal-ideal extension to the closure-extension constructions.

use crate::closure::{ce_maximal, ClosureOperator};
use crate::error::{Error, Result};
use crate::fcp::Property;
use crate::finset::{FinSet, Universe};
use crate::ndclosure::{nce_maximal, NdClosureOperator, DEFAULT_SEARCH_BUDGET};

/// A finite poset on elements `0..size`, with the order as a boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Validates reflexivity, antisymmetry, and transitivity.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self> {
        let m = leq.len();
        if leq.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidInput("order matrix is not square".into()));
        }
        for a in 0..m {
            if !leq[a][a] {
                return Err(Error::InvalidInput(format!("order is not reflexive at {a}")));
            }
            for b in 0..m {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::InvalidInput(format!(
                        "order is not antisymmetric on {a}, {b}"
                    )));
                }
                for c in 0..m {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::InvalidInput(format!(
                            "order is not transitive on {a} <= {b} <= {c}"
                        )));
                    }
                }
            }
        }
        Ok(Poset { leq })
    }

    /// Builds a poset from `a <= b` relations, taking the reflexive
    /// transitive closure first.
    pub fn from_relations(size: u32, relations: &[(u32, u32)]) -> Result<Self> {
        let m = size as usize;
        let mut leq = vec![vec![false; m]; m];
        for a in 0..m {
            leq[a][a] = true;
        }
        for &(a, b) in relations {
            if a as usize >= m || b as usize >= m {
                return Err(Error::InvalidInput(format!(
                    "relation {a} <= {b} mentions an element outside 0..{m}"
                )));
            }
            leq[a as usize][b as usize] = true;
        }
        for k in 0..m {
            for a in 0..m {
                for b in 0..m {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        Poset::new(leq)
    }

    pub fn empty() -> Self {
        Poset { leq: Vec::new() }
    }

    pub fn size(&self) -> u32 {
        self.leq.len() as u32
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.leq[a as usize][b as usize]
    }

    /// The extension with a new top element adjoined; returns it and the
    /// index of the top.
    pub fn with_top(&self) -> (Poset, u32) {
        let m = self.leq.len();
        let mut leq = vec![vec![false; m + 1]; m + 1];
        for a in 0..m {
            for b in 0..m {
                leq[a][b] = self.leq[a][b];
            }
            leq[a][m] = true;
        }
        leq[m][m] = true;
        (Poset { leq }, m as u32)
    }

    /// Ideal: downward closed and directed (any two members share an upper
    /// bound inside the set).
    pub fn is_ideal(&self, set: &FinSet) -> bool {
        if set.max().map_or(false, |m| m >= self.size()) {
            return false;
        }
        let downward = set
            .iter()
            .all(|b| (0..self.size()).all(|a| !self.leq(a, b) || set.contains(a)));
        let directed = set.iter().all(|p| {
            set.iter().all(|q| {
                set.iter().any(|r| self.leq(p, r) && self.leq(q, r))
            })
        });
        downward && directed
    }
}

/// A finite join-semilattice: a poset with a maximum and a join table giving
/// each pair's least upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinSemilattice {
    poset: Poset,
    join: Vec<Vec<u32>>,
    top: u32,
}

impl JoinSemilattice {
    /// Validates that the join table gives least upper bounds and that a
    /// maximum exists.
    pub fn new(poset: Poset, join: Vec<Vec<u32>>) -> Result<Self> {
        let m = poset.size();
        if join.len() != m as usize || join.iter().any(|row| row.len() != m as usize) {
            return Err(Error::InvalidInput("join table has the wrong shape".into()));
        }
        for a in 0..m {
            for b in 0..m {
                let j = join[a as usize][b as usize];
                if j >= m {
                    return Err(Error::InvalidInput(format!("join({a},{b}) out of range")));
                }
                if !poset.leq(a, j) || !poset.leq(b, j) {
                    return Err(Error::InvalidInput(format!(
                        "join({a},{b}) = {j} is not an upper bound"
                    )));
                }
                for c in 0..m {
                    if poset.leq(a, c) && poset.leq(b, c) && !poset.leq(j, c) {
                        return Err(Error::InvalidInput(format!(
                            "join({a},{b}) = {j} is not least: {c} is a smaller upper bound"
                        )));
                    }
                }
            }
        }
        let top = (0..m)
            .find(|&t| (0..m).all(|a| poset.leq(a, t)))
            .ok_or_else(|| Error::InvalidInput("no maximum element".into()))?;
        Ok(JoinSemilattice { poset, join, top })
    }

    /// Derives the join table from the order; errors if some pair has no
    /// least upper bound.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let m = poset.size();
        let mut join = vec![vec![0u32; m as usize]; m as usize];
        for a in 0..m {
            for b in 0..m {
                let mut least: Option<u32> = None;
                for c in 0..m {
                    if poset.leq(a, c) && poset.leq(b, c) {
                        least = match least {
                            None => Some(c),
                            Some(l) if poset.leq(c, l) => Some(c),
                            Some(l) => {
                                if !poset.leq(l, c) {
                                    // incomparable upper bounds; check the rest
                                    // before concluding there is no least one
                                    Some(l)
                                } else {
                                    Some(l)
                                }
                            }
                        };
                    }
                }
                let l = least.ok_or_else(|| {
                    Error::InvalidInput(format!("elements {a} and {b} have no upper bound"))
                })?;
                // verify leastness (the scan above only tracks a candidate)
                for c in 0..m {
                    if poset.leq(a, c) && poset.leq(b, c) && !poset.leq(l, c) {
                        return Err(Error::InvalidInput(format!(
                            "elements {a} and {b} have no least upper bound"
                        )));
                    }
                }
                join[a as usize][b as usize] = l;
            }
        }
        JoinSemilattice::new(poset, join)
    }

    pub fn size(&self) -> u32 {
        self.poset.size()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.poset.leq(a, b)
    }

    pub fn join(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize][b as usize]
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    /// Ideal: downward closed and join closed.
    pub fn is_ideal(&self, set: &FinSet) -> bool {
        if set.max().map_or(false, |m| m >= self.size()) {
            return false;
        }
        let downward = set
            .iter()
            .all(|b| (0..self.size()).all(|a| !self.leq(a, b) || set.contains(a)));
        let join_closed = set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(self.join(a, b))));
        downward && join_closed
    }
}

/// The deterministic operator whose closed sets are exactly the ideals of
/// the semilattice: joins force their value, elements force everything
/// below them.
pub fn semilattice_ideal_operator(lattice: &JoinSemilattice) -> ClosureOperator {
    let m = lattice.size();
    let universe = Universe::new(m).expect("a semilattice has at least its top");
    let mut rules = Vec::new();
    for a in 0..m {
        for b in 0..m {
            rules.push((FinSet::from_elements([a, b]), lattice.join(a, b)));
            if lattice.leq(b, a) {
                rules.push((FinSet::singleton(a), b));
            }
        }
    }
    ClosureOperator::new(rules, universe).expect("all elements lie inside the universe")
}

/// Extends a proper ideal to a maximal proper ideal.
pub fn extend_to_maximal_ideal_semilattice(
    lattice: &JoinSemilattice,
    ideal: &FinSet,
) -> Result<FinSet> {
    if !lattice.is_ideal(ideal) {
        return Err(Error::Precondition("start set is not an ideal of the semilattice".into()));
    }
    if ideal.contains(lattice.top()) {
        return Err(Error::Precondition("start ideal is not proper: it contains the top".into()));
    }
    let universe = Universe::new(lattice.size())?;
    let operator = semilattice_ideal_operator(lattice);
    let phi = Property::avoiding(lattice.top(), universe);
    ce_maximal(&universe.ground_set(), ideal, &phi, &operator)
}

/// The nondeterministic operator over the top-extended poset whose closed
/// sets are exactly its ideals: elements demand everything below them, and
/// each pair demands some common upper bound. The adjoined top bounds every
/// pair, so no choice set is empty.
pub fn poset_ideal_operator(poset: &Poset) -> NdClosureOperator {
    let (hat, _top) = poset.with_top();
    let m = hat.size();
    let universe = Universe::new(m).expect("the extended poset is nonempty");
    let mut rules = Vec::new();
    for j in 0..m {
        for k in 0..m {
            if j != k && hat.leq(j, k) {
                rules.push((FinSet::singleton(k), FinSet::singleton(j)));
            }
            if j <= k {
                let upper: FinSet = (0..m)
                    .filter(|&n| hat.leq(j, n) && hat.leq(k, n))
                    .collect();
                rules.push((FinSet::from_elements([j, k]), upper));
            }
        }
    }
    NdClosureOperator::new(rules, universe).expect("the top bounds every pair")
}

/// Extends an ideal of the poset to a maximal ideal, by maximal closed
/// extension over the top-extended poset under the property that the top is
/// absent.
pub fn extend_to_maximal_ideal_poset(poset: &Poset, ideal: &FinSet) -> Result<FinSet> {
    if !poset.is_ideal(ideal) {
        return Err(Error::Precondition("start set is not an ideal of the poset".into()));
    }
    let (_, top) = poset.with_top();
    let universe = Universe::new(poset.size() + 1)?;
    let operator = poset_ideal_operator(poset);
    let phi = Property::avoiding(top, universe);
    let extended = nce_maximal(
        &universe.ground_set(),
        ideal,
        &phi,
        &operator,
        DEFAULT_SEARCH_BUDGET,
    )?;
    debug_assert!(!extended.contains(top));
    Ok(extended)
}

/// Poset file format: `elements m` header, then `a <= b` relation lines,
/// `#` comments. The reflexive transitive closure is computed and validated.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let (size, relations, joins, auto) = parse_order_document(text)?;
    if !joins.is_empty() || auto {
        return Err(Error::InvalidInput("join lines are only valid in semilattice files".into()));
    }
    Poset::from_relations(size, &relations)
}

/// Semilattice file format: the poset format plus either `join auto` or
/// explicit `join a b = c` lines for pairs not comparable in the order.
pub fn parse_semilattice(text: &str) -> Result<JoinSemilattice> {
    let (size, relations, joins, auto) = parse_order_document(text)?;
    let poset = Poset::from_relations(size, &relations)?;
    if auto {
        if !joins.is_empty() {
            return Err(Error::InvalidInput("`join auto` excludes explicit join lines".into()));
        }
        return JoinSemilattice::from_poset(poset);
    }
    let m = size as usize;
    let mut table = vec![vec![None::<u32>; m]; m];
    for a in 0..size {
        for b in 0..size {
            if poset.leq(a, b) {
                table[a as usize][b as usize] = Some(b);
                table[b as usize][a as usize] = Some(b);
            }
        }
    }
    for (a, b, c) in joins {
        if a >= size || b >= size || c >= size {
            return Err(Error::InvalidInput(format!("join {a} {b} = {c} out of range")));
        }
        for (x, y) in [(a, b), (b, a)] {
            if let Some(existing) = table[x as usize][y as usize] {
                if existing != c {
                    return Err(Error::InvalidInput(format!(
                        "join {x} {y} given as {c} but {existing} is implied"
                    )));
                }
            }
            table[x as usize][y as usize] = Some(c);
        }
    }
    let mut join = vec![vec![0u32; m]; m];
    for a in 0..m {
        for b in 0..m {
            join[a][b] = table[a][b].ok_or_else(|| {
                Error::InvalidInput(format!("no join given for incomparable pair {a}, {b}"))
            })?;
        }
    }
    JoinSemilattice::new(poset, join)
}

type OrderDocument = (u32, Vec<(u32, u32)>, Vec<(u32, u32, u32)>, bool);

fn parse_order_document(text: &str) -> Result<OrderDocument> {
    let mut size: Option<u32> = None;
    let mut relations = Vec::new();
    let mut joins = Vec::new();
    let mut auto = false;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("elements") {
            if size.is_some() {
                return Err(Error::InvalidInput("duplicate `elements` header".into()));
            }
            size = Some(rest.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("expected `elements m`, got `{line}`"))
            })?);
        } else if line == "join auto" {
            auto = true;
        } else if let Some(rest) = line.strip_prefix("join ") {
            let (pair, value) = rest
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected `join a b = c`, got `{line}`")))?;
            let mut it = pair.split_whitespace();
            let a = parse_element(it.next(), line)?;
            let b = parse_element(it.next(), line)?;
            if it.next().is_some() {
                return Err(Error::InvalidInput(format!("expected `join a b = c`, got `{line}`")));
            }
            let c = parse_element(Some(value.trim()), line)?;
            joins.push((a, b, c));
        } else if let Some((a, b)) = line.split_once("<=") {
            relations.push((parse_element(Some(a.trim()), line)?, parse_element(Some(b.trim()), line)?));
        } else {
            return Err(Error::InvalidInput(format!("unrecognized line `{line}`")));
        }
    }
    let size = size.ok_or_else(|| Error::InvalidInput("missing `elements m` header".into()))?;
    Ok((size, relations, joins, auto))
}

fn parse_element(text: Option<&str>, line: &str) -> Result<u32> {
    text.and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| Error::InvalidInput(format!("expected an element number in `{line}`")))
}
