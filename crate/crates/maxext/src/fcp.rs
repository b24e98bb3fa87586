//! Maximal-subset constructions for properties of finite character: the
//! greedy scan, the constant-search algorithm for existentially-quantified
//! prefix predicates, and the sequential range gadget.

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::finset::{self, FinSet, Universe, DEFAULT_ENUMERATION_CAP};
use crate::formula::{self, Env, Formula, ParameterTable};

/// A predicate on finite sets certified to be of finite character over a
/// working universe: it holds on the empty set and is downward closed.
///
/// Construction always validates; operations that consume a `Property` may
/// therefore assume the certificate.
#[derive(Clone)]
pub struct Property {
    kind: Kind,
    universe: Universe,
}

#[derive(Clone)]
enum Kind {
    Formula {
        formula: Arc<Formula>,
        params: Arc<ParameterTable>,
    },
    Predicate {
        pred: Arc<dyn Fn(&FinSet) -> bool + Send + Sync>,
    },
    Avoiding {
        element: u32,
    },
    Always,
}

impl std::fmt::Debug for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            Kind::Formula { formula, .. } => write!(f, "Property::Formula({formula})"),
            Kind::Predicate { .. } => write!(f, "Property::Predicate"),
            Kind::Avoiding { element } => write!(f, "Property::Avoiding({element})"),
            Kind::Always => write!(f, "Property::Always"),
        }
    }
}

impl Property {
    /// Certifies a closed formula over a universe. Small universes are
    /// checked exhaustively; beyond the enumeration cap a structural
    /// certificate is accepted instead: every `t in X` atom in negative
    /// polarity plus truth on the empty set.
    pub fn validated_formula(
        formula: Formula,
        params: ParameterTable,
        universe: Universe,
    ) -> Result<Self> {
        if let Some(v) = formula.free_number_vars().into_iter().next() {
            return Err(Error::UnboundVariable(v));
        }
        for name in formula.param_names() {
            if params.get(&name).is_none() {
                return Err(Error::UnknownParameter(name));
            }
        }
        if universe.size() as usize <= DEFAULT_ENUMERATION_CAP {
            let report = formula::check_finite_character(&formula, universe, &params)?;
            if !report.holds() {
                return Err(Error::NotFiniteCharacter(describe(&report)));
            }
        } else {
            if !formula.is_anti_monotone() {
                return Err(Error::NotFiniteCharacter(format!(
                    "universe of size {} is beyond the exhaustive cap and the formula \
                     is not syntactically downward closed",
                    universe.size()
                )));
            }
            if !formula::eval_hat(&formula, 0, &Env::new(), &params)? {
                return Err(Error::NotFiniteCharacter("fails on the empty set".into()));
            }
        }
        Ok(Property {
            kind: Kind::Formula {
                formula: Arc::new(formula),
                params: Arc::new(params),
            },
            universe,
        })
    }

    /// Certifies an opaque predicate by exhaustive check over the universe.
    pub fn validated_predicate<F>(pred: F, universe: Universe) -> Result<Self>
    where
        F: Fn(&FinSet) -> bool + Send + Sync + 'static,
    {
        let u = universe.size() as usize;
        if u > DEFAULT_ENUMERATION_CAP {
            return Err(Error::EnumerationBudget { size: u, cap: DEFAULT_ENUMERATION_CAP });
        }
        let mut truth = vec![false; 1usize << u];
        for (mask, slot) in truth.iter_mut().enumerate() {
            *slot = pred(&finset::members(mask as u64));
        }
        if !truth[0] {
            return Err(Error::NotFiniteCharacter("fails on the empty set".into()));
        }
        for mask in 0..truth.len() {
            if !truth[mask] {
                continue;
            }
            for i in 0..u {
                if mask >> i & 1 == 1 && !truth[mask & !(1 << i)] {
                    return Err(Error::NotFiniteCharacter(format!(
                        "holds on {} but not on {}",
                        finset::members(mask as u64),
                        finset::members((mask & !(1 << i)) as u64)
                    )));
                }
            }
        }
        Ok(Property { kind: Kind::Predicate { pred: Arc::new(pred) }, universe })
    }

    /// The property "element is not a member". Downward closed by
    /// construction, so valid over universes of any size.
    pub fn avoiding(element: u32, universe: Universe) -> Self {
        Property { kind: Kind::Avoiding { element }, universe }
    }

    /// The property that holds of every set.
    pub fn always(universe: Universe) -> Self {
        Property { kind: Kind::Always, universe }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn holds(&self, set: &FinSet) -> bool {
        match &self.kind {
            Kind::Formula { formula, params } => {
                let n = finset::index_of(set)
                    .expect("formula properties are only certified over indexable universes");
                formula::eval_hat(formula, n, &Env::new(), params)
                    .expect("certified formulas evaluate without error")
            }
            Kind::Predicate { pred } => pred(set),
            Kind::Avoiding { element } => !set.contains(*element),
            Kind::Always => true,
        }
    }

    pub(crate) fn holds_bits(&self, bits: &BitSet) -> bool {
        match &self.kind {
            Kind::Avoiding { element } => !bits.contains(*element),
            Kind::Always => true,
            _ => self.holds(&bits.to_finset()),
        }
    }
}

fn describe(report: &formula::FiniteCharacterReport) -> String {
    match &report.counterexample {
        Some(formula::Counterexample::EmptyFails) => "fails on the empty set".into(),
        Some(formula::Counterexample::NotDownwardClosed { superset, subset }) => {
            format!("holds on {superset} but not on its subset {subset}")
        }
        None => "report inconsistent".into(),
    }
}

/// Scans the elements of `base` in ascending order, adding each element whose
/// addition preserves the property. The result satisfies the property and is
/// ⊆-maximal among subsets of `base` that do.
pub fn greedy_maximal(base: &FinSet, phi: &Property) -> FinSet {
    greedy_maximal_ordered(base.elements(), phi)
}

/// The greedy scan relative to an explicit enumeration of the base set.
/// Different enumerations may produce different (all maximal) results.
pub fn greedy_maximal_ordered(enumeration: &[u32], phi: &Property) -> FinSet {
    let mut current = FinSet::empty();
    debug_assert!(phi.holds(&current));
    for &a in enumeration {
        if current.contains(a) {
            continue;
        }
        let candidate = current.inserted(a);
        if phi.holds(&candidate) {
            current = candidate;
        }
    }
    current
}

/// A total decidable predicate on finite characteristic prefixes. The induced
/// set property is "some prefix of X's characteristic function satisfies it".
#[derive(Clone)]
pub struct PrefixPredicate {
    pred: Arc<dyn Fn(&[bool]) -> bool + Send + Sync>,
}

impl PrefixPredicate {
    pub fn new<F>(pred: F) -> Self
    where
        F: Fn(&[bool]) -> bool + Send + Sync + 'static,
    {
        PrefixPredicate { pred: Arc::new(pred) }
    }

    pub fn eval(&self, prefix: &[bool]) -> bool {
        (self.pred)(prefix)
    }

    /// Decides the induced property on a set by searching prefixes up to
    /// `search_cap`. Absence of a witness within the cap counts as false.
    pub fn satisfied_by(&self, set: &FinSet, search_cap: u32) -> bool {
        let mut prefix = Vec::with_capacity(search_cap as usize + 1);
        for m in 0..=search_cap {
            if self.eval(&prefix) {
                return true;
            }
            prefix.push(set.contains(m));
        }
        false
    }
}

/// Result of [`sigma1_maximal`]: the maximal subset and the constant below
/// which membership had to be decided by finite search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma1Maximal {
    pub result: FinSet,
    pub c_phi: u32,
}

/// Maximal subset of `base` for the property induced by `rho`, assuming that
/// property has finite character (caller-certified).
///
/// Finds the least `c` with the all-zero prefix of length `c` satisfying
/// `rho`; every set disjoint from `{0..c}` then satisfies the property, so
/// only membership below `c+1` matters. All qualifying head sets are
/// enumerated and one of maximal cardinality is kept, breaking ties toward
/// the least canonical index.
pub fn sigma1_maximal(
    base: &FinSet,
    rho: &PrefixPredicate,
    search_cap: u32,
) -> Result<Sigma1Maximal> {
    let mut c = None;
    let mut prefix: Vec<bool> = Vec::new();
    for len in 0..=search_cap {
        if rho.eval(&prefix) {
            c = Some(len);
            break;
        }
        prefix.push(false);
    }
    let c = c.ok_or(Error::WitnessSearchExhausted { cap: search_cap })?;

    let segment = FinSet::from_elements(0..=c);
    let head_pool = base.intersection(&segment);
    let tail = base.difference(&segment);

    let mut best: Option<(usize, u64, FinSet)> = None;
    for head in head_pool.subsets()? {
        let candidate = head.union(&tail);
        if !rho_decides(rho, &candidate, search_cap) {
            continue;
        }
        let card = head.len();
        let index = finset::index_of(&head)?;
        let better = match &best {
            None => true,
            Some((bc, bi, _)) => card > *bc || (card == *bc && index < *bi),
        };
        if better {
            best = Some((card, index, candidate));
        }
    }
    let (_, _, result) = best.expect("the empty head always qualifies");
    Ok(Sigma1Maximal { result, c_phi: c })
}

fn rho_decides(rho: &PrefixPredicate, set: &FinSet, search_cap: u32) -> bool {
    rho.satisfied_by(set, search_cap)
}

/// For each `i` in the universe, the maximal subset of `{i}` under the
/// property "if i is a member then i is a value of f". The resulting family
/// encodes the range of `f`: `i` is in the range iff `B_i = {i}`.
pub fn range_gadget_fcp(f: &[(u32, u32)], universe: Universe) -> Result<Vec<FinSet>> {
    validate_function(f)?;
    for &(_, value) in f {
        if value >= universe.size() {
            return Err(Error::OutsideUniverse { elem: value, size: universe.size() });
        }
    }
    Ok((0..universe.size())
        .map(|i| {
            if f.iter().any(|&(_, value)| value == i) {
                FinSet::singleton(i)
            } else {
                FinSet::empty()
            }
        })
        .collect())
}

pub(crate) fn validate_function(f: &[(u32, u32)]) -> Result<()> {
    for (k, &(arg, value)) in f.iter().enumerate() {
        for &(arg2, value2) in &f[..k] {
            if arg == arg2 && value != value2 {
                return Err(Error::InvalidInput(format!(
                    "function maps {arg} to both {value2} and {value}"
                )));
            }
        }
    }
    Ok(())
}
