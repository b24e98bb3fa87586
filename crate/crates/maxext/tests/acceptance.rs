//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Every construction is checked against an independent
//! brute-force oracle.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maxext::closure::{ce_maximal, range_gadget_operator};
use maxext::fcp::{greedy_maximal, range_gadget_fcp, sigma1_maximal, PrefixPredicate, Property};
use maxext::finset::{members, FinSet, Universe};
use maxext::formula::{eval_hat, parse_document, Env};
use maxext::ndclosure::{nce_maximal, upset_operator, ChoiceStrategy, NdClosureOperator, DEFAULT_SEARCH_BUDGET};
use maxext::oracle;
use maxext::orders::{
    extend_to_maximal_ideal_poset, extend_to_maximal_ideal_semilattice, poset_ideal_operator,
    semilattice_ideal_operator, JoinSemilattice, Poset,
};

fn report(name: &str, failures: &[String]) {
    println!(
        "ACCEPT {name}: {}",
        if failures.is_empty() { "pass" } else { "fail" }
    );
    assert!(failures.is_empty(), "{name}: {:?}", &failures[..failures.len().min(5)]);
}

const FORMULA_CORPUS: &[&str] = &[
    "true",
    "false",
    "0 in X",
    "not (0 in X)",
    "0 in X and 1 in X",
    "0 in X or 9 in X",
    "0 in X -> 1 in X",
    "0 in X <-> 1 in X",
    "not (not (3 in X))",
    "1 < 2 and 2 = 2",
    "9 in X -> false",
    "(2 * 3) in X",
    "(1 + 1) in X <-> 2 in X",
    "forall y < 10 . (y in X -> y < 5)",
    "exists y < 10 . (y in X)",
    "forall y < 4 . (not (y in X and (y + 1) in X))",
    "exists y < 8 . (y in X and not ((y + 1) in X))",
    "forall y < 3 . (forall z < y . (z in X -> y in X))",
    "forall y < 5 . ((y * 2) in X -> y in X)",
    "forall y < 6 . (exists z < 6 . (y in X -> z in X and not (z < y)))",
    "param P0 = {1,2,3}\n0 in P0",
    "param P0 = {1,2,3}\nforall y < 6 . (y in P0 -> y in X)",
    "param P0 = {0,2,4}\nparam P1 = {1,3}\nexists y < 6 . (y in P0 and y in P1)",
];

#[test]
fn evaluation_equivalence_on_corpus() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for src in FORMULA_CORPUS {
        let (phi, params) = parse_document(src).unwrap();
        for n in 0u64..1024 {
            let by_index = eval_hat(&phi, n, &Env::new(), &params).unwrap();
            let by_set = common::direct_eval(&phi, &members(n), &mut Vec::new(), &params);
            if by_index != by_set {
                failures.push(format!("`{src}` disagrees at n = {n}"));
            }
        }
    }
    assert!(FORMULA_CORPUS.len() >= 20);
    assert!(started.elapsed().as_secs() < 10, "took {:?}", started.elapsed());
    report("evaluation equivalence", &failures);
}

#[test]
fn greedy_maximality_on_random_instances() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let universe = Universe::new(12).unwrap();
    let mut failures = Vec::new();
    for case in 0..500 {
        let a = common::random_set(&mut rng, 12);
        let phi = common::random_property(&mut rng, universe);
        let b = greedy_maximal(&a, &phi);
        if !oracle::is_maximal_subset(&a, &b, &phi).unwrap() {
            failures.push(format!("case {case}: {b} not maximal in {a} for {phi:?}"));
        }
    }
    assert!(started.elapsed().as_secs() < 60, "took {:?}", started.elapsed());
    report("greedy maximality", &failures);
}

#[test]
fn constant_search_maximality_on_random_prefix_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let universe = Universe::new(12).unwrap();
    let mut failures = Vec::new();
    for case in 0..100 {
        let c: u32 = rng.gen_range(0..=8);
        let v: FinSet = (0..c).filter(|_| rng.gen_bool(0.4)).collect();
        let a = common::random_set(&mut rng, 12);

        // rho holds of prefixes of length >= c whose listed positions are 0,
        // so the induced property is "X avoids v" and the least all-zero
        // witness has length exactly c.
        let forbidden = v.clone();
        let rho = PrefixPredicate::new(move |p: &[bool]| {
            p.len() >= c as usize
                && forbidden.iter().all(|e| e as usize >= p.len() || !p[e as usize])
        });

        let out = sigma1_maximal(&a, &rho, 16).unwrap();
        if out.c_phi != c {
            failures.push(format!("case {case}: constant {} instead of {c}", out.c_phi));
            continue;
        }
        let expected = a.difference(&v);
        if out.result != expected {
            failures.push(format!("case {case}: {} instead of {expected}", out.result));
            continue;
        }
        let avoid = v.clone();
        let phi = Property::validated_predicate(
            move |s: &FinSet| s.intersection(&avoid).is_empty(),
            universe,
        )
        .unwrap();
        if !oracle::is_maximal_subset(&a, &out.result, &phi).unwrap() {
            failures.push(format!("case {case}: {} fails the maximality oracle", out.result));
        }
    }
    report("constant-search maximality", &failures);
}

#[test]
fn closure_laws_and_leastness_on_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for case in 0..500 {
        let u = rng.gen_range(2..=10);
        let universe = Universe::new(u).unwrap();
        let op = common::random_operator(&mut rng, universe, 8);
        let ground = universe.ground_set();
        let closed: Vec<FinSet> = ground
            .subsets()
            .unwrap()
            .filter(|s| op.is_closed(s))
            .collect();
        for _ in 0..5 {
            let y = common::random_set(&mut rng, u);
            let x: FinSet = y.iter().filter(|_| rng.gen_bool(0.6)).collect();
            let cx = op.cl(&x);
            let cy = op.cl(&y);
            if !x.is_subset_of(&cx) {
                failures.push(format!("case {case}: not extensive on {x}"));
            }
            if !cx.is_subset_of(&cy) {
                failures.push(format!("case {case}: not monotone on {x} within {y}"));
            }
            if op.cl(&cx) != cx {
                failures.push(format!("case {case}: not idempotent on {x}"));
            }
            let least = closed
                .iter()
                .filter(|s| x.is_subset_of(s))
                .fold(ground.clone(), |acc, s| acc.intersection(s));
            if cx != least {
                failures.push(format!("case {case}: cl({x}) = {cx} but least is {least}"));
            }
        }
    }
    report("closure laws and leastness", &failures);
}

#[test]
fn closed_extension_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for case in 0..300 {
        let u = rng.gen_range(3..=12);
        let universe = Universe::new(u).unwrap();
        let op = common::random_operator(&mut rng, universe, 8);
        let a = common::random_set(&mut rng, u);
        let phi = common::random_property(&mut rng, universe);
        let seed: FinSet = a.iter().filter(|_| rng.gen_bool(0.2)).collect();
        let closed_seed = op.cl(&seed);
        let start = if closed_seed.is_subset_of(&a) && phi.holds(&closed_seed) {
            closed_seed
        } else {
            FinSet::empty()
        };
        let b = ce_maximal(&a, &start, &phi, &op).unwrap();
        if !oracle::is_maximal_closed_extension(&a, &start, &b, &phi, &op).unwrap() {
            failures.push(format!("case {case}: {b} fails the oracle (start {start}, ambient {a})"));
        }
    }
    report("closed extension oracle", &failures);
}

#[test]
fn prime_power_reduction_for_all_small_functions() {
    let started = Instant::now();
    // Universe accommodating 7^5, so every power any rule mentions fits.
    let universe = Universe::new(16808).unwrap();
    let ambient = universe.ground_set();
    let phi = Property::avoiding(0, universe);
    let primes = [2u32, 3, 5, 7];
    let mut failures = Vec::new();
    let mut cases = 0;
    for domain in 0u32..=4 {
        let count = 4u32.pow(domain);
        for code in 0..count {
            let mut f = Vec::new();
            let mut c = code;
            for n in 0..domain {
                f.push((n, c % 4));
                c /= 4;
            }
            cases += 1;
            let op = range_gadget_operator(&f, universe).unwrap();
            let b = ce_maximal(&ambient, &FinSet::empty(), &phi, &op).unwrap();
            for (i, &p) in primes.iter().enumerate() {
                let in_range = f.iter().any(|&(_, v)| v == i as u32);
                if in_range == b.contains(p) {
                    failures.push(format!("f = {f:?}: prime {p} membership wrong"));
                }
            }
        }
    }
    assert_eq!(cases, 341);
    assert!(started.elapsed().as_secs() < 120, "took {:?}", started.elapsed());
    report("prime-power range reduction", &failures);
}

#[test]
fn pointwise_range_family_on_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let universe = Universe::new(10).unwrap();
    let mut failures = Vec::new();
    for case in 0..100 {
        let domain = rng.gen_range(0..=6);
        let f: Vec<(u32, u32)> = (0..domain).map(|n| (n, rng.gen_range(0..10))).collect();
        let family = range_gadget_fcp(&f, universe).unwrap();
        for i in 0..10u32 {
            let in_range = f.iter().any(|&(_, v)| v == i);
            if family[i as usize].contains(i) != in_range {
                failures.push(format!("case {case}: element {i} wrong for f = {f:?}"));
            }
            if !family[i as usize].is_subset_of(&FinSet::singleton(i)) {
                failures.push(format!("case {case}: family member escapes {{{i}}}"));
            }
        }
    }
    report("pointwise range family", &failures);
}

#[test]
fn upset_closed_family_is_the_final_segments() {
    let mut failures = Vec::new();
    for k in 0u32..=6 {
        let universe = Universe::new(k + 1).unwrap();
        let op = upset_operator(universe);
        let family = op.nclosed_family(&universe.ground_set()).unwrap();
        let expected: Vec<FinSet> = (0..=k).rev().map(|j| (j..=k).collect()).collect();
        if family != expected {
            failures.push(format!("k = {k}: {family:?}"));
        }
    }
    report("upset final segments", &failures);
}

#[test]
fn nondeterministic_extension_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    for case in 0..200 {
        let u = rng.gen_range(3..=10);
        let universe = Universe::new(u).unwrap();
        let op = common::random_nd_operator(&mut rng, universe, 6);
        let a = common::random_set(&mut rng, u);
        let phi = common::random_property(&mut rng, universe);
        let start = FinSet::empty();
        let b = nce_maximal(&a, &start, &phi, &op, DEFAULT_SEARCH_BUDGET).unwrap();
        if !oracle::is_maximal_nclosed_extension(&a, &start, &b, &phi, &op).unwrap() {
            failures.push(format!("case {case}: {b} fails the oracle (ambient {a})"));
        }
    }
    report("nondeterministic extension oracle", &failures);
}

#[test]
fn determinization_pitfall_regression() {
    let universe = Universe::new(2).unwrap();
    let n = NdClosureOperator::new(
        vec![(FinSet::empty(), FinSet::from_elements([0, 1]))],
        universe,
    )
    .unwrap();
    let phi = Property::avoiding(0, universe);
    let ambient = FinSet::from_elements([0, 1]);
    let mut failures = Vec::new();

    let b = nce_maximal(&ambient, &FinSet::singleton(1), &phi, &n, DEFAULT_SEARCH_BUDGET).unwrap();
    if b != FinSet::singleton(1) {
        failures.push(format!("nondeterministic solution {b} instead of {{1}}"));
    }
    if !oracle::is_maximal_nclosed_extension(&ambient, &FinSet::singleton(1), &b, &phi, &n).unwrap()
    {
        failures.push("nondeterministic solution not maximal".into());
    }

    // Least-choice collapse forces 0 everywhere, leaving no valid set at all.
    let d = n.determinize(ChoiceStrategy::Least);
    for candidate in ambient.subsets().unwrap() {
        if d.is_closed(&candidate) && phi.holds(&candidate) {
            failures.push(format!("collapsed operator admits {candidate}"));
        }
    }
    report("determinization pitfall", &failures);
}

/// All labeled partial orders on `0..n`, built by assigning each unordered
/// pair one of three states and keeping the transitive ones.
fn all_posets(n: u32) -> Vec<Poset> {
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    for assignment in 0..total {
        let mut leq = vec![vec![false; n as usize]; n as usize];
        for a in 0..n as usize {
            leq[a][a] = true;
        }
        let mut code = assignment;
        for &(a, b) in &pairs {
            match code % 3 {
                1 => leq[a as usize][b as usize] = true,
                2 => leq[b as usize][a as usize] = true,
                _ => {}
            }
            code /= 3;
        }
        if let Ok(p) = Poset::new(leq) {
            out.push(p);
        }
    }
    out
}

fn semilattice_catalog() -> Vec<JoinSemilattice> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for p in all_posets(n) {
            if let Ok(l) = JoinSemilattice::from_poset(p) {
                out.push(l);
            }
        }
    }
    // A few six-element shapes: a chain, bottom + four atoms + top, and a
    // hexagon.
    let chain6 = Poset::from_relations(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
    out.push(JoinSemilattice::from_poset(chain6).unwrap());
    let atoms4 = Poset::from_relations(
        6,
        &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (3, 5), (4, 5)],
    )
    .unwrap();
    out.push(JoinSemilattice::from_poset(atoms4).unwrap());
    let hexagon =
        Poset::from_relations(6, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)]).unwrap();
    out.push(JoinSemilattice::from_poset(hexagon).unwrap());
    out
}

#[test]
fn ideal_encodings_and_maximal_ideals_over_catalogs() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let lattices = semilattice_catalog();
    assert!(lattices.len() > 50);
    for (k, l) in lattices.iter().enumerate() {
        let op = semilattice_ideal_operator(l);
        let ground: FinSet = (0..l.size()).collect();
        for x in ground.subsets().unwrap() {
            if op.is_closed(&x) != l.is_ideal(&x) {
                failures.push(format!("lattice {k}: encoding wrong on {x}"));
            }
        }
        for ideal in oracle::semilattice_ideals(l).unwrap() {
            if ideal.contains(l.top()) {
                continue;
            }
            let j = extend_to_maximal_ideal_semilattice(l, &ideal).unwrap();
            if !ideal.is_subset_of(&j) || !oracle::is_maximal_proper_ideal(l, &j).unwrap() {
                failures.push(format!("lattice {k}: extension of {ideal} gave {j}"));
            }
        }
    }

    for n in 0..=5u32 {
        let posets = if n == 0 { vec![Poset::empty()] } else { all_posets(n) };
        if n == 4 {
            assert_eq!(posets.len(), 219);
        }
        if n == 5 {
            assert_eq!(posets.len(), 4231);
        }
        for (k, p) in posets.iter().enumerate() {
            let op = poset_ideal_operator(p);
            let (hat, _) = p.with_top();
            let ground: FinSet = (0..n + 1).collect();
            for x in ground.subsets().unwrap() {
                if op.is_nclosed(&x) != hat.is_ideal(&x) {
                    failures.push(format!("poset {n}/{k}: encoding wrong on {x}"));
                }
            }
            let starts: Vec<FinSet> = if n <= 4 {
                oracle::poset_ideals(p).unwrap()
            } else {
                // Down-sets of single elements, plus the empty ideal.
                std::iter::once(FinSet::empty())
                    .chain((0..n).map(|a| (0..n).filter(|&b| p.leq(b, a)).collect()))
                    .collect()
            };
            for start in starts {
                let j = extend_to_maximal_ideal_poset(p, &start).unwrap();
                if !start.is_subset_of(&j) || !oracle::is_maximal_poset_ideal(p, &j).unwrap() {
                    failures.push(format!("poset {n}/{k}: extension of {start} gave {j}"));
                }
            }
        }
    }

    assert!(started.elapsed().as_secs() < 300, "took {:?}", started.elapsed());
    report("ideal encodings and maximal ideals", &failures);
}

#[test]
fn maximal_ideal_need_not_be_prime() {
    // Bottom, three atoms, top: the produced maximal ideal {bottom, first
    // atom} contains the meet of the other two atoms without containing
    // either one.
    let p = Poset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
    let l = JoinSemilattice::from_poset(p).unwrap();
    let ideal = extend_to_maximal_ideal_semilattice(&l, &FinSet::from_elements([0, 1])).unwrap();
    let mut failures = Vec::new();
    if ideal != FinSet::from_elements([0, 1]) {
        failures.push(format!("expected {{0,1}}, got {ideal}"));
    }
    if !oracle::is_maximal_proper_ideal(&l, &ideal).unwrap() {
        failures.push("not maximal".into());
    }

    let meet = |x: u32, y: u32| -> u32 {
        let lower: Vec<u32> = (0..l.size())
            .filter(|&z| l.leq(z, x) && l.leq(z, y))
            .collect();
        *lower
            .iter()
            .find(|&&z| lower.iter().all(|&w| l.leq(w, z)))
            .expect("meets exist in this lattice")
    };
    let prime = (0..l.size()).all(|x| {
        (0..l.size()).all(|y| {
            !ideal.contains(meet(x, y)) || ideal.contains(x) || ideal.contains(y)
        })
    });
    if prime {
        failures.push("ideal is unexpectedly prime".into());
    }
    if !ideal.contains(meet(2, 3)) || ideal.contains(2) || ideal.contains(3) {
        failures.push("witness pair (2,3) does not demonstrate non-primeness".into());
    }
    report("maximal ideal not prime", &failures);
}
