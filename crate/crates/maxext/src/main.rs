use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maxext::closure::{self, ce_maximal, range_gadget_operator};
use maxext::error::{Error, Result};
use maxext::fcp::{self, range_gadget_fcp, sigma1_maximal, PrefixPredicate, Property};
use maxext::finset::{self, parse_set_literal, FinSet, Universe, DEFAULT_ENUMERATION_CAP};
use maxext::formula::{self, parse_document, Env};
use maxext::ndclosure::{self, nce_maximal, ChoiceStrategy, DEFAULT_SEARCH_BUDGET};
use maxext::oracle;
use maxext::orders::{
    extend_to_maximal_ideal_poset, extend_to_maximal_ideal_semilattice, parse_poset,
    parse_semilattice,
};

#[derive(Parser)]
#[command(name = "maxext", version, about = "Maximal subsets, closures, and ideal extensions")]
struct Cli {
    /// Working universe size; inferred from the inputs when omitted
    #[arg(long, global = true)]
    universe: Option<u32>,

    /// Node budget for nondeterministic witness search
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,

    /// Seed for sampled verification on large universes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy maximal subset satisfying a finite-character formula
    Fcp {
        /// Base set literal, e.g. "{0,1,2,3}"
        #[arg(long)]
        set: String,
        /// Formula file
        #[arg(long)]
        formula: PathBuf,
        /// Explicit enumeration order, e.g. "3,1,0,2"
        #[arg(long)]
        order: Option<String>,
    },
    /// Maximal subset for a property given as a prefix predicate
    Sigma1 {
        /// Base set literal
        #[arg(long)]
        set: String,
        /// Prefix-predicate file: a formula with free number variable `m`,
        /// evaluated with X restricted to {0..m-1}
        #[arg(long)]
        rho: PathBuf,
        /// Longest prefix searched for a witness
        #[arg(long, default_value_t = 32)]
        cap: u32,
    },
    /// Maximal closed extension under a deterministic operator
    Ce {
        /// Operator file, one `{1,2} -> 5` rule per line
        #[arg(long)]
        op: PathBuf,
        /// Formula file; omitted means the property that always holds
        #[arg(long)]
        formula: Option<PathBuf>,
        /// Ambient set literal
        #[arg(long)]
        within: String,
        /// Starting closed set literal
        #[arg(long, default_value = "{}")]
        start: String,
    },
    /// Maximal closed extension under a nondeterministic operator
    Nce {
        /// Operator file, one `{1,2} -> {5,7,9}` rule per line
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long)]
        within: String,
        #[arg(long, default_value = "{}")]
        start: String,
    },
    /// Least closed superset under a deterministic operator
    Close {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// All closed subsets of a set under a nondeterministic operator
    Nclose {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        within: String,
    },
    /// Extend an ideal of a poset or semilattice to a maximal one
    Ideal {
        /// Poset file: `elements m` then `a <= b` lines
        #[arg(long, conflicts_with = "semilattice")]
        poset: Option<PathBuf>,
        /// Semilattice file: poset format plus `join a b = c` or `join auto`
        #[arg(long)]
        semilattice: Option<PathBuf>,
        #[arg(long, default_value = "{}")]
        start: String,
    },
    /// Evaluate a closed formula on a set
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Per-element maximal-subset family encoding the range of a function
    GadgetRangeFcp {
        /// Finite function as `arg:value` pairs, e.g. "0:3,1:3,2:5"
        #[arg(long)]
        fun: String,
    },
    /// Prime-power closure operator encoding the range of a function
    GadgetRangeOp {
        #[arg(long)]
        fun: String,
    },
    /// Collapse each choice set of a nondeterministic operator to one element
    Determinize {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, value_enum, default_value_t = Strategy::Least)]
        strategy: Strategy,
    },
    /// Re-check a produced set against the brute-force oracles
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Least,
    Greatest,
}

#[derive(Args)]
struct VerifyArgs {
    /// The set to check
    #[arg(long)]
    witness: String,
    /// Base set for a plain property instance
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    formula: Option<PathBuf>,
    /// Operator file; deterministic or nondeterministic is detected
    #[arg(long)]
    op: Option<PathBuf>,
    #[arg(long)]
    within: Option<String>,
    #[arg(long)]
    start: Option<String>,
    #[arg(long, conflicts_with = "semilattice")]
    poset: Option<PathBuf>,
    #[arg(long)]
    semilattice: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Fcp { set, formula, order } => {
            let a = parse_set_literal(set)?;
            let universe = resolve_universe(cli.universe, [FinSet::max(&a)])?;
            let phi = load_property(formula, universe)?;
            let result = match order {
                Some(text) => {
                    let enumeration = parse_enumeration(text, &a)?;
                    fcp::greedy_maximal_ordered(&enumeration, &phi)
                }
                None => fcp::greedy_maximal(&a, &phi),
            };
            println!("{result}");
        }
        Command::Sigma1 { set, rho, cap } => {
            if *cap > 63 {
                return Err(Error::InvalidInput(
                    "prefix search cap above 63 exceeds the index width".into(),
                ));
            }
            let a = parse_set_literal(set)?;
            let rho = load_prefix_predicate(rho)?;
            let out = sigma1_maximal(&a, &rho, *cap)?;
            println!("{}", out.result);
            println!("c_phi = {}", out.c_phi);
        }
        Command::Ce { op, formula, within, start } => {
            let within = parse_set_literal(within)?;
            let start = parse_set_literal(start)?;
            let text = read(op)?;
            let probe = closure::parse_operator(&text, None)?;
            let universe = resolve_universe(
                cli.universe,
                [Some(probe.universe().size() - 1), FinSet::max(&within), FinSet::max(&start)],
            )?;
            let operator = closure::parse_operator(&text, Some(universe))?;
            let phi = load_optional_property(formula.as_deref(), universe)?;
            println!("{}", ce_maximal(&within, &start, &phi, &operator)?);
        }
        Command::Nce { op, formula, within, start } => {
            let within = parse_set_literal(within)?;
            let start = parse_set_literal(start)?;
            let text = read(op)?;
            let probe = ndclosure::parse_operator(&text, None)?;
            let universe = resolve_universe(
                cli.universe,
                [Some(probe.universe().size() - 1), FinSet::max(&within), FinSet::max(&start)],
            )?;
            let operator = ndclosure::parse_operator(&text, Some(universe))?;
            let phi = load_optional_property(formula.as_deref(), universe)?;
            println!("{}", nce_maximal(&within, &start, &phi, &operator, cli.budget)?);
        }
        Command::Close { op, set } => {
            let set = parse_set_literal(set)?;
            let text = read(op)?;
            let probe = closure::parse_operator(&text, None)?;
            let universe = resolve_universe(
                cli.universe,
                [Some(probe.universe().size() - 1), FinSet::max(&set)],
            )?;
            let operator = closure::parse_operator(&text, Some(universe))?;
            operator.universe().check(&set)?;
            println!("{}", operator.cl(&set));
        }
        Command::Nclose { op, within } => {
            let within = parse_set_literal(within)?;
            let text = read(op)?;
            let probe = ndclosure::parse_operator(&text, None)?;
            let universe = resolve_universe(
                cli.universe,
                [Some(probe.universe().size() - 1), FinSet::max(&within)],
            )?;
            let operator = ndclosure::parse_operator(&text, Some(universe))?;
            for s in operator.nclosed_family(&within)? {
                println!("{s}");
            }
        }
        Command::Ideal { poset, semilattice, start } => {
            let start = parse_set_literal(start)?;
            match (poset, semilattice) {
                (Some(path), None) => {
                    let p = parse_poset(&read(path)?)?;
                    println!("{}", extend_to_maximal_ideal_poset(&p, &start)?);
                }
                (None, Some(path)) => {
                    let l = parse_semilattice(&read(path)?)?;
                    println!("{}", extend_to_maximal_ideal_semilattice(&l, &start)?);
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "exactly one of --poset or --semilattice is required".into(),
                    ))
                }
            }
        }
        Command::Eval { formula, set } => {
            let set = parse_set_literal(set)?;
            let (phi, params) = parse_document(&read(formula)?)?;
            if let Some(v) = phi.free_number_vars().into_iter().next() {
                return Err(Error::UnboundVariable(v));
            }
            let n = finset::index_of(&set)?;
            println!("{}", formula::eval_hat(&phi, n, &Env::new(), &params)?);
        }
        Command::GadgetRangeFcp { fun } => {
            let f = parse_fun(fun)?;
            let universe =
                resolve_universe(cli.universe, [f.iter().map(|&(_, v)| v).max()])?;
            for (i, b) in range_gadget_fcp(&f, universe)?.iter().enumerate() {
                println!("B_{i} = {b}");
            }
        }
        Command::GadgetRangeOp { fun } => {
            let f = parse_fun(fun)?;
            let size = cli.universe.ok_or_else(|| {
                Error::InvalidInput("--universe is required for the operator gadget".into())
            })?;
            let operator = range_gadget_operator(&f, Universe::new(size)?)?;
            for r in operator.rules() {
                println!("{} -> {}", r.premise, r.conclusion);
            }
        }
        Command::Determinize { op, strategy } => {
            let universe = cli.universe.map(Universe::new).transpose()?;
            let n = ndclosure::parse_operator(&read(op)?, universe)?;
            let strategy = match strategy {
                Strategy::Least => ChoiceStrategy::Least,
                Strategy::Greatest => ChoiceStrategy::Greatest,
            };
            for r in n.determinize(strategy).rules() {
                println!("{} -> {}", r.premise, r.conclusion);
            }
        }
        Command::Verify(args) => return run_verify(cli, args),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let witness = parse_set_literal(&args.witness)?;
    let start = match &args.start {
        Some(s) => parse_set_literal(s)?,
        None => FinSet::empty(),
    };
    let mut checks: Vec<(&str, bool)> = Vec::new();

    if let Some(path) = &args.semilattice {
        let l = parse_semilattice(&read(path)?)?;
        checks.push(("ideal", l.is_ideal(&witness)));
        checks.push(("proper", !witness.contains(l.top())));
        checks.push(("contains-start", start.is_subset_of(&witness)));
        checks.push(("maximal", oracle::is_maximal_proper_ideal(&l, &witness)?));
    } else if let Some(path) = &args.poset {
        let p = parse_poset(&read(path)?)?;
        checks.push(("ideal", p.is_ideal(&witness)));
        checks.push(("contains-start", start.is_subset_of(&witness)));
        checks.push(("maximal", oracle::is_maximal_poset_ideal(&p, &witness)?));
    } else if let Some(path) = &args.op {
        let text = read(path)?;
        verify_extension(cli, args, &text, &witness, &start, &mut checks)?;
    } else {
        let set = args.set.as_ref().ok_or_else(|| {
            Error::InvalidInput("verify needs --set, --op, --poset, or --semilattice".into())
        })?;
        let a = parse_set_literal(set)?;
        let universe = resolve_universe(cli.universe, [FinSet::max(&a), FinSet::max(&witness)])?;
        let phi = load_optional_property(args.formula.as_deref(), universe)?;
        checks.push(("within-base", witness.is_subset_of(&a)));
        checks.push(("property", phi.holds(&witness)));
        let maximal = if a.len() <= DEFAULT_ENUMERATION_CAP {
            oracle::is_maximal_subset(&a, &witness, &phi)?
        } else {
            oracle::is_maximal_by_extension(&a, &witness, &phi)
        };
        checks.push(("maximal", maximal));
    }

    let mut ok = true;
    for (name, pass) in &checks {
        println!("{} {name}", if *pass { "PASS" } else { "FAIL" });
        ok &= pass;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn verify_extension(
    cli: &Cli,
    args: &VerifyArgs,
    text: &str,
    witness: &FinSet,
    start: &FinSet,
    checks: &mut Vec<(&'static str, bool)>,
) -> Result<()> {
    let within_literal = args.within.as_ref().map(|s| parse_set_literal(s)).transpose()?;
    let mentioned = [
        within_literal.as_ref().and_then(FinSet::max),
        FinSet::max(&witness),
        FinSet::max(&start),
    ];

    if let Ok(probe) = closure::parse_operator(text, None) {
        let universe = resolve_universe(
            cli.universe,
            mentioned.into_iter().chain([Some(probe.universe().size() - 1)]),
        )?;
        let operator = closure::parse_operator(text, Some(universe))?;
        let within = within_literal.unwrap_or_else(|| universe.ground_set());
        let phi = load_optional_property(args.formula.as_deref(), universe)?;
        checks.push(("contains-start", start.is_subset_of(witness)));
        checks.push(("within-ambient", witness.is_subset_of(&within)));
        checks.push(("closed", operator.is_closed(witness)));
        checks.push(("property", phi.holds(witness)));
        let maximal = if within.len() <= DEFAULT_ENUMERATION_CAP {
            oracle::is_maximal_closed_extension(&within, start, witness, &phi, &operator)?
        } else {
            // Sound and complete for a certified downward-closed property:
            // any strictly larger closed qualifying set contains the closure
            // of some one-element extension.
            operator.is_closed(witness)
                && phi.holds(witness)
                && within.iter().all(|i| {
                    if witness.contains(i) {
                        return true;
                    }
                    let c = operator.cl(&witness.inserted(i));
                    !c.is_subset_of(&within) || !phi.holds(&c)
                })
        };
        checks.push(("maximal", maximal));
    } else {
        let probe = ndclosure::parse_operator(text, None)?;
        let universe = resolve_universe(
            cli.universe,
            mentioned.into_iter().chain([Some(probe.universe().size() - 1)]),
        )?;
        let operator = ndclosure::parse_operator(text, Some(universe))?;
        let within = within_literal.unwrap_or_else(|| universe.ground_set());
        let phi = load_optional_property(args.formula.as_deref(), universe)?;
        checks.push(("contains-start", start.is_subset_of(witness)));
        checks.push(("within-ambient", witness.is_subset_of(&within)));
        checks.push(("closed", operator.is_nclosed(witness)));
        checks.push(("property", phi.holds(witness)));
        let maximal = if within.len() <= DEFAULT_ENUMERATION_CAP {
            oracle::is_maximal_nclosed_extension(&within, start, witness, &phi, &operator)?
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            oracle::sampled_maximal_nclosed(&within, witness, &phi, &operator, &mut rng, 1000)
        };
        checks.push(("maximal", maximal));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn resolve_universe(
    flag: Option<u32>,
    maxes: impl IntoIterator<Item = Option<u32>>,
) -> Result<Universe> {
    let needed = maxes.into_iter().flatten().max().map_or(1, |m| m + 1);
    Universe::new(flag.unwrap_or(needed))
}

fn load_property(path: &Path, universe: Universe) -> Result<Property> {
    let (phi, params) = parse_document(&read(path)?)?;
    Property::validated_formula(phi, params, universe)
}

fn load_optional_property(path: Option<&Path>, universe: Universe) -> Result<Property> {
    match path {
        Some(p) => load_property(p, universe),
        None => Ok(Property::always(universe)),
    }
}

fn load_prefix_predicate(path: &Path) -> Result<PrefixPredicate> {
    let (phi, params) = parse_document(&read(path)?)?;
    for v in phi.free_number_vars() {
        if v != "m" {
            return Err(Error::UnboundVariable(v));
        }
    }
    Ok(PrefixPredicate::new(move |prefix: &[bool]| {
        let set: FinSet = prefix
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(i, _)| i as u32)
            .collect();
        let n = finset::index_of(&set).expect("prefix length is capped below the index width");
        let mut env = Env::new();
        env.bind("m", prefix.len() as u64);
        formula::eval_hat(&phi, n, &env, &params)
            .expect("document validation leaves no evaluation errors")
    }))
}

fn parse_enumeration(text: &str, base: &FinSet) -> Result<Vec<u32>> {
    let order: Vec<u32> = text
        .split(',')
        .map(|item| {
            item.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("bad element `{}` in --order", item.trim()))
            })
        })
        .collect::<Result<_>>()?;
    if order.len() != base.len() || FinSet::from_elements(order.iter().copied()) != *base {
        return Err(Error::InvalidInput(
            "--order must be a permutation of the base set".into(),
        ));
    }
    Ok(order)
}

fn parse_fun(text: &str) -> Result<Vec<(u32, u32)>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|pair| {
            let (n, i) = pair.split_once(':').ok_or_else(|| {
                Error::InvalidInput(format!("expected `arg:value`, got `{}`", pair.trim()))
            })?;
            let n = n.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("bad argument `{}` in --fun", n.trim()))
            })?;
            let i = i.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("bad value `{}` in --fun", i.trim()))
            })?;
            Ok((n, i))
        })
        .collect()
}
