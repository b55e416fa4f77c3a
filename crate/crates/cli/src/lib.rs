//! The `bribery` command: solve a query from a file, generate reduced instances, and run the
//! oracle cross-check.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bribery::crosscheck::{default_checkers, run_check, CheckSummary, Checker, InstanceConfig};
use bribery::format::{parse_file, serialize_file, serialize_witness, ElectionFile};
use bribery::oracle::{verify_witness, ManipulationQuery, OracleBudget};
use bribery::reductions::*;
use bribery::solver::{solve, SolverId};
use bribery::{Ballot, BigQuery, BigWitness, Error, PreferenceOrder, Result, Rule, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bribery", version, about = "Bribery problems in elections: solve, generate, cross-check")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the target can be made a winner within the budget.
    Bribe(BribeArgs),
    /// Write a bribery instance reduced from a source problem.
    Gen(GenArgs),
    /// Compare every solver with the oracle on seeded instances.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct BribeArgs {
    #[arg(long)]
    pub file: PathBuf,
    /// Candidate name; overrides the file's `target:` line.
    #[arg(long)]
    pub target: Option<String>,
    /// Overrides the file's `budget:` line.
    #[arg(long)]
    pub budget: Option<BigInt>,
    #[arg(long)]
    pub priced: bool,
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub negative: bool,
    #[arg(long)]
    pub flip: bool,
    #[arg(long)]
    pub unique: bool,
    #[arg(long, default_value = "auto")]
    pub solver: SolverId,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub source: Source,
    /// Instance file; stdout when absent. The mapped witness goes next to it as `<out>.witness`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Source {
    /// Partition over the given values.
    Partition {
        values: Vec<BigInt>,
        #[arg(long, value_enum)]
        reduction: PartitionReduction,
        /// Indices (from 0) of one half.
        #[arg(long, value_delimiter = ',')]
        certificate: Option<Vec<usize>>,
    },
    /// Partition, first made balanced by the cardinality-preserving transform.
    PartitionPrime {
        values: Vec<BigInt>,
        #[arg(long, value_enum)]
        reduction: PartitionReduction,
        /// Indices (from 0) of one half of the original values.
        #[arg(long, value_delimiter = ',')]
        certificate: Option<Vec<usize>>,
    },
    /// Exact cover by 3-sets over elements 1..=ground.
    X3c {
        #[arg(long)]
        ground: usize,
        /// Three comma-separated elements; repeat per set.
        #[arg(long = "set", value_delimiter = ',', num_args = 1)]
        sets: Vec<usize>,
        #[arg(long, value_enum, default_value = "approval")]
        reduction: X3cReduction,
        /// Indices (from 0) of the covering sets.
        #[arg(long, value_delimiter = ',')]
        certificate: Option<Vec<usize>>,
    },
    /// Manipulation of the election in `file` by extra voters of the given weights.
    EmbedManip {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        manipulators: Vec<BigInt>,
        #[arg(long)]
        unique: bool,
        #[arg(long, value_enum)]
        reduction: ManipReduction,
        /// One manipulator ballot per flag, as `a>b>p`.
        #[arg(long = "ballot")]
        ballots: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartitionReduction {
    /// Weighted priced plurality, target must tie.
    PluralityWd,
    /// Weighted priced plurality, target must win alone.
    PluralityWdUnique,
    /// Weighted negative plurality.
    Negative,
    /// Weighted priced approval with per-entry flip prices.
    ApprovalFlip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum X3cReduction {
    Approval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ManipReduction {
    /// Manipulators become free voters, budget zero.
    Dollar,
    /// Heavy manipulators become bribable voters ranking the target last.
    Prime,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 3)]
    pub max_candidates: usize,
    #[arg(long, default_value_t = 6)]
    pub max_voters: usize,
    /// Directory for replayable mismatch files.
    #[arg(long, default_value = "mismatches")]
    pub dump: PathBuf,
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
        }
    };
    let outcome = match cli.command {
        Command::Bribe(a) => bribe(&a).map(|(report, code)| {
            print!("{report}");
            code
        }),
        Command::Gen(a) => gen(&a),
        Command::Check(a) => check(&a, &default_checkers().iter().map(|c| c as &dyn Checker).collect::<Vec<_>>()).map(|(s, code)| {
            print!("{s}");
            code
        }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn candidate(f: &ElectionFile<BigInt>, name: &str) -> Result<usize> {
    f.election.index_of(name).ok_or_else(|| Error::Input(format!("unknown candidate {name:?}")))
}

/// The query a file and flags describe; flags add to the file's variant.
pub fn bribe_query(a: &BribeArgs) -> Result<BigQuery> {
    let mut f = parse_file::<BigInt>(&read(&a.file)?)?;
    if let Some(name) = &a.target {
        f.target = Some(candidate(&f, name)?);
    }
    if let Some(b) = &a.budget {
        f.budget = Some(b.clone());
    }
    f.variant.priced |= a.priced;
    f.variant.weighted |= a.weighted;
    f.variant.negative |= a.negative;
    f.variant.approval_flip |= a.flip;
    f.variant.unique |= a.unique;
    f.query()
}

fn variant_text(v: &Variant) -> String {
    let flags: Vec<&str> = [
        (v.priced, "priced"),
        (v.weighted, "weighted"),
        (v.negative, "negative"),
        (v.approval_flip, "flip"),
        (v.unique, "unique"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    if flags.is_empty() {
        "plain".into()
    } else {
        flags.join(",")
    }
}

/// `key: value` lines: query, feasible, witness, cost, solver, time_ms. Witness and cost are `-`
/// when infeasible.
pub fn bribe(a: &BribeArgs) -> Result<(String, i32)> {
    let q = bribe_query(a)?;
    let start = Instant::now();
    let (algorithm, outcome) = solve(&q, a.solver, &OracleBudget::default())?;
    let elapsed = start.elapsed();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "query: rule={} target={} budget={} variant={} candidates={} voters={}",
        q.rule,
        q.election.name(q.target),
        q.budget,
        variant_text(&q.variant),
        q.m(),
        q.election.total_voters()
    );
    let _ = writeln!(out, "feasible: {}", outcome.is_feasible());
    match outcome.witness() {
        Some(w) => {
            let text = serialize_witness(&q.election, w);
            let lines: Vec<&str> = text.lines().map(|l| l.trim_start_matches("bribe: ")).collect();
            let _ = writeln!(out, "witness: {}", if lines.is_empty() { "empty".to_string() } else { lines.join("; ") });
            let _ = writeln!(out, "cost: {}", w.cost(&q)?);
        }
        None => {
            let _ = writeln!(out, "witness: -");
            let _ = writeln!(out, "cost: -");
        }
    }
    let _ = writeln!(out, "solver: {}", algorithm.name());
    let _ = writeln!(out, "time_ms: {:.3}", elapsed.as_secs_f64() * 1e3);
    Ok((out, if outcome.is_feasible() { EXIT_YES } else { EXIT_NO }))
}

/// The reduced query, its mapped witness when a certificate was given, and a warning when the
/// source was illegal.
pub struct Generated {
    pub query: BigQuery,
    pub witness: Option<BigWitness>,
    pub warning: Option<String>,
}

fn reduce_partition(p: &PartitionInstance<BigInt>, r: PartitionReduction) -> BigQuery {
    match r {
        PartitionReduction::PluralityWd => partition_to_weighted_dollar_plurality(p, false),
        PartitionReduction::PluralityWdUnique => partition_to_weighted_dollar_plurality(p, true),
        PartitionReduction::Negative => partition_to_negative_weighted(p),
        PartitionReduction::ApprovalFlip => partition_to_approval_flip_weighted(p),
    }
}

fn check_half(p: &PartitionInstance<BigInt>, half: &[usize]) -> Result<()> {
    if half.iter().any(|&i| i >= p.values.len()) {
        return Err(Error::Unsupported("certificate index out of range".into()));
    }
    let sum: BigInt = half.iter().map(|&i| p.values[i].clone()).sum();
    if sum != p.half() {
        return Err(Error::Unsupported(format!("certificate sums to {sum}, not {}", p.half())));
    }
    Ok(())
}

fn parse_ballot(names: &[String], text: &str) -> Result<Ballot> {
    let ranking = text
        .split('>')
        .map(|n| names.iter().position(|x| x == n).ok_or_else(|| Error::Input(format!("unknown candidate {n:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if ranking.len() != names.len() {
        return Err(Error::InvalidOrder(format!("{text:?} does not rank every candidate")));
    }
    Ok(PreferenceOrder::new(ranking)?.into())
}

pub fn generate(source: &Source) -> Result<Generated> {
    let illegal = |what: &str| Some(format!("illegal {what} instance, emitting the fixed no-instance"));
    match source {
        Source::Partition { values, reduction, certificate } => {
            let p = PartitionInstance::new(values.clone());
            let query = reduce_partition(&p, *reduction);
            if !p.is_legal() {
                return Ok(Generated { query, witness: None, warning: illegal("partition") });
            }
            let witness = match certificate {
                Some(half) => {
                    check_half(&p, half)?;
                    Some(partition_certificate(&query, half))
                }
                None => None,
            };
            Ok(Generated { query, witness, warning: None })
        }
        Source::PartitionPrime { values, reduction, certificate } => {
            let p = PartitionInstance::new(values.clone());
            let prime = partition_prime_transform(&p);
            let query = reduce_partition(&prime, *reduction);
            if !p.is_legal() {
                return Ok(Generated { query, witness: None, warning: illegal("partition") });
            }
            let witness = match certificate {
                Some(half) => {
                    check_half(&p, half)?;
                    Some(partition_certificate(&query, &partition_prime_certificate(p.values.len(), half)))
                }
                None => None,
            };
            Ok(Generated { query, witness, warning: None })
        }
        Source::X3c { ground, sets, reduction: X3cReduction::Approval, certificate } => {
            let triples: Vec<[usize; 3]> = sets.chunks(3).map(|c| [c[0], c.get(1).copied().unwrap_or(0), c.get(2).copied().unwrap_or(0)]).collect();
            let well_formed = sets.len() % 3 == 0 && sets.iter().all(|&x| x >= 1);
            let x = X3CInstance { ground: *ground, sets: triples.iter().map(|s| s.map(|e| e.wrapping_sub(1))).collect() };
            if !well_formed || !x.is_legal() {
                let query = fixed_no_instance(Rule::Approval, Variant::default());
                return Ok(Generated { query, witness: None, warning: illegal("exact cover") });
            }
            let query = x3c_to_approval(&x);
            let witness = match certificate {
                Some(cover) => {
                    let mut seen = vec![false; x.ground];
                    for &i in cover {
                        for &e in x.sets.get(i).ok_or_else(|| Error::Unsupported(format!("no set {i}")))? {
                            if std::mem::replace(&mut seen[e], true) {
                                return Err(Error::Unsupported(format!("element {} covered twice", e + 1)));
                            }
                        }
                    }
                    if seen.contains(&false) {
                        return Err(Error::Unsupported("certificate does not cover every element".into()));
                    }
                    Some(x3c_certificate(&query, cover))
                }
                None => None,
            };
            Ok(Generated { query, witness, warning: None })
        }
        Source::EmbedManip { file, target, manipulators, unique, reduction, ballots } => {
            let f = parse_file::<BigInt>(&read(file)?)?;
            let rule = f.rule.clone().ok_or_else(|| Error::Input("no rule line".into()))?;
            let target = match target {
                Some(name) => candidate(&f, name)?,
                None => f.target.ok_or_else(|| Error::Input("no target".into()))?,
            };
            let mq = ManipulationQuery { election: f.election.clone(), rule, manipulators: manipulators.clone(), target, unique: *unique };
            let query = match reduction {
                ManipReduction::Dollar => manipulation_to_dollar_bribery(&mq)?,
                ManipReduction::Prime => manipulation_prime_to_bribery(&mq),
            };
            let heaviest = mq.election.voters().iter().map(|v| v.weight.clone()).max().unwrap_or_default();
            let restricted = *reduction == ManipReduction::Prime
                && (mq.rule.points(mq.election.m()).ok().flatten().is_none()
                    || mq.manipulators.iter().any(|w| *w < BigInt::from(2) * &heaviest));
            if restricted {
                return Ok(Generated { query, witness: None, warning: illegal("restricted manipulation") });
            }
            let witness = if ballots.is_empty() {
                None
            } else {
                if ballots.len() != manipulators.len() {
                    return Err(Error::Unsupported(format!("{} ballots for {} manipulators", ballots.len(), manipulators.len())));
                }
                let parsed = ballots.iter().map(|b| parse_ballot(f.election.candidates(), b)).collect::<Result<Vec<_>>>()?;
                Some(manipulation_certificate(&mq, &parsed))
            };
            Ok(Generated { query, witness, warning: None })
        }
    }
}

fn gen(a: &GenArgs) -> Result<i32> {
    let g = generate(&a.source)?;
    if let Some(w) = &g.warning {
        eprintln!("warning: {w}");
    }
    let mut text = String::new();
    let expected = match (&g.witness, &g.warning) {
        (_, Some(_)) => Some(false),
        (Some(w), None) => {
            if !verify_witness(&g.query, w)? {
                return Err(Error::MalformedWitness("the certificate does not map to a valid bribery".into()));
            }
            Some(true)
        }
        (None, None) => None,
    };
    if let Some(yes) = expected {
        let _ = writeln!(text, "# expected: {}", if yes { "feasible" } else { "infeasible" });
    }
    text.push_str(&serialize_file(&ElectionFile::from_query(&g.query)));
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            if let Some(w) = &g.witness {
                let mut side = path.clone().into_os_string();
                side.push(".witness");
                write(Path::new(&side), &serialize_witness(&g.query.election, w))?;
            }
        }
        None => {
            print!("{text}");
            if let Some(w) = &g.witness {
                for line in serialize_witness(&g.query.election, w).lines() {
                    println!("# {line}");
                }
            }
        }
    }
    Ok(EXIT_YES)
}

/// Runs the cross-check with `checkers`, writing one replayable file per mismatch under
/// `a.dump`. The summary lists per-solver comparison counts.
pub fn check(a: &CheckArgs, checkers: &[&dyn Checker]) -> Result<(String, i32)> {
    let cfg = InstanceConfig { max_candidates: a.max_candidates, max_voters: a.max_voters, ..InstanceConfig::default() };
    let start = Instant::now();
    let s: CheckSummary = run_check(a.seed, a.instances, &cfg, checkers);
    let mut out = String::new();
    let _ = writeln!(out, "seed: {}", a.seed);
    let _ = writeln!(out, "instances: {}", s.instances);
    let _ = writeln!(out, "comparisons: {}", s.comparisons);
    let _ = writeln!(out, "skipped: {}", s.skipped);
    for (name, n) in &s.per_solver {
        let _ = writeln!(out, "solver {name}: {n}");
    }
    let _ = writeln!(out, "mismatches: {}", s.mismatches.len());
    if !s.mismatches.is_empty() {
        fs::create_dir_all(&a.dump).map_err(|e| Error::Input(format!("{}: {e}", a.dump.display())))?;
        for (i, m) in s.mismatches.iter().enumerate() {
            let got = match &m.got {
                Ok(b) => b.to_string(),
                Err(e) => format!("error ({e})"),
            };
            let text = format!(
                "# solver: {}\n# oracle: {}\n# got: {got}\n{}",
                m.solver,
                if m.expected { "feasible" } else { "infeasible" },
                serialize_file(&ElectionFile::from_query(&m.query))
            );
            let path = a.dump.join(format!("mismatch-{i:04}-{}.txt", m.solver));
            write(&path, &text)?;
            let _ = writeln!(out, "dumped: {}", path.display());
        }
    }
    let _ = writeln!(out, "time_ms: {:.0}", start.elapsed().as_secs_f64() * 1e3);
    Ok((out, if s.mismatches.is_empty() { EXIT_YES } else { EXIT_NO }))
}
