//! Seeded random instances and the harness comparing every solver against the oracle.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bribery::{BriberyQuery, Encoding, Outcome, Variant};
use crate::election::{ApprovalVector, Ballot, Election, PreferenceOrder, Rule, ScoringProtocol, VoterBlock};
use crate::error::{Error, Result};
use crate::oracle::{oracle_bribery, verify_witness, OracleBudget};
use crate::reductions::{
    partition_to_approval_flip_weighted, partition_to_negative_weighted, partition_to_weighted_dollar_plurality,
    x3c_to_approval, PartitionInstance, X3CInstance,
};
use crate::solver::Algorithm;

/// Size limits of generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceConfig {
    pub max_candidates: usize,
    pub max_voters: usize,
    /// Largest weight or price.
    pub max_value: i64,
    pub max_budget: i64,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self { max_candidates: 3, max_voters: 6, max_value: 4, max_budget: 6 }
    }
}

fn random_order(rng: &mut impl Rng, m: usize) -> PreferenceOrder {
    let mut r: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        r.swap(i, rng.random_range(0..=i));
    }
    PreferenceOrder::new(r).expect("shuffled permutation")
}

fn random_rule(rng: &mut impl Rng, m: usize) -> Rule<i64> {
    match rng.random_range(0..8) {
        0 => Rule::Plurality,
        1 => Rule::Approval,
        2 => Rule::Veto,
        3 => Rule::KApproval(rng.random_range(0..=m)),
        4 => {
            let mut alpha: Vec<i64> = (0..m).map(|_| rng.random_range(0..=3)).collect();
            alpha.sort_by(|a, b| b.cmp(a));
            Rule::Scoring(ScoringProtocol::new(alpha).expect("nonincreasing"))
        }
        5 => Rule::Dodgson,
        6 => Rule::Young,
        _ => Rule::Kemeny,
    }
}

/// A random query within `cfg`; prices, weights, and flip prices are drawn even when the
/// variant ignores them.
pub fn random_query(rng: &mut impl Rng, cfg: &InstanceConfig) -> BriberyQuery<i64> {
    let top = cfg.max_candidates.max(1);
    let m = if top == 1 || rng.random_bool(0.1) { 1 } else { rng.random_range(2..=top) };
    let rule = random_rule(rng, m);
    let approval = rule == Rule::Approval;
    let variant = Variant {
        priced: rng.random_bool(0.5),
        weighted: rng.random_bool(0.5),
        negative: rule == Rule::Plurality && rng.random_bool(0.25),
        approval_flip: approval && rng.random_bool(0.5),
        unique: rng.random_bool(0.5),
    };
    let mut left = rng.random_range(0..=cfg.max_voters);
    let mut voters = Vec::new();
    while left > 0 {
        let mult = if rng.random_bool(0.7) { 1 } else { rng.random_range(1..=left) };
        left -= mult;
        let ballot: Ballot = if approval {
            ApprovalVector::new((0..m).map(|_| rng.random_bool(0.5)).collect()).into()
        } else {
            random_order(rng, m).into()
        };
        let mut v = VoterBlock::new(ballot)
            .with_multiplicity(mult as i64)
            .with_weight(rng.random_range(1..=cfg.max_value))
            .with_price(rng.random_range(0..=cfg.max_value));
        if approval && rng.random_bool(0.5) {
            v = v.with_flip_prices((0..m).map(|_| rng.random_range(0..=cfg.max_value)).collect());
        }
        voters.push(v);
    }
    let e = Election::with_kind(crate::election::default_names(m), rule.ballot_kind(), voters).expect("valid election");
    let target = rng.random_range(0..m);
    let budget = rng.random_range(0..=cfg.max_budget);
    let encoding = Encoding { prices_unary: rng.random_bool(0.5), weights_unary: rng.random_bool(0.5) };
    BriberyQuery::new(e, rule, target, budget, variant).expect("valid query").with_encoding(encoding)
}

/// A small instance produced by one of the hardness reductions.
pub fn reduction_query(rng: &mut impl Rng) -> BriberyQuery<i64> {
    let n = rng.random_range(1..=4);
    let p = PartitionInstance::new((0..n).map(|_| rng.random_range(0..=3)).collect());
    match rng.random_range(0..5) {
        0 => partition_to_weighted_dollar_plurality(&p, false),
        1 => partition_to_weighted_dollar_plurality(&p, true),
        2 => partition_to_negative_weighted(&p),
        3 => partition_to_approval_flip_weighted(&p),
        _ => {
            let ground = 3 * rng.random_range(1..=2);
            let sets = (0..rng.random_range(1..=3))
                .map(|_| {
                    let o = random_order(rng, ground);
                    [o.ranking()[0], o.ranking()[1], o.ranking()[2]]
                })
                .collect();
            x3c_to_approval(&X3CInstance { ground, sets })
        }
    }
}

/// Instance `index` of the stream for `seed`; every eighth one comes from a reduction.
pub fn instance(seed: u64, index: u64, cfg: &InstanceConfig) -> BriberyQuery<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    if index % 8 == 7 {
        reduction_query(&mut rng)
    } else {
        random_query(&mut rng, cfg)
    }
}

/// A procedure the harness can compare against the oracle.
pub trait Checker: Sync {
    fn name(&self) -> String;
    fn applies(&self, q: &BriberyQuery<i64>) -> bool;
    fn run(&self, q: &BriberyQuery<i64>) -> Result<Outcome<i64>>;
}

impl Checker for Algorithm {
    fn name(&self) -> String {
        Algorithm::name(*self).to_string()
    }

    fn applies(&self, q: &BriberyQuery<i64>) -> bool {
        Algorithm::applies(*self, q)
    }

    fn run(&self, q: &BriberyQuery<i64>) -> Result<Outcome<i64>> {
        Algorithm::run(*self, q, &OracleBudget::default())
    }
}

/// Every procedure except the oracle itself.
pub fn default_checkers() -> Vec<Algorithm> {
    Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::Oracle).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub query: BriberyQuery<i64>,
    pub solver: String,
    pub expected: bool,
    /// The solver's verdict, or what went wrong.
    pub got: std::result::Result<bool, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub instances: usize,
    pub comparisons: usize,
    /// Queries the oracle could not settle within its caps.
    pub skipped: usize,
    /// Comparisons per solver name.
    pub per_solver: BTreeMap<String, usize>,
    pub mismatches: Vec<Mismatch>,
}

impl CheckSummary {
    fn merge(mut self, other: CheckSummary) -> CheckSummary {
        self.instances += other.instances;
        self.comparisons += other.comparisons;
        self.skipped += other.skipped;
        for (k, v) in other.per_solver {
            *self.per_solver.entry(k).or_default() += v;
        }
        self.mismatches.extend(other.mismatches);
        self
    }
}

/// Compares every applicable checker with the oracle on `q`, in the query's winner mode.
/// Feasible answers must also carry a witness the oracle accepts.
pub fn check_query(q: &BriberyQuery<i64>, checkers: &[&dyn Checker], caps: &OracleBudget) -> CheckSummary {
    let mut s = CheckSummary { instances: 1, ..CheckSummary::default() };
    let expected = match oracle_bribery(q, caps) {
        Ok(out) => out.is_feasible(),
        Err(_) => {
            s.skipped = 1;
            return s;
        }
    };
    for c in checkers.iter().filter(|c| c.applies(q)) {
        let got = match c.run(q) {
            Err(Error::TooLarge(_)) => continue,
            Err(e) => Err(e.to_string()),
            Ok(out) => match out.witness() {
                Some(w) => match verify_witness(q, w) {
                    Ok(true) => Ok(true),
                    Ok(false) => Err("witness does not verify".to_string()),
                    Err(e) => Err(format!("malformed witness: {e}")),
                },
                None => Ok(false),
            },
        };
        s.comparisons += 1;
        *s.per_solver.entry(c.name()).or_default() += 1;
        if got != Ok(expected) {
            s.mismatches.push(Mismatch { query: q.clone(), solver: c.name(), expected, got });
        }
    }
    s
}

/// Checks `instances` seeded queries in both winner modes, in parallel.
pub fn run_check(seed: u64, instances: usize, cfg: &InstanceConfig, checkers: &[&dyn Checker]) -> CheckSummary {
    let caps = OracleBudget::default();
    (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let q = instance(seed, i, cfg);
            let plain = check_query(&q.clone().with_unique(false), checkers, &caps);
            let unique = check_query(&q.with_unique(true), checkers, &caps);
            let mut both = plain.merge(unique);
            both.instances = 1;
            both
        })
        .reduce(CheckSummary::default, CheckSummary::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct AlwaysNo;

    impl Checker for AlwaysNo {
        fn name(&self) -> String {
            "always-no".into()
        }

        fn applies(&self, _: &BriberyQuery<i64>) -> bool {
            true
        }

        fn run(&self, _: &BriberyQuery<i64>) -> Result<Outcome<i64>> {
            Ok(Outcome::Infeasible)
        }
    }

    #[test]
    fn instances_are_reproducible() {
        let cfg = InstanceConfig::default();
        for i in 0..20 {
            assert_eq!(instance(7, i, &cfg), instance(7, i, &cfg));
        }
        assert_ne!((0..20).map(|i| instance(7, i, &cfg)).collect::<Vec<_>>(), (0..20).map(|i| instance(8, i, &cfg)).collect::<Vec<_>>());
    }

    #[test]
    fn zero_instances() {
        let s = run_check(1, 0, &InstanceConfig::default(), &[]);
        assert_eq!(s, CheckSummary::default());
    }

    #[test]
    fn a_broken_solver_is_caught() {
        let s = run_check(3, 30, &InstanceConfig::default(), &[&AlwaysNo]);
        assert!(!s.mismatches.is_empty());
    }
}
