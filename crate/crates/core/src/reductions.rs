//! Instance generators for the hardness reductions and the bribery/manipulation translations.
//!
//! Every generator is total: an input that breaks a syntactic requirement maps to
//! [`fixed_no_instance`].

use crate::bribery::{BribeAction, BriberyQuery, BriberyWitness, Variant};
use crate::election::{ApprovalVector, Ballot, BallotKind, Election, PreferenceOrder, Rule, ScoringProtocol, VoterBlock};
use crate::error::{Error, Result};
use crate::oracle::ManipulationQuery;
use crate::scalar::{int, small, Int};

/// Largest sequence the brute-force partition search accepts.
const SUBSET_SEARCH: usize = 24;

/// A sequence of nonnegative integers to split into two halves of equal sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionInstance<T> {
    pub values: Vec<T>,
}

impl<T: Int> PartitionInstance<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn total(&self) -> T {
        self.values.iter().cloned().sum()
    }

    /// Nonnegative values with an even sum.
    pub fn is_legal(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative()) && self.total().is_even()
    }

    /// Half the total.
    pub fn half(&self) -> T {
        self.total() / int(2)
    }

    /// Every value is at least the total over `2 + n`.
    pub fn is_balanced(&self) -> bool {
        let total = self.total();
        let n = int::<T>(self.values.len() + 2);
        self.values.iter().all(|v| v.clone() * n.clone() >= total)
    }

    /// Indices of one half, by exhaustive subset search.
    pub fn solve(&self) -> Result<Option<Vec<usize>>> {
        let n = self.values.len();
        if n > SUBSET_SEARCH {
            return Err(Error::TooLarge(format!("subset search over {n} values")));
        }
        if !self.is_legal() {
            return Ok(None);
        }
        let half = self.half();
        for mask in 0u32..1 << n {
            let sum: T = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.values[i].clone()).sum();
            if sum == half {
                return Ok(Some((0..n).filter(|i| mask >> i & 1 == 1).collect()));
            }
        }
        Ok(None)
    }
}

/// The balanced sequence `ŝ1, ô1, ŝ2, ô2, ...` that has a partition exactly when `p` has one.
/// Illegal input maps to the fixed unbalanced no-instance `[2, 4]`.
pub fn partition_prime_transform<T: Int>(p: &PartitionInstance<T>) -> PartitionInstance<T> {
    if !p.is_legal() {
        return PartitionInstance::new(vec![int(2), int(4)]);
    }
    let n = p.values.len();
    let three = int::<T>(3);
    let scale: T = num_traits::pow(three.clone(), n);
    let shift = scale.clone() * p.half() + (scale.clone() - T::one()) / int(2);
    let mut out = Vec::with_capacity(2 * n);
    let mut unit = T::one();
    for s in &p.values {
        out.push(unit.clone() + scale.clone() * s.clone() + shift.clone());
        out.push(unit.clone() + shift.clone());
        unit = unit * three.clone();
    }
    PartitionInstance::new(out)
}

/// A half of the transformed sequence built from a half `a` of the source: `ŝi` for `i` in `a`,
/// `ôi` otherwise.
pub fn partition_prime_certificate(n: usize, a: &[usize]) -> Vec<usize> {
    (0..n).map(|i| if a.contains(&i) { 2 * i } else { 2 * i + 1 }).collect()
}

/// Exact cover by 3-sets over elements `0..ground`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct X3CInstance {
    pub ground: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn t(&self) -> usize {
        self.ground / 3
    }

    /// Ground size divisible by three, every set three distinct elements of the ground, at least
    /// `t` sets.
    pub fn is_legal(&self) -> bool {
        self.ground.is_multiple_of(3)
            && self.sets.len() >= self.t()
            && self.sets.iter().all(|s| s.iter().all(|&x| x < self.ground) && s[0] != s[1] && s[1] != s[2] && s[0] != s[2])
    }

    /// Indices of an exact cover, by exhaustive search.
    pub fn solve(&self) -> Option<Vec<usize>> {
        fn go(x: &X3CInstance, from: usize, covered: &mut Vec<bool>, chosen: &mut Vec<usize>) -> bool {
            let Some(first) = covered.iter().position(|&c| !c) else { return true };
            for i in from..x.sets.len() {
                let s = x.sets[i];
                if s.contains(&first) && s.iter().all(|&e| !covered[e]) {
                    s.iter().for_each(|&e| covered[e] = true);
                    chosen.push(i);
                    if go(x, 0, covered, chosen) {
                        return true;
                    }
                    chosen.pop();
                    s.iter().for_each(|&e| covered[e] = false);
                }
            }
            false
        }
        if !self.is_legal() {
            return None;
        }
        let mut chosen = Vec::new();
        go(self, 0, &mut vec![false; self.ground], &mut chosen).then_some(chosen)
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Two candidates, target 0 with no support, one voter for the other, no budget.
pub fn fixed_no_instance<T: Int>(rule: Rule<T>, variant: Variant) -> BriberyQuery<T> {
    let ballot: Ballot = match rule.ballot_kind() {
        BallotKind::Orders => PreferenceOrder::with_top(2, 1).into(),
        BallotKind::Approvals => ApprovalVector::only(2, 1).into(),
    };
    let rule = match rule {
        Rule::Plurality | Rule::Approval | Rule::Veto | Rule::Dodgson | Rule::Young | Rule::Kemeny => rule,
        _ => Rule::Plurality,
    };
    let variant = Variant { negative: variant.negative && rule == Rule::Plurality, approval_flip: variant.approval_flip && rule == Rule::Approval, ..variant };
    let e = Election::new(vec!["p".into(), "c".into()], vec![VoterBlock::new(ballot)]).expect("valid");
    BriberyQuery::new(e, rule, 0, T::zero(), variant).expect("valid")
}

/// Weighted, priced plurality with two candidates; the `c` voters carry price and weight `s_i`
/// and the budget is half the total. With `unique`, a free weight-one voter for `p` is added.
pub fn partition_to_weighted_dollar_plurality<T: Int>(p: &PartitionInstance<T>, unique: bool) -> BriberyQuery<T> {
    let variant = Variant { priced: true, weighted: true, unique, ..Variant::default() };
    if !p.is_legal() {
        return fixed_no_instance(Rule::Plurality, variant);
    }
    // p = 0, c = 1
    let mut voters: Vec<VoterBlock<T>> = p
        .values
        .iter()
        .map(|s| VoterBlock::new(PreferenceOrder::with_top(2, 1)).with_price(s.clone()).with_weight(s.clone()))
        .collect();
    if unique {
        voters.push(VoterBlock::new(PreferenceOrder::with_top(2, 0)).with_price(T::zero()));
    }
    let e = Election::new(vec!["p".into(), "c".into()], voters).expect("valid");
    BriberyQuery::new(e, Rule::Plurality, 0, p.half(), variant).expect("valid")
}

/// Negative weighted plurality over `p > c1 > c2`: one `p` voter of weight half the total, one
/// `c1 > c2 > p` voter of weight `s_i` per value, budget `n + 1`.
pub fn partition_to_negative_weighted<T: Int>(p: &PartitionInstance<T>) -> BriberyQuery<T> {
    let variant = Variant { weighted: true, negative: true, ..Variant::default() };
    if !p.is_legal() {
        return fixed_no_instance(Rule::Plurality, variant);
    }
    let order = |r: [usize; 3]| PreferenceOrder::new(r.to_vec()).expect("permutation");
    let mut voters = vec![VoterBlock::new(order([0, 1, 2])).with_weight(p.half())];
    voters.extend(p.values.iter().map(|s| VoterBlock::new(order([1, 2, 0])).with_weight(s.clone())));
    let e = Election::new(vec!["p".into(), "c1".into(), "c2".into()], voters).expect("valid");
    BriberyQuery::new(e, Rule::Plurality, 0, int(p.values.len() + 1), variant).expect("valid")
}

/// Approval bribery over elements plus `p` (the last candidate): one voter per set, padding
/// voters that level every element, `m - t` voters for `p`, budget `t`.
pub fn x3c_to_approval<T: Int>(x: &X3CInstance) -> BriberyQuery<T> {
    let variant = Variant::default();
    if !x.is_legal() {
        return fixed_no_instance(Rule::Approval, variant);
    }
    let n = x.ground;
    let m = x.sets.len();
    let p = n;
    let approve = |members: &[usize]| ApprovalVector::new((0..=n).map(|c| members.contains(&c)).collect());
    let mut voters: Vec<VoterBlock<T>> = x.sets.iter().map(|s| VoterBlock::new(approve(s))).collect();
    for b in 0..n {
        let l = x.sets.iter().filter(|s| s.contains(&b)).count();
        voters.push(VoterBlock::new(approve(&[b])).with_multiplicity(int(m - l + 1)));
    }
    if m > x.t() {
        voters.push(VoterBlock::new(approve(&[p])).with_multiplicity(int(m - x.t())));
    }
    let mut cands = names("b", n);
    cands.push("p".into());
    let e = Election::new(cands, voters).expect("valid");
    BriberyQuery::new(e, Rule::Approval, p, int(x.t()), variant).expect("valid")
}

/// Approval bribery paid per flipped entry, candidates `p` and `c`: a `p` voter of weight half the
/// total whose flips cost `2S + 1`, and per value a `c` voter of weight `s_i` whose `p` entry costs
/// `s_i` and whose `c` entry costs `2S + 1`. Budget `S`, half the total.
pub fn partition_to_approval_flip_weighted<T: Int>(p: &PartitionInstance<T>) -> BriberyQuery<T> {
    let variant = Variant { priced: true, weighted: true, approval_flip: true, ..Variant::default() };
    if !p.is_legal() {
        return fixed_no_instance(Rule::Approval, variant);
    }
    let s = p.half();
    let dear = s.clone() * int(2) + T::one();
    let mut voters = vec![VoterBlock::new(ApprovalVector::only(2, 0))
        .with_weight(s.clone())
        .with_flip_prices(vec![dear.clone(), dear.clone()])];
    voters.extend(p.values.iter().map(|v| {
        VoterBlock::new(ApprovalVector::only(2, 1)).with_weight(v.clone()).with_flip_prices(vec![v.clone(), dear.clone()])
    }));
    let e = Election::new(vec!["p".into(), "c".into()], voters).expect("valid");
    BriberyQuery::new(e, Rule::Approval, 0, s, variant).expect("valid")
}

/// The bribery a partition half `a` corresponds to in each generated instance.
pub fn partition_certificate<T: Int>(q: &BriberyQuery<T>, a: &[usize]) -> BriberyWitness<T> {
    let mut w = BriberyWitness::empty();
    for &i in a {
        let action = if q.variant.approval_flip {
            BribeAction::Flip(vec![0])
        } else if q.variant.negative {
            BribeAction::Rewrite(PreferenceOrder::new(vec![2, 1, 0]).expect("permutation").into())
        } else {
            BribeAction::Rewrite(PreferenceOrder::with_top(2, 0).into())
        };
        // The negative and flip instances put the target's own voter first.
        let block = if q.variant.negative || q.variant.approval_flip { i + 1 } else { i };
        w.push(block, T::one(), action);
    }
    w
}

/// The bribery an exact cover corresponds to: the chosen set voters approve only the target.
pub fn x3c_certificate<T: Int>(q: &BriberyQuery<T>, cover: &[usize]) -> BriberyWitness<T> {
    let mut w = BriberyWitness::empty();
    for &i in cover {
        w.push(i, T::one(), BribeAction::Rewrite(ApprovalVector::only(q.m(), q.target).into()));
    }
    w
}

/// Priced bribery equivalent to `mq`: voters cost one, manipulators are free voters with a
/// placeholder ballot, and the budget is zero.
pub fn manipulation_to_dollar_bribery<T: Int>(mq: &ManipulationQuery<T>) -> Result<BriberyQuery<T>> {
    if mq.rule.ballot_kind() != BallotKind::Orders {
        return Err(Error::Unsupported("manipulation is embedded over preference orders".into()));
    }
    let m = mq.election.m();
    let mut voters: Vec<VoterBlock<T>> = mq.election.voters().iter().map(|v| v.clone().with_price(T::one())).collect();
    for w in &mq.manipulators {
        voters.push(VoterBlock::new(PreferenceOrder::with_last(m, mq.target)).with_price(T::zero()).with_weight(w.clone()));
    }
    let e = Election::with_kind(mq.election.candidates().to_vec(), BallotKind::Orders, voters)?;
    let variant = Variant { priced: true, weighted: true, unique: mq.unique, ..Variant::default() };
    BriberyQuery::new(e, mq.rule.clone(), mq.target, T::zero(), variant)
}

/// The bribery matching manipulator ballots in the embedded instance.
pub fn manipulation_certificate<T: Int>(mq: &ManipulationQuery<T>, ballots: &[Ballot]) -> BriberyWitness<T> {
    let base = mq.election.voters().len();
    let mut w = BriberyWitness::empty();
    for (i, b) in ballots.iter().enumerate() {
        w.push(base + i, T::one(), BribeAction::Rewrite(b.clone()));
    }
    w
}

/// One manipulation query per set of at most `k` voters: those voters become the manipulators.
/// `q` is feasible exactly when one of them is.
pub fn bribery_to_manipulation_dtt<T: Int>(q: &BriberyQuery<T>, kcap: usize) -> Result<Vec<ManipulationQuery<T>>> {
    if q.variant.priced || q.variant.negative || q.variant.approval_flip {
        return Err(Error::Unsupported("plain or weighted bribery only".into()));
    }
    let k = small(&q.budget, kcap, "budget")?;
    let e = q.normalized()?;
    let units = e.unit_voters(crate::knapsack::UNARY_CAP)?;
    let k = k.min(units.len());
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    fn subsets(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        f(cur);
        if cur.len() == k {
            return;
        }
        for i in from..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    let mut err = None;
    subsets(units.len(), k, 0, &mut chosen, &mut |w| {
        let rest: Vec<VoterBlock<T>> =
            units.iter().enumerate().filter(|(i, _)| !w.contains(i)).map(|(_, (_, v))| v.clone()).collect();
        match e.with_voters(rest) {
            Ok(election) => out.push(ManipulationQuery {
                election,
                rule: q.rule.clone(),
                manipulators: w.iter().map(|&i| units[i].1.weight.clone()).collect(),
                target: q.target,
                unique: q.variant.unique,
            }),
            Err(x) => err = Some(x),
        }
    });
    match err {
        Some(x) => Err(x),
        None => Ok(out),
    }
}

/// Weighted bribery equivalent to a scoring-protocol manipulation whose manipulators each weigh at
/// least twice any other voter: manipulators join as voters ranking the target last and the
/// budget is their number. Other inputs map to [`fixed_no_instance`].
pub fn manipulation_prime_to_bribery<T: Int>(mq: &ManipulationQuery<T>) -> BriberyQuery<T> {
    let variant = Variant { weighted: true, unique: mq.unique, ..Variant::default() };
    let m = mq.election.m();
    let alpha = match mq.rule.points(m) {
        Ok(Some(alpha)) => alpha.normalized(),
        _ => return fixed_no_instance(Rule::Plurality, variant),
    };
    let heaviest = mq.election.voters().iter().map(|v| v.weight.clone()).max().unwrap_or_else(T::zero);
    if mq.manipulators.iter().any(|w| *w < heaviest.clone() * int(2)) {
        return fixed_no_instance(Rule::Plurality, variant);
    }
    let mut voters = mq.election.voters().to_vec();
    for w in &mq.manipulators {
        voters.push(VoterBlock::new(PreferenceOrder::with_last(m, mq.target)).with_weight(w.clone()));
    }
    let e = match Election::with_kind(mq.election.candidates().to_vec(), BallotKind::Orders, voters) {
        Ok(e) => e,
        Err(_) => return fixed_no_instance(Rule::Plurality, variant),
    };
    let rule = Rule::Scoring(ScoringProtocol::new(alpha.alpha().to_vec()).expect("normalized protocol"));
    BriberyQuery::new(e, rule, mq.target, int(mq.manipulators.len()), variant)
        .unwrap_or_else(|_| fixed_no_instance(Rule::Plurality, variant))
}
