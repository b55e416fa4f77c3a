use std::collections::HashMap;

use super::{require, scores_elect, witness_from_units, BribeAction, BriberyQuery, BriberyWitness, Outcome};
use crate::election::{all_orders, Ballot, Election, PreferenceOrder, ScoringProtocol, VoterBlock};
use crate::error::{Error, Result};
use crate::knapsack::UNARY_CAP;
use crate::scalar::{int, small, Int};

/// Candidate cap for the solvers that enumerate all `m!` orders.
pub const MAX_ENUM_CANDIDATES: usize = 3;

/// Enumeration steps the priced solver may take.
const PRICED_WORK: u128 = 50_000_000;

/// States the weight-split DP may hold per order.
const SPLIT_STATES: usize = 2_000_000;

struct Groups<T> {
    orders: Vec<PreferenceOrder>,
    alpha: ScoringProtocol<T>,
    /// Per order, its unit voters as (block, voter).
    members: Vec<Vec<(usize, VoterBlock<T>)>>,
}

fn groups<T: Int>(q: &BriberyQuery<T>, max_m: usize) -> Result<(Election<T>, Groups<T>)> {
    let alpha = q.rule.points(q.m())?.ok_or_else(|| Error::Unsupported("needs a scoring rule".into()))?;
    require(!q.variant.negative && !q.variant.approval_flip, "plain scoring bribery only")?;
    if q.m() > max_m {
        return Err(Error::TooLarge(format!("{} candidates exceed the enumeration cap {max_m}", q.m())));
    }
    let e = q.normalized()?;
    let orders = all_orders(e.m());
    let mut members = vec![Vec::new(); orders.len()];
    for (block, v) in e.unit_voters(UNARY_CAP)? {
        let o = v.ballot.as_order().ok_or(Error::BallotKindMismatch)?;
        let i = orders.iter().position(|x| x == o).expect("every order is listed");
        members[i].push((block, v));
    }
    Ok((e, Groups { orders, alpha, members }))
}

impl<T: Int> Groups<T> {
    /// Points order `j` gives each candidate.
    fn points(&self, j: usize) -> Vec<T> {
        let mut pts = vec![T::zero(); self.orders[j].len()];
        for (rank, &c) in self.orders[j].ranking().iter().enumerate() {
            pts[c] = self.alpha.alpha()[rank].clone();
        }
        pts
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Priced, unweighted scoring bribery for small `m`: try every count of cheapest voters bought
/// per order and every way of handing out the bought ballots.
pub fn solve_scoring_priced<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    solve_scoring_priced_capped(q, MAX_ENUM_CANDIDATES)
}

/// `solve_scoring_priced` with an explicit candidate cap.
pub fn solve_scoring_priced_capped<T: Int>(q: &BriberyQuery<T>, max_m: usize) -> Result<Outcome<T>> {
    require(!q.variant.weighted, "unweighted voters only")?;
    let (e, mut g) = groups(q, max_m)?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    for members in &mut g.members {
        members.sort_by(|a, b| a.1.price.cmp(&b.1.price));
    }
    let n: usize = g.members.iter().map(Vec::len).sum();
    let slots = g.orders.len();
    let shapes: u128 = g.members.iter().map(|v| v.len() as u128 + 1).product();
    let work = shapes.saturating_mul(binom((n + slots - 1) as u128, (slots - 1) as u128));
    if work > PRICED_WORK {
        return Err(Error::TooLarge(format!("{work} bribery shapes")));
    }
    let points: Vec<Vec<T>> = (0..slots).map(|j| g.points(j)).collect();
    let mut base = vec![T::zero(); e.m()];
    for (j, members) in g.members.iter().enumerate() {
        add_scaled(&mut base, &points[j], &int(members.len()));
    }
    let prefix: Vec<Vec<T>> = g
        .members
        .iter()
        .map(|m| {
            let mut acc = vec![T::zero()];
            for (_, v) in m {
                acc.push(acc.last().unwrap().clone() + v.price.clone());
            }
            acc
        })
        .collect();
    let mut bought = vec![0usize; slots];
    loop {
        let cost: T = (0..slots).map(|i| prefix[i][bought[i]].clone()).sum();
        if cost <= q.budget {
            let mut scores = base.clone();
            for i in 0..slots {
                add_scaled(&mut scores, &points[i], &-int::<T>(bought[i]));
            }
            let total: usize = bought.iter().sum();
            if let Some(dealt) = deal(&scores, &points, total, q) {
                let mut units = Vec::new();
                let mut targets = dealt.iter().enumerate().flat_map(|(j, &d)| std::iter::repeat_n(j, d));
                for i in 0..slots {
                    for (block, _) in &g.members[i][..bought[i]] {
                        let j = targets.next().expect("counts agree");
                        units.push((*block, BribeAction::Rewrite(Ballot::Order(g.orders[j].clone()))));
                    }
                }
                return Ok(Outcome::Feasible(witness_from_units(units)));
            }
        }
        if !odometer(&mut bought, |i| g.members[i].len()) {
            return Ok(Outcome::Infeasible);
        }
    }
}

/// Finds how many of `total` fresh ballots go to each order so that the target wins.
fn deal<T: Int>(scores: &[T], points: &[Vec<T>], total: usize, q: &BriberyQuery<T>) -> Option<Vec<usize>> {
    let slots = points.len();
    let mut d = vec![0usize; slots];
    d[slots - 1] = total;
    loop {
        let mut s = scores.to_vec();
        for (j, &n) in d.iter().enumerate() {
            add_scaled(&mut s, &points[j], &int(n));
        }
        if scores_elect(&s, q.target, q.variant.unique) {
            return Some(d);
        }
        if !next_composition(&mut d) {
            return None;
        }
    }
}

/// Steps through compositions of a fixed sum into `d.len()` parts.
fn next_composition(d: &mut [usize]) -> bool {
    let last = d.len() - 1;
    let Some(i) = (0..last).rev().find(|&i| d[i + 1..].iter().sum::<usize>() > 0) else { return false };
    // Move one unit to slot i and gather the tail back into the last slot.
    let tail: usize = d[i + 1..].iter().sum();
    d[i] += 1;
    d[i + 1..].iter_mut().for_each(|x| *x = 0);
    d[last] = tail - 1;
    true
}

/// Advances a mixed-radix counter with digit `i` in `0..=max(i)`; false once it wraps.
fn odometer(digits: &mut [usize], max: impl Fn(usize) -> usize) -> bool {
    for i in 0..digits.len() {
        if digits[i] < max(i) {
            digits[i] += 1;
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn add_scaled<T: Int>(acc: &mut [T], pts: &[T], by: &T) {
    for (a, p) in acc.iter_mut().zip(pts) {
        *a = a.clone() + p.clone() * by.clone();
    }
}

type Split = Vec<u32>;

/// Per order, the cheapest way to reach each score contribution, with the split achieving it.
struct OrderOptions<T> {
    options: HashMap<Vec<T>, (T, Split)>,
    /// Per voter level, state → (cost, destination of that voter).
    levels: Vec<HashMap<Split, (T, usize)>>,
}

/// Weighted scoring bribery with small weights: for every order, a DP over how its voters' weight
/// is split among destination orders, then a DP over the resulting score vectors.
pub fn solve_scoring_unary_weights<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    solve_scoring_unary_weights_capped(q, MAX_ENUM_CANDIDATES)
}

/// `solve_scoring_unary_weights` with an explicit candidate cap.
pub fn solve_scoring_unary_weights_capped<T: Int>(q: &BriberyQuery<T>, max_m: usize) -> Result<Outcome<T>> {
    let (e, g) = groups(q, max_m)?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    let slots = g.orders.len();
    let points: Vec<Vec<T>> = (0..slots).map(|j| g.points(j)).collect();
    let mut per_order = Vec::with_capacity(slots);
    for i in 0..slots {
        per_order.push(split_options(&g.members[i], i, &points, &q.budget)?);
    }
    // Stage s maps a score vector to (cost, previous score vector, contribution of order s).
    type Stage<T> = HashMap<Vec<T>, (T, Vec<T>, Vec<T>)>;
    let zero = vec![T::zero(); e.m()];
    let mut stages: Vec<Stage<T>> = Vec::with_capacity(slots);
    let mut acc: Stage<T> = HashMap::from([(zero.clone(), (T::zero(), zero.clone(), zero))]);
    for opts in &per_order {
        let mut next: Stage<T> = HashMap::new();
        for (s, (c, _, _)) in &acc {
            for (contrib, (c2, _)) in &opts.options {
                let cost = c.clone() + c2.clone();
                if cost > q.budget {
                    continue;
                }
                let key: Vec<T> = s.iter().zip(contrib).map(|(a, b)| a.clone() + b.clone()).collect();
                if next.get(&key).is_none_or(|(old, _, _)| cost < *old) {
                    next.insert(key, (cost, s.clone(), contrib.clone()));
                }
            }
        }
        stages.push(std::mem::replace(&mut acc, next));
    }
    let best = acc
        .iter()
        .filter(|(s, _)| scores_elect(s, q.target, q.variant.unique))
        .min_by(|a, b| (&a.1 .0, a.0).cmp(&(&b.1 .0, b.0)));
    let Some((mut key, _)) = best.map(|(k, v)| (k.clone(), v.clone())) else { return Ok(Outcome::Infeasible) };
    let mut units = Vec::new();
    let mut cur = &acc;
    for i in (0..slots).rev() {
        let (_, prev, contrib) = cur[&key].clone();
        let split = per_order[i].options[&contrib].1.clone();
        for (voter, dest) in trace_split(&per_order[i], &g.members[i], split) {
            if dest != i {
                units.push((g.members[i][voter].0, BribeAction::Rewrite(Ballot::Order(g.orders[dest].clone()))));
            }
        }
        key = prev;
        cur = &stages[i];
    }
    Ok(Outcome::Feasible(witness_from_units(units)))
}

/// The least price of every realizable split of order `i`'s voters over the destination orders,
/// projected onto score contributions.
fn split_options<T: Int>(
    members: &[(usize, VoterBlock<T>)],
    i: usize,
    points: &[Vec<T>],
    budget: &T,
) -> Result<OrderOptions<T>> {
    let slots = points.len();
    let weights: Vec<u32> = members
        .iter()
        .map(|(_, v)| small(&v.weight, UNARY_CAP, "weight").map(|w| w as u32))
        .collect::<Result<_>>()?;
    let mut levels: Vec<HashMap<Split, (T, usize)>> = Vec::with_capacity(members.len() + 1);
    levels.push(HashMap::from([(vec![0; slots], (T::zero(), i))]));
    for (l, (_, v)) in members.iter().enumerate() {
        let mut next: HashMap<Split, (T, usize)> = HashMap::new();
        for (state, (cost, _)) in &levels[l] {
            for j in 0..slots {
                let c = if j == i { cost.clone() } else { cost.clone() + v.price.clone() };
                if &c > budget {
                    continue;
                }
                let mut s = state.clone();
                s[j] += weights[l];
                if next.get(&s).is_none_or(|(old, _)| c < *old) {
                    next.insert(s, (c, j));
                }
            }
        }
        if next.len() > SPLIT_STATES {
            return Err(Error::TooLarge(format!("{} weight splits", next.len())));
        }
        levels.push(next);
    }
    let mut options: HashMap<Vec<T>, (T, Split)> = HashMap::new();
    for (split, (cost, _)) in levels.last().expect("level zero exists") {
        let mut contrib = vec![T::zero(); points[0].len()];
        for (j, &w) in split.iter().enumerate() {
            add_scaled(&mut contrib, &points[j], &int(w as usize));
        }
        let better = options.get(&contrib).is_none_or(|(old, s)| (cost, split) < (old, s));
        if better {
            options.insert(contrib, (cost.clone(), split.clone()));
        }
    }
    Ok(OrderOptions { options, levels })
}

/// Destination of each voter for a final split.
fn trace_split<T: Int>(opts: &OrderOptions<T>, members: &[(usize, VoterBlock<T>)], mut split: Split) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(members.len());
    for l in (0..members.len()).rev() {
        let (_, dest) = opts.levels[l + 1][&split];
        out.push((l, dest));
        split[dest] -= members[l].1.weight.to_u32().expect("weights fit in the split");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::Variant;
    use crate::election::Rule;

    fn ord(r: &[usize]) -> VoterBlock<i64> {
        VoterBlock::new(PreferenceOrder::new(r.to_vec()).unwrap())
    }

    fn borda() -> Rule<i64> {
        Rule::Scoring(ScoringProtocol::borda(3))
    }

    #[test]
    fn compositions_cover_everything() {
        let mut d = vec![0, 0, 3];
        let mut n = 1;
        while next_composition(&mut d) {
            assert_eq!(d.iter().sum::<usize>(), 3);
            n += 1;
        }
        assert_eq!(n, 10);
    }

    #[test]
    fn priced_borda() {
        let priced = Variant { priced: true, ..Variant::default() };
        // a=0, b=1, p=2
        let e = Election::lettered(3, vec![ord(&[0, 1, 2])]).unwrap();
        let q = BriberyQuery::new(e, borda(), 2, 1, priced).unwrap();
        let w = solve_scoring_priced(&q).unwrap();
        assert!(crate::oracle::verify_witness(&q, w.witness().unwrap()).unwrap());
        let e = Election::lettered(3, vec![ord(&[0, 1, 2]).with_multiplicity(2)]).unwrap();
        let q = BriberyQuery::new(e, borda(), 2, 0, priced).unwrap();
        assert_eq!(solve_scoring_priced(&q).unwrap(), Outcome::Infeasible);
    }

    #[test]
    fn equal_points_always_tie() {
        let e = Election::lettered(3, vec![ord(&[0, 1, 2]).with_multiplicity(3)]).unwrap();
        let flat = Rule::Scoring(ScoringProtocol::new(vec![2, 2, 2]).unwrap());
        let q = BriberyQuery::new(e, flat, 2, 0, Variant::default()).unwrap();
        assert!(solve_scoring_priced(&q).unwrap().is_feasible());
        assert!(!solve_scoring_priced(&q.clone().with_unique(true)).unwrap().is_feasible());
    }

    #[test]
    fn unary_weights_two_candidates() {
        let both = Variant { priced: true, weighted: true, ..Variant::default() };
        // c=0, p=1
        let e = Election::lettered(
            2,
            vec![ord(&[0, 1]).with_weight(2).with_price(3), ord(&[0, 1]).with_weight(1).with_price(1)],
        )
        .unwrap();
        let rule = Rule::Scoring(ScoringProtocol::new(vec![1, 0]).unwrap());
        let q = BriberyQuery::new(e.clone(), rule.clone(), 1, 1, both).unwrap();
        assert_eq!(solve_scoring_unary_weights(&q).unwrap(), Outcome::Infeasible);
        let q = BriberyQuery::new(e, rule, 1, 3, both).unwrap();
        let out = solve_scoring_unary_weights(&q).unwrap();
        assert!(crate::oracle::verify_witness(&q, out.witness().unwrap()).unwrap());
    }

    #[test]
    fn already_first_everywhere() {
        let e = Election::lettered(3, vec![ord(&[2, 0, 1]).with_weight(3)]).unwrap();
        let q = BriberyQuery::new(e, borda(), 2, 0, Variant { weighted: true, ..Variant::default() }).unwrap();
        assert_eq!(solve_scoring_unary_weights(&q).unwrap(), Outcome::Feasible(BriberyWitness::empty()));
    }

    #[test]
    fn refuses_four_candidates() {
        let e = Election::lettered(4, vec![ord(&[0, 1, 2, 3])]).unwrap();
        let q = BriberyQuery::new(e, Rule::Scoring(ScoringProtocol::borda(4)), 3, 1, Variant::default()).unwrap();
        assert!(matches!(solve_scoring_priced(&q), Err(Error::TooLarge(_))));
    }
}
