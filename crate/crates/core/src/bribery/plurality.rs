use super::{require, scores_elect, witness_from_units, BribeAction, BriberyQuery, BriberyWitness, Outcome};
use crate::election::{Ballot, Election, PreferenceOrder, Rule};
use crate::error::Result;
use crate::knapsack::{cheapest_multi_choice, heaviest_multi_choice, supporter_pools, CandidatePool, UNARY_CAP};
use crate::scalar::{int, small, Int};

/// One voter of a block, with its effective price and weight.
#[derive(Clone, Debug)]
struct Unit<T> {
    block: usize,
    top: usize,
    price: T,
    weight: T,
}

fn units<T: Int>(e: &Election<T>) -> Result<Vec<Unit<T>>> {
    e.unit_voters(UNARY_CAP)?
        .into_iter()
        .map(|(block, v)| {
            let top = v.ballot.as_order().ok_or(crate::error::Error::BallotKindMismatch)?.top();
            Ok(Unit { block, top, price: v.price, weight: v.weight })
        })
        .collect()
}

fn check_plurality<T: Int>(q: &BriberyQuery<T>, priced: bool, weighted: bool, negative: bool) -> Result<()> {
    require(q.rule == Rule::Plurality, "needs plurality")?;
    require(q.variant.priced == priced, "price flag does not match the solver")?;
    require(q.variant.weighted == weighted, "weight flag does not match the solver")?;
    require(q.variant.negative == negative, "negative flag does not match the solver")
}

fn promote<T: Int>(q: &BriberyQuery<T>, blocks: impl IntoIterator<Item = usize>) -> Outcome<T> {
    let ballot = q.promoting_ballot();
    Outcome::Feasible(witness_from_units(blocks.into_iter().map(|b| (b, BribeAction::Rewrite(ballot.clone())))))
}

fn leads<T: Int>(q: &BriberyQuery<T>, scores: &[T]) -> bool {
    scores_elect(scores, q.target, q.variant.unique)
}

fn plurality_scores<T: Int>(m: usize, units: &[Unit<T>]) -> Vec<T> {
    let mut s = vec![T::zero(); m];
    for u in units {
        s[u.top] = s[u.top].clone() + u.weight.clone();
    }
    s
}

/// Unpriced, unweighted plurality: repeatedly buy a voter of the strongest rival.
/// Blocks too large to expand go through [`plurality_basic_by_counts`].
pub fn solve_plurality_basic<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    check_plurality(q, false, false, false)?;
    let e = q.normalized()?;
    if e.total_voters() > int(UNARY_CAP) {
        return plurality_basic_by_counts(q, &e);
    }
    let mut pool = units(&e)?;
    let mut scores = plurality_scores(e.m(), &pool);
    let mut bought = Vec::new();
    loop {
        if leads(q, &scores) {
            return Ok(promote(q, bought));
        }
        if int::<T>(bought.len()) >= q.budget {
            return Ok(Outcome::Infeasible);
        }
        let best = scores.iter().enumerate().filter(|&(c, _)| c != q.target).map(|(_, s)| s).max().cloned();
        let rival = (0..e.m()).find(|&c| c != q.target && Some(&scores[c]) == best.as_ref());
        let Some(rival) = rival else { return Ok(Outcome::Infeasible) };
        let Some(i) = pool.iter().position(|u| u.top == rival) else { return Ok(Outcome::Infeasible) };
        let u = pool.remove(i);
        scores[rival] = scores[rival].clone() - T::one();
        scores[q.target] = scores[q.target].clone() + T::one();
        bought.push(u.block);
    }
}

/// The greedy's answer computed on block counts: the fewest bribes `j` such that the rivals'
/// excess over the target's final score fits in `j`. Any further bribes come from arbitrary
/// rival voters.
fn plurality_basic_by_counts<T: Int>(q: &BriberyQuery<T>, e: &Election<T>) -> Result<Outcome<T>> {
    let p = q.target;
    let mut scores = vec![T::zero(); e.m()];
    let mut tops = Vec::with_capacity(e.voters().len());
    for v in e.voters() {
        let top = v.ballot.as_order().ok_or(crate::error::Error::BallotKindMismatch)?.top();
        scores[top] = scores[top].clone() + v.multiplicity.clone();
        tops.push(top);
    }
    let slack = if q.variant.unique { T::one() } else { T::zero() };
    let excess = |j: &T, c: usize| {
        let over = scores[c].clone() - scores[p].clone() - j.clone() + slack.clone();
        if c == p || over.is_negative() {
            T::zero()
        } else {
            over
        }
    };
    let need = |j: &T| (0..e.m()).fold(T::zero(), |acc, c| acc + excess(j, c));
    let others = e.total_voters() - scores[p].clone();
    let hi = if q.budget < others { q.budget.clone() } else { others };
    if need(&hi) > hi {
        return Ok(Outcome::Infeasible);
    }
    let (mut lo, mut hi) = (T::zero(), hi);
    while lo < hi {
        let mid = (lo.clone() + hi.clone()).div_floor(&int(2));
        if need(&mid) <= mid {
            hi = mid;
        } else {
            lo = mid + T::one();
        }
    }
    let mut take: Vec<T> = (0..e.m()).map(|c| excess(&lo, c)).collect();
    let mut spare = lo.clone() - need(&lo);
    for c in (0..e.m()).filter(|&c| c != p) {
        let extra = (scores[c].clone() - take[c].clone()).min(spare.clone());
        take[c] = take[c].clone() + extra.clone();
        spare = spare - extra;
    }
    let ballot = q.promoting_ballot();
    let mut w = BriberyWitness::empty();
    for (b, v) in e.voters().iter().enumerate() {
        let c = tops[b];
        let n = v.multiplicity.clone().min(take[c].clone());
        if c != p && n.is_positive() {
            take[c] = take[c].clone() - n.clone();
            w.push(b, n, BribeAction::Rewrite(ballot.clone()));
        }
    }
    Ok(Outcome::Feasible(w))
}

/// Priced, unweighted plurality: sweep the final score `r` of the target.
pub fn solve_plurality_priced<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    check_plurality(q, true, false, false)?;
    let e = q.normalized()?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    let mut all = units(&e)?;
    all.sort_by(|a, b| a.price.cmp(&b.price));
    let p = q.target;
    let count = |c: usize| all.iter().filter(|u| u.top == c).count();
    let base: Vec<usize> = (0..e.m()).map(count).collect();
    for r in 0..=all.len() {
        let Some(limit) = r.checked_sub(usize::from(q.variant.unique)) else { continue };
        let mut taken = vec![false; all.len()];
        let mut gained = 0;
        for c in (0..e.m()).filter(|&c| c != p) {
            let excess = base[c].saturating_sub(limit);
            for (i, _) in all.iter().enumerate().filter(|(_, u)| u.top == c).take(excess) {
                taken[i] = true;
                gained += 1;
            }
        }
        for (i, u) in all.iter().enumerate() {
            if base[p] + gained >= r {
                break;
            }
            if !taken[i] && u.top != p {
                taken[i] = true;
                gained += 1;
            }
        }
        if base[p] + gained < r {
            continue;
        }
        let cost: T = all.iter().zip(&taken).filter(|(_, &t)| t).map(|(u, _)| u.price.clone()).sum();
        if cost <= q.budget {
            return Ok(promote(q, all.iter().zip(&taken).filter(|(_, &t)| t).map(|(u, _)| u.block)));
        }
    }
    Ok(Outcome::Infeasible)
}

/// Weighted, unpriced plurality: sweep the strongest rival's final weight over the values left
/// after removing its heaviest voters.
pub fn solve_plurality_weighted<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    check_plurality(q, false, true, false)?;
    let e = q.normalized()?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    let mut all = units(&e)?;
    all.sort_by(|a, b| b.weight.cmp(&a.weight));
    let p = q.target;
    let base = plurality_scores(e.m(), &all);
    let mut thresholds = vec![T::zero()];
    for c in (0..e.m()).filter(|&c| c != p) {
        let mut s = base[c].clone();
        thresholds.push(s.clone());
        for u in all.iter().filter(|u| u.top == c) {
            s = s - u.weight.clone();
            thresholds.push(s.clone());
        }
    }
    thresholds.sort();
    thresholds.dedup();
    for r in thresholds {
        let mut scores = base.clone();
        let mut taken = vec![false; all.len()];
        let mut bribes = 0usize;
        for (i, u) in all.iter().enumerate() {
            if u.top != p && scores[u.top] > r {
                taken[i] = true;
                bribes += 1;
                scores[u.top] = scores[u.top].clone() - u.weight.clone();
                scores[p] = scores[p].clone() + u.weight.clone();
            }
        }
        while !leads(q, &scores) {
            let next = all.iter().enumerate().find(|(i, u)| !taken[*i] && u.top != p && u.weight.is_positive());
            let Some((i, u)) = next else { break };
            taken[i] = true;
            bribes += 1;
            scores[u.top] = scores[u.top].clone() - u.weight.clone();
            scores[p] = scores[p].clone() + u.weight.clone();
        }
        if leads(q, &scores) && int::<T>(bribes) <= q.budget {
            return Ok(promote(q, all.iter().zip(&taken).filter(|(_, &t)| t).map(|(u, _)| u.block)));
        }
    }
    Ok(Outcome::Infeasible)
}

/// Negative plurality bribery with prices: bribed voters may only move to rivals trailing the
/// target.
pub fn solve_plurality_negative_priced<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    require(q.rule == Rule::Plurality && q.variant.negative, "needs negative plurality")?;
    require(!q.variant.weighted, "weighted negative bribery has no polynomial solver")?;
    let e = q.normalized()?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    let mut all = units(&e)?;
    all.sort_by(|a, b| a.price.cmp(&b.price));
    let p = q.target;
    let m = e.m();
    let score: Vec<isize> = (0..m).map(|c| all.iter().filter(|u| u.top == c).count() as isize).collect();
    let t = score[p] - isize::from(q.variant.unique);
    let rivals = || (0..m).filter(|&c| c != p);
    let excess: isize = rivals().map(|c| (score[c] - t).max(0)).sum();
    let mut room: Vec<isize> = (0..m).map(|c| if c == p { 0 } else { (t - score[c]).max(0) }).collect();
    if excess > room.iter().sum() {
        return Ok(Outcome::Infeasible);
    }
    let mut moved = Vec::new();
    for c in rivals() {
        let n = (score[c] - t).max(0) as usize;
        moved.extend(all.iter().filter(|u| u.top == c).take(n));
    }
    let cost: T = moved.iter().map(|u| u.price.clone()).sum();
    if cost > q.budget {
        return Ok(Outcome::Infeasible);
    }
    let mut units_out = Vec::with_capacity(moved.len());
    for u in moved {
        let to = (0..m).find(|&c| room[c] > 0).expect("room covers the excess");
        room[to] -= 1;
        let ballot = Ballot::Order(PreferenceOrder::with_top(m, to));
        units_out.push((u.block, BribeAction::Rewrite(ballot)));
    }
    Ok(Outcome::Feasible(witness_from_units(units_out)))
}

fn priced_weighted<T: Int>(q: &BriberyQuery<T>) -> Result<Election<T>> {
    require(q.rule == Rule::Plurality && !q.variant.negative, "needs plurality without the negative restriction")?;
    q.normalized()
}

/// Bribing every voter of a rival, when that alone is affordable and suffices.
fn buy_everyone<T: Int>(q: &BriberyQuery<T>, e: &Election<T>) -> Result<Option<Outcome<T>>> {
    if q.budget < e.total_price() {
        return Ok(None);
    }
    let blocks: Vec<usize> = units(e)?.into_iter().filter(|u| u.top != q.target).map(|u| u.block).collect();
    let out = promote(q, blocks);
    let w = out.witness().expect("promotion is feasible");
    Ok(q.target_wins(&w.apply(q)?)?.then_some(out))
}

fn picked<T: Int>(pools: &[(CandidatePool<T>, Vec<usize>)], c: usize, items: &[usize]) -> Vec<usize> {
    items.iter().map(|&i| pools[c].1[i]).collect()
}

/// Priced and weighted plurality with small prices: pick the rival that ends strongest and the
/// budget spent on it, then fill the rest by the multi-candidate heaviest DP.
pub fn solve_plurality_unary_prices<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let e = priced_weighted(q)?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    if let Some(out) = buy_everyone(q, &e)? {
        return Ok(out);
    }
    let pools = supporter_pools(&e)?;
    let p = q.target;
    let sp = pools[p].0.score.clone();
    let top = small(&std::cmp::min(q.budget.clone(), e.total_price()), UNARY_CAP, "budget")?;
    let rivals: Vec<usize> = (0..e.m()).filter(|&c| c != p).collect();
    for &c in &rivals {
        let others: Vec<usize> = rivals.iter().copied().filter(|&d| d != c).collect();
        let other_pools: Vec<CandidatePool<T>> = others.iter().map(|&d| pools[d].0.clone()).collect();
        for b in 0..=top {
            let (w1, pick) = pools[c].0.pool.heaviest_choice(&int(b))?;
            let r = pools[c].0.score.clone() - w1.clone();
            let rest = q.budget.clone() - int(b);
            let Some((w, picks)) = heaviest_multi_choice(&other_pools, &rest, &r)? else { continue };
            let total = sp.clone() + w + w1;
            if if q.variant.unique { total > r } else { total >= r } {
                let mut blocks = picked(&pools, c, &pick);
                for (d, items) in others.iter().zip(&picks) {
                    blocks.extend(picked(&pools, *d, items));
                }
                return Ok(promote(q, blocks));
            }
        }
    }
    Ok(Outcome::Infeasible)
}

/// Priced and weighted plurality with small weights: pick the rival that ends strongest and the
/// weight taken from it, then fill the rest by the multi-candidate cheapest DP.
pub fn solve_plurality_unary_weights<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let e = priced_weighted(q)?;
    if q.target_wins(&e)? {
        return Ok(Outcome::Feasible(BriberyWitness::empty()));
    }
    if let Some(out) = buy_everyone(q, &e)? {
        return Ok(out);
    }
    let pools = supporter_pools(&e)?;
    let p = q.target;
    let sp = pools[p].0.score.clone();
    let rivals: Vec<usize> = (0..e.m()).filter(|&c| c != p).collect();
    for &c in &rivals {
        let others: Vec<usize> = rivals.iter().copied().filter(|&d| d != c).collect();
        let other_pools: Vec<CandidatePool<T>> = others.iter().map(|&d| pools[d].0.clone()).collect();
        let wc = small(&pools[c].0.pool.total_weight(), UNARY_CAP, "weight")?;
        for w1 in 0..=wc {
            let w1: T = int(w1);
            let Some((b, pick)) = pools[c].0.pool.cheapest_choice(&w1)? else { continue };
            let r = pools[c].0.score.clone() - w1.clone();
            let mut need = r.clone() - (sp.clone() + w1);
            if q.variant.unique {
                need = need + T::one();
            }
            let need = std::cmp::max(need, T::zero());
            let Some((b2, picks)) = cheapest_multi_choice(&other_pools, &need, &r)? else { continue };
            if b + b2 <= q.budget {
                let mut blocks = picked(&pools, c, &pick);
                for (d, items) in others.iter().zip(&picks) {
                    blocks.extend(picked(&pools, *d, items));
                }
                return Ok(promote(q, blocks));
            }
        }
    }
    Ok(Outcome::Infeasible)
}
