use std::collections::HashMap;

use rayon::prelude::*;

use super::models::profile_election;
use super::{
    build_dodgson_score_bribery_model, build_kemeny_bribery_models, build_scoring_bribery_model,
    build_young_score_bribery_model, ilp_feasible, BriberyModel, OrderTables, MAX_MODEL_CANDIDATES,
};
use crate::bribery::{BribeAction, BriberyQuery, BriberyWitness, Outcome, Variant};
use crate::election::{BallotKind, Election, Rule, ScoreKind};
use crate::error::{Error, Result};
use crate::scalar::{int, small, Int};

/// Work cap for the bribery-shape enumeration of full Dodgson/Young bribery.
const SHAPE_WORK: u64 = 5_000_000;

fn solved<T: Int>(bm: &BriberyModel<T>) -> Result<Option<BriberyWitness<T>>> {
    Ok(ilp_feasible(&bm.model)?.map(|x| bm.decode_bribery(&x)))
}

/// Plain bribery under an order-based score rule through its integer model.
pub fn solve_scoring_ilp<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let alpha = q.rule.points(q.m())?.ok_or_else(|| Error::NotScoreBased(q.rule.to_string()))?;
    Ok(solved(&build_scoring_bribery_model(q, alpha.alpha())?)?.map_or(Outcome::Infeasible, Outcome::Feasible))
}

/// Plain Kemeny bribery: feasible when one of the per-consensus models is.
pub fn solve_kemeny_ilp<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let found: Vec<Option<BriberyWitness<T>>> =
        build_kemeny_bribery_models(q)?.par_iter().map(solved).collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().next().map_or(Outcome::Infeasible, Outcome::Feasible))
}

fn score_model<T: Int>(q: &BriberyQuery<T>, kind: ScoreKind, t: &T) -> Result<BriberyModel<T>> {
    match kind {
        ScoreKind::Dodgson => build_dodgson_score_bribery_model(q, t),
        ScoreKind::Young => build_young_score_bribery_model(q, t),
    }
}

/// Bribe at most `k` voters so that the target's score is at most `t`. The witness covers the
/// bribery phase only; the model's decoder checks the rest.
pub fn solve_score_bribery_ilp<T: Int>(q: &BriberyQuery<T>, kind: ScoreKind, t: &T) -> Result<Outcome<T>> {
    let bm = score_model(q, kind, t)?;
    match ilp_feasible(&bm.model)? {
        Some(x) => Ok(Outcome::Feasible(bm.decode_score(&x)?.witness)),
        None => Ok(Outcome::Infeasible),
    }
}

fn score_query<T: Int>(e: &Election<T>, kind: ScoreKind, c: usize, k: T) -> Result<BriberyQuery<T>> {
    let rule = match kind {
        ScoreKind::Dodgson => Rule::Dodgson,
        ScoreKind::Young => Rule::Young,
    };
    BriberyQuery::new(e.clone(), rule, c, k, Variant { weighted: true, ..Variant::default() })
}

/// Least `x` in `0..=hi` with `ok(x)`, assuming `ok` is monotone; `None` when `ok(hi)` fails.
fn least<T: Int>(hi: T, mut ok: impl FnMut(&T) -> Result<bool>) -> Result<Option<T>> {
    if !ok(&hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (T::zero(), hi);
    while lo < hi {
        let mid = lo.clone() + (hi.clone() - lo.clone()) / int(2);
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid + T::one();
        }
    }
    Ok(Some(lo))
}

/// Dodgson or Young score of `c` as the least `t` whose zero-budget model is feasible.
pub fn min_score_via_ilp<T: Int>(e: &Election<T>, c: usize, kind: ScoreKind) -> Result<Option<T>> {
    let q = score_query(e, kind, c, T::zero())?;
    let m = e.m();
    let n = e.total_voters();
    let hi = match kind {
        ScoreKind::Dodgson => n * int(m * m.saturating_sub(1) / 2),
        ScoreKind::Young => n,
    };
    least(hi, |t| Ok(ilp_feasible(&score_model(&q, kind, t)?.model)?.is_some()))
}

/// Fewest bribed voters after which the target's score is at most `t`, by binary search over the
/// budget; `None` when even bribing everyone is not enough.
pub fn min_bribe_for_score<T: Int>(q: &BriberyQuery<T>, kind: ScoreKind, t: &T) -> Result<Option<T>> {
    let n = q.normalized()?.total_voters();
    least(n, |k| Ok(ilp_feasible(&score_model(&q.clone().with_budget(k.clone()), kind, t)?.model)?.is_some()))
}

/// Candidates needing the fewest rewritten ballots to become the Condorcet winner.
pub fn dodgson_prime_winners<T: Int>(e: &Election<T>) -> Result<Vec<usize>> {
    let costs: Vec<Option<T>> = (0..e.m())
        .into_par_iter()
        .map(|c| min_bribe_for_score(&score_query(e, ScoreKind::Dodgson, c, T::zero())?, ScoreKind::Dodgson, &T::zero()))
        .collect::<Result<_>>()?;
    let Some(best) = costs.iter().flatten().min() else { return Ok(Vec::new()) };
    Ok((0..e.m()).filter(|&c| costs[c].as_ref() == Some(best)).collect())
}

/// Winners by least finite score, everyone when no score is finite.
fn elects<T: Int>(scores: &[Option<T>], p: usize, unique: bool) -> bool {
    let best = scores.iter().flatten().min();
    let won: Vec<usize> = match best {
        Some(b) => (0..scores.len()).filter(|&c| scores[c].as_ref() == Some(b)).collect(),
        None => (0..scores.len()).collect(),
    };
    if unique {
        won == [p]
    } else {
        won.contains(&p)
    }
}

/// Plain or priced Dodgson/Young bribery by enumerating how many voters each block sells and
/// which orders they receive, testing each outcome with the score models.
pub fn solve_full_dodgson_or_young_bribery<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let kind = match q.rule {
        Rule::Dodgson => ScoreKind::Dodgson,
        Rule::Young => ScoreKind::Young,
        _ => return Err(Error::Unsupported(format!("{} is not Dodgson or Young", q.rule))),
    };
    let m = q.m();
    if m > MAX_MODEL_CANDIDATES {
        return Err(Error::TooLarge(format!("integer models are built for at most {MAX_MODEL_CANDIDATES} candidates")));
    }
    if q.election.kind() != BallotKind::Orders {
        return Err(Error::BallotKindMismatch);
    }
    if q.variant.negative || q.variant.approval_flip {
        return Err(Error::Unsupported("plain or priced bribery only".into()));
    }
    let e = q.normalized()?;
    if e.voters().iter().any(|v| !v.weight.is_one()) {
        return Err(Error::Unsupported("integer models need unit weights".into()));
    }
    let tables = OrderTables::new(m)?;
    let n = tables.len();
    let order_of: Vec<usize> = e
        .voters()
        .iter()
        .map(|v| tables.index_of(v.ballot.as_order().expect("orders")).expect("tabled"))
        .collect();
    let mult: Vec<usize> = e.voters().iter().map(|v| small(&v.multiplicity, 1 << 16, "multiplicity")).collect::<Result<_>>()?;
    let mut base = vec![T::zero(); n];
    for (b, v) in e.voters().iter().enumerate() {
        base[order_of[b]] = base[order_of[b]].clone() + v.multiplicity.clone();
    }

    let mut memo: HashMap<Vec<T>, bool> = HashMap::new();
    let mut work = 0u64;
    let mut wins = |profile: &[T]| -> Result<bool> {
        if let Some(&w) = memo.get(profile) {
            return Ok(w);
        }
        let pe = profile_election(&e, &tables, profile)?;
        let scores: Vec<Option<T>> = (0..m).map(|c| min_score_via_ilp(&pe, c, kind)).collect::<Result<_>>()?;
        let w = elects(&scores, q.target, q.variant.unique);
        memo.insert(profile.to_vec(), w);
        Ok(w)
    };

    // Sold voters per block, cheapest budgets permitting.
    let blocks = e.voters().len();
    let mut sold = vec![0usize; blocks];
    loop {
        let cost: T = (0..blocks).map(|b| e.voters()[b].price.clone() * int::<T>(sold[b])).sum();
        if cost <= q.budget {
            let total: usize = sold.iter().sum();
            let mut left = base.clone();
            for b in 0..blocks {
                left[order_of[b]] = left[order_of[b]].clone() - int::<T>(sold[b]);
            }
            let mut comp = vec![0usize; n];
            comp[n - 1] = total;
            loop {
                work += 1;
                if work > SHAPE_WORK {
                    return Err(Error::TooLarge("bribery shape enumeration".into()));
                }
                let profile: Vec<T> = (0..n).map(|i| left[i].clone() + int::<T>(comp[i])).collect();
                if wins(&profile)? {
                    return Ok(Outcome::Feasible(shape_witness(&tables, &sold, &comp)));
                }
                if !next_composition(&mut comp) {
                    break;
                }
            }
        }
        // odometer over sold counts
        let mut b = 0;
        while b < blocks {
            sold[b] += 1;
            if sold[b] <= mult[b] {
                break;
            }
            sold[b] = 0;
            b += 1;
        }
        if b == blocks {
            return Ok(Outcome::Infeasible);
        }
    }
}

/// Steps to the next composition of the same total into `comp.len()` parts; false after the last.
fn next_composition(comp: &mut [usize]) -> bool {
    let n = comp.len();
    if n < 2 {
        return false;
    }
    // move one unit from the rightmost nonzero part (not the first) one step left, pushing
    // the remainder of that part to the end
    let Some(i) = (1..n).rev().find(|&i| comp[i] > 0) else { return false };
    let rest = comp[i] - 1;
    comp[i] = 0;
    comp[i - 1] += 1;
    comp[n - 1] += rest;
    true
}

fn shape_witness<T: Int>(tables: &OrderTables, sold: &[usize], comp: &[usize]) -> BriberyWitness<T> {
    let mut w = BriberyWitness::<T>::empty();
    let mut targets = comp.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat_n(j, c));
    for (b, &k) in sold.iter().enumerate() {
        for _ in 0..k {
            let j = targets.next().expect("composition matches sold voters");
            let action = BribeAction::Rewrite(tables.orders()[j].clone().into());
            match w.bribes.iter_mut().find(|x| x.block == b && x.action == action) {
                Some(x) => x.count = x.count.clone() + T::one(),
                None => w.push(b, T::one(), action),
            }
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{dodgson_score, winners, PreferenceOrder, VoterBlock};
    use crate::oracle::verify_witness;

    fn ord(r: &[usize]) -> VoterBlock<i64> {
        VoterBlock::new(PreferenceOrder::new(r.to_vec()).unwrap())
    }

    fn cycle() -> Election<i64> {
        Election::lettered(3, vec![ord(&[0, 1, 2]), ord(&[1, 2, 0]), ord(&[2, 0, 1])]).unwrap()
    }

    #[test]
    fn compositions_cover_everything() {
        let mut comp = vec![0, 0, 3];
        let mut n = 1;
        while next_composition(&mut comp) {
            n += 1;
        }
        assert_eq!(n, 10);
        assert_eq!(comp, vec![3, 0, 0]);
    }

    #[test]
    fn scores_match_on_the_cycle() {
        let e = cycle();
        for c in 0..3 {
            assert_eq!(min_score_via_ilp(&e, c, ScoreKind::Dodgson).unwrap(), dodgson_score(&e, c).unwrap());
        }
        assert_eq!(min_score_via_ilp(&e, 0, ScoreKind::Young).unwrap(), Some(2));
    }

    #[test]
    fn min_bribe_examples() {
        let q = score_query(&cycle(), ScoreKind::Dodgson, 0, 0).unwrap();
        assert_eq!(min_bribe_for_score(&q, ScoreKind::Dodgson, &0).unwrap(), Some(1));
        assert_eq!(min_bribe_for_score(&q, ScoreKind::Dodgson, &1).unwrap(), Some(0));
        let condorcet = Election::lettered(3, vec![ord(&[0, 1, 2]), ord(&[0, 2, 1])]).unwrap();
        let q = score_query(&condorcet, ScoreKind::Young, 0, 0).unwrap();
        assert_eq!(min_bribe_for_score(&q, ScoreKind::Young, &0).unwrap(), Some(0));
    }

    #[test]
    fn dodgson_prime() {
        assert_eq!(dodgson_prime_winners(&cycle()).unwrap(), vec![0, 1, 2]);
        let condorcet = Election::lettered(3, vec![ord(&[1, 0, 2]), ord(&[1, 2, 0]), ord(&[0, 1, 2])]).unwrap();
        assert_eq!(dodgson_prime_winners(&condorcet).unwrap(), vec![1]);
        let single = Election::lettered(3, vec![ord(&[2, 0, 1])]).unwrap();
        assert_eq!(dodgson_prime_winners(&single).unwrap(), vec![2]);
    }

    #[test]
    fn full_bribery() {
        let q = BriberyQuery::new(cycle(), Rule::Dodgson, 0, 0, Variant::default()).unwrap();
        assert!(solve_full_dodgson_or_young_bribery(&q).unwrap().is_feasible());
        assert!(winners(&cycle(), &Rule::Dodgson).unwrap().contains(&0));
        let two = Election::lettered(2, vec![ord(&[1, 0]).with_multiplicity(2)]).unwrap();
        let q = BriberyQuery::new(two, Rule::Young, 0, 1, Variant::default()).unwrap();
        let out = solve_full_dodgson_or_young_bribery(&q).unwrap();
        assert!(verify_witness(&q, out.witness().unwrap()).unwrap());
        let q = q.with_unique(true);
        assert!(!solve_full_dodgson_or_young_bribery(&q).unwrap().is_feasible());
    }
}
