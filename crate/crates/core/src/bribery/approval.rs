use super::{require, witness_from_units, BribeAction, BriberyQuery, BriberyWitness, Outcome};
use crate::election::{score_table, Election, Rule, VoterBlock};
use crate::error::Result;
use crate::knapsack::{Item, VoterPool, UNARY_CAP};
use crate::scalar::{int, small, Int};

/// Approval bribery paid per flipped entry; picks the weight-indexed procedure when weights are
/// marked unary and the price-indexed one otherwise.
pub fn solve_approval_flip<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    if q.encoding.weights_unary && !q.encoding.prices_unary {
        solve_approval_flip_unary_weights(q)
    } else {
        solve_approval_flip_unary_prices(q)
    }
}

/// Try every amount spent on gaining approvals for the target.
pub fn solve_approval_flip_unary_prices<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let s = Setup::new(q)?;
    if let Some(out) = s.trivial(q)? {
        return Ok(out);
    }
    let top = small(&std::cmp::min(q.budget.clone(), s.gain.total_price()), UNARY_CAP, "budget")?;
    for b in 0..=top {
        let (w, pick) = s.gain.heaviest_choice(&int(b))?;
        let spent = s.gain.price_of(&pick);
        if let Some(out) = s.demote(q, w, spent, &pick, true)? {
            return Ok(out);
        }
    }
    Ok(Outcome::Infeasible)
}

/// Try every weight the target could gain.
pub fn solve_approval_flip_unary_weights<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    let s = Setup::new(q)?;
    if let Some(out) = s.trivial(q)? {
        return Ok(out);
    }
    let top = small(&s.gain.total_weight(), UNARY_CAP, "weight")?;
    for w in 0..=top {
        let w: T = int(w);
        let Some((b, pick)) = s.gain.cheapest_choice(&w)? else { continue };
        if let Some(out) = s.demote(q, w, b, &pick, false)? {
            return Ok(out);
        }
    }
    Ok(Outcome::Infeasible)
}

struct Setup<T> {
    e: Election<T>,
    units: Vec<(usize, VoterBlock<T>)>,
    scores: Vec<T>,
    /// Voters not approving the target, priced by their target entry.
    gain: VoterPool<T>,
    gain_units: Vec<usize>,
    /// Per candidate, its approvers priced by that entry.
    strip: Vec<(VoterPool<T>, Vec<usize>)>,
}

impl<T: Int> Setup<T> {
    fn new(q: &BriberyQuery<T>) -> Result<Self> {
        require(q.rule == Rule::Approval && q.variant.approval_flip, "needs approval with per-entry flips")?;
        let e = q.normalized()?;
        let units = e.unit_voters(UNARY_CAP)?;
        let scores = score_table(&e, &Rule::Approval)?.into_inner();
        let p = q.target;
        let approves = |v: &VoterBlock<T>, c: usize| v.ballot.as_approval().expect("approval ballots").approves(c);
        let mut items = Vec::new();
        let mut gain_units = Vec::new();
        for (i, (_, v)) in units.iter().enumerate() {
            if !approves(v, p) {
                items.push(Item::new(v.flip_price(p), v.weight.clone()));
                gain_units.push(i);
            }
        }
        let gain = VoterPool::new(items)?;
        let mut strip = Vec::with_capacity(e.m());
        for c in 0..e.m() {
            let mut items = Vec::new();
            let mut idx = Vec::new();
            for (i, (_, v)) in units.iter().enumerate() {
                if c != p && approves(v, c) {
                    items.push(Item::new(v.flip_price(c), v.weight.clone()));
                    idx.push(i);
                }
            }
            strip.push((VoterPool::new(items)?, idx));
        }
        Ok(Self { e, units, scores, gain, gain_units, strip })
    }

    /// Already winning, or winning by flipping everything that can be flipped.
    fn trivial(&self, q: &BriberyQuery<T>) -> Result<Option<Outcome<T>>> {
        if q.target_wins(&self.e)? {
            return Ok(Some(Outcome::Feasible(BriberyWitness::empty())));
        }
        let mut flips: Vec<Vec<usize>> = vec![Vec::new(); self.units.len()];
        for &i in &self.gain_units {
            flips[i].push(q.target);
        }
        for (c, (_, idx)) in self.strip.iter().enumerate() {
            for &i in idx {
                flips[i].push(c);
            }
        }
        let w = self.witness(flips);
        if w.cost(q)? <= q.budget && q.target_wins(&w.apply(q)?)? {
            return Ok(Some(Outcome::Feasible(w)));
        }
        Ok(None)
    }

    /// With the target at its score plus `w` after spending `spent`, strip rivals down to it.
    fn demote(&self, q: &BriberyQuery<T>, w: T, spent: T, pick: &[usize], by_price: bool) -> Result<Option<Outcome<T>>> {
        let p = q.target;
        let r = self.scores[p].clone() + w;
        let mut left = q.budget.clone() - spent;
        let mut flips: Vec<Vec<usize>> = vec![Vec::new(); self.units.len()];
        for &i in pick {
            flips[self.gain_units[i]].push(p);
        }
        for c in (0..self.e.m()).filter(|&c| c != p) {
            let mut need = self.scores[c].clone() - r.clone();
            if q.variant.unique {
                need = need + T::one();
            }
            if !need.is_positive() {
                continue;
            }
            let (pool, idx) = &self.strip[c];
            let found = if by_price { pool.cheapest_by_price(&need)? } else { pool.cheapest_choice(&need)? };
            let Some((cost, chosen)) = found else { return Ok(None) };
            left = left - cost;
            for i in chosen {
                flips[idx[i]].push(c);
            }
        }
        if left.is_negative() {
            return Ok(None);
        }
        Ok(Some(Outcome::Feasible(self.witness(flips))))
    }

    fn witness(&self, flips: Vec<Vec<usize>>) -> BriberyWitness<T> {
        witness_from_units(self.units.iter().zip(flips).filter(|(_, f)| !f.is_empty()).map(|((block, _), mut f)| {
            f.sort_unstable();
            (*block, BribeAction::Flip(f))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::Variant;
    use crate::election::ApprovalVector;

    fn flip_query(voters: Vec<VoterBlock<i64>>, k: i64) -> BriberyQuery<i64> {
        let e = Election::lettered(2, voters).unwrap();
        let v = Variant { priced: true, weighted: true, approval_flip: true, ..Variant::default() };
        BriberyQuery::new(e, Rule::Approval, 0, k, v).unwrap()
    }

    #[test]
    fn stripping_the_rival_suffices() {
        // p=0 approved with weight 3, c=1 with weight 5; the c entry costs 2, the p entry 3.
        let q = flip_query(
            vec![
                VoterBlock::new(ApprovalVector::new(vec![true, false])).with_weight(3),
                VoterBlock::new(ApprovalVector::new(vec![false, true])).with_weight(5).with_flip_prices(vec![3, 2]),
            ],
            2,
        );
        for out in [solve_approval_flip_unary_prices(&q).unwrap(), solve_approval_flip_unary_weights(&q).unwrap()] {
            let w = out.witness().expect("feasible");
            assert!(crate::oracle::verify_witness(&q, w).unwrap());
        }
    }

    #[test]
    fn nothing_affordable() {
        let q = flip_query(
            vec![VoterBlock::new(ApprovalVector::new(vec![false, true])).with_weight(5).with_flip_prices(vec![3, 3])],
            2,
        );
        assert_eq!(solve_approval_flip(&q).unwrap(), Outcome::Infeasible);
    }
}
