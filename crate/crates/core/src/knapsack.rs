//! Heaviest and cheapest voter subsets, singly and across candidate sets.
//!
//! Tables span the whole price (or weight) range, so they are only practical when those values
//! are small, as with unary encodings.

use crate::election::{Election, Rule};
use crate::error::{Error, Result};
use crate::scalar::{int, small, Int};

/// Largest table index the DPs will allocate.
pub const UNARY_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Item<T> {
    pub price: T,
    pub weight: T,
}

impl<T> Item<T> {
    pub fn new(price: T, weight: T) -> Self {
        Self { price, weight }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VoterPool<T> {
    items: Vec<Item<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Price,
    Weight,
}

/// One value per budget (price axis) or per weight target (weight axis); `None` is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable<T> {
    pub axis: Axis,
    pub entries: Vec<Option<T>>,
}

impl<T: Int> DpTable<T> {
    /// Entry `i`; indices beyond the table repeat the last entry on the price axis and are
    /// undefined on the weight axis.
    pub fn get(&self, i: usize) -> Option<&T> {
        match self.entries.get(i) {
            Some(x) => x.as_ref(),
            None if self.axis == Axis::Price => self.entries.last().and_then(Option::as_ref),
            None => None,
        }
    }
}

impl<T: Int> VoterPool<T> {
    pub fn new(items: Vec<Item<T>>) -> Result<Self> {
        if items.iter().any(|i| i.price.is_negative() || i.weight.is_negative()) {
            return Err(Error::InvalidVoter("negative price or weight".into()));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[Item<T>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_price(&self) -> T {
        self.items.iter().map(|i| i.price.clone()).sum()
    }

    pub fn total_weight(&self) -> T {
        self.items.iter().map(|i| i.weight.clone()).sum()
    }

    /// Total price of the items at `indices`.
    pub fn price_of(&self, indices: &[usize]) -> T {
        indices.iter().map(|&i| self.items[i].price.clone()).sum()
    }

    /// Max weight buyable for at most `b`.
    pub fn heaviest(&self, b: &T) -> Result<T> {
        Ok(self.heaviest_choice(b)?.0)
    }

    /// Min price of at least `w` weight, `None` when `w` exceeds the pool.
    pub fn cheapest(&self, w: &T) -> Result<Option<T>> {
        Ok(self.cheapest_choice(w)?.map(|(p, _)| p))
    }

    /// `heaviest` plus the chosen item indices.
    pub fn heaviest_choice(&self, b: &T) -> Result<(T, Vec<usize>)> {
        let cap = self.price_span(b)?;
        let prices = self.prices()?;
        let mut best = vec![T::zero(); cap + 1];
        let mut take = vec![vec![false; cap + 1]; self.items.len()];
        for (i, item) in self.items.iter().enumerate() {
            let p = prices[i];
            for x in (p..=cap).rev() {
                let with = best[x - p].clone() + item.weight.clone();
                if with > best[x] {
                    best[x] = with;
                    take[i][x] = true;
                }
            }
        }
        let mut chosen = Vec::new();
        let mut x = cap;
        for i in (0..self.items.len()).rev() {
            if take[i][x] {
                chosen.push(i);
                x -= prices[i];
            }
        }
        chosen.reverse();
        Ok((best[cap].clone(), chosen))
    }

    /// `cheapest` plus the chosen item indices.
    pub fn cheapest_choice(&self, w: &T) -> Result<Option<(T, Vec<usize>)>> {
        if w > &self.total_weight() {
            return Ok(None);
        }
        let target = if w.is_negative() { 0 } else { small(w, UNARY_CAP, "weight target")? };
        let weights = self.weights()?;
        let mut best: Vec<Option<T>> = vec![None; target + 1];
        best[0] = Some(T::zero());
        let mut take = vec![vec![false; target + 1]; self.items.len()];
        for (i, item) in self.items.iter().enumerate() {
            for x in (0..=target).rev() {
                let Some(base) = &best[x.saturating_sub(weights[i])] else { continue };
                let with = base.clone() + item.price.clone();
                if best[x].as_ref().is_none_or(|cur| with < *cur) {
                    best[x] = Some(with);
                    take[i][x] = true;
                }
            }
        }
        let Some(price) = best[target].clone() else { return Ok(None) };
        let mut chosen = Vec::new();
        let mut x = target;
        for i in (0..self.items.len()).rev() {
            if take[i][x] {
                chosen.push(i);
                x = x.saturating_sub(weights[i]);
            }
        }
        chosen.reverse();
        Ok(Some((price, chosen)))
    }

    /// `cheapest` computed along the price axis, for pools whose prices are small but whose
    /// weights may not be.
    pub fn cheapest_by_price(&self, w: &T) -> Result<Option<(T, Vec<usize>)>> {
        if w > &self.total_weight() {
            return Ok(None);
        }
        let table = self.heaviest_table(&self.total_price())?;
        let Some(b) = table.entries.iter().position(|h| h.as_ref().is_some_and(|h| h >= w)) else {
            return Ok(None);
        };
        let (_, chosen) = self.heaviest_choice(&int(b))?;
        Ok(Some((int(b), chosen)))
    }

    /// `heaviest` at every budget `0..=b`.
    pub fn heaviest_table(&self, b: &T) -> Result<DpTable<T>> {
        let cap = self.price_span(b)?;
        let prices = self.prices()?;
        let mut best = vec![T::zero(); cap + 1];
        for (i, item) in self.items.iter().enumerate() {
            for x in (prices[i]..=cap).rev() {
                let with = best[x - prices[i]].clone() + item.weight.clone();
                if with > best[x] {
                    best[x] = with;
                }
            }
        }
        Ok(DpTable { axis: Axis::Price, entries: best.into_iter().map(Some).collect() })
    }

    /// `cheapest` at every weight target `0..=w`.
    pub fn cheapest_table(&self, w: &T) -> Result<DpTable<T>> {
        let target = small(w, UNARY_CAP, "weight target")?;
        let weights = self.weights()?;
        let mut best: Vec<Option<T>> = vec![None; target + 1];
        best[0] = Some(T::zero());
        for (i, item) in self.items.iter().enumerate() {
            for x in (0..=target).rev() {
                let Some(base) = &best[x.saturating_sub(weights[i])] else { continue };
                let with = base.clone() + item.price.clone();
                if best[x].as_ref().is_none_or(|cur| with < *cur) {
                    best[x] = Some(with);
                }
            }
        }
        Ok(DpTable { axis: Axis::Weight, entries: best })
    }

    /// Budgets past the pool's total price buy nothing more, so the table stops there.
    fn price_span(&self, b: &T) -> Result<usize> {
        if b.is_negative() {
            return Err(Error::InvalidVoter("negative budget".into()));
        }
        let b = std::cmp::min(b.clone(), self.total_price());
        small(&b, UNARY_CAP, "price budget")
    }

    fn prices(&self) -> Result<Vec<usize>> {
        // Items pricier than the cap can never be afforded by a capped table.
        Ok(self.items.iter().map(|i| i.price.to_usize().unwrap_or(usize::MAX).min(UNARY_CAP + 1)).collect())
    }

    fn weights(&self) -> Result<Vec<usize>> {
        self.items.iter().map(|i| small(&i.weight, usize::MAX, "weight")).collect()
    }
}

/// A candidate's current score and the voters that can be bribed away from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePool<T> {
    pub score: T,
    pub pool: VoterPool<T>,
}

/// Max weight bribable from `pools` within budget `b` leaving every score at most `r`.
pub fn heaviest_multi<T: Int>(pools: &[CandidatePool<T>], b: &T, r: &T) -> Result<Option<T>> {
    Ok(heaviest_multi_choice(pools, b, r)?.map(|(w, _)| w))
}

/// Min price of bribing at least `w` weight away from `pools` leaving every score at most `r`.
pub fn cheapest_multi<T: Int>(pools: &[CandidatePool<T>], w: &T, r: &T) -> Result<Option<T>> {
    Ok(cheapest_multi_choice(pools, w, r)?.map(|(p, _)| p))
}

/// `heaviest_multi` plus, per pool, the chosen item indices.
pub fn heaviest_multi_choice<T: Int>(
    pools: &[CandidatePool<T>],
    b: &T,
    r: &T,
) -> Result<Option<(T, Vec<Vec<usize>>)>> {
    let total: T = pools.iter().map(|c| c.pool.total_price()).sum();
    let cap = small(&std::cmp::min(b.clone(), total), UNARY_CAP, "price budget")?;
    let mut acc: Vec<Option<T>> = vec![Some(T::zero()); cap + 1];
    let mut splits: Vec<Vec<usize>> = Vec::with_capacity(pools.len());
    for c in pools {
        let table = c.pool.heaviest_table(&int(cap))?;
        let base: Vec<Option<T>> = (0..=cap)
            .map(|x| {
                let h = table.get(x).expect("price tables are total").clone();
                (c.score.clone() - h.clone() <= *r).then_some(h)
            })
            .collect();
        let mut next: Vec<Option<T>> = vec![None; cap + 1];
        let mut split = vec![0; cap + 1];
        for x in 0..=cap {
            for y in 0..=x {
                if let (Some(a), Some(h)) = (&acc[y], &base[x - y]) {
                    let v = a.clone() + h.clone();
                    if next[x].as_ref().is_none_or(|cur| v > *cur) {
                        next[x] = Some(v);
                        split[x] = y;
                    }
                }
            }
        }
        acc = next;
        splits.push(split);
    }
    let Some(best) = acc[cap].clone() else { return Ok(None) };
    let mut x = cap;
    let mut budgets = vec![0; pools.len()];
    for i in (0..pools.len()).rev() {
        let y = splits[i][x];
        budgets[i] = x - y;
        x = y;
    }
    let choices = pools
        .iter()
        .zip(budgets)
        .map(|(c, bud)| Ok(c.pool.heaviest_choice(&int(bud))?.1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((best, choices)))
}

/// `cheapest_multi` plus, per pool, the chosen item indices.
pub fn cheapest_multi_choice<T: Int>(
    pools: &[CandidatePool<T>],
    w: &T,
    r: &T,
) -> Result<Option<(T, Vec<Vec<usize>>)>> {
    let target = if w.is_negative() { 0 } else { small(w, UNARY_CAP, "weight target")? };
    let mut acc: Vec<Option<T>> = vec![None; target + 1];
    acc[0] = Some(T::zero());
    let mut splits: Vec<Vec<usize>> = Vec::with_capacity(pools.len());
    let mut needs: Vec<Vec<usize>> = Vec::with_capacity(pools.len());
    for c in pools {
        // Weight this candidate must shed regardless of the target.
        let floor = c.score.clone() - r.clone();
        let floor = if floor.is_positive() { small(&floor, UNARY_CAP, "weight target")? } else { 0 };
        let top = target.max(floor);
        let table = c.pool.cheapest_table(&std::cmp::min(int(top), c.pool.total_weight()))?;
        let need: Vec<usize> = (0..=target).map(|x| x.max(floor)).collect();
        let base: Vec<Option<T>> = need.iter().map(|&x| table.get(x).cloned()).collect();
        let mut next: Vec<Option<T>> = vec![None; target + 1];
        let mut split = vec![0; target + 1];
        for x in 0..=target {
            for y in 0..=x {
                if let (Some(a), Some(p)) = (&acc[y], &base[x - y]) {
                    let v = a.clone() + p.clone();
                    if next[x].as_ref().is_none_or(|cur| v < *cur) {
                        next[x] = Some(v);
                        split[x] = y;
                    }
                }
            }
        }
        acc = next;
        splits.push(split);
        needs.push(need);
    }
    let Some(best) = acc[target].clone() else { return Ok(None) };
    let mut x = target;
    let mut shares = vec![0; pools.len()];
    for i in (0..pools.len()).rev() {
        let y = splits[i][x];
        shares[i] = needs[i][x - y];
        x = y;
    }
    let choices = pools
        .iter()
        .zip(shares)
        .map(|(c, s)| Ok(c.pool.cheapest_choice(&int(s))?.expect("defined in the table").1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((best, choices)))
}

/// Plurality supporters of each candidate as (price, weight) items, with the source block of
/// every item.
pub fn supporter_pools<T: Int>(e: &Election<T>) -> Result<Vec<(CandidatePool<T>, Vec<usize>)>> {
    let scores = crate::election::score_table(e, &Rule::Plurality)?;
    let mut items: Vec<Vec<Item<T>>> = vec![Vec::new(); e.m()];
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); e.m()];
    for (block, v) in e.unit_voters(UNARY_CAP)? {
        let top = v.ballot.as_order().ok_or(Error::BallotKindMismatch)?.top();
        items[top].push(Item::new(v.price, v.weight));
        blocks[top].push(block);
    }
    items
        .into_iter()
        .zip(blocks)
        .enumerate()
        .map(|(c, (it, bl))| Ok((CandidatePool { score: scores.get(c).clone(), pool: VoterPool::new(it)? }, bl)))
        .collect()
}

/// Max weight bribable from the plurality supporters of `set` within budget `b` leaving each of
/// them at most `r`.
pub fn heaviest_set<T: Int>(e: &Election<T>, set: &[usize], b: &T, r: &T) -> Result<Option<T>> {
    let pools = supporter_pools(e)?;
    let chosen: Vec<_> = set.iter().map(|&c| pools[c].0.clone()).collect();
    heaviest_multi(&chosen, b, r)
}

/// Min price of bribing at least `w` weight from the plurality supporters of `set` leaving each of
/// them at most `r`.
pub fn cheapest_set<T: Int>(e: &Election<T>, set: &[usize], w: &T, r: &T) -> Result<Option<T>> {
    let pools = supporter_pools(e)?;
    let chosen: Vec<_> = set.iter().map(|&c| pools[c].0.clone()).collect();
    cheapest_multi(&chosen, w, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(items: &[(i64, i64)]) -> VoterPool<i64> {
        VoterPool::new(items.iter().map(|&(p, w)| Item::new(p, w)).collect()).unwrap()
    }

    fn cand(items: &[(i64, i64)]) -> CandidatePool<i64> {
        let pool = pool(items);
        CandidatePool { score: pool.total_weight(), pool }
    }

    #[test]
    fn single_pool_examples() {
        let p = pool(&[(10, 10), (7, 7)]);
        assert_eq!(pool(&[]).heaviest(&5).unwrap(), 0);
        assert_eq!(p.heaviest(&9).unwrap(), 7);
        assert_eq!(p.heaviest(&17).unwrap(), 17);
        assert_eq!(p.cheapest(&0).unwrap(), Some(0));
        assert_eq!(p.cheapest(&8).unwrap(), Some(10));
        assert_eq!(p.cheapest(&18).unwrap(), None);
    }

    #[test]
    fn choices_match_values() {
        let p = pool(&[(3, 4), (2, 3), (4, 5), (5, 6)]);
        let (w, idx) = p.heaviest_choice(&5).unwrap();
        assert_eq!(w, 7);
        assert_eq!(idx.iter().map(|&i| p.items()[i].weight).sum::<i64>(), 7);
        let (c, idx) = p.cheapest_choice(&9).unwrap().unwrap();
        assert_eq!(c, 7);
        assert!(idx.iter().map(|&i| p.items()[i].weight).sum::<i64>() >= 9);
    }

    #[test]
    fn multi_examples() {
        let c = cand(&[(10, 10), (7, 7)]);
        assert_eq!(heaviest_multi::<i64>(&[], &3, &0).unwrap(), Some(0));
        assert_eq!(heaviest_multi(std::slice::from_ref(&c), &20, &0).unwrap(), Some(17));
        assert_eq!(heaviest_multi(std::slice::from_ref(&c), &7, &7).unwrap(), None);
        assert_eq!(cheapest_multi::<i64>(&[], &0, &0).unwrap(), Some(0));
        assert_eq!(cheapest_multi(std::slice::from_ref(&c), &7, &10).unwrap(), Some(7));
        assert_eq!(cheapest_multi(&[c], &7, &7).unwrap(), Some(10));
    }
}
