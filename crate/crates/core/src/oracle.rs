//! Exhaustive reference answers for small instances.
//!
//! The search tries every way of bribing every voter, cheapest first. Identical voter blocks are
//! merged and interchangeable replacement ballots are tried once, both of which leave the set of
//! reachable elections unchanged.

use std::collections::{BTreeMap, HashMap};

use crate::bribery::{BribeAction, BriberyQuery, BriberyWitness, Outcome};
use crate::election::{all_orders, winners, ApprovalVector, Ballot, BallotKind, Election, PreferenceOrder, Rule, ScoreKind, VoterBlock};
use crate::error::{Error, Result};
use crate::scalar::{small, Int};

/// Size limits past which the oracle refuses to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_candidates: usize,
    /// Total voters, counting multiplicity.
    pub max_voters: usize,
    /// Largest price or weight.
    pub max_magnitude: u64,
    /// Candidate elections the search may visit.
    pub max_work: u64,
    /// Try every approval vector as a replacement ballot. Off, a rewritten approval ballot
    /// approves only the target, which is never worse for it.
    pub full_approval_universe: bool,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self { max_candidates: 8, max_voters: 64, max_magnitude: 1_000_000_000, max_work: 20_000_000, full_approval_universe: false }
    }
}

/// Whether `w` is a legal bribery for `q` that makes the target win.
pub fn verify_witness<T: Int>(q: &BriberyQuery<T>, w: &BriberyWitness<T>) -> Result<bool> {
    if w.cost(q)? > q.budget {
        return Ok(false);
    }
    if q.variant.negative && w.promotes_target(q) {
        return Ok(false);
    }
    q.target_wins(&w.apply(q)?)
}

/// A cheapest bribery making the target win, or infeasible.
pub fn oracle_bribery<T: Int>(q: &BriberyQuery<T>, caps: &OracleBudget) -> Result<Outcome<T>> {
    let found = Search::new(q, caps, Goal::Win)?.run(false)?;
    Ok(found.into_iter().next().map_or(Outcome::Infeasible, Outcome::Feasible))
}

/// Every cheapest bribery making the target win (empty when infeasible).
pub fn oracle_minimal_witnesses<T: Int>(q: &BriberyQuery<T>, caps: &OracleBudget) -> Result<Vec<BriberyWitness<T>>> {
    Search::new(q, caps, Goal::Win)?.run(true)
}

/// A cheapest bribery after which the target's Dodgson or Young score is at most `t`.
///
/// The query's rule and winner mode are ignored.
pub fn oracle_score_bribery<T: Int>(q: &BriberyQuery<T>, kind: ScoreKind, t: &T, caps: &OracleBudget) -> Result<Outcome<T>> {
    let goal = Goal::Score(kind, t.clone());
    let found = Search::new(q, caps, goal)?.run(false)?;
    Ok(found.into_iter().next().map_or(Outcome::Infeasible, Outcome::Feasible))
}

/// Voters `V`, manipulator weights, and the candidate they push.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationQuery<T> {
    pub election: Election<T>,
    pub rule: Rule<T>,
    pub manipulators: Vec<T>,
    pub target: usize,
    pub unique: bool,
}

impl<T: Int> ManipulationQuery<T> {
    /// The election once manipulators cast `ballots`.
    pub fn with_ballots(&self, ballots: &[Ballot]) -> Result<Election<T>> {
        let mut voters = self.election.voters().to_vec();
        for (b, w) in ballots.iter().zip(&self.manipulators) {
            voters.push(VoterBlock::new(b.clone()).with_weight(w.clone()));
        }
        Election::with_kind(self.election.candidates().to_vec(), self.rule.ballot_kind(), voters)
    }

    pub fn target_wins(&self, e: &Election<T>) -> Result<bool> {
        let w = winners(e, &self.rule)?;
        Ok(if self.unique { w == [self.target] } else { w.contains(&self.target) })
    }
}

/// Ballots for the manipulators making the target win, if any exist.
pub fn oracle_manipulation<T: Int>(q: &ManipulationQuery<T>, caps: &OracleBudget) -> Result<Option<Vec<Ballot>>> {
    let m = q.election.m();
    q.election.check_candidate(q.target)?;
    if m > caps.max_candidates {
        return Err(Error::TooLarge(format!("{m} candidates")));
    }
    let universe = ballot_universe(&q.rule, m, None, (!caps.full_approval_universe).then_some(q.target))?;
    // Equal-weight manipulators are interchangeable: give each weight class a multiset.
    let mut classes: Vec<(T, Vec<usize>)> = Vec::new();
    for (i, w) in q.manipulators.iter().enumerate() {
        match classes.iter_mut().find(|(cw, _)| cw == w) {
            Some((_, members)) => members.push(i),
            None => classes.push((w.clone(), vec![i])),
        }
    }
    let per_class: Vec<Vec<Vec<usize>>> = classes
        .iter()
        .map(|(_, members)| multisets(universe.len(), members.len()))
        .collect();
    let work: u128 = per_class.iter().map(|v| v.len() as u128).product();
    if work > caps.max_work as u128 {
        return Err(Error::TooLarge(format!("{work} manipulator ballot assignments")));
    }
    let mut pick = vec![0usize; per_class.len()];
    loop {
        let mut ballots = vec![None; q.manipulators.len()];
        for (k, (_, members)) in classes.iter().enumerate() {
            for (&voter, &u) in members.iter().zip(&per_class[k][pick[k]]) {
                ballots[voter] = Some(universe[u].clone());
            }
        }
        let ballots: Vec<Ballot> = ballots.into_iter().map(|b| b.expect("every manipulator assigned")).collect();
        if q.target_wins(&q.with_ballots(&ballots)?)? {
            return Ok(Some(ballots));
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(None);
            }
            pick[k] += 1;
            if pick[k] < per_class[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// All multisets of size `k` over `0..n`, as sorted index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Replacement ballots worth trying: one per distinct points vector for order-based score rules,
/// every order for the Condorcet family, every approval vector for approval (or only the one
/// approving `dominant` alone).
fn ballot_universe<T: Int>(
    rule: &Rule<T>,
    m: usize,
    forbid_top: Option<usize>,
    dominant: Option<usize>,
) -> Result<Vec<Ballot>> {
    if rule.ballot_kind() == BallotKind::Approvals {
        if let Some(p) = dominant {
            return Ok(vec![Ballot::Approval(ApprovalVector::only(m, p))]);
        }
        if m > 16 {
            return Err(Error::TooLarge(format!("2^{m} approval vectors")));
        }
        return Ok((0..1u32 << m)
            .map(|mask| Ballot::Approval(ApprovalVector::new((0..m).map(|c| mask >> c & 1 == 1).collect())))
            .collect());
    }
    if m > crate::election::MAX_ENUMERATED_CANDIDATES {
        return Err(Error::TooLarge(format!("{m}! replacement orders")));
    }
    let points = rule.points(m)?;
    let mut seen: Vec<Vec<T>> = Vec::new();
    let mut out = Vec::new();
    for o in all_orders(m) {
        if forbid_top == Some(o.top()) {
            continue;
        }
        if let Some(alpha) = &points {
            let sig = signature(&o, alpha.alpha());
            if seen.contains(&sig) {
                continue;
            }
            seen.push(sig);
        }
        out.push(Ballot::Order(o));
    }
    Ok(out)
}

fn signature<T: Int>(o: &PreferenceOrder, alpha: &[T]) -> Vec<T> {
    let mut pts = vec![T::zero(); o.len()];
    for (rank, &c) in o.ranking().iter().enumerate() {
        pts[c] = alpha[rank].clone();
    }
    pts
}

enum Goal<T> {
    Win,
    Score(ScoreKind, T),
}

/// Per merged block, a multiset of actions as (action index, count).
type Multiset<T> = Vec<(usize, T)>;

struct MergedBlock<T> {
    voter: VoterBlock<T>,
    /// Original block indices with their multiplicities.
    members: Vec<(usize, T)>,
    actions: Vec<BribeAction>,
    /// Options grouped by total price, cheapest group first.
    groups: Vec<(T, Vec<Multiset<T>>)>,
}

struct Search<'a, T> {
    q: &'a BriberyQuery<T>,
    caps: &'a OracleBudget,
    goal: Goal<T>,
    e: Election<T>,
    blocks: Vec<MergedBlock<T>>,
    /// Points vector per candidate for score-based win checks, when available.
    fast: Option<FastScores<T>>,
    memo: HashMap<Vec<(Ballot, T, T)>, bool>,
    work: u64,
}

struct FastScores<T> {
    base: Vec<T>,
    /// Per block, per action: the score change of rebribing one voter.
    delta: Vec<Vec<Vec<T>>>,
}

impl<'a, T: Int> Search<'a, T> {
    fn new(q: &'a BriberyQuery<T>, caps: &'a OracleBudget, goal: Goal<T>) -> Result<Self> {
        let e = q.normalized()?;
        let m = e.m();
        if m > caps.max_candidates {
            return Err(Error::TooLarge(format!("{m} candidates")));
        }
        small(&e.total_voters(), caps.max_voters, "voter count")?;
        let magnitude = |x: &T| x.to_u64().is_some_and(|v| v <= caps.max_magnitude);
        for v in e.voters() {
            let flips = v.flip_prices.iter().flatten();
            if !magnitude(&v.price) || !magnitude(&v.weight) || !flips.into_iter().all(magnitude) {
                return Err(Error::TooLarge("price or weight beyond the oracle cap".into()));
            }
        }
        let mut merged: Vec<MergedBlock<T>> = Vec::new();
        for (i, v) in e.voters().iter().enumerate() {
            let key = v.clone().with_multiplicity(T::one());
            match merged.iter_mut().find(|b| b.voter == key) {
                Some(b) => b.members.push((i, v.multiplicity.clone())),
                None => merged.push(MergedBlock {
                    voter: key,
                    members: vec![(i, v.multiplicity.clone())],
                    actions: Vec::new(),
                    groups: Vec::new(),
                }),
            }
        }
        let rewrites = if q.variant.approval_flip {
            Vec::new()
        } else {
            let forbid = q.variant.negative.then_some(q.target);
            ballot_universe(&q.rule, m, forbid, (!caps.full_approval_universe).then_some(q.target))?.into_iter().map(BribeAction::Rewrite).collect()
        };
        let mut search = Self { q, caps, goal, e, blocks: Vec::new(), fast: None, memo: HashMap::new(), work: 0 };
        for mut b in merged {
            b.actions = if q.variant.approval_flip {
                (1..1u32 << m).map(|mask| BribeAction::Flip((0..m).filter(|c| mask >> c & 1 == 1).collect())).collect()
            } else {
                rewrites.clone()
            };
            let size: T = b.members.iter().map(|(_, n)| n.clone()).sum();
            b.groups = search.options(&b.voter, &b.actions, &size)?;
            search.blocks.push(b);
        }
        if matches!(search.goal, Goal::Win) && q.rule.is_score_based() {
            search.fast = Some(search.fast_scores()?);
        }
        Ok(search)
    }

    fn action_price(&self, v: &VoterBlock<T>, a: &BribeAction) -> T {
        match a {
            BribeAction::Rewrite(_) => v.price.clone(),
            BribeAction::Flip(entries) => entries.iter().map(|&c| v.flip_price(c)).sum(),
        }
    }

    /// Every affordable multiset of at most `size` actions, grouped by price.
    fn options(&mut self, v: &VoterBlock<T>, actions: &[BribeAction], size: &T) -> Result<Vec<(T, Vec<Multiset<T>>)>> {
        let prices: Vec<T> = actions.iter().map(|a| self.action_price(v, a)).collect();
        let mut groups: BTreeMap<T, Vec<Multiset<T>>> = BTreeMap::new();
        let mut cur: Multiset<T> = Vec::new();
        self.grow(&prices, 0, size.clone(), self.q.budget.clone(), T::zero(), &mut cur, &mut groups)?;
        Ok(groups.into_iter().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &mut self,
        prices: &[T],
        from: usize,
        room: T,
        budget: T,
        spent: T,
        cur: &mut Multiset<T>,
        out: &mut BTreeMap<T, Vec<Multiset<T>>>,
    ) -> Result<()> {
        self.tick()?;
        out.entry(spent.clone()).or_default().push(cur.clone());
        for a in from..prices.len() {
            // Up to `room` more copies of action `a`, within budget.
            let mut n = T::one();
            while n <= room {
                let cost = prices[a].clone() * n.clone();
                if cost > budget {
                    break;
                }
                cur.push((a, n.clone()));
                self.grow(prices, a + 1, room.clone() - n.clone(), budget.clone() - cost.clone(), spent.clone() + cost, cur, out)?;
                cur.pop();
                n = n + T::one();
            }
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > self.caps.max_work {
            return Err(Error::TooLarge(format!("oracle work exceeds {}", self.caps.max_work)));
        }
        Ok(())
    }

    fn fast_scores(&self) -> Result<FastScores<T>> {
        let m = self.e.m();
        let points = |b: &Ballot| -> Result<Vec<T>> {
            Ok(match b {
                Ballot::Approval(a) => (0..m).map(|c| if a.approves(c) { T::one() } else { T::zero() }).collect(),
                Ballot::Order(o) => {
                    let alpha = self.q.rule.points(m)?.ok_or(Error::BallotKindMismatch)?;
                    signature(o, alpha.alpha())
                }
            })
        };
        let base = crate::election::score_table(&self.e, &self.q.rule)?.into_inner();
        let mut delta = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let old = points(&b.voter.ballot)?;
            let mut per = Vec::with_capacity(b.actions.len());
            for a in &b.actions {
                let new = match a {
                    BribeAction::Rewrite(ballot) => points(ballot)?,
                    BribeAction::Flip(entries) => {
                        points(&Ballot::Approval(b.voter.ballot.as_approval().expect("approval").flipped(entries)))?
                    }
                };
                per.push(new.iter().zip(&old).map(|(n, o)| (n.clone() - o.clone()) * b.voter.weight.clone()).collect());
            }
            delta.push(per);
        }
        Ok(FastScores { base, delta })
    }

    /// Witnesses in ascending price; with `all`, every one at the cheapest successful price.
    fn run(mut self, all: bool) -> Result<Vec<BriberyWitness<T>>> {
        // Price-group choice per block, cheapest totals first.
        let mut shapes: Vec<(T, Vec<usize>)> = Vec::new();
        let mut cur = Vec::with_capacity(self.blocks.len());
        self.shapes(0, T::zero(), &mut cur, &mut shapes)?;
        shapes.sort();
        let mut found = Vec::new();
        let mut best: Option<T> = None;
        for (cost, shape) in shapes {
            if best.as_ref().is_some_and(|b| cost > *b) {
                break;
            }
            let mut pick = vec![0usize; shape.len()];
            loop {
                self.tick()?;
                let owned: Vec<Multiset<T>> =
                    (0..shape.len()).map(|b| self.blocks[b].groups[shape[b]].1[pick[b]].clone()).collect();
                let chosen: Vec<&Multiset<T>> = owned.iter().collect();
                if self.succeeds(&chosen)? {
                    found.push(self.witness(&chosen));
                    if !all {
                        return Ok(found);
                    }
                    best = Some(cost.clone());
                }
                let mut b = 0;
                loop {
                    if b == pick.len() {
                        break;
                    }
                    pick[b] += 1;
                    if pick[b] < self.blocks[b].groups[shape[b]].1.len() {
                        break;
                    }
                    pick[b] = 0;
                    b += 1;
                }
                if b == pick.len() {
                    break;
                }
            }
        }
        Ok(found)
    }

    fn shapes(&mut self, b: usize, spent: T, cur: &mut Vec<usize>, out: &mut Vec<(T, Vec<usize>)>) -> Result<()> {
        if b == self.blocks.len() {
            self.tick()?;
            out.push((spent, cur.clone()));
            return Ok(());
        }
        for g in 0..self.blocks[b].groups.len() {
            let total = spent.clone() + self.blocks[b].groups[g].0.clone();
            if total > self.q.budget {
                break;
            }
            cur.push(g);
            self.shapes(b + 1, total, cur, out)?;
            cur.pop();
        }
        Ok(())
    }

    fn succeeds(&mut self, chosen: &[&Multiset<T>]) -> Result<bool> {
        if let Some(fast) = &self.fast {
            let mut scores = fast.base.clone();
            for (b, ms) in chosen.iter().enumerate() {
                for (a, n) in ms.iter() {
                    for (s, d) in scores.iter_mut().zip(&fast.delta[b][*a]) {
                        *s = s.clone() + d.clone() * n.clone();
                    }
                }
            }
            return Ok(crate::bribery::scores_elect(&scores, self.q.target, self.q.variant.unique));
        }
        let profile = self.profile(chosen);
        if let Some(&hit) = self.memo.get(&profile) {
            return Ok(hit);
        }
        let voters = profile
            .iter()
            .map(|(ballot, w, n)| VoterBlock::new(ballot.clone()).with_weight(w.clone()).with_multiplicity(n.clone()))
            .collect();
        let after = self.e.with_voters(voters)?;
        let hit = match &self.goal {
            Goal::Win => self.q.target_wins(&after)?,
            Goal::Score(kind, t) => kind.score(&after, self.q.target)?.is_some_and(|s| s <= *t),
        };
        self.memo.insert(profile, hit);
        Ok(hit)
    }

    /// The bribed electorate as sorted (ballot, weight, count) triples.
    fn profile(&self, chosen: &[&Multiset<T>]) -> Vec<(Ballot, T, T)> {
        let mut tally: BTreeMap<(Ballot, T), T> = BTreeMap::new();
        let mut add = |ballot: Ballot, w: &T, n: T| {
            let e = tally.entry((ballot, w.clone())).or_insert_with(T::zero);
            *e = e.clone() + n;
        };
        for (b, ms) in chosen.iter().enumerate() {
            let blk = &self.blocks[b];
            let size: T = blk.members.iter().map(|(_, n)| n.clone()).sum();
            let moved: T = ms.iter().map(|(_, n)| n.clone()).sum();
            add(blk.voter.ballot.clone(), &blk.voter.weight, size - moved);
            for (a, n) in ms.iter() {
                let ballot = match &blk.actions[*a] {
                    BribeAction::Rewrite(ballot) => ballot.clone(),
                    BribeAction::Flip(entries) => {
                        Ballot::Approval(blk.voter.ballot.as_approval().expect("approval").flipped(entries))
                    }
                };
                add(ballot, &blk.voter.weight, n.clone());
            }
        }
        tally.into_iter().filter(|(_, n)| n.is_positive()).map(|((b, w), n)| (b, w, n)).collect()
    }

    /// Spreads each merged block's bribes over its original blocks in order.
    fn witness(&self, chosen: &[&Multiset<T>]) -> BriberyWitness<T> {
        let mut w = BriberyWitness::empty();
        for (b, ms) in chosen.iter().enumerate() {
            let blk = &self.blocks[b];
            let mut members = blk.members.iter().map(|(i, n)| (*i, n.clone())).collect::<Vec<_>>().into_iter();
            let mut slot = members.next();
            for (a, n) in ms.iter() {
                let mut need = n.clone();
                while need.is_positive() {
                    let (i, left) = slot.as_mut().expect("block sizes cover the multiset");
                    let take = std::cmp::min(left.clone(), need.clone());
                    if take.is_positive() {
                        w.push(*i, take.clone(), blk.actions[*a].clone());
                    }
                    *left = left.clone() - take.clone();
                    need = need - take;
                    if !left.is_positive() {
                        slot = members.next();
                    }
                }
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::Variant;
    use crate::election::ScoringProtocol;

    fn caps() -> OracleBudget {
        OracleBudget::default()
    }

    fn tops(m: usize, votes: &[(usize, i64)]) -> Election<i64> {
        Election::lettered(m, votes.iter().map(|&(c, w)| VoterBlock::new(PreferenceOrder::with_top(m, c)).with_weight(w)).collect())
            .unwrap()
    }

    #[test]
    fn zero_budget_means_current_winner() {
        let e = tops(2, &[(0, 1), (1, 1)]);
        let q = BriberyQuery::new(e.clone(), Rule::Plurality, 1, 0, Variant::default()).unwrap();
        assert_eq!(oracle_bribery(&q, &caps()).unwrap(), Outcome::Feasible(BriberyWitness::empty()));
        let q = q.with_unique(true);
        assert_eq!(oracle_bribery(&q, &caps()).unwrap(), Outcome::Infeasible);
    }

    #[test]
    fn witness_is_cheapest() {
        // a=0 has voters priced 5 and 1; p=1 has one priced 9.
        let e = Election::lettered(
            2,
            vec![
                VoterBlock::new(PreferenceOrder::with_top(2, 0)).with_price(5),
                VoterBlock::new(PreferenceOrder::with_top(2, 0)).with_price(1),
                VoterBlock::new(PreferenceOrder::with_top(2, 1)).with_price(9),
            ],
        )
        .unwrap();
        let q = BriberyQuery::new(e, Rule::Plurality, 1, 9, Variant { priced: true, ..Variant::default() }).unwrap();
        let w = oracle_bribery(&q, &caps()).unwrap().witness().cloned().unwrap();
        assert_eq!(w.cost(&q).unwrap(), 1);
        assert!(verify_witness(&q, &w).unwrap());
    }

    #[test]
    fn verify_rejects_overspending_and_negative_promotion() {
        let e = tops(2, &[(0, 1), (0, 1)]);
        let q = BriberyQuery::new(e.clone(), Rule::Plurality, 1, 0, Variant::default()).unwrap();
        let mut w = BriberyWitness::empty();
        w.push(0, 1, BribeAction::Rewrite(Ballot::Order(PreferenceOrder::with_top(2, 1))));
        assert!(!verify_witness(&q, &w).unwrap());
        assert!(verify_witness(&q.clone().with_budget(1), &w).unwrap());
        let neg = BriberyQuery::new(e, Rule::Plurality, 1, 5, Variant { negative: true, ..Variant::default() }).unwrap();
        assert!(!verify_witness(&neg, &w).unwrap());
        let mut bad = BriberyWitness::empty();
        bad.push(7, 1, BribeAction::Rewrite(Ballot::Order(PreferenceOrder::with_top(2, 1))));
        assert!(verify_witness(&neg, &bad).is_err());
    }

    #[test]
    fn multiplicity_is_bribed_by_count() {
        let e = Election::lettered(2, vec![VoterBlock::new(PreferenceOrder::with_top(2, 0)).with_multiplicity(5)]).unwrap();
        let q = BriberyQuery::new(e, Rule::Plurality, 1, 3, Variant::default()).unwrap();
        let w = oracle_bribery(&q, &caps()).unwrap().witness().cloned().unwrap();
        assert_eq!(w.bribed(), 3);
    }

    #[test]
    fn borda_manipulation() {
        // a=0, b=1, p=2
        let e = Election::lettered(3, vec![VoterBlock::new(PreferenceOrder::new(vec![0, 1, 2]).unwrap())]).unwrap();
        let mq = ManipulationQuery {
            election: e.clone(),
            rule: Rule::Scoring(ScoringProtocol::borda(3)),
            manipulators: vec![1i64],
            target: 2,
            unique: false,
        };
        assert!(oracle_manipulation(&mq, &caps()).unwrap().is_some());
        let none = ManipulationQuery { manipulators: vec![], ..mq.clone() };
        assert!(oracle_manipulation(&none, &caps()).unwrap().is_none());
        let alone = ManipulationQuery { unique: true, ..mq };
        assert!(oracle_manipulation(&alone, &caps()).unwrap().is_none());
    }

    #[test]
    fn approval_manipulators_approve_only_the_target() {
        let e = Election::lettered(
            2,
            vec![VoterBlock::new(ApprovalVector::new(vec![true, false])).with_multiplicity(2)],
        )
        .unwrap();
        let mq = ManipulationQuery { election: e, rule: Rule::Approval, manipulators: vec![1i64, 1], target: 1, unique: false };
        let ballots = oracle_manipulation(&mq, &caps()).unwrap().unwrap();
        assert!(ballots.iter().all(|b| b.as_approval().unwrap().approves(1)));
    }

    #[test]
    fn caps_are_enforced() {
        let e = tops(2, &[(0, 1)]);
        let q = BriberyQuery::new(e, Rule::Plurality, 1, 1, Variant::default()).unwrap();
        let tight = OracleBudget { max_candidates: 1, ..caps() };
        assert!(matches!(oracle_bribery(&q, &tight), Err(Error::TooLarge(_))));
    }

    #[test]
    fn approving_only_the_target_loses_nothing() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let cfg = crate::crosscheck::InstanceConfig { max_candidates: 4, ..Default::default() };
        let full = OracleBudget { full_approval_universe: true, ..caps() };
        let mut seen = 0;
        while seen < 150 {
            let q = crate::crosscheck::random_query(&mut rng, &cfg);
            if q.rule != Rule::Approval || q.variant.approval_flip {
                continue;
            }
            seen += 1;
            assert_eq!(oracle_bribery(&q, &caps()).unwrap().is_feasible(), oracle_bribery(&q, &full).unwrap().is_feasible());
            let mq = ManipulationQuery { election: q.normalized().unwrap(), rule: Rule::Approval, manipulators: vec![1, 2], target: q.target, unique: q.variant.unique };
            assert_eq!(oracle_manipulation(&mq, &caps()).unwrap().is_some(), oracle_manipulation(&mq, &full).unwrap().is_some());
        }
    }
}
