use super::{IlpModel, OrderTables, Relation};
use crate::bribery::{BribeAction, BriberyQuery, BriberyWitness};
use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::scalar::{int, Int};

/// Largest candidate count the models are built for; they have `(m!)²` variables per family.
pub const MAX_MODEL_CANDIDATES: usize = 3;

/// An affine expression `constant + Σ coeff · x_var`.
#[derive(Clone, Debug)]
struct Lin<T> {
    terms: Vec<(usize, T)>,
    constant: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Goal<T> {
    Scoring,
    Dodgson(T),
    Young(T),
    Kemeny(usize),
}

/// A model plus what is needed to read a bribery back out of its solutions.
#[derive(Clone, Debug)]
pub struct BriberyModel<T> {
    pub model: IlpModel<T>,
    tables: OrderTables,
    target: usize,
    goal: Goal<T>,
    /// Voters per order before bribery.
    counts: Vec<T>,
    /// `(block, multiplicity)` per order.
    blocks: Vec<Vec<(usize, T)>>,
    /// `b[i][j]`: voters moved from order `i` to order `j`; absent when nobody can be bribed.
    b: Vec<Vec<Option<usize>>>,
    /// Dodgson swap phase, `s[i][j]`.
    s: Vec<Vec<Option<usize>>>,
    /// Young removals per order.
    r: Vec<Option<usize>>,
}

/// A decoded solution of a score model: the bribery, then the swaps or removals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreDecoding<T> {
    pub witness: BriberyWitness<T>,
    /// `(from order, to order, voters)`.
    pub moves: Vec<(usize, usize, T)>,
    /// `(order, voters removed)`.
    pub removals: Vec<(usize, T)>,
    /// Swaps or removals used.
    pub cost: T,
    /// Voters per order at the end.
    pub profile: Vec<T>,
}

struct Setup<T> {
    tables: OrderTables,
    counts: Vec<T>,
    blocks: Vec<Vec<(usize, T)>>,
    total: T,
}

fn setup<T: Int>(q: &BriberyQuery<T>) -> Result<Setup<T>> {
    let m = q.m();
    if m > MAX_MODEL_CANDIDATES {
        return Err(Error::TooLarge(format!("integer models are built for at most {MAX_MODEL_CANDIDATES} candidates")));
    }
    if q.election.kind() != BallotKind::Orders {
        return Err(Error::BallotKindMismatch);
    }
    if q.variant.priced || q.variant.negative || q.variant.approval_flip {
        return Err(Error::Unsupported("integer models cover plain bribery".into()));
    }
    let e = q.normalized()?;
    if e.voters().iter().any(|v| !v.weight.is_one()) {
        return Err(Error::Unsupported("integer models need unit weights".into()));
    }
    let tables = OrderTables::new(m)?;
    let mut counts = vec![T::zero(); tables.len()];
    let mut blocks = vec![Vec::new(); tables.len()];
    for (b, v) in e.voters().iter().enumerate() {
        let o = v.ballot.as_order().ok_or(Error::BallotKindMismatch)?;
        let i = tables.index_of(o).expect("every order is tabled");
        counts[i] = counts[i].clone() + v.multiplicity.clone();
        blocks[i].push((b, v.multiplicity.clone()));
    }
    let total = e.total_voters();
    Ok(Setup { tables, counts, blocks, total })
}

impl<T: Int> BriberyModel<T> {
    fn start(q: &BriberyQuery<T>, goal: Goal<T>) -> Result<(Self, Vec<Lin<T>>)> {
        let Setup { tables, counts, blocks, .. } = setup(q)?;
        let n = tables.len();
        let mut model = IlpModel::new();
        let mut b = vec![vec![None; n]; n];
        let mut after: Vec<Lin<T>> = counts.iter().map(|c| Lin { terms: Vec::new(), constant: c.clone() }).collect();
        if q.budget.is_positive() {
            for lin in after.iter_mut() {
                lin.constant = T::zero();
            }
            let mut moved = Vec::new();
            for i in 0..n {
                if counts[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = model.bounded(format!("b_{i}_{j}"), T::zero(), counts[i].clone());
                    b[i][j] = Some(v);
                    after[j].terms.push((v, T::one()));
                    if i != j {
                        moved.push((v, T::one()));
                    }
                }
                model.add_constraint(
                    (0..n).map(|j| (b[i][j].expect("created"), T::one())).collect(),
                    Relation::Eq,
                    counts[i].clone(),
                );
            }
            model.add_constraint(moved, Relation::Le, q.budget.clone());
        }
        let bm = Self {
            model,
            tables,
            target: q.target,
            goal,
            counts,
            blocks,
            b,
            s: vec![vec![None; n]; n],
            r: vec![None; n],
        };
        Ok((bm, after))
    }

    /// `Σ (coeff · lin) >= rhs` over affine pieces.
    fn at_least(&mut self, parts: Vec<(T, &Lin<T>)>, extra: Vec<(usize, T)>, rhs: T) {
        let mut terms = extra;
        let mut rhs = rhs;
        for (k, lin) in parts {
            if k.is_zero() {
                continue;
            }
            terms.extend(lin.terms.iter().map(|(v, a)| (*v, a.clone() * k.clone())));
            rhs = rhs - k * lin.constant.clone();
        }
        self.model.add_constraint(terms, Relation::Ge, rhs);
    }

    fn val(x: &[T], v: Option<usize>) -> T {
        v.map_or_else(T::zero, |v| x[v].clone())
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// The consensus order a Kemeny model fixes.
    pub fn consensus(&self) -> Option<usize> {
        match self.goal {
            Goal::Kemeny(h) => Some(h),
            _ => None,
        }
    }

    pub fn tables(&self) -> &OrderTables {
        &self.tables
    }

    /// Voters per order after the bribery phase.
    pub fn bribed_profile(&self, x: &[T]) -> Vec<T> {
        let n = self.tables.len();
        (0..n)
            .map(|j| {
                if self.b.iter().all(|row| row[j].is_none()) {
                    self.counts[j].clone()
                } else {
                    (0..n).map(|i| Self::val(x, self.b[i][j])).sum()
                }
            })
            .collect()
    }

    /// The bribery phase of a solution as a witness over the query's blocks.
    pub fn decode_bribery(&self, x: &[T]) -> BriberyWitness<T> {
        let n = self.tables.len();
        let mut w = BriberyWitness::empty();
        for i in 0..n {
            let mut blocks = self.blocks[i].iter().cloned();
            let mut slot = blocks.next();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut need = Self::val(x, self.b[i][j]);
                while need.is_positive() {
                    let (blk, left) = slot.as_mut().expect("moves bounded by the order's voters");
                    let take = need.clone().min(left.clone());
                    w.push(*blk, take.clone(), BribeAction::Rewrite(self.tables.orders()[j].clone().into()));
                    need = need - take.clone();
                    *left = left.clone() - take;
                    if left.is_zero() {
                        slot = blocks.next();
                    }
                }
            }
        }
        w
    }

    /// Decodes a Dodgson or Young solution and checks it: the target must be the Condorcet winner
    /// of the final profile within the allowed swaps or removals.
    pub fn decode_score(&self, x: &[T]) -> Result<ScoreDecoding<T>> {
        let n = self.tables.len();
        let mid = self.bribed_profile(x);
        let mut moves = Vec::new();
        let mut removals = Vec::new();
        let (profile, cost, limit) = match &self.goal {
            Goal::Dodgson(t) => {
                let mut profile = vec![T::zero(); n];
                let mut cost = T::zero();
                for i in 0..n {
                    let mut row = T::zero();
                    for j in 0..n {
                        let k = Self::val(x, self.s[i][j]);
                        row = row + k.clone();
                        profile[j] = profile[j].clone() + k.clone();
                        cost = cost + k.clone() * int(self.tables.switches(i, j));
                        if i != j && k.is_positive() {
                            moves.push((i, j, k));
                        }
                    }
                    if row != mid[i] {
                        return Err(Error::MalformedWitness(format!("swap phase moves {row} voters of order {i}, not {}", mid[i])));
                    }
                }
                (profile, cost, t.clone())
            }
            Goal::Young(t) => {
                let mut profile = mid.clone();
                let mut cost = T::zero();
                for i in 0..n {
                    let k = Self::val(x, self.r[i]);
                    if k > mid[i] {
                        return Err(Error::MalformedWitness(format!("removes more voters than order {i} has")));
                    }
                    profile[i] = profile[i].clone() - k.clone();
                    cost = cost + k.clone();
                    if k.is_positive() {
                        removals.push((i, k));
                    }
                }
                (profile, cost, t.clone())
            }
            _ => return Err(Error::Unsupported("not a score model".into())),
        };
        if cost > limit {
            return Err(Error::MalformedWitness(format!("uses {cost} steps, allowed {limit}")));
        }
        let p = self.target;
        for q in (0..self.tables.m()).filter(|&q| q != p) {
            let net: T = (0..n).map(|j| profile[j].clone() * T::from_i64(self.tables.who(p, q, j)).expect("sign")).sum();
            if !net.is_positive() {
                return Err(Error::MalformedWitness(format!("target does not beat candidate {q}")));
            }
        }
        Ok(ScoreDecoding { witness: self.decode_bribery(x), moves, removals, cost, profile })
    }

    /// The election the bribery phase of a solution produces, one block per order.
    pub fn bribed_election(&self, e: &Election<T>, x: &[T]) -> Result<Election<T>> {
        profile_election(e, &self.tables, &self.bribed_profile(x))
    }
}

/// An election with `counts[i]` unit voters casting order `i`.
pub(crate) fn profile_election<T: Int>(e: &Election<T>, tables: &OrderTables, counts: &[T]) -> Result<Election<T>> {
    use crate::election::VoterBlock;
    let voters = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, c)| VoterBlock::new(tables.orders()[i].clone()).with_multiplicity(c.clone()))
        .collect();
    Election::with_kind(e.candidates().to_vec(), BallotKind::Orders, voters)
}

/// Plain bribery under the scoring protocol `alpha`: the target's points must reach every
/// rival's, strictly in unique mode.
pub fn build_scoring_bribery_model<T: Int>(q: &BriberyQuery<T>, alpha: &[T]) -> Result<BriberyModel<T>> {
    if alpha.len() != q.m() {
        return Err(Error::InvalidProtocol(format!("{} entries for {} candidates", alpha.len(), q.m())));
    }
    let (mut bm, after) = BriberyModel::start(q, Goal::Scoring)?;
    let p = q.target;
    let margin = if q.variant.unique { T::one() } else { T::zero() };
    for c in (0..q.m()).filter(|&c| c != p) {
        let parts = (0..bm.tables.len())
            .map(|j| (alpha[bm.tables.wh(p, j)].clone() - alpha[bm.tables.wh(c, j)].clone(), &after[j]))
            .collect();
        bm.at_least(parts, Vec::new(), margin.clone());
    }
    Ok(bm)
}

/// Bribe at most `k` voters so that the target's Dodgson score is at most `t`.
pub fn build_dodgson_score_bribery_model<T: Int>(q: &BriberyQuery<T>, t: &T) -> Result<BriberyModel<T>> {
    if t.is_negative() {
        return Err(Error::InvalidVoter("negative score bound".into()));
    }
    let (mut bm, after) = BriberyModel::start(q, Goal::Dodgson(t.clone()))?;
    let n = bm.tables.len();
    let total = setup(q)?.total;
    let mut cost = Vec::new();
    for i in 0..n {
        if after[i].terms.is_empty() && after[i].constant.is_zero() {
            continue;
        }
        let mut row = Vec::new();
        for j in 0..n {
            let sw = int::<T>(bm.tables.switches(i, j));
            if sw > *t {
                continue;
            }
            let v = bm.model.bounded(format!("s_{i}_{j}"), T::zero(), total.clone());
            bm.s[i][j] = Some(v);
            row.push((v, T::one()));
            if sw.is_positive() {
                cost.push((v, sw));
            }
        }
        // swap-phase rows use exactly the voters the bribery left on order i
        let mut terms = row;
        terms.extend(after[i].terms.iter().map(|(v, a)| (*v, -a.clone())));
        bm.model.add_constraint(terms, Relation::Eq, after[i].constant.clone());
    }
    let p = q.target;
    for r in (0..q.m()).filter(|&r| r != p) {
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if let Some(v) = bm.s[i][j] {
                    terms.push((v, T::from_i64(bm.tables.who(p, r, j)).expect("sign")));
                }
            }
        }
        bm.model.add_strict_gt(terms, T::zero());
    }
    bm.model.add_constraint(cost, Relation::Le, t.clone());
    Ok(bm)
}

/// Bribe at most `k` voters so that removing at most `t` makes the target the Condorcet winner.
pub fn build_young_score_bribery_model<T: Int>(q: &BriberyQuery<T>, t: &T) -> Result<BriberyModel<T>> {
    if t.is_negative() {
        return Err(Error::InvalidVoter("negative score bound".into()));
    }
    let (mut bm, after) = BriberyModel::start(q, Goal::Young(t.clone()))?;
    let n = bm.tables.len();
    let total = setup(q)?.total;
    let mut all = Vec::new();
    for i in 0..n {
        if after[i].terms.is_empty() && after[i].constant.is_zero() {
            continue;
        }
        let v = bm.model.bounded(format!("r_{i}"), T::zero(), total.clone().min(t.clone()));
        bm.r[i] = Some(v);
        all.push((v, T::one()));
        bm.at_least(vec![(T::one(), &after[i])], vec![(v, -T::one())], T::zero());
    }
    let p = q.target;
    for c in (0..q.m()).filter(|&c| c != p) {
        let mut parts = Vec::new();
        let mut extra = Vec::new();
        for j in 0..n {
            let sign = T::from_i64(bm.tables.who(p, c, j)).expect("sign");
            parts.push((sign.clone(), &after[j]));
            if let Some(v) = bm.r[j] {
                extra.push((v, -sign));
            }
        }
        bm.at_least(parts, extra, T::one());
    }
    bm.model.add_constraint(all, Relation::Le, t.clone());
    Ok(bm)
}

/// One model per order with the target on top, each asking that order to be a Kemeny
/// consensus after the bribery (the only consensus family with the target on top, in unique mode).
pub fn build_kemeny_bribery_models<T: Int>(q: &BriberyQuery<T>) -> Result<Vec<BriberyModel<T>>> {
    let tables = setup(q)?.tables;
    let n = tables.len();
    let mut out = Vec::new();
    for h in (0..n).filter(|&h| tables.orders()[h].top() == q.target) {
        let (mut bm, after) = BriberyModel::start(q, Goal::Kemeny(h))?;
        for l in (0..n).filter(|&l| l != h) {
            let parts = (0..n).map(|i| (int::<T>(tables.agree(i, h)) - int::<T>(tables.agree(i, l)), &after[i])).collect();
            let strict = q.variant.unique && tables.orders()[l].top() != q.target;
            bm.at_least(parts, Vec::new(), if strict { T::one() } else { T::zero() });
        }
        out.push(bm);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::Variant;
    use crate::election::{PreferenceOrder, Rule, VoterBlock};
    use crate::ilp::ilp_feasible;
    use crate::oracle::verify_witness;

    fn ord(r: &[usize]) -> VoterBlock<i64> {
        VoterBlock::new(PreferenceOrder::new(r.to_vec()).unwrap())
    }

    fn cycle() -> Election<i64> {
        Election::lettered(3, vec![ord(&[0, 1, 2]), ord(&[1, 2, 0]), ord(&[2, 0, 1])]).unwrap()
    }

    fn query(e: Election<i64>, rule: Rule<i64>, target: usize, k: i64) -> BriberyQuery<i64> {
        BriberyQuery::new(e, rule, target, k, Variant::default()).unwrap()
    }

    #[test]
    fn scoring_model_examples() {
        let winning = query(Election::lettered(2, vec![ord(&[0, 1])]).unwrap(), Rule::Plurality, 0, 0);
        let bm = build_scoring_bribery_model(&winning, &[1, 0]).unwrap();
        assert!(ilp_feasible(&bm.model).unwrap().is_some());
        let losing = query(Election::lettered(2, vec![ord(&[1, 0])]).unwrap(), Rule::Plurality, 0, 0);
        assert!(ilp_feasible(&build_scoring_bribery_model(&losing, &[1, 0]).unwrap().model).unwrap().is_none());
        let borda = query(Election::lettered(3, vec![ord(&[0, 1, 2]).with_multiplicity(2)]).unwrap(), Rule::Scoring(crate::ScoringProtocol::borda(3)), 2, 1);
        let bm = build_scoring_bribery_model(&borda, &[2, 1, 0]).unwrap();
        let x = ilp_feasible(&bm.model).unwrap().unwrap();
        assert!(verify_witness(&borda, &bm.decode_bribery(&x)).unwrap());
    }

    #[test]
    fn dodgson_cycle() {
        let q = query(cycle(), Rule::Dodgson, 0, 0);
        assert!(ilp_feasible(&build_dodgson_score_bribery_model(&q, &0).unwrap().model).unwrap().is_none());
        let bm = build_dodgson_score_bribery_model(&q, &1).unwrap();
        let x = ilp_feasible(&bm.model).unwrap().unwrap();
        let d = bm.decode_score(&x).unwrap();
        assert_eq!(d.cost, 1);
        assert!(d.witness.bribes.is_empty());
    }

    #[test]
    fn young_cycle() {
        let q = query(cycle(), Rule::Young, 0, 0);
        assert!(ilp_feasible(&build_young_score_bribery_model(&q, &1).unwrap().model).unwrap().is_none());
        let bm = build_young_score_bribery_model(&q, &2).unwrap();
        let x = ilp_feasible(&bm.model).unwrap().unwrap();
        assert_eq!(bm.decode_score(&x).unwrap().cost, 2);
    }

    #[test]
    fn kemeny_models() {
        let unanimous = query(Election::lettered(3, vec![ord(&[0, 1, 2]).with_multiplicity(3)]).unwrap(), Rule::Kemeny, 0, 0);
        let models = build_kemeny_bribery_models(&unanimous).unwrap();
        assert_eq!(models.len(), 2);
        assert!(models.iter().any(|bm| ilp_feasible(&bm.model).unwrap().is_some()));
        let last = query(Election::lettered(3, vec![ord(&[1, 2, 0])]).unwrap(), Rule::Kemeny, 0, 1);
        let found = build_kemeny_bribery_models(&last)
            .unwrap()
            .into_iter()
            .find_map(|bm| ilp_feasible(&bm.model).unwrap().map(|x| bm.decode_bribery(&x)))
            .unwrap();
        assert!(verify_witness(&last, &found).unwrap());
    }

    #[test]
    fn refuses_weights_and_large_m() {
        let heavy = BriberyQuery::new(
            Election::lettered(2, vec![ord(&[0, 1]).with_weight(2)]).unwrap(),
            Rule::Plurality,
            0,
            0,
            Variant { weighted: true, ..Variant::default() },
        )
        .unwrap();
        assert!(build_scoring_bribery_model(&heavy, &[1, 0]).is_err());
        let four = query(Election::lettered(4, vec![ord(&[0, 1, 2, 3])]).unwrap(), Rule::Kemeny, 0, 0);
        assert!(matches!(build_kemeny_bribery_models(&four), Err(Error::TooLarge(_))));
    }
}
