//! Bribery queries, witnesses, and the polynomial-time solvers.

mod approval;
mod dichotomy;
mod plurality;
mod scoring;
mod veto;

pub use approval::{solve_approval_flip, solve_approval_flip_unary_prices, solve_approval_flip_unary_weights};
pub use dichotomy::{classify_dichotomy, Complexity, DichotomyVerdict, Justification, ProtocolVariant};
pub use plurality::{
    solve_plurality_basic, solve_plurality_negative_priced, solve_plurality_priced,
    solve_plurality_unary_prices, solve_plurality_unary_weights, solve_plurality_weighted,
};
pub use scoring::{solve_scoring_priced, solve_scoring_unary_weights, MAX_ENUM_CANDIDATES};
pub use veto::solve_veto;

use crate::election::{winners, Ballot, BallotKind, Election, PreferenceOrder, Rule, VoterBlock};
use crate::error::{Error, Result};
use crate::scalar::{int, Int};

/// Which costs and restrictions a query uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Variant {
    pub priced: bool,
    pub weighted: bool,
    /// Bribed voters may not rank the target first.
    pub negative: bool,
    /// Approval bribery paid per flipped entry.
    pub approval_flip: bool,
    /// The target must be the only winner.
    pub unique: bool,
}

/// How prices and weights were encoded; steers solver choice only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Encoding {
    pub prices_unary: bool,
    pub weights_unary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BriberyQuery<T> {
    pub election: Election<T>,
    pub rule: Rule<T>,
    pub target: usize,
    pub budget: T,
    pub variant: Variant,
    pub encoding: Encoding,
}

impl<T: Int> BriberyQuery<T> {
    pub fn new(election: Election<T>, rule: Rule<T>, target: usize, budget: T, variant: Variant) -> Result<Self> {
        let q = Self { election, rule, target, budget, variant, encoding: Encoding::default() };
        q.validate()?;
        Ok(q)
    }

    pub fn with_encoding(mut self, encoding: Encoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_unique(mut self, unique: bool) -> Self {
        self.variant.unique = unique;
        self
    }

    pub fn with_budget(mut self, budget: T) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.election.check_candidate(self.target)?;
        self.rule.check(&self.election)?;
        if self.budget.is_negative() {
            return Err(Error::InvalidVoter("negative budget".into()));
        }
        if self.variant.negative && self.rule != Rule::Plurality {
            return Err(Error::Unsupported("negative bribery is defined for plurality".into()));
        }
        if self.variant.approval_flip && self.rule != Rule::Approval {
            return Err(Error::Unsupported("the flip model is defined for approval".into()));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.election.m()
    }

    /// The election with dropped prices and weights set to one.
    pub fn normalized(&self) -> Result<Election<T>> {
        self.validate()?;
        let voters = self
            .election
            .voters()
            .iter()
            .map(|v| {
                let mut v = v.clone();
                if !self.variant.priced {
                    v.price = T::one();
                    v.flip_prices = None;
                }
                if !self.variant.weighted {
                    v.weight = T::one();
                }
                v
            })
            .collect();
        self.election.with_voters(voters)
    }

    /// Whether the target wins `e` in this query's winner mode.
    pub fn target_wins(&self, e: &Election<T>) -> Result<bool> {
        let w = winners(e, &self.rule)?;
        Ok(if self.variant.unique { w == [self.target] } else { w.contains(&self.target) })
    }

    /// Ballot a promoted voter receives: the target first, the rest in id order.
    pub fn promoting_ballot(&self) -> Ballot {
        match self.election.kind() {
            BallotKind::Orders => PreferenceOrder::with_top(self.m(), self.target).into(),
            BallotKind::Approvals => crate::election::ApprovalVector::only(self.m(), self.target).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BribeAction {
    /// Replace the ballot outright.
    Rewrite(Ballot),
    /// Toggle these approval entries.
    Flip(Vec<usize>),
}

/// `count` voters of block `block` all receive `action`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bribe<T> {
    pub block: usize,
    pub count: T,
    pub action: BribeAction,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BriberyWitness<T> {
    pub bribes: Vec<Bribe<T>>,
}

impl<T: Int> BriberyWitness<T> {
    pub fn empty() -> Self {
        Self { bribes: Vec::new() }
    }

    pub fn push(&mut self, block: usize, count: T, action: BribeAction) {
        self.bribes.push(Bribe { block, count, action });
    }

    /// Voters bribed, counting multiplicity.
    pub fn bribed(&self) -> T {
        self.bribes.iter().map(|b| b.count.clone()).sum()
    }

    /// Price of the witness under `q`; errors on indices or counts out of range.
    pub fn cost(&self, q: &BriberyQuery<T>) -> Result<T> {
        let e = q.normalized()?;
        self.check_shape(q, &e)?;
        let mut total = T::zero();
        for b in &self.bribes {
            let v = &e.voters()[b.block];
            let each = match &b.action {
                BribeAction::Rewrite(_) => v.price.clone(),
                BribeAction::Flip(entries) => entries.iter().map(|&c| v.flip_price(c)).sum(),
            };
            total = total + each * b.count.clone();
        }
        Ok(total)
    }

    /// The election after bribery: untouched voters in block order, then the bribed ones.
    pub fn apply(&self, q: &BriberyQuery<T>) -> Result<Election<T>> {
        let e = q.normalized()?;
        self.check_shape(q, &e)?;
        let mut left: Vec<T> = e.voters().iter().map(|v| v.multiplicity.clone()).collect();
        for b in &self.bribes {
            left[b.block] = left[b.block].clone() - b.count.clone();
        }
        let mut voters: Vec<VoterBlock<T>> = e
            .voters()
            .iter()
            .zip(left)
            .filter(|(_, n)| n.is_positive())
            .map(|(v, n)| v.clone().with_multiplicity(n))
            .collect();
        for b in self.bribes.iter().filter(|b| b.count.is_positive()) {
            let v = &e.voters()[b.block];
            let ballot = match &b.action {
                BribeAction::Rewrite(ballot) => ballot.clone(),
                BribeAction::Flip(entries) => {
                    Ballot::Approval(v.ballot.as_approval().expect("checked kind").flipped(entries))
                }
            };
            voters.push(VoterBlock { ballot, multiplicity: b.count.clone(), ..v.clone() });
        }
        e.with_voters(voters)
    }

    /// Whether a negative query forbids this witness.
    pub fn promotes_target(&self, q: &BriberyQuery<T>) -> bool {
        self.bribes.iter().any(|b| {
            b.count.is_positive()
                && matches!(&b.action, BribeAction::Rewrite(Ballot::Order(o)) if o.top() == q.target)
        })
    }

    fn check_shape(&self, q: &BriberyQuery<T>, e: &Election<T>) -> Result<()> {
        let mut used: Vec<T> = vec![T::zero(); e.voters().len()];
        for b in &self.bribes {
            let Some(v) = e.voters().get(b.block) else {
                return Err(Error::MalformedWitness(format!("no voter block {}", b.block)));
            };
            if b.count.is_negative() {
                return Err(Error::MalformedWitness("negative bribe count".into()));
            }
            used[b.block] = used[b.block].clone() + b.count.clone();
            if used[b.block] > v.multiplicity {
                return Err(Error::MalformedWitness(format!("block {} bribed beyond its size", b.block)));
            }
            match (&b.action, q.variant.approval_flip) {
                (BribeAction::Flip(entries), true) => {
                    let mut sorted = entries.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != entries.len() || sorted.last().is_some_and(|&c| c >= e.m()) {
                        return Err(Error::MalformedWitness("bad flip entries".into()));
                    }
                }
                (BribeAction::Rewrite(ballot), false) => {
                    if ballot.kind() != e.kind() || ballot.len() != e.m() {
                        return Err(Error::MalformedWitness("replacement ballot does not fit".into()));
                    }
                }
                _ => return Err(Error::MalformedWitness("action does not fit the bribery model".into())),
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Feasible(BriberyWitness<T>),
    Infeasible,
}

impl<T> Outcome<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible(_))
    }

    pub fn witness(&self) -> Option<&BriberyWitness<T>> {
        match self {
            Outcome::Feasible(w) => Some(w),
            Outcome::Infeasible => None,
        }
    }
}

/// Groups unit-voter bribes (block index, action) into a witness.
pub(crate) fn witness_from_units<T: Int>(units: impl IntoIterator<Item = (usize, BribeAction)>) -> BriberyWitness<T> {
    let mut w = BriberyWitness::<T>::empty();
    for (block, action) in units {
        match w.bribes.iter_mut().find(|b| b.block == block && b.action == action) {
            Some(b) => b.count = b.count.clone() + T::one(),
            None => w.push(block, int(1), action),
        }
    }
    w
}

/// Whether `scores` elect `target`, alone when `unique`.
pub(crate) fn scores_elect<T: Int>(scores: &[T], target: usize, unique: bool) -> bool {
    let p = &scores[target];
    scores
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != target)
        .all(|(_, s)| if unique { s < p } else { s <= p })
}

pub(crate) fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Unsupported(what.to_string()))
    }
}
