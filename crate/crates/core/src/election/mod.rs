//! Candidates, ballots, voter blocks and the winner rules over them.

mod condorcet;
mod kemeny;
mod rules;

pub use condorcet::{condorcet_winner, dodgson_score, net_preference, swap_distance, young_score};
pub use kemeny::{agree, all_orders, kemeny_winners};
pub use rules::{score_table, winners, Rule, ScoreTable, ScoringProtocol};

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Int;

/// Ballots with more candidates than this are refused by enumerating code paths.
pub const MAX_ENUMERATED_CANDIDATES: usize = 8;

/// A strict ranking, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceOrder(Vec<usize>);

impl PreferenceOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let m = ranking.len();
        let mut seen = vec![false; m];
        for &c in &ranking {
            if c >= m {
                return Err(Error::InvalidOrder(format!("candidate {c} out of range for {m}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidOrder(format!("candidate {c} ranked twice")));
            }
        }
        Ok(Self(ranking))
    }

    /// Candidates in id order.
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// `c` first, everyone else in id order.
    pub fn with_top(m: usize, c: usize) -> Self {
        Self(std::iter::once(c).chain((0..m).filter(|&x| x != c)).collect())
    }

    /// Everyone in id order except `c`, who comes last.
    pub fn with_last(m: usize, c: usize) -> Self {
        Self((0..m).filter(|&x| x != c).chain(std::iter::once(c)).collect())
    }

    pub fn ranking(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// Zero-based rank of `c`.
    pub fn position(&self, c: usize) -> usize {
        self.0.iter().position(|&x| x == c).expect("candidate present in order")
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.position(a) < self.position(b)
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Swaps ranks `i` and `i + 1`.
    pub fn swapped(&self, i: usize) -> Self {
        let mut r = self.0.clone();
        r.swap(i, i + 1);
        Self(r)
    }
}

/// One approve/disapprove bit per candidate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApprovalVector(Vec<bool>);

impl ApprovalVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Approves exactly `c`.
    pub fn only(m: usize, c: usize) -> Self {
        Self((0..m).map(|x| x == c).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn approves(&self, c: usize) -> bool {
        self.0[c]
    }

    /// Toggles every listed entry.
    pub fn flipped(&self, entries: &[usize]) -> Self {
        let mut bits = self.0.clone();
        for &c in entries {
            bits[c] = !bits[c];
        }
        Self(bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BallotKind {
    Orders,
    Approvals,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ballot {
    Order(PreferenceOrder),
    Approval(ApprovalVector),
}

impl Ballot {
    pub fn kind(&self) -> BallotKind {
        match self {
            Ballot::Order(_) => BallotKind::Orders,
            Ballot::Approval(_) => BallotKind::Approvals,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Ballot::Order(o) => o.len(),
            Ballot::Approval(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_order(&self) -> Option<&PreferenceOrder> {
        match self {
            Ballot::Order(o) => Some(o),
            Ballot::Approval(_) => None,
        }
    }

    pub fn as_approval(&self) -> Option<&ApprovalVector> {
        match self {
            Ballot::Approval(a) => Some(a),
            Ballot::Order(_) => None,
        }
    }
}

impl From<PreferenceOrder> for Ballot {
    fn from(o: PreferenceOrder) -> Self {
        Ballot::Order(o)
    }
}

impl From<ApprovalVector> for Ballot {
    fn from(a: ApprovalVector) -> Self {
        Ballot::Approval(a)
    }
}

/// `multiplicity` identical voters sharing one ballot, price and weight.
///
/// `flip_prices` holds per-entry prices for the approval flip model; absent means every entry
/// costs the block price.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VoterBlock<T> {
    pub ballot: Ballot,
    pub price: T,
    pub weight: T,
    pub multiplicity: T,
    pub flip_prices: Option<Vec<T>>,
}

impl<T: Int> VoterBlock<T> {
    pub fn new(ballot: impl Into<Ballot>) -> Self {
        Self {
            ballot: ballot.into(),
            price: T::one(),
            weight: T::one(),
            multiplicity: T::one(),
            flip_prices: None,
        }
    }

    pub fn with_price(mut self, price: T) -> Self {
        self.price = price;
        self
    }

    pub fn with_weight(mut self, weight: T) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_multiplicity(mut self, multiplicity: T) -> Self {
        self.multiplicity = multiplicity;
        self
    }

    pub fn with_flip_prices(mut self, prices: Vec<T>) -> Self {
        self.flip_prices = Some(prices);
        self
    }

    /// Price of flipping entry `c` of this block's approval vector.
    pub fn flip_price(&self, c: usize) -> T {
        match &self.flip_prices {
            Some(p) => p[c].clone(),
            None => self.price.clone(),
        }
    }

    /// Total weight of the block.
    pub fn mass(&self) -> T {
        self.weight.clone() * self.multiplicity.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Election<T> {
    candidates: Vec<String>,
    voters: Vec<VoterBlock<T>>,
    kind: BallotKind,
}

impl<T: Int> Election<T> {
    /// Builds an election, taking the ballot kind from the first voter (orders when empty).
    pub fn new(candidates: Vec<String>, voters: Vec<VoterBlock<T>>) -> Result<Self> {
        let kind = voters.first().map_or(BallotKind::Orders, |v| v.ballot.kind());
        Self::with_kind(candidates, kind, voters)
    }

    pub fn with_kind(
        candidates: Vec<String>,
        kind: BallotKind,
        voters: Vec<VoterBlock<T>>,
    ) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::EmptyCandidates);
        }
        let m = candidates.len();
        for v in &voters {
            if v.ballot.kind() != kind {
                return Err(Error::BallotKindMismatch);
            }
            match &v.ballot {
                Ballot::Order(o) if o.len() != m => {
                    return Err(Error::InvalidOrder(format!(
                        "ranks {} candidates, election has {m}",
                        o.len()
                    )))
                }
                Ballot::Approval(a) if a.len() != m => {
                    return Err(Error::InvalidApproval { expected: m, found: a.len() })
                }
                _ => {}
            }
            if v.price.is_negative() || v.weight.is_negative() {
                return Err(Error::InvalidVoter("negative price or weight".into()));
            }
            if v.multiplicity < T::one() {
                return Err(Error::InvalidVoter("multiplicity below 1".into()));
            }
            if let Some(f) = &v.flip_prices {
                if f.len() != m || f.iter().any(|x| x.is_negative()) {
                    return Err(Error::InvalidVoter("bad flip price list".into()));
                }
            }
        }
        Ok(Self { candidates, voters, kind })
    }

    /// Candidates named `a`, `b`, ... for quick construction.
    pub fn lettered(m: usize, voters: Vec<VoterBlock<T>>) -> Result<Self> {
        Self::new(default_names(m), voters)
    }

    /// Same candidates and ballot kind, different voters.
    pub fn with_voters(&self, voters: Vec<VoterBlock<T>>) -> Result<Self> {
        Self::with_kind(self.candidates.clone(), self.kind, voters)
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn name(&self, c: usize) -> &str {
        &self.candidates[c]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.candidates.iter().position(|n| n == name)
    }

    pub fn voters(&self) -> &[VoterBlock<T>] {
        &self.voters
    }

    pub fn kind(&self) -> BallotKind {
        self.kind
    }

    /// Σ multiplicities.
    pub fn total_voters(&self) -> T {
        self.voters.iter().map(|v| v.multiplicity.clone()).sum()
    }

    /// Σ weight × multiplicity.
    pub fn total_weight(&self) -> T {
        self.voters.iter().map(VoterBlock::mass).sum()
    }

    /// Σ price × multiplicity.
    pub fn total_price(&self) -> T {
        self.voters.iter().map(|v| v.price.clone() * v.multiplicity.clone()).sum()
    }

    /// Every block split into unit-multiplicity blocks, each tagged with its source block.
    pub fn unit_voters(&self, cap: usize) -> Result<Vec<(usize, VoterBlock<T>)>> {
        let n = crate::scalar::small(&self.total_voters(), cap, "voter count")?;
        let mut out = Vec::with_capacity(n);
        for (i, v) in self.voters.iter().enumerate() {
            let k = crate::scalar::small(&v.multiplicity, cap, "multiplicity")?;
            for _ in 0..k {
                out.push((i, v.clone().with_multiplicity(T::one())));
            }
        }
        Ok(out)
    }

    pub(crate) fn check_candidate(&self, c: usize) -> Result<()> {
        if c < self.m() {
            Ok(())
        } else {
            Err(Error::InvalidCandidate(c))
        }
    }

    pub(crate) fn orders(&self) -> Result<impl Iterator<Item = (&PreferenceOrder, &VoterBlock<T>)>> {
        if self.kind != BallotKind::Orders && !self.voters.is_empty() {
            return Err(Error::BallotKindMismatch);
        }
        Ok(self.voters.iter().filter_map(|v| v.ballot.as_order().map(|o| (o, v))))
    }
}

/// The two Condorcet-distance scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScoreKind {
    /// Adjacent swaps.
    Dodgson,
    /// Removed voters.
    Young,
}

impl ScoreKind {
    /// The score of `c` in `e` by the reference search; `None` when unreachable.
    pub fn score<T: Int>(self, e: &Election<T>, c: usize) -> Result<Option<T>> {
        match self {
            ScoreKind::Dodgson => dodgson_score(e, c),
            ScoreKind::Young => young_score(e, c),
        }
    }
}

/// `a`, `b`, ..., `z`, `c26`, `c27`, ...
pub fn default_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("c{i}")
            }
        })
        .collect()
}

impl<T: Int> fmt::Display for Election<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::serialize_election(self, None))
    }
}
