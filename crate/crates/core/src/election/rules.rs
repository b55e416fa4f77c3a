use std::fmt;

use super::condorcet::{dodgson_score, young_score};
use super::kemeny::kemeny_winners;
use super::{Ballot, BallotKind, Election};
use crate::error::{Error, Result};
use crate::scalar::Int;

/// Nonincreasing points per rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoringProtocol<T>(Vec<T>);

impl<T: Int> ScoringProtocol<T> {
    pub fn new(alpha: Vec<T>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidProtocol("empty vector".into()));
        }
        if alpha.iter().any(|a| a.is_negative()) {
            return Err(Error::InvalidProtocol("negative entry".into()));
        }
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidProtocol("entries increase".into()));
        }
        Ok(Self(alpha))
    }

    pub fn plurality(m: usize) -> Self {
        Self((0..m).map(|i| if i == 0 { T::one() } else { T::zero() }).collect())
    }

    pub fn veto(m: usize) -> Self {
        Self((0..m).map(|i| if i + 1 < m { T::one() } else { T::zero() }).collect())
    }

    pub fn borda(m: usize) -> Self {
        Self((0..m).rev().map(crate::scalar::int).collect())
    }

    pub fn k_approval(m: usize, k: usize) -> Self {
        Self((0..m).map(|i| if i < k { T::one() } else { T::zero() }).collect())
    }

    pub fn alpha(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shifted so the last entry is zero; winners are unchanged.
    pub fn normalized(&self) -> Self {
        let last = self.0[self.0.len() - 1].clone();
        Self(self.0.iter().map(|a| a.clone() - last.clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule<T> {
    Plurality,
    Approval,
    Veto,
    KApproval(usize),
    Scoring(ScoringProtocol<T>),
    Dodgson,
    Young,
    Kemeny,
}

impl<T: Int> Rule<T> {
    pub fn ballot_kind(&self) -> BallotKind {
        match self {
            Rule::Approval => BallotKind::Approvals,
            _ => BallotKind::Orders,
        }
    }

    pub fn is_score_based(&self) -> bool {
        !matches!(self, Rule::Dodgson | Rule::Young | Rule::Kemeny)
    }

    /// Points per rank for order-based score rules, `None` for approval and the Condorcet family.
    pub fn points(&self, m: usize) -> Result<Option<ScoringProtocol<T>>> {
        Ok(Some(match self {
            Rule::Plurality => ScoringProtocol::plurality(m),
            Rule::Veto => ScoringProtocol::veto(m),
            Rule::KApproval(k) => {
                if *k > m {
                    return Err(Error::InvalidProtocol(format!("{k}-approval with {m} candidates")));
                }
                ScoringProtocol::k_approval(m, *k)
            }
            Rule::Scoring(alpha) => {
                if alpha.len() != m {
                    return Err(Error::InvalidProtocol(format!(
                        "{} entries for {m} candidates",
                        alpha.len()
                    )));
                }
                alpha.clone()
            }
            Rule::Approval | Rule::Dodgson | Rule::Young | Rule::Kemeny => return Ok(None),
        }))
    }

    pub(crate) fn check(&self, e: &Election<T>) -> Result<()> {
        if !e.voters().is_empty() && e.kind() != self.ballot_kind() {
            return Err(Error::BallotKindMismatch);
        }
        self.points(e.m()).map(|_| ())
    }
}

impl<T: Int> fmt::Display for Rule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Plurality => write!(f, "plurality"),
            Rule::Approval => write!(f, "approval"),
            Rule::Veto => write!(f, "veto"),
            Rule::KApproval(k) => write!(f, "kapproval {k}"),
            Rule::Scoring(a) => {
                write!(f, "scoring")?;
                for x in a.alpha() {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
            Rule::Dodgson => write!(f, "dodgson"),
            Rule::Young => write!(f, "young"),
            Rule::Kemeny => write!(f, "kemeny"),
        }
    }
}

/// Score per candidate id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoreTable<T>(Vec<T>);

impl<T: Int> ScoreTable<T> {
    pub fn new(scores: Vec<T>) -> Self {
        Self(scores)
    }

    pub fn get(&self, c: usize) -> &T {
        &self.0[c]
    }

    pub fn scores(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn max(&self) -> &T {
        self.0.iter().max().expect("nonempty table")
    }

    pub fn argmax(&self) -> Vec<usize> {
        let best = self.max();
        (0..self.0.len()).filter(|&c| &self.0[c] == best).collect()
    }
}

/// Weighted points per candidate under a score-based rule.
pub fn score_table<T: Int>(e: &Election<T>, rule: &Rule<T>) -> Result<ScoreTable<T>> {
    if !rule.is_score_based() {
        return Err(Error::NotScoreBased(rule.to_string()));
    }
    rule.check(e)?;
    let m = e.m();
    let mut scores = vec![T::zero(); m];
    let points = rule.points(m)?;
    for v in e.voters() {
        let mass = v.mass();
        match (&v.ballot, &points) {
            (Ballot::Order(o), Some(alpha)) => {
                for (rank, &c) in o.ranking().iter().enumerate() {
                    scores[c] = scores[c].clone() + alpha.alpha()[rank].clone() * mass.clone();
                }
            }
            (Ballot::Approval(a), None) => {
                for c in 0..m {
                    if a.approves(c) {
                        scores[c] = scores[c].clone() + mass.clone();
                    }
                }
            }
            _ => return Err(Error::BallotKindMismatch),
        }
    }
    Ok(ScoreTable(scores))
}

/// Winner set, ascending ids.
///
/// Dodgson and Young elect the minimum score; candidates who can never become Condorcet winners
/// score infinity, and when every candidate does, all of them tie.
pub fn winners<T: Int>(e: &Election<T>, rule: &Rule<T>) -> Result<Vec<usize>> {
    rule.check(e)?;
    match rule {
        Rule::Dodgson => argmin_finite(e, dodgson_score),
        Rule::Young => argmin_finite(e, young_score),
        Rule::Kemeny => kemeny_winners(e),
        _ => Ok(score_table(e, rule)?.argmax()),
    }
}

fn argmin_finite<T: Int>(
    e: &Election<T>,
    score: fn(&Election<T>, usize) -> Result<Option<T>>,
) -> Result<Vec<usize>> {
    let scores = (0..e.m()).map(|c| score(e, c)).collect::<Result<Vec<_>>>()?;
    let best = scores.iter().flatten().min();
    Ok(match best {
        None => (0..e.m()).collect(),
        Some(b) => (0..e.m()).filter(|&c| scores[c].as_ref() == Some(b)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{ApprovalVector, PreferenceOrder, VoterBlock};

    fn ord(r: &[usize]) -> VoterBlock<i64> {
        VoterBlock::new(PreferenceOrder::new(r.to_vec()).unwrap())
    }

    fn cycle() -> Election<i64> {
        Election::lettered(3, vec![ord(&[0, 1, 2]), ord(&[1, 2, 0]), ord(&[2, 0, 1])]).unwrap()
    }

    #[test]
    fn sole_candidate_wins() {
        let e = Election::lettered(1, vec![ord(&[0]), ord(&[0])]).unwrap();
        for rule in [Rule::Plurality, Rule::Veto, Rule::Dodgson, Rule::Young, Rule::Kemeny] {
            assert_eq!(winners(&e, &rule).unwrap(), vec![0]);
        }
    }

    #[test]
    fn plurality_tie_by_count() {
        let e = Election::lettered(
            3,
            vec![
                ord(&[0, 1, 2]).with_multiplicity(2),
                ord(&[1, 0, 2]).with_multiplicity(2),
                ord(&[2, 0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(winners(&e, &Rule::Plurality).unwrap(), vec![0, 1]);
    }

    #[test]
    fn borda_on_the_cycle_ties_everyone() {
        let rule = Rule::Scoring(ScoringProtocol::borda(3));
        assert_eq!(winners(&cycle(), &rule).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn approval_counts_weight() {
        let e = Election::lettered(
            2,
            vec![VoterBlock::new(ApprovalVector::new(vec![true, false])).with_weight(3)],
        )
        .unwrap();
        assert_eq!(score_table(&e, &Rule::Approval).unwrap().scores(), &[3, 0]);
    }

    #[test]
    fn weighted_plurality_adds_block_weights() {
        let e = Election::lettered(2, vec![ord(&[0, 1]).with_weight(10), ord(&[0, 1]).with_weight(2)])
            .unwrap();
        assert_eq!(*score_table(&e, &Rule::Plurality).unwrap().get(0), 12);
    }

    #[test]
    fn two_approval_awards_top_two() {
        let e = Election::lettered(3, vec![ord(&[0, 1, 2])]).unwrap();
        let rule = Rule::Scoring(ScoringProtocol::new(vec![1, 1, 0]).unwrap());
        assert_eq!(score_table(&e, &rule).unwrap().scores(), &[1, 1, 0]);
        assert_eq!(score_table(&e, &Rule::KApproval(2)).unwrap().scores(), &[1, 1, 0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = cycle();
        assert_eq!(score_table(&e, &Rule::Dodgson).unwrap_err(), Error::NotScoreBased("dodgson".into()));
        assert_eq!(winners(&e, &Rule::Approval).unwrap_err(), Error::BallotKindMismatch);
        assert!(ScoringProtocol::new(vec![0i64, 1]).is_err());
        assert_eq!(Election::<i64>::lettered(0, vec![]).unwrap_err(), Error::EmptyCandidates);
    }

    #[test]
    fn normalization_zeroes_the_last_entry() {
        let a = ScoringProtocol::new(vec![5i64, 3, 2]).unwrap();
        assert_eq!(a.normalized().alpha(), &[3, 1, 0]);
    }
}
