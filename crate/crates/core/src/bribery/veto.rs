use super::{require, witness_from_units, BribeAction, BriberyQuery, Outcome};
use crate::election::{Ballot, PreferenceOrder, Rule};
use crate::error::{Error, Result};
use crate::knapsack::UNARY_CAP;
use crate::scalar::{int, Int};

/// Unpriced, unweighted veto: move vetoes off the target onto the least-vetoed rival.
///
/// When the target must win alone and no longer carries a veto, rivals tied with it at zero are
/// handed a veto taken from a candidate holding at least two.
pub fn solve_veto<T: Int>(q: &BriberyQuery<T>) -> Result<Outcome<T>> {
    require(q.rule == Rule::Veto, "needs veto")?;
    require(!q.variant.priced && !q.variant.weighted, "unpriced, unweighted voters only")?;
    let e = q.normalized()?;
    let m = e.m();
    let p = q.target;
    // (block, vetoed candidate) per voter
    let mut voters: Vec<(usize, usize)> = e
        .unit_voters(UNARY_CAP)?
        .into_iter()
        .map(|(b, v)| Ok((b, v.ballot.as_order().ok_or(Error::BallotKindMismatch)?.last())))
        .collect::<Result<_>>()?;
    let mut vetoes = vec![0usize; m];
    for &(_, c) in &voters {
        vetoes[c] += 1;
    }
    let wins = |v: &[usize]| {
        (0..m).filter(|&c| c != p).all(|c| if q.variant.unique { v[c] > v[p] } else { v[c] >= v[p] })
    };
    let mut moves: Vec<(usize, usize)> = Vec::new();
    let mut bribed = vec![false; voters.len()];
    while !wins(&vetoes) {
        if int::<T>(moves.len()) >= q.budget {
            return Ok(Outcome::Infeasible);
        }
        let least = (0..m).filter(|&c| c != p).min_by_key(|&c| vetoes[c]);
        let Some(least) = least else { return Ok(Outcome::Infeasible) };
        let from = if vetoes[p] > 0 {
            p
        } else if let Some(d) = (0..m).find(|&d| d != p && vetoes[d] >= 2) {
            d
        } else {
            return Ok(Outcome::Infeasible);
        };
        let i = (0..voters.len()).find(|&i| !bribed[i] && voters[i].1 == from);
        let Some(i) = i else { return Ok(Outcome::Infeasible) };
        bribed[i] = true;
        voters[i].1 = least;
        vetoes[from] -= 1;
        vetoes[least] += 1;
        moves.push((voters[i].0, least));
    }
    let units = moves.into_iter().map(|(block, to)| {
        let mut ranking: Vec<usize> = std::iter::once(p).chain((0..m).filter(|&c| c != p && c != to)).collect();
        if to != p {
            ranking.push(to);
        }
        (block, BribeAction::Rewrite(Ballot::Order(PreferenceOrder::new(ranking).expect("permutation"))))
    });
    Ok(Outcome::Feasible(witness_from_units(units)))
}
