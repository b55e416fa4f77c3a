use std::collections::{HashSet, VecDeque};

use super::{Election, PreferenceOrder};
use crate::error::{Error, Result};
use crate::scalar::{int, small, Int};

/// Ballot-count cap for the swap search.
const BFS_BALLOTS: usize = 8;
/// Candidate cap for the swap search.
const BFS_CANDIDATES: usize = 4;
/// Removal vectors the Young search may visit.
const YOUNG_WORK: usize = 1 << 22;

/// Weight preferring `a` to `b` minus weight preferring `b` to `a`.
pub fn net_preference<T: Int>(e: &Election<T>, a: usize, b: usize) -> Result<T> {
    let mut net = T::zero();
    for (o, v) in e.orders()? {
        if o.prefers(a, b) {
            net = net + v.mass();
        } else {
            net = net - v.mass();
        }
    }
    Ok(net)
}

/// The candidate strictly beating every other one head to head, if any.
pub fn condorcet_winner<T: Int>(e: &Election<T>) -> Result<Option<usize>> {
    for c in 0..e.m() {
        if is_condorcet(e, c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn is_condorcet<T: Int>(e: &Election<T>, c: usize) -> Result<bool> {
    for d in 0..e.m() {
        if d != c && !net_preference(e, c, d)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn condorcet_in(ballots: &[(i128, PreferenceOrder)], m: usize, c: usize) -> bool {
    (0..m).filter(|&d| d != c).all(|d| {
        let net: i128 = ballots
            .iter()
            .map(|(w, o)| if o.prefers(c, d) { *w } else { -*w })
            .sum();
        net > 0
    })
}

/// Fewest adjacent swaps making `c` a Condorcet winner, by breadth-first search over ballot
/// profiles. `None` when no sequence works, which happens only when all weight is zero.
pub fn dodgson_score<T: Int>(e: &Election<T>, c: usize) -> Result<Option<T>> {
    e.check_candidate(c)?;
    let m = e.m();
    if m == 1 {
        return Ok(Some(T::zero()));
    }
    if m > BFS_CANDIDATES {
        return Err(Error::TooLarge(format!("swap search over {m} candidates")));
    }
    let mut ballots = Vec::new();
    for (o, v) in e.orders()? {
        let w = v
            .weight
            .to_i128()
            .ok_or_else(|| Error::TooLarge("voter weight".into()))?;
        for _ in 0..small(&v.multiplicity, BFS_BALLOTS, "ballot count")? {
            ballots.push((w, o.clone()));
        }
    }
    if ballots.len() > BFS_BALLOTS {
        return Err(Error::TooLarge(format!("swap search over {} ballots", ballots.len())));
    }
    if ballots.iter().all(|(w, _)| *w == 0) {
        return Ok(None);
    }
    ballots.sort();
    let mut seen = HashSet::from([ballots.clone()]);
    let mut queue = VecDeque::from([(ballots, 0usize)]);
    while let Some((state, depth)) = queue.pop_front() {
        if condorcet_in(&state, m, c) {
            return Ok(Some(int(depth)));
        }
        for i in 0..state.len() {
            for j in 0..m - 1 {
                let mut next = state.clone();
                next[i].1 = next[i].1.swapped(j);
                next.sort();
                if seen.insert(next.clone()) {
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    Ok(None)
}

/// Fewest removed voters (counting multiplicity) after which `c` is a Condorcet winner.
/// `None` when no removal set works.
pub fn young_score<T: Int>(e: &Election<T>, c: usize) -> Result<Option<T>> {
    e.check_candidate(c)?;
    if e.m() == 1 {
        return Ok(Some(T::zero()));
    }
    let blocks: Vec<_> = e.orders()?.collect();
    let mut counts = Vec::with_capacity(blocks.len());
    let mut work = 1usize;
    for (_, v) in &blocks {
        let n = small(&v.multiplicity, YOUNG_WORK, "multiplicity")?;
        work = work.saturating_mul(n + 1);
        counts.push(n);
    }
    if work > YOUNG_WORK {
        return Err(Error::TooLarge(format!("{work} removal vectors")));
    }
    let rivals: Vec<usize> = (0..e.m()).filter(|&d| d != c).collect();
    // Per block, its contribution to each of c's pairwise margins.
    let margins: Vec<Vec<T>> = blocks
        .iter()
        .map(|(o, v)| {
            rivals
                .iter()
                .map(|&d| if o.prefers(c, d) { v.weight.clone() } else { -v.weight.clone() })
                .collect()
        })
        .collect();
    let mut best: Option<usize> = None;
    let mut kept = counts.clone();
    loop {
        let removed: usize = counts.iter().zip(&kept).map(|(n, k)| n - k).sum();
        if best.is_none_or(|b| removed < b) {
            let wins = (0..rivals.len()).all(|r| {
                let net: T = margins
                    .iter()
                    .zip(&kept)
                    .map(|(mg, &k)| mg[r].clone() * int::<T>(k))
                    .sum();
                net.is_positive()
            });
            if wins {
                best = Some(removed);
            }
        }
        // Odometer over kept counts.
        let mut i = 0;
        loop {
            if i == kept.len() {
                return Ok(best.map(int));
            }
            if kept[i] > 0 {
                kept[i] -= 1;
                break;
            }
            kept[i] = counts[i];
            i += 1;
        }
    }
}

/// Adjacent swaps turning `a` into `b`, by breadth-first search.
pub fn swap_distance(a: &PreferenceOrder, b: &PreferenceOrder) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidOrder("length mismatch".into()));
    }
    let mut seen = HashSet::from([a.clone()]);
    let mut queue = VecDeque::from([(a.clone(), 0usize)]);
    while let Some((o, d)) = queue.pop_front() {
        if &o == b {
            return Ok(d);
        }
        for j in 0..o.len().saturating_sub(1) {
            let next = o.swapped(j);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("every permutation is reachable by adjacent swaps")
}
