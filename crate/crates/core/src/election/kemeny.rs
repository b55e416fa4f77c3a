use super::{Election, PreferenceOrder, MAX_ENUMERATED_CANDIDATES};
use crate::error::{Error, Result};
use crate::scalar::{int, Int};

/// Unordered candidate pairs both orders rank the same way.
pub fn agree(a: &PreferenceOrder, b: &PreferenceOrder) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidOrder("length mismatch".into()));
    }
    let m = a.len();
    let mut n = 0;
    for x in 0..m {
        for y in x + 1..m {
            if a.prefers(x, y) == b.prefers(x, y) {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// All `m!` orders, lexicographic by ranking.
pub fn all_orders(m: usize) -> Vec<PreferenceOrder> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<PreferenceOrder>) {
        if prefix.len() == used.len() {
            out.push(PreferenceOrder(prefix.clone()));
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                prefix.push(c);
                go(prefix, used, out);
                prefix.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Tops of every order maximizing weighted agreement with the ballots.
pub fn kemeny_winners<T: Int>(e: &Election<T>) -> Result<Vec<usize>> {
    if e.m() > MAX_ENUMERATED_CANDIDATES {
        return Err(Error::TooLarge(format!("{}! consensus orders", e.m())));
    }
    let ballots: Vec<_> = e.orders()?.collect();
    let mut best: Option<T> = None;
    let mut tops = vec![false; e.m()];
    for o in all_orders(e.m()) {
        let mut total = T::zero();
        for (b, v) in &ballots {
            total = total + v.mass() * int::<T>(agree(&o, b)?);
        }
        match &best {
            Some(x) if total < *x => continue,
            Some(x) if total == *x => {}
            _ => {
                best = Some(total);
                tops.iter_mut().for_each(|t| *t = false);
            }
        }
        tops[o.top()] = true;
    }
    Ok((0..e.m()).filter(|&c| tops[c]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::VoterBlock;

    fn o(r: &[usize]) -> PreferenceOrder {
        PreferenceOrder::new(r.to_vec()).unwrap()
    }

    #[test]
    fn agreement_counts() {
        let a = o(&[0, 1, 2]);
        assert_eq!(agree(&a, &a).unwrap(), 3);
        assert_eq!(agree(&a, &a.reversed()).unwrap(), 0);
        assert_eq!(agree(&a, &o(&[0, 2, 1])).unwrap(), 2);
        assert!(agree(&a, &o(&[0, 1])).is_err());
    }

    #[test]
    fn orders_are_enumerated_once() {
        let all = all_orders(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], o(&[0, 1, 2, 3]));
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup, all);
    }

    #[test]
    fn kemeny_examples() {
        let unanimous =
            Election::<i64>::lettered(3, vec![VoterBlock::new(o(&[2, 0, 1])).with_multiplicity(4)]).unwrap();
        assert_eq!(kemeny_winners(&unanimous).unwrap(), vec![2]);
        let cycle = Election::<i64>::lettered(
            3,
            vec![VoterBlock::new(o(&[0, 1, 2])), VoterBlock::new(o(&[1, 2, 0])), VoterBlock::new(o(&[2, 0, 1]))],
        )
        .unwrap();
        assert_eq!(kemeny_winners(&cycle).unwrap(), vec![0, 1, 2]);
    }
}
