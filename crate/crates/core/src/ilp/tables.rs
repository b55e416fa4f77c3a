use std::collections::HashMap;

use crate::election::{agree, all_orders, PreferenceOrder, MAX_ENUMERATED_CANDIDATES};
use crate::error::{Error, Result};

/// Per-`m` lookup tables over all `m!` orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTables {
    m: usize,
    orders: Vec<PreferenceOrder>,
    index: HashMap<PreferenceOrder, usize>,
    switches: Vec<Vec<usize>>,
    agree: Vec<Vec<usize>>,
}

impl OrderTables {
    pub fn new(m: usize) -> Result<Self> {
        if m > MAX_ENUMERATED_CANDIDATES {
            return Err(Error::TooLarge(format!("{m}! orders")));
        }
        let orders = all_orders(m);
        let index = orders.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let n = orders.len();
        let mut switches = vec![vec![0; n]; n];
        let mut agree_t = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&orders[i], &orders[j]);
                // pairs ranked in opposite directions
                switches[i][j] = (0..m)
                    .flat_map(|x| (x + 1..m).map(move |y| (x, y)))
                    .filter(|&(x, y)| a.prefers(x, y) != b.prefers(x, y))
                    .count();
                agree_t[i][j] = agree(a, b)?;
            }
        }
        Ok(Self { m, orders, index, switches, agree: agree_t })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn orders(&self) -> &[PreferenceOrder] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn index_of(&self, o: &PreferenceOrder) -> Option<usize> {
        self.index.get(o).copied()
    }

    /// Position of `c` in order `i`, zero at the top.
    pub fn wh(&self, c: usize, i: usize) -> usize {
        self.orders[i].position(c)
    }

    /// `1` if `r` beats `q` in order `i`, `-1` if `q` beats `r`, `0` when equal.
    pub fn who(&self, r: usize, q: usize, i: usize) -> i64 {
        if r == q {
            0
        } else if self.orders[i].prefers(r, q) {
            1
        } else {
            -1
        }
    }

    /// Adjacent swaps from order `i` to order `j`.
    pub fn switches(&self, i: usize, j: usize) -> usize {
        self.switches[i][j]
    }

    pub fn agree(&self, i: usize, j: usize) -> usize {
        self.agree[i][j]
    }
}
