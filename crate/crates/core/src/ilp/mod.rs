//! Small integer programs over bounded variables and the bribery models built on them.
//!
//! [`ilp_feasible`] runs [`BoundedSearch`], a depth-first search that tightens variable
//! intervals after every branch. It is exact and complete within the bounds, which is what the
//! three-candidate models need.

mod derived;
mod models;
mod tables;

pub use derived::{
    dodgson_prime_winners, min_bribe_for_score, min_score_via_ilp, solve_full_dodgson_or_young_bribery,
    solve_kemeny_ilp, solve_score_bribery_ilp, solve_scoring_ilp,
};
pub use models::{
    build_dodgson_score_bribery_model, build_kemeny_bribery_models, build_scoring_bribery_model,
    build_young_score_bribery_model, BriberyModel, ScoreDecoding, MAX_MODEL_CANDIDATES,
};
pub use tables::OrderTables;


use crate::error::{Error, Result};
use crate::scalar::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable<T> {
    pub name: String,
    pub lower: Option<T>,
    pub upper: Option<T>,
}

/// `Σ coeff · x_var  relation  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<T> {
    pub terms: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Int> Constraint<T> {
    pub fn holds(&self, x: &[T]) -> bool {
        let lhs: T = self.terms.iter().map(|(v, a)| a.clone() * x[*v].clone()).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IlpModel<T> {
    variables: Vec<Variable<T>>,
    constraints: Vec<Constraint<T>>,
}

impl<T: Int> IlpModel<T> {
    pub fn new() -> Self {
        Self { variables: Vec::new(), constraints: Vec::new() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Option<T>, upper: Option<T>) -> usize {
        self.variables.push(Variable { name: name.into(), lower, upper });
        self.variables.len() - 1
    }

    pub fn bounded(&mut self, name: impl Into<String>, lower: T, upper: T) -> usize {
        self.add_var(name, Some(lower), Some(upper))
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, T)>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    /// `lhs > rhs`, stored as `lhs >= rhs + 1`.
    pub fn add_strict_gt(&mut self, terms: Vec<(usize, T)>, rhs: T) {
        self.add_constraint(terms, Relation::Ge, rhs + T::one());
    }

    pub fn variables(&self) -> &[Variable<T>] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Whether `x` is within bounds and satisfies every constraint.
    pub fn check(&self, x: &[T]) -> bool {
        x.len() == self.variables.len()
            && self.variables.iter().zip(x).all(|(v, xi)| {
                v.lower.as_ref().is_none_or(|l| xi >= l) && v.upper.as_ref().is_none_or(|u| xi <= u)
            })
            && self.constraints.iter().all(|c| c.holds(x))
    }
}

/// Anything that decides bounded integer feasibility exactly.
pub trait FeasibilityEngine<T> {
    fn solve(&self, model: &IlpModel<T>) -> Result<Option<Vec<T>>>;
}

/// Depth-first interval splitting with bound propagation, most constrained variable first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedSearch {
    pub max_nodes: u64,
    pub propagation_rounds: usize,
}

impl Default for BoundedSearch {
    fn default() -> Self {
        Self { max_nodes: 20_000_000, propagation_rounds: 64 }
    }
}

/// One `Σ a·x <= b` row.
struct Row<T> {
    terms: Vec<(usize, T)>,
    rhs: T,
}

struct Dfs<'a, T> {
    rows: &'a [Row<T>],
    /// Rows mentioning each variable.
    uses: Vec<Vec<usize>>,
    engine: BoundedSearch,
    nodes: u64,
}

fn ceil_div<T: Int>(a: T, b: T) -> T {
    -((-a).div_floor(&b))
}

impl<T: Int> Dfs<'_, T> {
    /// Tightens `lo..=hi` until nothing changes; false on a contradiction.
    fn propagate(&self, lo: &mut [T], hi: &mut [T]) -> bool {
        for _ in 0..self.engine.propagation_rounds {
            let mut changed = false;
            for row in self.rows {
                let min: T = row
                    .terms
                    .iter()
                    .map(|(v, a)| a.clone() * if a.is_positive() { lo[*v].clone() } else { hi[*v].clone() })
                    .sum();
                if min > row.rhs {
                    return false;
                }
                for (v, a) in &row.terms {
                    let own = a.clone() * if a.is_positive() { lo[*v].clone() } else { hi[*v].clone() };
                    let slack = row.rhs.clone() - min.clone() + own;
                    if a.is_positive() {
                        let cap = slack.div_floor(a);
                        if cap < hi[*v] {
                            hi[*v] = cap;
                            changed = true;
                        }
                    } else if a.is_negative() {
                        let floor = ceil_div(slack, a.clone());
                        if floor > lo[*v] {
                            lo[*v] = floor;
                            changed = true;
                        }
                    }
                    if lo[*v] > hi[*v] {
                        return false;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }

    fn search(&mut self, mut lo: Vec<T>, mut hi: Vec<T>) -> Result<Option<Vec<T>>> {
        self.nodes += 1;
        if self.nodes > self.engine.max_nodes {
            return Err(Error::TooLarge(format!("integer search exceeded {} nodes", self.engine.max_nodes)));
        }
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(None);
        }
        let pick = (0..lo.len())
            .filter(|&v| lo[v] < hi[v])
            .min_by(|&a, &b| {
                let wa = hi[a].clone() - lo[a].clone();
                let wb = hi[b].clone() - lo[b].clone();
                wa.cmp(&wb).then(self.uses[b].len().cmp(&self.uses[a].len()))
            });
        let Some(v) = pick else {
            let ok = self.rows.iter().all(|r| r.terms.iter().map(|(v, a)| a.clone() * lo[*v].clone()).sum::<T>() <= r.rhs);
            return Ok(ok.then_some(lo));
        };
        let mid = lo[v].clone() + (hi[v].clone() - lo[v].clone()).div_floor(&T::from_u8(2).expect("2"));
        let mut left_hi = hi.clone();
        left_hi[v] = mid.clone();
        if let Some(x) = self.search(lo.clone(), left_hi)? {
            return Ok(Some(x));
        }
        lo[v] = mid + T::one();
        self.search(lo, hi)
    }
}

impl<T: Int> FeasibilityEngine<T> for BoundedSearch {
    fn solve(&self, model: &IlpModel<T>) -> Result<Option<Vec<T>>> {
        let mut lo = Vec::with_capacity(model.len());
        let mut hi = Vec::with_capacity(model.len());
        for v in model.variables() {
            match (&v.lower, &v.upper) {
                (Some(l), Some(u)) => {
                    lo.push(l.clone());
                    hi.push(u.clone());
                }
                _ => return Err(Error::Unbounded(v.name.clone())),
            }
        }
        let mut rows = Vec::new();
        for c in model.constraints() {
            let neg = || Row { terms: c.terms.iter().map(|(v, a)| (*v, -a.clone())).collect(), rhs: -c.rhs.clone() };
            let pos = || Row { terms: c.terms.clone(), rhs: c.rhs.clone() };
            match c.relation {
                Relation::Le => rows.push(pos()),
                Relation::Ge => rows.push(neg()),
                Relation::Eq => {
                    rows.push(pos());
                    rows.push(neg());
                }
            }
        }
        let mut uses = vec![Vec::new(); model.len()];
        for (r, row) in rows.iter().enumerate() {
            for (v, _) in &row.terms {
                uses[*v].push(r);
            }
        }
        let mut dfs = Dfs { rows: &rows, uses, engine: *self, nodes: 0 };
        dfs.search(lo, hi)
    }
}

/// Feasibility with the default engine.
pub fn ilp_feasible<T: Int>(model: &IlpModel<T>) -> Result<Option<Vec<T>>> {
    BoundedSearch::default().solve(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_constraints() {
        let mut m = IlpModel::<i64>::new();
        m.bounded("x", 0, 5);
        assert_eq!(ilp_feasible(&m).unwrap(), Some(vec![0]));
    }

    #[test]
    fn sum_out_of_reach() {
        let mut m = IlpModel::<i64>::new();
        let x = m.bounded("x", 0, 1);
        let y = m.bounded("y", 0, 1);
        m.add_constraint(vec![(x, 1), (y, 1)], Relation::Eq, 3);
        assert_eq!(ilp_feasible(&m).unwrap(), None);
    }

    #[test]
    fn parity_needs_branching() {
        // 2x + 2y = 7 has no integer solution although the box relaxation does.
        let mut m = IlpModel::<i64>::new();
        let x = m.bounded("x", 0, 10);
        let y = m.bounded("y", 0, 10);
        m.add_constraint(vec![(x, 2), (y, 2)], Relation::Eq, 7);
        assert_eq!(ilp_feasible(&m).unwrap(), None);
        m.add_constraint(vec![(x, 1)], Relation::Ge, 0);
        let mut n = m.clone();
        n.constraints.clear();
        n.add_strict_gt(vec![(x, 1), (y, -1)], 8);
        let sol = ilp_feasible(&n).unwrap().unwrap();
        assert!(n.check(&sol) && sol[0] - sol[1] >= 9);
    }

    #[test]
    fn unbounded_is_an_error() {
        let mut m = IlpModel::<i64>::new();
        m.add_var("x", Some(0), None);
        assert!(matches!(ilp_feasible(&m), Err(Error::Unbounded(_))));
    }

    #[test]
    fn node_cap() {
        let mut m = IlpModel::<i64>::new();
        let vars: Vec<usize> = (0..12).map(|i| m.bounded(format!("x{i}"), 0, 1)).collect();
        m.add_constraint(vars.iter().map(|&v| (v, 2)).collect(), Relation::Eq, 11);
        let tiny = BoundedSearch { max_nodes: 10, ..BoundedSearch::default() };
        assert!(matches!(tiny.solve(&m), Err(Error::TooLarge(_))));
    }
}
