//! Exact linear programming: maximize `c·x` subject to `A x = b`, `x >= 0`,
//! by the two-phase tableau method with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Q], j: usize) -> Q {
        let mut r = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                r -= &cost[b] * &self.rows[i][j];
            }
        }
        r
    }

    /// Maximizes over the columns in `allowed`; `false` when unbounded.
    fn optimize(&mut self, cost: &[Q], allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive())
            else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.rows[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn objective(&self, cost: &[Q]) -> Q {
        self.basis.iter().enumerate().fold(Q::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }
}

pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        let flip = bi.is_negative();
        let mut r: Vec<Q> = row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        r.resize(width, Q::zero());
        r.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(r);
    }
    for (i, r) in rows.iter_mut().enumerate() {
        r[n + i] = Q::one();
    }
    let mut t = Tableau { rows, basis: (n..width).collect(), width };

    let mut phase1 = vec![Q::zero(); width];
    for v in &mut phase1[n..] {
        *v = -Q::one();
    }
    t.optimize(&phase1, width);
    if t.objective(&phase1).is_negative() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis; rows where that fails are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost = c.to_vec();
    cost.resize(width, Q::zero());
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        x[bcol] = t.rhs(i).clone();
    }
    LpOutcome::Optimal { value: t.objective(&cost), x }
}
