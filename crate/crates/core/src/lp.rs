//! Exact rational linear programming (dense two-phase simplex, Bland's rule).
//!
//! Problems here are tiny (tens of variables), so a dense tableau over `ℚ` is
//! adequate and never loses a feasibility decision to rounding.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Unbounded,
    Infeasible,
}

/// `maximize c·x` subject to linear rows; variables are free unless marked.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    nonneg: Vec<bool>,
    rows: Vec<(Vec<Q>, Relation, Q)>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            nonneg: vec![false; nvars],
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn add_ge(&mut self, coeffs: Vec<Q>, rhs: Q) {
        self.add(coeffs, Relation::Ge, rhs);
    }

    pub fn add_le(&mut self, coeffs: Vec<Q>, rhs: Q) {
        self.add(coeffs, Relation::Le, rhs);
    }

    pub fn add_eq(&mut self, coeffs: Vec<Q>, rhs: Q) {
        self.add(coeffs, Relation::Eq, rhs);
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        match self.maximize(&vec![Q::zero(); self.nvars]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    pub fn maximize(&self, objective: &[Q]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars);
        // column layout: one column per nonneg var, two per free var,
        // then slacks, then artificials
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for &nn in &self.nonneg {
            if nn {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let m = self.rows.len();
        let nslack = self
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let slack_start = ncols;
        let art_start = slack_start + nslack;

        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (coeffs, rel, rhs) in &self.rows {
            let mut row = vec![Q::zero(); art_start];
            for (j, a) in coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            let mut rel = *rel;
            let mut b = rhs.clone();
            if rel != Relation::Eq {
                row[slack] = if rel == Relation::Le { Q::one() } else { -Q::one() };
                slack += 1;
            }
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            // a `Le` row after sign normalization has a +1 slack usable as basis
            let basic_slack = if rel == Relation::Le {
                (slack_start..art_start).find(|&c| row[c].is_one())
            } else {
                None
            };
            row.push(b);
            needs_art.push(basic_slack.is_none());
            basis.push(basic_slack.unwrap_or(usize::MAX));
            rows.push(row);
        }
        let nart = needs_art.iter().filter(|&&x| x).count();
        let total = art_start + nart;
        // widen rows with artificial columns, keeping rhs last
        let mut art = art_start;
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().unwrap();
            row.resize(total, Q::zero());
            if needs_art[i] {
                row[art] = Q::one();
                basis[i] = art;
                art += 1;
            }
            row.push(rhs);
        }
        let mut tab = Tableau { rows, basis, ncols: total };

        if nart > 0 {
            let mut cost = vec![Q::zero(); total];
            for c in cost.iter_mut().skip(art_start) {
                *c = -Q::one();
            }
            tab.run(&cost, total);
            let value: Q = tab
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= art_start)
                .map(|(i, _)| tab.rhs(i).clone())
                .sum();
            if value.is_positive() {
                return LpOutcome::Infeasible;
            }
            // pivot remaining (zero-valued) artificials out of the basis
            let mut i = 0;
            while i < tab.rows.len() {
                if tab.basis[i] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                        tab.pivot(i, j);
                        i += 1;
                    } else {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                } else {
                    i += 1;
                }
            }
        }

        let mut cost = vec![Q::zero(); total];
        for (j, c) in objective.iter().enumerate() {
            let (p, n) = var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        if !tab.run(&cost, art_start) {
            return LpOutcome::Unbounded;
        }
        let mut y = vec![Q::zero(); total];
        for (i, &b) in tab.basis.iter().enumerate() {
            y[b] = tab.rhs(i).clone();
        }
        let point: Vec<Q> = var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &y[p] - &y[n],
                None => y[p].clone(),
            })
            .collect();
        let value = objective
            .iter()
            .zip(&point)
            .map(|(c, x)| c * x)
            .sum();
        LpOutcome::Optimal { value, point }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` using only columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, cost: &[Q], allowed: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        r -= &cost[b] * &self.rows[i][j];
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}
