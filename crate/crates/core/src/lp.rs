//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Only maximization is supported. Variables carry optional lower and upper
//! bounds; rows are `≤`, `=` or `≥`. Equalities get phase-one artificials.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub kind: RowKind,
    pub rhs: Rational,
}

/// `maximize objective·x` subject to the rows and bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Row>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
    objective: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Pivot budget per solve; Bland's rule cannot cycle, so hitting it means a bug.
pub const DEFAULT_PIVOT_LIMIT: usize = 1_000_000;

impl LinearProgram {
    /// `num_vars` variables, each `≥ 0` with no upper bound, zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
            objective: vec![Rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, kind: RowKind, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::InvalidInput(format!(
                "row has {} coefficients, expected {}",
                coeffs.len(),
                self.num_vars
            )));
        }
        self.rows.push(Row { coeffs, kind, rhs });
        Ok(())
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> Result<()> {
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(Error::InvalidInput(format!("variable {var} has lower bound {l} > upper bound {u}")));
            }
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(())
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) -> Result<()> {
        if objective.len() != self.num_vars {
            return Err(Error::InvalidInput("objective has the wrong length".into()));
        }
        self.objective = objective;
        Ok(())
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().enumerate().all(|(j, v)| {
                self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
            })
            && self.rows.iter().all(|row| {
                let lhs = dot(&row.coeffs, x);
                match row.kind {
                    RowKind::Le => lhs <= row.rhs,
                    RowKind::Eq => lhs == row.rhs,
                    RowKind::Ge => lhs >= row.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(c, _)| !c.is_zero()).fold(Rational::zero(), |acc, (c, v)| acc + c * v)
}

/// Original variable `x_j = offset + Σ sign·z_k` over nonnegative `z`.
struct Substitution {
    offset: Rational,
    terms: Vec<(usize, bool)>,
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, last entry is minus the objective value.
    cost: Vec<Rational>,
    basic: Vec<usize>,
    width: usize,
    pivots: usize,
    pivot_limit: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for v in self.rows[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let support: Vec<usize> = (0..=w).filter(|&j| !self.rows[row][j].is_zero()).collect();
        let pivot_row = self.rows[row].clone();
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                target[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row {
                eliminate(r);
            }
        }
        eliminate(&mut self.cost);
        self.basic[row] = col;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// go to the lowest-index basic variable.
    fn run(&mut self, eligible: &[bool]) -> Result<Phase> {
        loop {
            let Some(col) = (0..self.width).find(|&j| eligible[j] && self.cost[j].is_positive()) else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[self.width] / &r[col];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && self.basic[i] < self.basic[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            if self.pivots >= self.pivot_limit {
                return Err(Error::ResourceLimit { what: "simplex pivots", limit: self.pivot_limit });
            }
            self.pivot(row, col);
        }
    }

    fn set_cost(&mut self, costs: &[Rational]) {
        self.cost = costs.to_vec();
        self.cost.push(Rational::zero());
        for (i, &b) in self.basic.iter().enumerate() {
            let cb = costs[b].clone();
            if !cb.is_zero() {
                for (c, v) in self.cost.iter_mut().zip(&self.rows[i]) {
                    if !v.is_zero() {
                        *c -= &cb * v;
                    }
                }
            }
        }
    }
}

pub fn maximize(lp: &LinearProgram) -> Result<LpOutcome> {
    maximize_with_limit(lp, DEFAULT_PIVOT_LIMIT)
}

pub fn maximize_with_limit(lp: &LinearProgram, pivot_limit: usize) -> Result<LpOutcome> {
    // Substitute bounded/free variables by nonnegative ones.
    let mut subs = Vec::with_capacity(lp.num_vars);
    let mut nz = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..lp.num_vars {
        let sub = match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    bound_rows.push((nz, u - l));
                }
                Substitution { offset: l.clone(), terms: vec![(nz, true)] }
            }
            (None, Some(u)) => Substitution { offset: u.clone(), terms: vec![(nz, false)] },
            (None, None) => {
                nz += 1;
                Substitution { offset: Rational::zero(), terms: vec![(nz - 1, true), (nz, false)] }
            }
        };
        nz += 1;
        subs.push(sub);
    }

    // Rows over z, normalized to a nonnegative right-hand side.
    let mut rows: Vec<(Vec<Rational>, RowKind, Rational)> = Vec::new();
    for row in &lp.rows {
        let mut coeffs = vec![Rational::zero(); nz];
        let mut rhs = row.rhs.clone();
        for (a, sub) in row.coeffs.iter().zip(&subs) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &sub.offset;
            for &(k, positive) in &sub.terms {
                if positive {
                    coeffs[k] += a;
                } else {
                    coeffs[k] -= a;
                }
            }
        }
        rows.push((coeffs, row.kind, rhs));
    }
    for (k, cap) in bound_rows {
        let mut coeffs = vec![Rational::zero(); nz];
        coeffs[k] = Rational::one();
        rows.push((coeffs, RowKind::Le, cap));
    }
    for (coeffs, kind, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            coeffs.iter_mut().for_each(|c| *c = -c.clone());
            *rhs = -rhs.clone();
            *kind = match kind {
                RowKind::Le => RowKind::Ge,
                RowKind::Ge => RowKind::Le,
                RowKind::Eq => RowKind::Eq,
            };
        }
    }

    // Columns: z, then one slack or surplus per inequality, then artificials.
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != RowKind::Le).count();
    let width = nz + n_slack + n_art;
    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        cost: Vec::new(),
        basic: Vec::with_capacity(m),
        width,
        pivots: 0,
        pivot_limit,
    };
    let (mut next_slack, mut next_art) = (nz, nz + n_slack);
    for (coeffs, kind, rhs) in rows {
        let mut r = coeffs;
        r.resize(width + 1, Rational::zero());
        r[width] = rhs;
        match kind {
            RowKind::Le => {
                r[next_slack] = Rational::one();
                tableau.basic.push(next_slack);
                next_slack += 1;
            }
            RowKind::Ge => {
                r[next_slack] = -Rational::one();
                next_slack += 1;
                r[next_art] = Rational::one();
                tableau.basic.push(next_art);
                next_art += 1;
            }
            RowKind::Eq => {
                r[next_art] = Rational::one();
                tableau.basic.push(next_art);
                next_art += 1;
            }
        }
        tableau.rows.push(r);
    }
    let is_artificial = |j: usize| j >= nz + n_slack;

    // Phase one: maximize minus the sum of artificials.
    if n_art > 0 {
        let costs: Vec<Rational> =
            (0..width).map(|j| if is_artificial(j) { -Rational::one() } else { Rational::zero() }).collect();
        tableau.set_cost(&costs);
        tableau.run(&vec![true; width])?;
        if !tableau.cost[width].is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tableau.rows.len() {
            if is_artificial(tableau.basic[i]) {
                match (0..width).find(|&j| !is_artificial(j) && !tableau.rows[i][j].is_zero()) {
                    Some(j) => tableau.pivot(i, j),
                    None => {
                        tableau.rows.remove(i);
                        tableau.basic.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase two.
    let mut costs = vec![Rational::zero(); width];
    for (c, sub) in lp.objective.iter().zip(&subs) {
        for &(k, positive) in &sub.terms {
            costs[k] = if positive { c.clone() } else { -c.clone() };
        }
    }
    tableau.set_cost(&costs);
    let eligible: Vec<bool> = (0..width).map(|j| !is_artificial(j)).collect();
    if let Phase::Unbounded = tableau.run(&eligible)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut z = vec![Rational::zero(); width];
    for (i, &b) in tableau.basic.iter().enumerate() {
        z[b] = tableau.rows[i][width].clone();
    }
    let point: Vec<Rational> = subs
        .iter()
        .map(|sub| {
            sub.terms.iter().fold(sub.offset.clone(), |acc, &(k, positive)| {
                if positive {
                    acc + &z[k]
                } else {
                    acc - &z[k]
                }
            })
        })
        .collect();
    if !lp.is_feasible(&point) {
        return Err(Error::InternalConsistency("simplex returned an infeasible point".into()));
    }
    let value = lp.objective_value(&point);
    Ok(LpOutcome::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn bounded_single_variable() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(qs(&[1]), RowKind::Le, q(1)).unwrap();
        lp.set_objective(qs(&[1])).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Optimal { value: q(1), point: qs(&[1]) });
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(qs(&[1])).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(qs(&[1, 1]), RowKind::Eq, q(3)).unwrap();
        lp.set_bounds(0, Some(q(0)), Some(q(1))).unwrap();
        lp.set_bounds(1, Some(q(0)), Some(q(1))).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn base_polytope_of_u23() {
        // 0 ≤ x ≤ 1, x(E) = 2, x_e ≤ 1 for the singleton flacets
        let mut lp = LinearProgram::new(3);
        for j in 0..3 {
            lp.set_bounds(j, Some(q(0)), Some(q(1))).unwrap();
            let mut row = qs(&[0, 0, 0]);
            row[j] = q(1);
            lp.add_row(row, RowKind::Le, q(1)).unwrap();
        }
        lp.add_row(qs(&[1, 1, 1]), RowKind::Eq, q(2)).unwrap();
        lp.set_objective(qs(&[1, 1, 0])).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Optimal { value: q(2), point: qs(&[1, 1, 0]) });
    }

    #[test]
    fn free_and_upper_bounded_variables() {
        // max x0 + x1 with x0 free, x0 ≤ 3 via row, x1 ≤ 2 (no lower bound), x0 - x1 ≥ -10
        let mut lp = LinearProgram::new(2);
        lp.set_bounds(0, None, None).unwrap();
        lp.set_bounds(1, None, Some(q(2))).unwrap();
        lp.add_row(qs(&[1, 0]), RowKind::Le, q(3)).unwrap();
        lp.add_row(qs(&[1, -1]), RowKind::Ge, q(-10)).unwrap();
        lp.set_objective(qs(&[1, 1])).unwrap();
        match maximize(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(5)),
            other => panic!("{other:?}"),
        }
        // minimizing x1 alone is unbounded below
        lp.set_objective(qs(&[0, -1])).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(qs(&[1, 1]), RowKind::Eq, q(1)).unwrap();
        lp.add_row(qs(&[2, 2]), RowKind::Eq, q(2)).unwrap();
        lp.set_objective(qs(&[3, 1])).unwrap();
        assert_eq!(maximize(&lp).unwrap(), LpOutcome::Optimal { value: q(3), point: qs(&[1, 0]) });
    }

    #[test]
    fn fractional_optimum() {
        // max x + y s.t. 2x + y ≤ 2, x + 2y ≤ 2 → x = y = 2/3
        let mut lp = LinearProgram::new(2);
        lp.add_row(qs(&[2, 1]), RowKind::Le, q(2)).unwrap();
        lp.add_row(qs(&[1, 2]), RowKind::Le, q(2)).unwrap();
        lp.set_objective(qs(&[1, 1])).unwrap();
        let two_thirds = Rational::new(2.into(), 3.into());
        assert_eq!(
            maximize(&lp).unwrap(),
            LpOutcome::Optimal { value: q(4) / q(3), point: vec![two_thirds.clone(), two_thirds] }
        );
    }

    #[test]
    fn pivot_limit_is_enforced() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(qs(&[1, 1]), RowKind::Le, q(4)).unwrap();
        lp.set_objective(qs(&[1, 2])).unwrap();
        assert!(matches!(maximize_with_limit(&lp, 0), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn input_validation() {
        let mut lp = LinearProgram::new(2);
        assert!(lp.add_row(qs(&[1]), RowKind::Le, q(1)).is_err());
        assert!(lp.set_bounds(0, Some(q(2)), Some(q(1))).is_err());
        assert!(lp.set_objective(qs(&[1])).is_err());
    }
}
