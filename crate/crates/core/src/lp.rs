//! Dense two-phase simplex over exact rationals.
//!
//! Every variable is implicitly nonnegative. Pivoting follows Bland's rule, so
//! the method terminates on degenerate problems, which the world-weight
//! systems of the coherence module produce routinely.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add(&mut self, constraint: Constraint) {
        assert_eq!(constraint.coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(constraint);
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.add(Constraint::new(coeffs, relation, rhs));
    }

    /// Feasibility only; the returned point is some feasible vertex.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let zero = vec![Rational::zero(); self.num_vars];
        match self.optimize(&zero, Sense::Minimize) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn optimize(&self, objective: &[Rational], sense: Sense) -> LpOutcome {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        let mut t = match Tableau::phase_one(self) {
            Some(t) => t,
            None => return LpOutcome::Infeasible,
        };
        let cost: Vec<Rational> = match sense {
            Sense::Minimize => objective.to_vec(),
            Sense::Maximize => objective.iter().map(|c| -c).collect(),
        };
        if !t.minimize(&cost) {
            return LpOutcome::Unbounded;
        }
        let point = t.solution(self.num_vars);
        let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        LpOutcome::Optimal { value, point }
    }
}

/// Rows `A x = b` with `b ≥ 0`, one basic column per row, plus the reduced
/// cost row of the current objective.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial and may not re-enter.
    allowed: usize,
    cost_row: Vec<Rational>,
    cost_value: Rational,
}

impl Tableau {
    /// Runs phase one. `None` when the program is infeasible.
    fn phase_one(lp: &LinearProgram) -> Option<Tableau> {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let art_start = n + slacks;
        let width = art_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack = n;
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            let mut row = vec![Rational::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = if flip { -a } else { a.clone() };
            }
            match c.relation {
                Relation::Le | Relation::Ge => {
                    let sign_pos = (c.relation == Relation::Le) != flip;
                    row[slack] = Rational::from_integer(if sign_pos { 1.into() } else { (-1).into() });
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[art_start + i] = Rational::from_integer(1.into());
            rows.push(row);
            rhs.push(if flip { -&c.rhs } else { c.rhs.clone() });
        }

        let mut t = Tableau {
            rows,
            rhs,
            basis: (art_start..art_start + m).collect(),
            allowed: width,
            cost_row: Vec::new(),
            cost_value: Rational::zero(),
        };
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().skip(art_start) {
            *c = Rational::from_integer(1.into());
        }
        let bounded = t.minimize(&cost);
        debug_assert!(bounded, "phase one is bounded below by zero");
        if !t.cost_value.is_zero() {
            return None;
        }

        // Drive remaining zero-level artificials out of the basis; rows where
        // that is impossible are linearly dependent and can be dropped.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        t.allowed = art_start;
        Some(t)
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            eliminate(&mut self.rows[i], &pivot_row, &f);
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost_row.is_empty() && !self.cost_row[col].is_zero() {
            let f = self.cost_row[col].clone();
            eliminate(&mut self.cost_row, &pivot_row, &f);
            self.cost_value += &f * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Minimizes `cost · x` from the current basis. Returns `false` when
    /// unbounded. Afterwards `cost_value` holds the optimum.
    fn minimize(&mut self, cost: &[Rational]) -> bool {
        let width = self.rows.first().map_or(cost.len(), Vec::len);
        let mut reduced: Vec<Rational> = (0..width).map(|j| cost.get(j).cloned().unwrap_or_default()).collect();
        let mut value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost.get(b).cloned().unwrap_or_default();
            if cb.is_zero() {
                continue;
            }
            eliminate(&mut reduced, &self.rows[i], &cb);
            value += &cb * &self.rhs[i];
        }
        self.cost_row = reduced;
        self.cost_value = value;

        loop {
            let Some(col) = (0..self.allowed).find(|&j| self.cost_row[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// `row -= f · pivot`, skipping zero entries of `pivot`.
fn eliminate(row: &mut [Rational], pivot: &[Rational], f: &Rational) {
    for (x, p) in row.iter_mut().zip(pivot) {
        if !p.is_zero() {
            *x -= f * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.add_row(v(&[1, 0]), Relation::Le, int(4));
        lp.add_row(v(&[0, 2]), Relation::Le, int(12));
        lp.add_row(v(&[3, 2]), Relation::Le, int(18));
        let out = lp.optimize(&v(&[3, 5]), Sense::Maximize);
        assert_eq!(out, LpOutcome::Optimal { value: int(36), point: v(&[2, 6]) });
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y, x + y = 1, x ≥ 1/3, y ≥ 1/4
        let mut lp = LinearProgram::new(2);
        lp.add_row(v(&[1, 1]), Relation::Eq, int(1));
        lp.add_row(v(&[1, 0]), Relation::Ge, ratio(1, 3));
        lp.add_row(v(&[0, 1]), Relation::Ge, ratio(1, 4));
        assert_eq!(lp.optimize(&v(&[1, 0]), Sense::Minimize).value(), Some(&ratio(1, 3)));
        assert_eq!(lp.optimize(&v(&[1, 0]), Sense::Maximize).value(), Some(&ratio(3, 4)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(v(&[1, 1]), Relation::Le, int(1));
        lp.add_row(v(&[1, 1]), Relation::Ge, int(2));
        assert_eq!(lp.optimize(&v(&[0, 0]), Sense::Minimize), LpOutcome::Infeasible);
        assert!(lp.feasible_point().is_none());

        let mut lp = LinearProgram::new(2);
        lp.add_row(v(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.optimize(&v(&[1, 1]), Sense::Maximize), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // -x ≤ -2 means x ≥ 2
        let mut lp = LinearProgram::new(1);
        lp.add_row(v(&[-1]), Relation::Le, int(-2));
        lp.add_row(v(&[1]), Relation::Le, int(5));
        assert_eq!(lp.optimize(&v(&[1]), Sense::Minimize).value(), Some(&int(2)));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(3);
        lp.add_row(v(&[1, 1, 1]), Relation::Eq, int(1));
        lp.add_row(v(&[2, 2, 2]), Relation::Eq, int(2));
        lp.add_row(v(&[1, 0, 0]), Relation::Eq, ratio(1, 2));
        let out = lp.optimize(&v(&[0, 1, 0]), Sense::Maximize);
        assert_eq!(out.value(), Some(&ratio(1, 2)));
        let p = out.point().unwrap();
        assert_eq!(p[0], ratio(1, 2));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.add_row(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0));
        lp.add_row(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0));
        lp.add_row(v(&[0, 0, 1, 0]), Relation::Le, int(1));
        let obj = vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)];
        assert_eq!(lp.optimize(&obj, Sense::Maximize).value(), Some(&ratio(1, 20)));
    }

    #[test]
    fn no_constraints() {
        let lp = LinearProgram::new(2);
        assert_eq!(lp.optimize(&v(&[1, 1]), Sense::Minimize).value(), Some(&int(0)));
        assert_eq!(lp.optimize(&v(&[1, 0]), Sense::Maximize), LpOutcome::Unbounded);
    }
}
