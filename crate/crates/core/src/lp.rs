//! Exact two-phase simplex with Bland's rule.
//!
//! Variables are free (unrestricted in sign); bounds are ordinary constraints.
//! Internally each variable is split as `x = x⁺ − x⁻` and every `≥` row gets a
//! surplus column, so the tableau works in standard form.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn ge(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, relation: Relation::Ge, rhs }
    }

    /// `coeffs · x ≤ rhs`, stored as the negated `≥` row.
    pub fn le(coeffs: Vec<T>, rhs: T) -> Self {
        Self {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            relation: Relation::Ge,
            rhs: -rhs,
        }
    }

    pub fn eq(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, relation: Relation::Eq, rhs }
    }

    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        let lhs = crate::linalg::dot(&self.coeffs, x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub variables: usize,
    pub constraints: Vec<Constraint<T>>,
    pub objective: Vec<T>,
    pub sense: Sense,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(variables: usize, objective: Vec<T>, sense: Sense) -> Self {
        Self { variables, constraints: Vec::new(), objective, sense }
    }

    /// A pure feasibility problem (zero objective).
    pub fn feasibility(variables: usize) -> Self {
        Self::new(variables, vec![T::zero(); variables], Sense::Minimize)
    }

    pub fn push(&mut self, c: Constraint<T>) -> &mut Self {
        self.constraints.push(c);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.variables {
            return Err(Error::MalformedProgram(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.variables
            )));
        }
        if let Some((i, c)) = self
            .constraints
            .iter()
            .enumerate()
            .find(|(_, c)| c.coeffs.len() != self.variables)
        {
            return Err(Error::MalformedProgram(format!(
                "constraint {i} has {} coefficients for {} variables",
                c.coeffs.len(),
                self.variables
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    /// `point` is feasible and `point + t·ray` stays feasible for all `t ≥ 0`
    /// while the objective improves without bound.
    Unbounded { point: Vec<T>, ray: Vec<T> },
}

impl<T> LpOutcome<T> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn optimum(&self) -> Option<&T> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
        }
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs, one per column.
    obj: Vec<T>,
    /// Negated objective value of the current basis.
    obj_rhs: T,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * inv.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() * inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let delta = f.clone() * pivot_row[j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                let delta = f.clone() * pivot_row[j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.obj_rhs = self.obj_rhs.clone() - f * pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's-rule iterations over columns `< eligible`. Returns the
    /// entering column of an unbounded direction, if one is found.
    fn run(&mut self, eligible: usize) -> Option<usize> {
        loop {
            let c = (0..eligible).find(|&j| self.obj[j].is_negative())?;
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<T> {
        let mut v = vec![T::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < ncols {
                v[b] = self.rhs[i].clone();
            }
        }
        v
    }
}

fn unsplit<T: Scalar>(cols: &[T], n: usize) -> Vec<T> {
    (0..n).map(|j| cols[2 * j].clone() - cols[2 * j + 1].clone()).collect()
}

/// Solves `lp` exactly.
pub fn lp_solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    lp.validate()?;
    let n = lp.variables;
    let m = lp.constraints.len();
    let surplus: Vec<Option<usize>> = {
        let mut next = 2 * n;
        lp.constraints
            .iter()
            .map(|c| match c.relation {
                Relation::Ge => {
                    next += 1;
                    Some(next - 1)
                }
                Relation::Eq => None,
            })
            .collect()
    };
    let structural = 2 * n + surplus.iter().flatten().count();
    let total = structural + m;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![T::zero(); total];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[2 * j] = a.clone();
            row[2 * j + 1] = -a.clone();
        }
        if let Some(s) = surplus[i] {
            row[s] = -T::one();
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        row[structural + i] = T::one();
        rows.push(row);
        rhs.push(b);
    }

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![T::zero(); total];
    let mut obj_rhs = T::zero();
    for i in 0..m {
        for j in 0..structural {
            obj[j] = obj[j].clone() - rows[i][j].clone();
        }
        obj_rhs = obj_rhs - rhs[i].clone();
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (structural..total).collect(),
        obj,
        obj_rhs,
    };
    t.run(total);
    if !t.obj_rhs.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= structural {
            if let Some(c) = (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, c);
                i += 1;
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for row in t.rows.iter_mut() {
        row.truncate(structural);
    }

    // Phase 2.
    let sign = match lp.sense {
        Sense::Minimize => T::one(),
        Sense::Maximize => -T::one(),
    };
    let mut obj = vec![T::zero(); structural];
    for (j, c) in lp.objective.iter().enumerate() {
        obj[2 * j] = c.clone() * sign.clone();
        obj[2 * j + 1] = -(c.clone() * sign.clone());
    }
    let mut obj_rhs = T::zero();
    for (i, &b) in t.basis.iter().enumerate() {
        let cb = obj[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..structural {
            obj[j] = obj[j].clone() - cb.clone() * t.rows[i][j].clone();
        }
        obj_rhs = obj_rhs - cb * t.rhs[i].clone();
    }
    t.obj = obj;
    t.obj_rhs = obj_rhs;

    if let Some(c) = t.run(structural) {
        let point = unsplit(&t.column_values(structural), n);
        let mut dir = vec![T::zero(); structural];
        dir[c] = T::one();
        for (i, &b) in t.basis.iter().enumerate() {
            dir[b] = -t.rows[i][c].clone();
        }
        return Ok(LpOutcome::Unbounded { point, ray: unsplit(&dir, n) });
    }
    let point = unsplit(&t.column_values(structural), n);
    let value = crate::linalg::dot(&lp.objective, &point);
    Ok(LpOutcome::Optimal { value, point })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrictRelation {
    Ge,
    Gt,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrictConstraint<T> {
    pub coeffs: Vec<T>,
    pub relation: StrictRelation,
    pub rhs: T,
}

impl<T: Scalar> StrictConstraint<T> {
    pub fn ge(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, relation: StrictRelation::Ge, rhs }
    }

    pub fn gt(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, relation: StrictRelation::Gt, rhs }
    }

    pub fn lt(coeffs: Vec<T>, rhs: T) -> Self {
        Self::gt(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn le(coeffs: Vec<T>, rhs: T) -> Self {
        Self::ge(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn eq(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, relation: StrictRelation::Eq, rhs }
    }

    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        let lhs = crate::linalg::dot(&self.coeffs, x);
        match self.relation {
            StrictRelation::Ge => lhs >= self.rhs,
            StrictRelation::Gt => lhs > self.rhs,
            StrictRelation::Eq => lhs == self.rhs,
        }
    }
}

/// Decides whether a system with strict inequalities has a solution.
///
/// Each strict row `c·x > b` becomes `c·x − ε ≥ b` with `ε ≤ 1`; the system is
/// strictly feasible iff the maximal `ε` is positive. Returns a witness
/// satisfying every row (strict ones strictly), or `None`.
pub fn lp_feasible_strict<T: Scalar>(
    variables: usize,
    constraints: &[StrictConstraint<T>],
) -> Result<Option<Vec<T>>> {
    if constraints.is_empty() {
        return Err(Error::MalformedProgram("no constraints".into()));
    }
    let eps = variables;
    let mut objective = vec![T::zero(); variables + 1];
    objective[eps] = T::one();
    let mut lp = LinearProgram::new(variables + 1, objective, Sense::Maximize);
    for c in constraints {
        if c.coeffs.len() != variables {
            return Err(Error::MalformedProgram(format!(
                "constraint has {} coefficients for {variables} variables",
                c.coeffs.len()
            )));
        }
        let mut coeffs = c.coeffs.clone();
        coeffs.push(T::zero());
        lp.push(match c.relation {
            StrictRelation::Ge => Constraint::ge(coeffs, c.rhs.clone()),
            StrictRelation::Eq => Constraint::eq(coeffs, c.rhs.clone()),
            StrictRelation::Gt => {
                coeffs[eps] = -T::one();
                Constraint::ge(coeffs, c.rhs.clone())
            }
        });
    }
    let mut cap = vec![T::zero(); variables + 1];
    cap[eps] = T::one();
    lp.push(Constraint::le(cap, T::one()));
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(variables);
            Ok(Some(point))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Invariant("bounded slack program unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn r(v: i64) -> Rational {
        int(v)
    }

    #[test]
    fn one_constraint_minimum() {
        let mut lp = LinearProgram::new(1, vec![r(1)], Sense::Minimize);
        lp.push(Constraint::ge(vec![r(1)], r(1)));
        let out = lp_solve(&lp).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: r(1), point: vec![r(1)] });
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(1, vec![r(-1)], Sense::Minimize);
        lp.push(Constraint::ge(vec![r(1)], r(0)));
        let out = lp_solve(&lp).unwrap();
        assert_eq!(out.status(), LpStatus::Unbounded);
        let LpOutcome::Unbounded { point, ray } = out else { unreachable!() };
        assert!(point[0] >= r(0));
        assert!(ray[0] > r(0));
    }

    #[test]
    fn infeasible_and_malformed() {
        let mut lp = LinearProgram::<Rational>::feasibility(1);
        lp.push(Constraint::ge(vec![r(1)], r(2)));
        lp.push(Constraint::le(vec![r(1)], r(1)));
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Infeasible);
        let mut bad = LinearProgram::<Rational>::feasibility(2);
        bad.push(Constraint::ge(vec![r(1)], r(0)));
        assert!(matches!(lp_solve(&bad), Err(Error::MalformedProgram(_))));
    }

    #[test]
    fn arc_length_program_for_unit_prices() {
        // min θ₁ over the region where bundle 10 is optimal for prices (0,1,1,2).
        let mut lp = LinearProgram::new(2, vec![r(1), r(0)], Sense::Minimize);
        lp.push(Constraint::ge(vec![r(1), r(0)], r(1)));
        lp.push(Constraint::ge(vec![r(1), r(-1)], r(0)));
        lp.push(Constraint::ge(vec![r(0), r(-1)], r(-1)));
        let out = lp_solve(&lp).unwrap();
        assert_eq!(out.optimum(), Some(&r(1)));
        for c in &lp.constraints {
            assert!(c.is_satisfied_by(out.witness().unwrap()));
        }
    }

    #[test]
    fn degenerate_duplicated_constraints_terminate() {
        let mut lp = LinearProgram::new(2, vec![r(-1), r(-1)], Sense::Minimize);
        for _ in 0..4 {
            lp.push(Constraint::le(vec![r(1), r(1)], r(1)));
            lp.push(Constraint::ge(vec![r(1), r(0)], r(0)));
            lp.push(Constraint::ge(vec![r(0), r(1)], r(0)));
            lp.push(Constraint::eq(vec![r(1), r(-1)], r(0)));
        }
        let out = lp_solve(&lp).unwrap();
        assert_eq!(out.optimum(), Some(&r(-1)));
        assert_eq!(out.witness().unwrap(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn strict_interval() {
        let cs = vec![
            StrictConstraint::gt(vec![r(1)], r(0)),
            StrictConstraint::lt(vec![r(1)], r(1)),
        ];
        let w = lp_feasible_strict(1, &cs).unwrap().unwrap();
        assert_eq!(w, vec![rat(1, 2)]);
        let cs = vec![
            StrictConstraint::gt(vec![r(1)], r(0)),
            StrictConstraint::lt(vec![r(1)], r(0)),
        ];
        assert_eq!(lp_feasible_strict(1, &cs).unwrap(), None);
        assert!(lp_feasible_strict::<Rational>(1, &[]).is_err());
    }
}
