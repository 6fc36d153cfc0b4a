//! Exact linear programming.
//!
//! The core is a dense two-phase tableau simplex for standard form
//! `min c.x  s.t.  A x = b, x >= 0`. General programs over free variables
//! are solved through their dual, which keeps the tableau at one row per
//! variable no matter how many inequalities there are. Every program in this
//! crate has few variables and many constraints, so this is the cheap side.

use num_traits::{Signed, Zero};

use super::matrix::solve_square;
use super::rational::{dot, zero, RatVector, Rational};
use crate::error::{Error, Result};

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: RatVector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A linear program over free (sign-unrestricted) variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: RatVector,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: RatVector, sense: Sense) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            sense,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: RatVector, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn le(&mut self, coeffs: RatVector, rhs: Rational) {
        self.constrain(coeffs, Relation::Le, rhs);
    }

    pub fn ge(&mut self, coeffs: RatVector, rhs: Rational) {
        self.constrain(coeffs, Relation::Ge, rhs);
    }

    pub fn equal(&mut self, coeffs: RatVector, rhs: Rational) {
        self.constrain(coeffs, Relation::Eq, rhs);
    }

    fn check_dims(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: self.objective.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: RatVector,
    /// One multiplier per constraint, for the program written as a
    /// maximisation with every inequality in `<=` form. Nonnegative for
    /// inequalities.
    pub duals: RatVector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Solves a general program exactly.
///
/// The program `max c.x s.t. A x <= b` (x free) is solved via its dual
/// `min b.y s.t. A^T y = c, y >= 0`; the primal point is read off the
/// simplex multipliers of the optimal dual basis.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.check_dims()?;
    let n = lp.num_vars;
    let max_obj: RatVector = match lp.sense {
        Sense::Maximize => lp.objective.clone(),
        Sense::Minimize => lp.objective.iter().map(|v| -v).collect(),
    };

    // Expand to `<=` rows, remembering which original constraint each came from.
    let mut rows: Vec<(RatVector, Rational)> = Vec::new();
    let mut origin: Vec<(usize, bool)> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let negated = || (c.coeffs.iter().map(|v| -v).collect(), -c.rhs.clone());
        match c.relation {
            Relation::Le => {
                rows.push((c.coeffs.clone(), c.rhs.clone()));
                origin.push((i, false));
            }
            Relation::Ge => {
                rows.push(negated());
                origin.push((i, false));
            }
            Relation::Eq => {
                rows.push((c.coeffs.clone(), c.rhs.clone()));
                origin.push((i, false));
                rows.push(negated());
                origin.push((i, true));
            }
        }
    }

    // Dual in standard form: one equality row per primal variable.
    let a_std: Vec<RatVector> = (0..n)
        .map(|j| rows.iter().map(|(a, _)| a[j].clone()).collect())
        .collect();
    let c_std: RatVector = rows.iter().map(|(_, b)| b.clone()).collect();

    match solve_standard_form(&a_std, &max_obj, &c_std)? {
        StandardOutcome::Optimal(sol) => {
            let point = sol.duals;
            if !lp.satisfied_by(&point) {
                return Err(Error::Lp("recovered primal point violates constraints".into()));
            }
            let mut duals = vec![zero(); lp.constraints.len()];
            for ((i, negated), y) in origin.iter().zip(&sol.x) {
                if *negated {
                    duals[*i] -= y;
                } else {
                    duals[*i] += y;
                }
            }
            let value = dot(&lp.objective, &point);
            Ok(LpOutcome::Optimal(LpSolution {
                value,
                point,
                duals,
            }))
        }
        StandardOutcome::Unbounded => Ok(LpOutcome::Infeasible),
        StandardOutcome::Infeasible => {
            // Dual infeasible: the primal is unbounded if it is feasible at all.
            let zero_obj = vec![zero(); n];
            match solve_standard_form(&a_std, &zero_obj, &c_std)? {
                StandardOutcome::Optimal(_) => Ok(LpOutcome::Unbounded),
                _ => Ok(LpOutcome::Infeasible),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardSolution {
    pub value: Rational,
    /// Basic optimal solution.
    pub x: RatVector,
    /// Simplex multipliers, one per row (zero for redundant rows).
    pub duals: RatVector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StandardOutcome {
    Optimal(StandardSolution),
    Infeasible,
    Unbounded,
}

/// `min c.x  s.t.  A x = b, x >= 0`, with `A` given by rows.
pub fn solve_standard_form(
    a: &[RatVector],
    b: &[Rational],
    c: &[Rational],
) -> Result<StandardOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }

    let mut tab = Tableau::new(a, b, n);

    // Phase 1: drive the (implicit) artificial variables to zero.
    tab.set_phase_one_costs();
    tab.run()?;
    if !tab.objective_value().is_zero() {
        return Ok(StandardOutcome::Infeasible);
    }
    tab.drive_out_artificials();

    // Phase 2.
    tab.set_costs(c);
    if !tab.run()? {
        return Ok(StandardOutcome::Unbounded);
    }

    let mut x = vec![zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if tab.active[i] {
            x[bv] = tab.rows[i][n].clone();
        }
    }

    // Multipliers from B^T pi = c_B over the non-redundant rows.
    let kept: Vec<usize> = (0..m).filter(|&i| tab.active[i]).collect();
    let bt: Vec<RatVector> = kept
        .iter()
        .map(|&s| kept.iter().map(|&r| a[r][tab.basis[s]].clone()).collect())
        .collect();
    let cb: RatVector = kept.iter().map(|&s| c[tab.basis[s]].clone()).collect();
    let pi = solve_square(&bt, &cb)
        .ok_or_else(|| Error::Lp("singular optimal basis".into()))?;
    let mut duals = vec![zero(); m];
    for (k, &r) in kept.iter().enumerate() {
        duals[r] = pi[k].clone();
    }
    let value = dot(c, &x);
    Ok(StandardOutcome::Optimal(StandardSolution { value, x, duals }))
}

/// Dense tableau. Artificial columns are never re-entered, so they are not
/// stored; a basis entry `>= n` marks a row still held by its artificial.
struct Tableau {
    n: usize,
    rows: Vec<RatVector>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: RatVector,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    fn new(a: &[RatVector], b: &[Rational], n: usize) -> Self {
        let rows: Vec<RatVector> = a
            .iter()
            .zip(b)
            .map(|(row, rhs)| {
                let mut r: RatVector = row.clone();
                r.push(rhs.clone());
                if rhs.is_negative() {
                    for v in r.iter_mut() {
                        *v = -&*v;
                    }
                }
                r
            })
            .collect();
        let m = rows.len();
        Self {
            n,
            rows,
            obj: vec![zero(); n + 1],
            basis: (n..n + m).collect(),
            active: vec![true; m],
        }
    }

    fn objective_value(&self) -> Rational {
        -self.obj[self.n].clone()
    }

    fn set_phase_one_costs(&mut self) {
        let mut obj = vec![zero(); self.n + 1];
        for row in &self.rows {
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= v;
            }
        }
        self.obj = obj;
    }

    fn set_costs(&mut self, c: &[Rational]) {
        let mut obj: RatVector = c.to_vec();
        obj.push(zero());
        for (i, row) in self.rows.iter().enumerate() {
            if !self.active[i] {
                continue;
            }
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= cb * v;
            }
        }
        self.obj = obj;
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if self.basis[i] < self.n {
                continue;
            }
            let entering = (0..self.n)
                .find(|&j| !self.rows[i][j].is_zero() && !self.basis.contains(&j));
            match entering {
                Some(j) => self.pivot(i, j),
                None => self.active[i] = false,
            }
        }
    }

    /// Runs simplex iterations to optimality. `Ok(false)` when unbounded.
    fn run(&mut self) -> Result<bool> {
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= DEGENERATE_LIMIT;
            let Some(col) = self.entering(bland) else {
                return Ok(true);
            };
            let Some(row) = self.leaving(col) else {
                return Ok(false);
            };
            if self.rows[row][self.n].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.n {
            if !self.obj[j].is_negative() {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|b| self.obj[j] < self.obj[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !self.active[i] || !row[col].is_positive() {
                continue;
            }
            let ratio = &row[self.n] / &row[col];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |target: &mut RatVector| {
            if target[c].is_zero() {
                return;
            }
            let factor = target[c].clone();
            for &j in &nz {
                target[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }
}

/// Relative interior of `{x : a_i . x <= b_i}`.
///
/// Returns a point in the relative interior together with the indices of the
/// implicit equalities (rows tight on the whole polyhedron), or `None` when
/// the polyhedron is empty. Each round maximises a common slack over the rows
/// not yet known to be tight; when the best slack is zero, the rows carrying
/// positive multipliers are tight everywhere and join the equality set.
pub fn relative_interior(
    num_vars: usize,
    ineqs: &[(RatVector, Rational)],
) -> Result<Option<(RatVector, Vec<usize>)>> {
    let mut tight = vec![false; ineqs.len()];
    for (i, (a, b)) in ineqs.iter().enumerate() {
        if a.len() != num_vars {
            return Err(Error::DimensionMismatch {
                expected: num_vars,
                found: a.len(),
            });
        }
        if a.iter().all(Zero::is_zero) {
            if b.is_negative() {
                return Ok(None);
            }
            tight[i] = b.is_zero();
        }
    }

    let constant = |i: usize| ineqs[i].0.iter().all(Zero::is_zero);
    loop {
        let open: Vec<usize> = (0..ineqs.len())
            .filter(|&i| !tight[i] && !constant(i))
            .collect();

        let mut objective = vec![zero(); num_vars + 1];
        objective[num_vars] = Rational::from_integer(1.into());
        let build = |capped: bool| {
            let mut lp = LinearProgram::new(objective.clone(), Sense::Maximize);
            for (i, (a, b)) in ineqs.iter().enumerate() {
                if constant(i) {
                    continue;
                }
                let mut row = a.clone();
                row.push(if tight[i] { zero() } else { Rational::from_integer(1.into()) });
                if tight[i] {
                    lp.equal(row, b.clone());
                } else {
                    lp.le(row, b.clone());
                }
            }
            if capped || open.is_empty() {
                let mut cap = vec![zero(); num_vars + 1];
                cap[num_vars] = Rational::from_integer(1.into());
                lp.le(cap, Rational::from_integer(1.into()));
            }
            lp
        };

        let mut lp = build(false);
        let mut outcome = solve_lp(&lp)?;
        if outcome == LpOutcome::Unbounded {
            lp = build(true);
            outcome = solve_lp(&lp)?;
        }
        let sol = match outcome {
            LpOutcome::Optimal(sol) => sol,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => {
                return Err(Error::Lp("slack program unbounded despite cap".into()))
            }
        };

        let slack = sol.point[num_vars].clone();
        if open.is_empty() || slack.is_positive() {
            let mut point = sol.point;
            point.truncate(num_vars);
            let eqs = (0..ineqs.len()).filter(|&i| tight[i]).collect();
            return Ok(Some((point, eqs)));
        }
        if slack.is_negative() {
            return Ok(None);
        }

        // Map LP constraint order back to ineq indices.
        let mut lp_row = 0;
        let mut progressed = false;
        for i in 0..ineqs.len() {
            if constant(i) {
                continue;
            }
            if !tight[i] && sol.duals[lp_row].is_positive() {
                tight[i] = true;
                progressed = true;
            }
            lp_row += 1;
        }
        if !progressed {
            return Err(Error::Lp("no implicit equality identified at zero slack".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{int, ivec, ratio};

    fn optimal(lp: &LinearProgram) -> LpSolution {
        solve_lp(lp).unwrap().optimal().expect("optimal")
    }

    #[test]
    fn box_maximum() {
        let mut lp = LinearProgram::new(ivec(&[1]), Sense::Maximize);
        lp.le(ivec(&[1]), int(1));
        lp.ge(ivec(&[1]), int(-1));
        let sol = optimal(&lp);
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.point, ivec(&[1]));
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let mut lp = LinearProgram::new(ivec(&[0]), Sense::Minimize);
        lp.ge(ivec(&[1]), int(1));
        lp.le(ivec(&[1]), int(0));
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn square_corner() {
        let mut lp = LinearProgram::new(ivec(&[1, 1]), Sense::Maximize);
        for j in 0..2 {
            let mut e = ivec(&[0, 0]);
            e[j] = int(1);
            lp.le(e.clone(), int(1));
            lp.ge(e, int(-1));
        }
        let sol = optimal(&lp);
        assert_eq!(sol.value, int(2));
        assert_eq!(sol.point, ivec(&[1, 1]));
    }

    #[test]
    fn unbounded_and_unconstrained() {
        let mut lp = LinearProgram::new(ivec(&[1, 0]), Sense::Maximize);
        lp.ge(ivec(&[1, 0]), int(0));
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);

        let lp = LinearProgram::new(ivec(&[0, 0]), Sense::Minimize);
        let sol = optimal(&lp);
        assert_eq!(sol.value, int(0));

        let lp = LinearProgram::new(ivec(&[1]), Sense::Minimize);
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_duals() {
        // min x + 2y  s.t. x + y = 3, x <= 2
        let mut lp = LinearProgram::new(ivec(&[1, 2]), Sense::Minimize);
        lp.equal(ivec(&[1, 1]), int(3));
        lp.le(ivec(&[1, 0]), int(2));
        let sol = optimal(&lp);
        assert_eq!(sol.point, ivec(&[2, 1]));
        assert_eq!(sol.value, int(4));
        // max -x - 2y: gradient (-1,-2) = y_eq (1,1) + y_le (1,0)
        assert_eq!(sol.duals, ivec(&[-2, 1]));
    }

    #[test]
    fn standard_form_with_redundant_row() {
        let a = vec![ivec(&[1, 1, 0]), ivec(&[2, 2, 0]), ivec(&[0, 0, 1])];
        let b = ivec(&[1, 2, 0]);
        let c = ivec(&[1, 3, 0]);
        match solve_standard_form(&a, &b, &c).unwrap() {
            StandardOutcome::Optimal(s) => {
                assert_eq!(s.value, int(1));
                assert_eq!(s.x, ivec(&[1, 0, 0]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example for Dantzig's rule without anti-cycling.
        let a = vec![
            vec![ratio(1, 4), int(-8), int(-1), int(9), int(1), int(0), int(0)],
            vec![ratio(1, 2), int(-12), ratio(-1, 2), int(3), int(0), int(1), int(0)],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ];
        let b = ivec(&[0, 0, 1]);
        let c = vec![ratio(-3, 4), int(20), ratio(-1, 2), int(6), int(0), int(0), int(0)];
        match solve_standard_form(&a, &b, &c).unwrap() {
            StandardOutcome::Optimal(s) => assert_eq!(s.value, ratio(-5, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn relative_interior_of_square_is_centre() {
        // 0 <= a <= 2, -1 <= b <= 1
        let ineqs = vec![
            (ivec(&[1, 0]), int(2)),
            (ivec(&[-1, 0]), int(0)),
            (ivec(&[0, 1]), int(1)),
            (ivec(&[0, -1]), int(1)),
            (ivec(&[0, 0]), int(0)),
        ];
        let (p, eqs) = relative_interior(2, &ineqs).unwrap().unwrap();
        assert_eq!(p, ivec(&[1, 0]));
        assert_eq!(eqs, vec![4]);
    }

    #[test]
    fn relative_interior_finds_implicit_equalities() {
        // x <= 1, -x <= -1 (so x = 1), 0 <= y <= 2
        let ineqs = vec![
            (ivec(&[1, 0]), int(1)),
            (ivec(&[-1, 0]), int(-1)),
            (ivec(&[0, 1]), int(2)),
            (ivec(&[0, -1]), int(0)),
        ];
        let (p, eqs) = relative_interior(2, &ineqs).unwrap().unwrap();
        assert_eq!(eqs, vec![0, 1]);
        assert_eq!(p, ivec(&[1, 1]));

        let empty = vec![(ivec(&[1]), int(-1)), (ivec(&[-1]), int(0))];
        assert!(relative_interior(1, &empty).unwrap().is_none());
    }
}
