use std::fmt;

use num_traits::Zero;

use super::{minimax_report, Instance, MinimaxReport, Provenance};
use crate::error::Result;
use crate::exactlp::affine_rank;
use crate::exactlp::rational::{dot, neg, RatVector, Rational};
use crate::operators::{
    norm_attainment_extremes, operator_smoothness_order, orthogonality_witness,
    subspace_operator_basis, Operator, SupportPair,
};
use crate::proximity::{bj_orthogonal_subspace, distance_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Prop1,
    ThGen,
    L1Prop,
    LinInd,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::ThGen, Theorem::L1Prop, Theorem::LinInd, Theorem::Prop1];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Prop1 => "prop1",
            Theorem::ThGen => "thgen",
            Theorem::L1Prop => "l1prop",
            Theorem::LinInd => "linind",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Verified,
    HypothesisNotMet,
    Degenerate,
    Violation,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::HypothesisNotMet => "hypothesis_not_met",
            Status::Degenerate => "degenerate",
            Status::Violation => "VIOLATION",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Status::Verified,
            Status::HypothesisNotMet,
            Status::Degenerate,
            Status::Violation,
        ]
        .into_iter()
        .find(|s| s.name() == name)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witnesses {
    pub x0: Option<RatVector>,
    pub y0_star: Option<RatVector>,
    /// Convex weights of a norming functional of `T` vanishing on `L(X, Z)`.
    pub weights: Vec<Rational>,
    /// `(x, y*)` of each weighted functional.
    pub pairs: Vec<(RatVector, RatVector)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub provenance: Option<Provenance>,
    pub hypothesis_checks: Vec<Check>,
    pub conclusion_checks: Vec<Check>,
    pub witnesses: Witnesses,
    pub status: Status,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(theorem: Theorem, inst: &Instance) -> Self {
        Self {
            theorem,
            provenance: inst.provenance.clone(),
            hypothesis_checks: Vec::new(),
            conclusion_checks: Vec::new(),
            witnesses: Witnesses::default(),
            status: Status::Degenerate,
            notes: Vec::new(),
        }
    }

    fn settle(mut self) -> Self {
        self.status = if !self.hypothesis_checks.iter().all(|c| c.passed) {
            Status::HypothesisNotMet
        } else if self.conclusion_checks.iter().all(|c| c.passed) {
            Status::Verified
        } else {
            Status::Violation
        };
        self
    }

    fn degenerate(mut self, why: &str) -> Self {
        self.status = Status::Degenerate;
        self.notes.push(why.into());
        self
    }
}

fn orthogonality_hypothesis(r: &MinimaxReport) -> Check {
    check(
        "T_orthogonal_to_L(X,Z)",
        r.is_t_orthogonal,
        format!("d(T, L(X,Z)) = {}, |T| = {}", r.d_global, r.op_norm),
    )
}

fn witness_cross_check(inst: &Instance, r: &MinimaxReport, report: &mut VerificationReport) -> Result<()> {
    let basis = subspace_operator_basis(inst.x(), inst.y(), inst.z())?;
    let witness = orthogonality_witness(inst.t(), &basis)?;
    let feasible = witness.is_some();
    if let Some(w) = witness {
        report.witnesses.weights = w.weights;
        report.witnesses.pairs = w
            .pairs
            .into_iter()
            .map(|SupportPair { x, y_star, .. }| (x, y_star))
            .collect();
    }
    report.conclusion_checks.push(check(
        "witness_feasible_iff_orthogonal",
        feasible == r.is_t_orthogonal,
        format!("witness feasible: {feasible}, orthogonal: {}", r.is_t_orthogonal),
    ));
    Ok(())
}

/// Checks one of the orthogonality theorems on an instance.
///
/// All variants share the conclusions: zero minimax gap, an attaining extreme
/// point `x0` with `T x0` orthogonal to `Z`, and the converse implication.
pub fn verify_theorem(inst: &Instance, which: Theorem) -> Result<VerificationReport> {
    if which == Theorem::Prop1 {
        return verify_prop1(inst);
    }
    let mut report = VerificationReport::new(which, inst);
    let t = inst.t();
    if t.is_zero() {
        return Ok(report.degenerate("T = 0 is orthogonal to everything"));
    }
    let r = minimax_report(inst)?;
    let attaining = norm_attainment_extremes(t)?;

    match which {
        Theorem::ThGen => {
            let predual = if inst.z().dim() == 0 {
                false
            } else {
                inst.z().induced_space(inst.y())?.is_l1_predual()
            };
            report
                .hypothesis_checks
                .push(check("Z_is_L1_predual", predual, "unit ball of Z is a parallelotope"));
            report.hypothesis_checks.push(check(
                "Z_is_M_summand",
                inst.certificate_holds(),
                match inst.m_summand_certificate {
                    Some(k) => format!("certificate split_dim {k}"),
                    None => "no certificate attached".into(),
                },
            ));
        }
        Theorem::L1Prop => {
            report.hypothesis_checks.push(check(
                "X_has_L1_property",
                inst.x().has_l1_property(),
                format!("{} vertex pairs in dimension {}", inst.x().extreme_points().len(), inst.x().dim()),
            ));
        }
        Theorem::LinInd => {
            let rank = affine_rank(&attaining)?;
            report.hypothesis_checks.push(check(
                "attaining_vertices_independent",
                rank == attaining.len(),
                format!("rank {rank} of {} attaining vertex pairs", attaining.len()),
            ));
        }
        Theorem::Prop1 => unreachable!(),
    }
    report.hypothesis_checks.push(orthogonality_hypothesis(&r));

    report.conclusion_checks.push(check(
        "gap_zero",
        r.gap.is_zero(),
        format!("d_global {} - d_local {} = {}", r.d_global, r.d_local, r.gap),
    ));

    let mut x0 = None;
    for x in &attaining {
        let found = bj_orthogonal_subspace(inst.y(), &t.apply(x)?, inst.z())?;
        if found.orthogonal {
            x0 = Some(x.clone());
            report.witnesses.y0_star = found.witness;
            break;
        }
    }
    report.conclusion_checks.push(check(
        "attaining_vertex_orthogonal_to_Z",
        x0.is_some(),
        match &x0 {
            Some(x) => format!("x0 = {}", show(x)),
            None => format!("none among {} attaining vertex pairs", attaining.len()),
        },
    ));
    report.conclusion_checks.push(check(
        "converse_implication",
        x0.is_none() || r.is_t_orthogonal,
        "an orthogonal attaining vertex forces T orthogonal to L(X,Z)",
    ));
    report.witnesses.x0 = x0;
    witness_cross_check(inst, &r, &mut report)?;

    report.notes.push(
        "reflexive identification: X** = X, T** = T, Z^perp^perp = Z".into(),
    );
    Ok(report.settle())
}

/// Checks the equality chain for operators whose distance to `L(X, Z)` is
/// attained at a smooth point.
pub fn verify_prop1(inst: &Instance) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Theorem::Prop1, inst);
    let t = inst.t();
    let r = minimax_report(inst)?;
    let t0: Operator = t.sub(&r.best_s)?;
    if t0.is_zero() {
        return Ok(report.degenerate("T - best_S = 0, T lies in L(X,Z)"));
    }

    let order = operator_smoothness_order(&t0)?;
    report.hypothesis_checks.push(check(
        "T_minus_S_smooth",
        order == 1,
        format!("smoothness order {order}"),
    ));

    report.conclusion_checks.push(check(
        "gap_zero",
        r.gap.is_zero(),
        format!("d_global {} - d_local {} = {}", r.d_global, r.d_local, r.gap),
    ));

    let attaining = norm_attainment_extremes(&t0)?;
    report.conclusion_checks.push(check(
        "unique_attaining_pair",
        attaining.len() == 1,
        format!("{} attaining vertex pairs", attaining.len()),
    ));
    let x0 = attaining[0].clone();
    let tx0 = t.apply(&x0)?;
    let d_x0 = distance_value(inst.y(), &tx0, inst.z())?;
    report.conclusion_checks.push(check(
        "distance_at_x0",
        d_x0 == r.d_global,
        format!("d(T x0, Z) = {d_x0}"),
    ));

    let support = inst.y().support_set(&t0.apply(&x0)?)?;
    let y0 = support.extreme_functionals[0].clone();
    report.conclusion_checks.push(check(
        "unique_support_functional",
        support.extreme_functionals.len() == 1,
        format!("{} extreme norming functionals", support.extreme_functionals.len()),
    ));
    let value = dot(&y0, &tx0);
    report.conclusion_checks.push(check(
        "y0_attains_distance",
        value == r.d_global,
        format!("y0*(T x0) = {value}"),
    ));
    let dual = inst.y().dual_extreme_points();
    report.conclusion_checks.push(check(
        "y0_extreme",
        dual.contains(&y0) || dual.contains(&neg(&y0)),
        "y0* is a vertex of the dual ball",
    ));
    report.conclusion_checks.push(check(
        "y0_annihilates_Z",
        inst.z().basis().iter().all(|z| dot(&y0, z).is_zero()),
        "y0* vanishes on a basis of Z",
    ));

    let mut best = Rational::zero();
    for g in dual.iter().filter(|g| inst.z().basis().iter().all(|z| dot(g, z).is_zero())) {
        for v in inst.x().extreme_points() {
            let a = num_traits::abs(dot(g, &t.apply(v)?));
            if a > best {
                best = a;
            }
        }
    }
    report.conclusion_checks.push(check(
        "annihilator_bound_attained",
        best == r.d_global,
        format!("max |g.Tv| over extreme g in Z^perp = {best}"),
    ));

    report.witnesses.x0 = Some(x0);
    report.witnesses.y0_star = Some(y0);
    Ok(report.settle())
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactlp::matrix::RatMatrix;
    use crate::exactlp::rational::{ivec, unit};
    use crate::minimax::distance_operator_subspace;
    use crate::space::{NormedSpace, Subspace};

    fn arc(s: NormedSpace) -> Arc<NormedSpace> {
        Arc::new(s)
    }

    fn op(rows: &[&[i64]], x: &Arc<NormedSpace>, y: &Arc<NormedSpace>) -> Operator {
        let m = RatMatrix::from_rows(rows.iter().map(|r| ivec(r)).collect()).unwrap();
        Operator::new(m, x.clone(), y.clone()).unwrap()
    }

    #[test]
    fn thgen_worked_instance() {
        let x = arc(NormedSpace::l1(2).unwrap());
        let y = arc(NormedSpace::linf(2).unwrap());
        let inst = Instance::new(op(&[&[1, 0], &[0, 1]], &x, &y), Subspace::coordinate(2, 1))
            .unwrap()
            .with_certificate(1);
        let r = verify_theorem(&inst, Theorem::ThGen).unwrap();
        assert_eq!(r.status, Status::Verified, "{r:#?}");
        assert_eq!(r.witnesses.x0, Some(unit(2, 1)));
        assert!(!r.witnesses.weights.is_empty());

        let uncertified = Instance::new(inst.t().clone(), inst.z().clone()).unwrap();
        let r = verify_theorem(&uncertified, Theorem::ThGen).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);
    }

    #[test]
    fn l1prop_from_random_operator() {
        let x = arc(NormedSpace::l1(2).unwrap());
        let y = arc(NormedSpace::l1(2).unwrap());
        let z = Subspace::new(2, vec![ivec(&[1, 1])]).unwrap();
        let t0 = op(&[&[3, -1], &[2, 5]], &x, &y);
        let s0 = distance_operator_subspace(&t0, &z).unwrap().best_s;
        let inst = Instance::new(t0.sub(&s0).unwrap(), z).unwrap();
        let r = verify_theorem(&inst, Theorem::L1Prop).unwrap();
        assert_eq!(r.status, Status::Verified, "{r:#?}");
        let x0 = r.witnesses.x0.unwrap();
        assert!(x0 == unit(2, 0) || x0 == unit(2, 1));
    }

    #[test]
    fn linind_hypothesis_fails_on_dependent_attainment() {
        // x -> x_1 attains its norm at every cube vertex: two independent
        // pairs in the plane, four dependent ones in space.
        let x = arc(NormedSpace::linf(2).unwrap());
        let y = arc(NormedSpace::linf(1).unwrap());
        let inst = Instance::new(op(&[&[1, 0]], &x, &y), Subspace::zero(1)).unwrap();
        let r = verify_theorem(&inst, Theorem::LinInd).unwrap();
        assert!(r.hypothesis_checks[0].passed);

        let x = arc(NormedSpace::linf(3).unwrap());
        let inst = Instance::new(op(&[&[1, 0, 0]], &x, &y), Subspace::zero(1)).unwrap();
        let r = verify_theorem(&inst, Theorem::LinInd).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);
    }

    #[test]
    fn zero_operator_is_degenerate() {
        let x = arc(NormedSpace::l1(2).unwrap());
        let inst = Instance::new(Operator::zero(x.clone(), x), Subspace::coordinate(2, 1)).unwrap();
        for th in Theorem::ALL {
            assert_eq!(verify_theorem(&inst, th).unwrap().status, Status::Degenerate);
        }
    }

    #[test]
    fn prop1_examples() {
        let x = arc(NormedSpace::l1(1).unwrap());
        let y = arc(NormedSpace::linf(2).unwrap());
        let inst = Instance::new(op(&[&[0], &[1]], &x, &y), Subspace::coordinate(2, 1)).unwrap();
        let r = verify_prop1(&inst).unwrap();
        assert_eq!(r.status, Status::Verified, "{r:#?}");
        assert_eq!(r.witnesses.x0, Some(ivec(&[1])));
        assert_eq!(r.witnesses.y0_star, Some(ivec(&[0, 1])));

        let inside = Instance::new(op(&[&[1], &[0]], &x, &y), Subspace::coordinate(2, 1)).unwrap();
        assert_eq!(verify_prop1(&inside).unwrap().status, Status::Degenerate);

        // T - best_S = I on l1^2 -> linf^2 with Z = 0 attains at two pairs.
        let x = arc(NormedSpace::l1(2).unwrap());
        let inst = Instance::new(op(&[&[1, 0], &[0, 1]], &x, &y), Subspace::zero(2)).unwrap();
        assert_eq!(verify_prop1(&inst).unwrap().status, Status::HypothesisNotMet);
    }

    #[test]
    fn names_round_trip() {
        for th in Theorem::ALL {
            assert_eq!(Theorem::parse(th.name()), Some(th));
        }
        assert_eq!(Status::parse("VIOLATION"), Some(Status::Violation));
    }
}
