//! Distance from an operator to `L(X, Z)`, its pointwise counterpart
//! `sup_x d(Tx, Z)`, and the verifiers built on top of them.

mod verify;

pub use verify::{
    verify_prop1, verify_theorem, Check, Status, Theorem, VerificationReport, Witnesses,
};

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlp::matrix::RatMatrix;
use crate::exactlp::rational::{dot, int, is_zero_vec, one, scale, sub, unit, zero, RatVector, Rational};
use crate::exactlp::{relative_interior, solve_lp, LinearProgram, LpOutcome, Sense, SymmetricPolytope};
use crate::operators::{norm_attainment_extremes, operator_norm, rank_one, Operator};
use crate::proximity::{bj_orthogonal_subspace, distance_value};
use crate::space::{NormedSpace, SpaceKind, Subspace};

/// Generator metadata carried along with an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub kind: String,
}

/// The quadruple `(X, Y, Z, T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    t: Operator,
    z: Subspace,
    /// `Z` is the first `split_dim` coordinates of an l-infinity sum.
    pub m_summand_certificate: Option<usize>,
    pub provenance: Option<Provenance>,
}

impl Instance {
    pub fn new(t: Operator, z: Subspace) -> Result<Self> {
        z.check_ambient(t.codomain())?;
        Ok(Self {
            t,
            z,
            m_summand_certificate: None,
            provenance: None,
        })
    }

    pub fn with_certificate(mut self, split_dim: usize) -> Self {
        self.m_summand_certificate = Some(split_dim);
        self
    }

    pub fn with_provenance(mut self, seed: u64, kind: impl Into<String>) -> Self {
        self.provenance = Some(Provenance {
            seed,
            kind: kind.into(),
        });
        self
    }

    pub fn x(&self) -> &Arc<NormedSpace> {
        self.t.domain()
    }

    pub fn y(&self) -> &Arc<NormedSpace> {
        self.t.codomain()
    }

    pub fn z(&self) -> &Subspace {
        &self.z
    }

    pub fn t(&self) -> &Operator {
        &self.t
    }

    pub fn z_is_proper(&self) -> bool {
        !self.z.is_whole()
    }

    /// Whether the attached certificate really describes `Y` as
    /// `Z (+)_inf W` with `Z` the leading coordinates.
    pub fn certificate_holds(&self) -> bool {
        let Some(k) = self.m_summand_certificate else {
            return false;
        };
        let n = self.y().dim();
        if k == 0 || k > n || self.z.dim() != k {
            return false;
        }
        if !(0..k).all(|i| self.z.contains(&unit(n, i))) {
            return false;
        }
        self.y().dual_extreme_points().iter().all(|g| {
            g[..k].iter().all(Zero::is_zero) || g[k..].iter().all(Zero::is_zero)
        })
    }
}

/// `d(T, L(X, Z))` with a minimiser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorDistance {
    pub value: Rational,
    pub best_s: Operator,
}

/// One row per (codomain facet, domain vertex): `(coefficients on c, g.Tv)`
/// where `g.(T - S)v = g.Tv - coeffs.c` and `S = sum c_lj z_l e_j^T`.
fn operator_forms(t: &Operator, z: &Subspace) -> Result<Vec<(RatVector, Rational)>> {
    let n = t.domain().dim();
    let mut forms = Vec::new();
    for g in t.codomain().dual_extreme_points() {
        let gz: RatVector = z.basis().iter().map(|zl| dot(g, zl)).collect();
        for v in t.domain().extreme_points() {
            let mut coeffs = Vec::with_capacity(gz.len() * n);
            for gzl in &gz {
                coeffs.extend(v.iter().map(|vj| gzl * vj));
            }
            forms.push((coeffs, dot(g, &t.apply(v)?)));
        }
    }
    Ok(forms)
}

fn s_from_coefficients(c: &[Rational], z: &Subspace, n: usize) -> Result<RatMatrix> {
    let columns: Vec<RatVector> = (0..n)
        .map(|j| {
            let coords: RatVector = (0..z.dim()).map(|l| c[l * n + j].clone()).collect();
            z.embed(&coords)
        })
        .collect();
    RatMatrix::from_columns(z.ambient_dim(), &columns)
}

/// `d(T, L(X, Z)) = min_S |T - S|`.
///
/// The returned minimiser is a relative-interior point of the set of all
/// minimisers, so it is canonical and avoids needless kinks in `T - S`.
pub fn distance_operator_subspace(t: &Operator, z: &Subspace) -> Result<OperatorDistance> {
    z.check_ambient(t.codomain())?;
    let n = t.domain().dim();
    let k = z.dim();
    if k == 0 {
        return Ok(OperatorDistance {
            value: operator_norm(t)?,
            best_s: Operator::zero(t.domain().clone(), t.codomain().clone()),
        });
    }
    let vars = k * n;
    let forms = operator_forms(t, z)?;

    let mut objective = vec![zero(); vars + 1];
    objective[vars] = one();
    let mut lp = LinearProgram::new(objective, Sense::Minimize);
    for (a, h) in &forms {
        let mut lower: RatVector = a.iter().map(|v| -v).collect();
        lower.push(int(-1));
        lp.le(lower, -h.clone());
        let mut upper = a.clone();
        upper.push(int(-1));
        lp.le(upper, h.clone());
    }
    let value = match solve_lp(&lp)? {
        LpOutcome::Optimal(sol) => sol.value,
        other => return Err(Error::Lp(format!("operator distance program: {other:?}"))),
    };

    let face: Vec<(RatVector, Rational)> = forms
        .iter()
        .flat_map(|(a, h)| {
            let neg_a: RatVector = a.iter().map(|v| -v).collect();
            [(neg_a, &value - h), (a.clone(), &value + h)]
        })
        .collect();
    let (c, _) = relative_interior(vars, &face)?
        .ok_or_else(|| Error::Invariant("optimal face of operator distance is empty".into()))?;
    let best_s = t.with_matrix(s_from_coefficients(&c, z, n)?)?;
    if operator_norm(&t.sub(&best_s)?)? != value {
        return Err(Error::Invariant("minimiser does not attain the distance".into()));
    }
    Ok(OperatorDistance { value, best_s })
}

/// `sup_{x in S_X} d(Tx, Z)` and the domain vertex representatives attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSup {
    pub value: Rational,
    pub argmax: Vec<RatVector>,
    /// `d(Tv, Z)` for every vertex representative `v`, in vertex order.
    pub per_vertex: Vec<(RatVector, Rational)>,
}

/// The supremum is a maximum over extreme points because `x -> d(Tx, Z)` is
/// convex.
pub fn local_sup(t: &Operator, z: &Subspace) -> Result<LocalSup> {
    z.check_ambient(t.codomain())?;
    let mut per_vertex = Vec::new();
    for v in t.domain().extreme_points() {
        let d = distance_value(t.codomain(), &t.apply(v)?, z)?;
        per_vertex.push((v.clone(), d));
    }
    let value = per_vertex.iter().map(|(_, d)| d.clone()).max().unwrap_or_else(zero);
    let argmax = per_vertex
        .iter()
        .filter(|(_, d)| *d == value)
        .map(|(v, _)| v.clone())
        .collect();
    Ok(LocalSup {
        value,
        argmax,
        per_vertex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaxReport {
    pub op_norm: Rational,
    pub d_global: Rational,
    pub d_local: Rational,
    pub gap: Rational,
    pub argmax_vertices: Vec<RatVector>,
    pub is_t_orthogonal: bool,
    pub per_vertex_distances: Vec<(RatVector, Rational)>,
    pub best_s: Operator,
}

/// All minimax quantities of an instance. A negative gap is reported as an
/// invariant failure.
pub fn minimax_report(inst: &Instance) -> Result<MinimaxReport> {
    let t = inst.t();
    let op_norm = operator_norm(t)?;
    let global = distance_operator_subspace(t, inst.z())?;
    let local = local_sup(t, inst.z())?;
    let gap = &global.value - &local.value;
    if gap.is_negative() {
        return Err(Error::Invariant(format!(
            "negative minimax gap {gap}: d_global {} < d_local {}",
            global.value, local.value
        )));
    }
    if local.value > op_norm {
        return Err(Error::Invariant("local supremum exceeds the operator norm".into()));
    }
    Ok(MinimaxReport {
        is_t_orthogonal: global.value == op_norm,
        op_norm,
        d_global: global.value,
        d_local: local.value,
        gap,
        argmax_vertices: local.argmax,
        per_vertex_distances: local.per_vertex,
        best_s: global.best_s,
    })
}

/// `Y = Z_sp (+)_inf W_sp` with `Z` the first factor and `P` the coordinate
/// projection onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSummand {
    pub y: NormedSpace,
    pub z: Subspace,
    pub projection: RatMatrix,
}

pub fn make_m_summand(z_sp: &NormedSpace, w_sp: &NormedSpace) -> Result<MSummand> {
    let (k, m) = (z_sp.dim(), w_sp.dim());
    let n = k + m;
    let embed = |f: &RatVector, offset: usize| {
        let mut out = vec![zero(); n];
        out[offset..offset + f.len()].clone_from_slice(f);
        out
    };
    let mut facets: Vec<RatVector> = z_sp.dual_extreme_points().iter().map(|f| embed(f, 0)).collect();
    facets.extend(w_sp.dual_extreme_points().iter().map(|f| embed(f, k)));
    let ball = SymmetricPolytope::from_facets(n, &facets)?;

    facets.sort();
    if ball.facets() != facets.as_slice() {
        return Err(Error::Invariant(
            "dual extreme points of the sum differ from the embedded factors".into(),
        ));
    }
    let kind = if z_sp.kind() == SpaceKind::Linf && w_sp.kind() == SpaceKind::Linf {
        SpaceKind::Linf
    } else {
        SpaceKind::Polyhedral
    };
    let y = NormedSpace::from_ball(ball, kind, format!("{} (+)inf {}", z_sp.label(), w_sp.label()));
    let mut projection = RatMatrix::zeros(n, n);
    for i in 0..k {
        projection[(i, i)] = one();
    }
    Ok(MSummand {
        y,
        z: Subspace::coordinate(n, k),
        projection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximinalTransfer {
    pub z0: RatVector,
    pub x0: RatVector,
    pub distance: Rational,
    pub check: bool,
}

/// Builds a best approximation to `y` from `Z` out of a best approximation
/// to the rank-one operator `x* (x) y` from `L(l1^n, Z)`.
pub fn proximinal_transfer(
    y_space: &NormedSpace,
    z: &Subspace,
    y: &[Rational],
    n: usize,
) -> Result<ProximinalTransfer> {
    y_space.check_vector(y)?;
    z.check_ambient(y_space)?;
    if z.contains(y) {
        return Err(Error::InvalidInput("y already lies in Z".into()));
    }
    let x = Arc::new(NormedSpace::l1(n)?);
    let codomain = Arc::new(y_space.clone());
    let x_star = x.dual_extreme_points()[0].clone();
    let t = rank_one(x.clone(), &x_star, y, codomain.clone())?;
    let s = distance_operator_subspace(&t, z)?.best_s;
    let t0 = t.sub(&s)?;
    if t0.is_zero() {
        return Err(Error::Invariant("T - S vanished although y is outside Z".into()));
    }

    let attaining = norm_attainment_extremes(&t0)?;
    let rest = x.extreme_points().iter().filter(|v| !attaining.contains(v)).cloned();
    let candidates: Vec<RatVector> = attaining.iter().cloned().chain(rest).collect();
    for x0 in candidates {
        let scale_by = dot(&x_star, &x0);
        let t0x = t0.apply(&x0)?;
        if scale_by.is_zero() || is_zero_vec(&t0x) {
            continue;
        }
        if bj_orthogonal_subspace(y_space, &t0x, z)?.orthogonal {
            let z0 = scale(&(one() / &scale_by), &s.apply(&x0)?);
            let distance = distance_value(y_space, y, z)?;
            let check = y_space.norm(&sub(y, &z0))? == distance;
            return Ok(ProximinalTransfer {
                z0,
                x0,
                distance,
                check,
            });
        }
    }
    Err(Error::Invariant("no extreme point x0 with (T - S)x0 orthogonal to Z".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{ivec, ratio};
    use crate::space::SpaceSpec;

    fn arc(s: NormedSpace) -> Arc<NormedSpace> {
        Arc::new(s)
    }

    fn worked() -> Instance {
        let x = arc(NormedSpace::l1(2).unwrap());
        let y = arc(NormedSpace::linf(2).unwrap());
        let t = Operator::new(RatMatrix::identity(2), x, y).unwrap();
        Instance::new(t, Subspace::coordinate(2, 1)).unwrap()
    }

    /// Brute force over `S = [[a, b], [0, 0]]` with `a, b` on a grid; the norm
    /// `l1 -> linf` of a matrix is its largest entry in absolute value.
    fn grid_min_worked() -> Rational {
        let mut best: Option<Rational> = None;
        for i in -8..=24 {
            for j in -16..=16 {
                let (a, b) = (ratio(i, 8), ratio(j, 8));
                let entries = [int(1) - &a, -b, int(0), int(1)];
                let norm = entries.iter().map(|e| e.abs()).max().unwrap();
                if best.as_ref().map_or(true, |m| norm < *m) {
                    best = Some(norm);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn worked_instance_distance() {
        let inst = worked();
        let d = distance_operator_subspace(inst.t(), inst.z()).unwrap();
        assert_eq!(d.value, grid_min_worked());
        assert_eq!(d.value, int(1));
        let expected = rank_one(inst.x().clone(), &unit(2, 0), &unit(2, 0), inst.y().clone()).unwrap();
        assert_eq!(d.best_s, expected);
    }

    #[test]
    fn distance_is_zero_inside_the_subspace() {
        let inst = worked();
        let s = rank_one(inst.x().clone(), &unit(2, 0), &unit(2, 0), inst.y().clone()).unwrap();
        let d = distance_operator_subspace(&s, inst.z()).unwrap();
        assert_eq!(d.value, int(0));
        assert_eq!(d.best_s, s);

        let t = Operator::new(
            RatMatrix::from_rows(vec![ivec(&[1, 2]), ivec(&[-3, 1])]).unwrap(),
            inst.x().clone(),
            inst.y().clone(),
        )
        .unwrap();
        let d = distance_operator_subspace(&t, &Subspace::whole(2)).unwrap();
        assert_eq!(d.value, int(0));
        assert_eq!(d.best_s, t);
    }

    #[test]
    fn local_sup_examples() {
        let inst = worked();
        let l = local_sup(inst.t(), inst.z()).unwrap();
        assert_eq!(l.value, int(1));
        assert_eq!(l.argmax, vec![unit(2, 1)]);
        assert_eq!(l.per_vertex, vec![(unit(2, 1), int(1)), (unit(2, 0), int(0))]);

        let t = Operator::new(
            RatMatrix::from_rows(vec![ivec(&[1, 2]), ivec(&[-3, 1])]).unwrap(),
            inst.x().clone(),
            inst.y().clone(),
        )
        .unwrap();
        let zero_sub = Subspace::zero(2);
        assert_eq!(local_sup(&t, &zero_sub).unwrap().value, operator_norm(&t).unwrap());
        assert_eq!(
            distance_operator_subspace(&t, &zero_sub).unwrap().value,
            operator_norm(&t).unwrap()
        );
    }

    #[test]
    fn worked_report() {
        let r = minimax_report(&worked()).unwrap();
        assert_eq!(r.op_norm, int(1));
        assert_eq!(r.d_global, int(1));
        assert_eq!(r.d_local, int(1));
        assert_eq!(r.gap, int(0));
        assert!(r.is_t_orthogonal);
    }

    #[test]
    fn m_summands() {
        let s = make_m_summand(&NormedSpace::linf(2).unwrap(), &NormedSpace::linf(1).unwrap()).unwrap();
        assert_eq!(s.y, NormedSpace::linf(3).unwrap());
        assert_eq!(s.z, Subspace::coordinate(3, 2));
        assert_eq!(s.projection.rank(), 2);

        let s = make_m_summand(&NormedSpace::linf(1).unwrap(), &NormedSpace::linf(1).unwrap()).unwrap();
        assert_eq!(s.y, NormedSpace::linf(2).unwrap());
        assert_eq!(s.z, Subspace::coordinate(2, 1));

        let hexagon = NormedSpace::new(SpaceSpec::Facets {
            dim: 2,
            facets: vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])],
        })
        .unwrap();
        let s = make_m_summand(&hexagon, &NormedSpace::linf(1).unwrap()).unwrap();
        let mut expected: Vec<RatVector> = hexagon
            .dual_extreme_points()
            .iter()
            .map(|f| vec![f[0].clone(), f[1].clone(), int(0)])
            .collect();
        expected.push(unit(3, 2));
        expected.sort();
        assert_eq!(s.y.dual_extreme_points(), expected.as_slice());

        let inst = Instance::new(
            Operator::zero(arc(NormedSpace::l1(2).unwrap()), arc(s.y.clone())),
            s.z.clone(),
        )
        .unwrap();
        assert!(!inst.certificate_holds());
        assert!(inst.with_certificate(2).certificate_holds());
    }

    #[test]
    fn certificate_rejects_mixed_facets() {
        let y = arc(NormedSpace::l1(2).unwrap());
        let inst = Instance::new(
            Operator::zero(arc(NormedSpace::l1(2).unwrap()), y),
            Subspace::coordinate(2, 1),
        )
        .unwrap()
        .with_certificate(1);
        assert!(!inst.certificate_holds());
    }

    #[test]
    fn transfer_examples() {
        let linf2 = NormedSpace::linf(2).unwrap();
        let diag = Subspace::new(2, vec![ivec(&[1, 1])]).unwrap();
        let r = proximinal_transfer(&linf2, &diag, &ivec(&[1, 0]), 2).unwrap();
        assert!(r.check);
        assert_eq!(r.distance, ratio(1, 2));
        assert_eq!(linf2.norm(&sub(&ivec(&[1, 0]), &r.z0)).unwrap(), ratio(1, 2));

        let l1 = NormedSpace::l1(2).unwrap();
        let r = proximinal_transfer(&l1, &Subspace::coordinate(2, 1), &unit(2, 1), 2).unwrap();
        assert!(r.check);
        assert_eq!(r.z0, ivec(&[0, 0]));

        let linf3 = NormedSpace::linf(3).unwrap();
        let r = proximinal_transfer(&linf3, &Subspace::coordinate(3, 2), &unit(3, 2), 3).unwrap();
        assert!(r.check);
        assert_eq!(r.distance, int(1));

        assert!(proximinal_transfer(&linf2, &diag, &ivec(&[2, 2]), 2).is_err());
    }
}
