//! Finite-dimensional normed spaces with polyhedral unit balls.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlp::matrix::{rank_of_rows, RatMatrix};
use crate::exactlp::rational::{dot, int, is_zero_vec, neg, unit, RatVector, Rational};
use crate::exactlp::{solve_lp, LinearProgram, LpOutcome, Sense, SymmetricPolytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    L1,
    Linf,
    Polyhedral,
}

/// How to build a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    L1(usize),
    Linf(usize),
    Facets { dim: usize, facets: Vec<RatVector> },
    Vertices { dim: usize, vertices: Vec<RatVector> },
}

/// `R^dim` normed by the gauge of a symmetric polytope.
#[derive(Clone)]
pub struct NormedSpace {
    dim: usize,
    ball: SymmetricPolytope,
    kind: SpaceKind,
    label: String,
}

impl PartialEq for NormedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.ball == other.ball
    }
}

impl Eq for NormedSpace {}

impl fmt::Debug for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormedSpace({}, dim {})", self.label, self.dim)
    }
}

impl NormedSpace {
    pub fn new(spec: SpaceSpec) -> Result<Self> {
        match spec {
            SpaceSpec::L1(dim) => {
                check_positive(dim)?;
                let vertices: Vec<RatVector> = (0..dim).map(|i| unit(dim, i)).collect();
                let ball = SymmetricPolytope::from_vertices(dim, &vertices)?;
                Ok(Self::from_ball(ball, SpaceKind::L1, format!("l1^{dim}")))
            }
            SpaceSpec::Linf(dim) => {
                check_positive(dim)?;
                let facets: Vec<RatVector> = (0..dim).map(|i| unit(dim, i)).collect();
                let ball = SymmetricPolytope::from_facets(dim, &facets)?;
                Ok(Self::from_ball(ball, SpaceKind::Linf, format!("linf^{dim}")))
            }
            SpaceSpec::Facets { dim, facets } => {
                check_positive(dim)?;
                let ball = SymmetricPolytope::from_facets(dim, &facets)?;
                Ok(Self::from_ball(ball, SpaceKind::Polyhedral, "polyhedral".into()))
            }
            SpaceSpec::Vertices { dim, vertices } => {
                check_positive(dim)?;
                let ball = SymmetricPolytope::from_vertices(dim, &vertices)?;
                Ok(Self::from_ball(ball, SpaceKind::Polyhedral, "polyhedral".into()))
            }
        }
    }

    pub fn l1(dim: usize) -> Result<Self> {
        Self::new(SpaceSpec::L1(dim))
    }

    pub fn linf(dim: usize) -> Result<Self> {
        Self::new(SpaceSpec::Linf(dim))
    }

    pub fn from_ball(ball: SymmetricPolytope, kind: SpaceKind, label: String) -> Self {
        Self {
            dim: ball.dim(),
            ball,
            kind,
            label,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ball(&self) -> &SymmetricPolytope {
        &self.ball
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Antipodal-pair representatives of the extreme points of the unit ball.
    pub fn extreme_points(&self) -> &[RatVector] {
        self.ball.vertices()
    }

    /// Representatives of the extreme points of the dual unit ball.
    pub fn dual_extreme_points(&self) -> &[RatVector] {
        self.ball.facets()
    }

    pub fn check_vector(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, x: &[Rational]) -> Result<Rational> {
        self.check_vector(x)?;
        Ok(self.ball.gauge(x))
    }

    /// Gauge computed from the vertex description alone:
    /// `min sum |mu_i|  s.t.  sum mu_i v_i = x`.
    pub fn gauge_by_vertices(&self, x: &[Rational]) -> Result<Rational> {
        self.check_vector(x)?;
        let vs = self.extreme_points();
        let k = vs.len();
        // Variables: mu (k), u (k) with |mu_i| <= u_i.
        let mut objective = vec![int(0); 2 * k];
        for o in &mut objective[k..] {
            *o = int(1);
        }
        let mut lp = LinearProgram::new(objective, Sense::Minimize);
        for (r, xr) in x.iter().enumerate() {
            let mut row = vec![int(0); 2 * k];
            for (i, v) in vs.iter().enumerate() {
                row[i] = v[r].clone();
            }
            lp.equal(row, xr.clone());
        }
        for i in 0..k {
            let mut up = vec![int(0); 2 * k];
            up[i] = int(1);
            up[k + i] = int(-1);
            lp.le(up, int(0));
            let mut down = vec![int(0); 2 * k];
            down[i] = int(-1);
            down[k + i] = int(-1);
            lp.le(down, int(0));
        }
        match solve_lp(&lp)? {
            LpOutcome::Optimal(sol) => Ok(sol.value),
            other => Err(Error::Lp(format!("gauge program: {other:?}"))),
        }
    }

    pub fn dual(&self) -> NormedSpace {
        let kind = match self.kind {
            SpaceKind::L1 => SpaceKind::Linf,
            SpaceKind::Linf => SpaceKind::L1,
            SpaceKind::Polyhedral => SpaceKind::Polyhedral,
        };
        let label = match kind {
            SpaceKind::L1 => format!("l1^{}", self.dim),
            SpaceKind::Linf => format!("linf^{}", self.dim),
            SpaceKind::Polyhedral => format!("dual({})", self.label),
        };
        Self {
            dim: self.dim,
            ball: self.ball.polar_dual(),
            kind,
            label,
        }
    }

    /// Dual norm of a functional, `max_v |f.v|` over extreme points.
    pub fn dual_norm(&self, f: &[Rational]) -> Result<Rational> {
        self.check_vector(f)?;
        Ok(self.ball.polar_dual().gauge(f))
    }

    /// The extreme points of `J(x)`: norming functionals that are extreme in
    /// the dual ball.
    pub fn support_set(&self, x: &[Rational]) -> Result<SupportSet> {
        self.check_vector(x)?;
        if is_zero_vec(x) {
            return Err(Error::ZeroVector("support set"));
        }
        let norm = self.ball.gauge(x);
        let mut functionals: Vec<RatVector> = self
            .ball
            .facets()
            .iter()
            .filter_map(|f| {
                let v = dot(f, x);
                if v == norm {
                    Some(f.clone())
                } else if -v == norm {
                    Some(neg(f))
                } else {
                    None
                }
            })
            .collect();
        functionals.sort();
        let span_dim = rank_of_rows(&functionals);
        Ok(SupportSet {
            base_point: x.to_vec(),
            extreme_functionals: functionals,
            span_dim,
        })
    }

    /// Dimension of the span of `J(x)`; 1 exactly at smooth points.
    pub fn smoothness_order(&self, x: &[Rational]) -> Result<usize> {
        Ok(self.support_set(x)?.span_dim)
    }

    /// Pairwise non-antipodal extreme points are linearly independent.
    pub fn has_l1_property(&self) -> bool {
        let vs = self.extreme_points();
        rank_of_rows(vs) == vs.len()
    }

    /// Whether the dual is an `L^1` space, i.e. the ball is a parallelotope.
    pub fn is_l1_predual(&self) -> bool {
        self.dual_extreme_points().len() == self.dim && self.dual().has_l1_property()
    }
}

fn check_positive(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    Ok(())
}

/// Extreme points of the face `J(x)` of the dual ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    pub base_point: RatVector,
    pub extreme_functionals: Vec<RatVector>,
    pub span_dim: usize,
}

impl SupportSet {
    pub fn is_smooth(&self) -> bool {
        self.extreme_functionals.len() == 1
    }

    /// `(min, max)` of `f(y)` over `J(x)`.
    pub fn value_range(&self, y: &[Rational]) -> (Rational, Rational) {
        let values: Vec<Rational> = self
            .extreme_functionals
            .iter()
            .map(|f| dot(f, y))
            .collect();
        let min = values.iter().min().cloned().unwrap_or_else(Rational::zero);
        let max = values.iter().max().cloned().unwrap_or_else(Rational::zero);
        (min, max)
    }
}

/// A linear subspace given by independent basis columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RatVector>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<RatVector>) -> Result<Self> {
        if let Some(b) = basis.iter().find(|b| b.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: b.len(),
            });
        }
        let rank = rank_of_rows(&basis);
        if rank != basis.len() {
            return Err(Error::InvalidInput(format!(
                "subspace basis of {} vectors has rank {rank}",
                basis.len()
            )));
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect(),
        }
    }

    /// Span of the first `k` coordinate vectors.
    pub fn coordinate(ambient_dim: usize, k: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..k.min(ambient_dim)).map(|i| unit(ambient_dim, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// `ambient_dim x dim` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.ambient_dim, &self.basis).expect("basis dims checked")
    }

    /// Ambient vector with coordinates `c` in the basis.
    pub fn embed(&self, c: &[Rational]) -> RatVector {
        let mut out = vec![Rational::zero(); self.ambient_dim];
        for (coef, b) in c.iter().zip(&self.basis) {
            if coef.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(b) {
                *o += coef * v;
            }
        }
        out
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        let before = rank_of_rows(&rows);
        rows.push(x.to_vec());
        rank_of_rows(&rows) == before
    }

    pub fn check_ambient(&self, space: &NormedSpace) -> Result<()> {
        if self.ambient_dim != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: self.ambient_dim,
            });
        }
        Ok(())
    }

    /// The subspace as a normed space in basis coordinates, with the norm
    /// inherited from `ambient`.
    pub fn induced_space(&self, ambient: &NormedSpace) -> Result<NormedSpace> {
        self.check_ambient(ambient)?;
        if self.basis.is_empty() {
            return Err(Error::InvalidInput("the zero subspace has no unit ball".into()));
        }
        let facets: Vec<RatVector> = ambient
            .ball()
            .facets()
            .iter()
            .map(|g| self.basis.iter().map(|b| dot(g, b)).collect())
            .collect();
        let ball = SymmetricPolytope::from_facets(self.dim(), &facets)?;
        Ok(NormedSpace::from_ball(
            ball,
            SpaceKind::Polyhedral,
            format!("subspace of {}", ambient.label()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{ivec, ratio, rvec};

    fn hexagon() -> NormedSpace {
        NormedSpace::new(SpaceSpec::Facets {
            dim: 2,
            facets: vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])],
        })
        .unwrap()
    }

    #[test]
    fn standard_balls() {
        assert_eq!(
            NormedSpace::l1(2).unwrap().extreme_points(),
            &[ivec(&[0, 1]), ivec(&[1, 0])]
        );
        assert_eq!(
            NormedSpace::linf(2).unwrap().extreme_points(),
            &[ivec(&[1, -1]), ivec(&[1, 1])]
        );
        assert!(NormedSpace::l1(0).is_err());
    }

    #[test]
    fn hexagon_from_vertices_matches_facets() {
        let from_v = NormedSpace::new(SpaceSpec::Vertices {
            dim: 2,
            vertices: vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])],
        })
        .unwrap();
        assert_eq!(from_v.extreme_points().len(), 3);
        assert_eq!(from_v.dual().dual(), from_v);
        assert_eq!(hexagon().extreme_points(), &[ivec(&[0, 1]), ivec(&[1, -1]), ivec(&[1, 0])]);
    }

    #[test]
    fn norms() {
        let x = ivec(&[3, -4]);
        assert_eq!(NormedSpace::l1(2).unwrap().norm(&x).unwrap(), int(7));
        assert_eq!(NormedSpace::linf(2).unwrap().norm(&x).unwrap(), int(4));
        assert_eq!(hexagon().norm(&ivec(&[0, 0])).unwrap(), int(0));
        assert!(hexagon().norm(&ivec(&[1])).is_err());
    }

    #[test]
    fn duals() {
        assert_eq!(NormedSpace::l1(2).unwrap().dual(), NormedSpace::linf(2).unwrap());
        assert_eq!(NormedSpace::linf(3).unwrap().dual(), NormedSpace::l1(3).unwrap());
    }

    #[test]
    fn support_sets() {
        let l1 = NormedSpace::l1(2).unwrap();
        let s = l1.support_set(&ivec(&[1, 0])).unwrap();
        assert_eq!(s.extreme_functionals, vec![ivec(&[1, -1]), ivec(&[1, 1])]);
        assert_eq!(s.span_dim, 2);
        let s = l1.support_set(&rvec(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(s.extreme_functionals, vec![ivec(&[1, 1])]);
        assert_eq!(s.span_dim, 1);
        let s = NormedSpace::linf(2).unwrap().support_set(&ivec(&[1, 1])).unwrap();
        assert_eq!(s.extreme_functionals, vec![ivec(&[0, 1]), ivec(&[1, 0])]);
        assert_eq!(l1.support_set(&ivec(&[0, 0])), Err(Error::ZeroVector("support set")));
    }

    #[test]
    fn smoothness_orders() {
        let l1 = NormedSpace::l1(2).unwrap();
        assert_eq!(l1.smoothness_order(&rvec(&[(1, 2), (1, 2)])).unwrap(), 1);
        assert_eq!(l1.smoothness_order(&ivec(&[1, 0])).unwrap(), 2);
        assert!(l1.smoothness_order(&ivec(&[0, 0])).is_err());
    }

    #[test]
    fn linf3_corner_is_three_smooth() {
        // Oracle: the dual ball is the cross-polytope; the functionals attaining
        // |x|_inf = 1 at (1,1,1) are exactly e1, e2, e3, which are independent.
        let x = ivec(&[1, 1, 1]);
        let active: Vec<RatVector> = (0..3)
            .map(|i| unit(3, i))
            .filter(|e| dot(e, &x) == int(1))
            .collect();
        let expected = rank_of_rows(&active);
        assert_eq!(expected, 3);
        assert_eq!(NormedSpace::linf(3).unwrap().smoothness_order(&x).unwrap(), expected);
    }

    #[test]
    fn l1_predicates() {
        for n in 1..=4 {
            assert!(NormedSpace::l1(n).unwrap().has_l1_property());
            assert!(NormedSpace::linf(n).unwrap().is_l1_predual());
        }
        assert!(NormedSpace::linf(2).unwrap().has_l1_property());
        assert!(!NormedSpace::linf(3).unwrap().has_l1_property());
        assert!(!hexagon().has_l1_property());
        assert!(NormedSpace::l1(2).unwrap().is_l1_predual());
        assert!(!NormedSpace::l1(3).unwrap().is_l1_predual());
        assert!(!hexagon().is_l1_predual());
    }

    #[test]
    fn gauge_by_vertices_agrees() {
        let h = hexagon();
        for x in [ivec(&[3, -4]), rvec(&[(1, 3), (2, 5)]), ivec(&[0, 0])] {
            assert_eq!(h.gauge_by_vertices(&x).unwrap(), h.norm(&x).unwrap());
        }
    }

    #[test]
    fn subspaces() {
        assert!(Subspace::new(2, vec![ivec(&[1, 1]), ivec(&[2, 2])]).is_err());
        let z = Subspace::new(2, vec![ivec(&[1, 1])]).unwrap();
        assert!(z.contains(&ivec(&[3, 3])));
        assert!(!z.contains(&ivec(&[1, 0])));
        assert_eq!(z.embed(&[ratio(1, 2)]), rvec(&[(1, 2), (1, 2)]));
        let induced = z.induced_space(&NormedSpace::linf(2).unwrap()).unwrap();
        assert_eq!(induced.norm(&ivec(&[1])).unwrap(), int(1));
        let induced = z.induced_space(&NormedSpace::l1(2).unwrap()).unwrap();
        assert_eq!(induced.norm(&ivec(&[1])).unwrap(), int(2));
    }
}
