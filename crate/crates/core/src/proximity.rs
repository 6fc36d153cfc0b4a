//! Birkhoff-James orthogonality of vectors, distances to subspaces and best
//! approximations.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlp::matrix::{null_space, rank_of_rows};
use crate::exactlp::rational::{dot, int, is_zero_vec, one, sub, zero, RatVector, Rational};
use crate::exactlp::{
    relative_interior, solve_lp, solve_standard_form, LinearProgram, LpOutcome, Sense,
    StandardOutcome,
};
use crate::space::{NormedSpace, Subspace};

/// A best approximation to `x` out of `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestApproxResult {
    pub distance: Rational,
    /// Witness coordinates in the basis of `W`.
    pub coefficients: RatVector,
    /// Witness as an ambient vector.
    pub witness: RatVector,
    /// Dimension of the set of best approximations.
    pub optimal_face_dim: usize,
}

impl BestApproxResult {
    pub fn is_unique(&self) -> bool {
        self.optimal_face_dim == 0
    }
}

/// For each facet `f`, the pair `(f.w_l for each basis vector, f.x)`, so that
/// `f.(x - W c) = h - g.c`.
fn residual_forms(space: &NormedSpace, x: &[Rational], w: &Subspace) -> Vec<(RatVector, Rational)> {
    space
        .ball()
        .facets()
        .iter()
        .map(|f| {
            let g = w.basis().iter().map(|b| dot(f, b)).collect();
            (g, dot(f, x))
        })
        .collect()
}

/// `{c : |h - g.c| <= t}` for every facet form, as `a.c <= b` rows.
fn face_rows(forms: &[(RatVector, Rational)], t: &Rational) -> Vec<(RatVector, Rational)> {
    forms
        .iter()
        .flat_map(|(g, h)| {
            let neg_g: RatVector = g.iter().map(|v| -v).collect();
            [(neg_g, t - h), (g.clone(), t + h)]
        })
        .collect()
}

fn check_inputs(space: &NormedSpace, x: &[Rational], w: &Subspace) -> Result<()> {
    space.check_vector(x)?;
    w.check_ambient(space)
}

/// `min t  s.t.  |f.(x - W c)| <= t` for every facet. Returns `(t*, c*)`.
fn solve_distance_lp(forms: &[(RatVector, Rational)], k: usize) -> Result<(Rational, RatVector)> {
    let mut objective = vec![zero(); k + 1];
    objective[k] = one();
    let mut lp = LinearProgram::new(objective, Sense::Minimize);
    for (g, h) in forms {
        // h - g.c <= t  and  g.c - h <= t
        let mut lower: RatVector = g.iter().map(|v| -v).collect();
        lower.push(int(-1));
        lp.le(lower, -h.clone());
        let mut upper = g.clone();
        upper.push(int(-1));
        lp.le(upper, h.clone());
    }
    match solve_lp(&lp)? {
        LpOutcome::Optimal(sol) => {
            let mut c = sol.point;
            c.truncate(k);
            Ok((sol.value, c))
        }
        other => Err(Error::Lp(format!("distance program: {other:?}"))),
    }
}

/// `d(x, W)` only, from a single program.
pub fn distance_value(space: &NormedSpace, x: &[Rational], w: &Subspace) -> Result<Rational> {
    check_inputs(space, x, w)?;
    if w.dim() == 0 {
        return space.norm(x);
    }
    let forms = residual_forms(space, x, w);
    Ok(solve_distance_lp(&forms, w.dim())?.0)
}

/// Distance from `x` to `W`, a best approximation and the dimension of the set
/// of all best approximations.
///
/// The reported witness is the lexicographically smallest best approximation
/// in basis coordinates.
pub fn distance_to_subspace(
    space: &NormedSpace,
    x: &[Rational],
    w: &Subspace,
) -> Result<BestApproxResult> {
    check_inputs(space, x, w)?;
    let k = w.dim();
    if k == 0 {
        return Ok(BestApproxResult {
            distance: space.norm(x)?,
            coefficients: Vec::new(),
            witness: vec![zero(); space.dim()],
            optimal_face_dim: 0,
        });
    }
    let forms = residual_forms(space, x, w);
    let (distance, _) = solve_distance_lp(&forms, k)?;
    let rows = face_rows(&forms, &distance);

    let optimal_face_dim = if distance.is_zero() {
        0
    } else {
        let (_, tight) = relative_interior(k, &rows)?
            .ok_or_else(|| Error::Invariant("optimal face of distance program is empty".into()))?;
        let normals: Vec<RatVector> = tight.iter().map(|&i| rows[i].0.clone()).collect();
        k - rank_of_rows(&normals)
    };

    let coefficients = lex_min(k, &rows)?;
    let witness = w.embed(&coefficients);
    debug_assert_eq!(space.norm(&sub(x, &witness))?, distance);
    Ok(BestApproxResult {
        distance,
        coefficients,
        witness,
        optimal_face_dim,
    })
}

/// Lexicographically smallest point of the bounded polyhedron `a.c <= b`.
fn lex_min(k: usize, rows: &[(RatVector, Rational)]) -> Result<RatVector> {
    let mut fixed: Vec<Rational> = Vec::with_capacity(k);
    let mut last_point = None;
    for j in 0..k {
        let mut objective = vec![zero(); k];
        objective[j] = one();
        let mut lp = LinearProgram::new(objective, Sense::Minimize);
        for (a, b) in rows {
            lp.le(a.clone(), b.clone());
        }
        for (i, v) in fixed.iter().enumerate() {
            let mut e = vec![zero(); k];
            e[i] = one();
            lp.equal(e, v.clone());
        }
        let sol = solve_lp(&lp)?
            .optimal()
            .ok_or_else(|| Error::Lp("lexicographic refinement failed".into()))?;
        fixed.push(sol.value);
        last_point = Some(sol.point);
    }
    Ok(last_point.unwrap_or_default())
}

/// Whether `x` is Birkhoff-James orthogonal to `y`, decided by the sign range
/// of `f(y)` over the norming functionals of `x`.
pub fn bj_orthogonal_vec(space: &NormedSpace, x: &[Rational], y: &[Rational]) -> Result<bool> {
    space.check_vector(y)?;
    if is_zero_vec(x) {
        return Err(Error::ZeroVector("Birkhoff-James orthogonality"));
    }
    let support = space.support_set(x)?;
    let (min, max) = support.value_range(y);
    Ok(!min.is_positive() && !max.is_negative())
}

/// Outcome of a subspace orthogonality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityCheck {
    pub orthogonal: bool,
    /// A norming functional of `x` vanishing on the subspace, when one exists.
    pub witness: Option<RatVector>,
}

/// Whether `x` is Birkhoff-James orthogonal to every vector of `W`.
///
/// Looks for convex weights on the extreme norming functionals of `x` whose
/// combination annihilates the basis of `W`.
pub fn bj_orthogonal_subspace(
    space: &NormedSpace,
    x: &[Rational],
    w: &Subspace,
) -> Result<OrthogonalityCheck> {
    check_inputs(space, x, w)?;
    if is_zero_vec(x) {
        return Err(Error::ZeroVector("Birkhoff-James orthogonality"));
    }
    let functionals = space.support_set(x)?.extreme_functionals;
    let m = functionals.len();
    let mut a = vec![vec![one(); m]];
    let mut b = vec![one()];
    for basis in w.basis() {
        a.push(functionals.iter().map(|f| dot(f, basis)).collect());
        b.push(zero());
    }
    match solve_standard_form(&a, &b, &vec![zero(); m])? {
        StandardOutcome::Optimal(sol) => {
            let mut witness = vec![zero(); space.dim()];
            for (lambda, f) in sol.x.iter().zip(&functionals) {
                if lambda.is_zero() {
                    continue;
                }
                for (o, v) in witness.iter_mut().zip(f) {
                    *o += lambda * v;
                }
            }
            Ok(OrthogonalityCheck {
                orthogonal: true,
                witness: Some(witness),
            })
        }
        _ => Ok(OrthogonalityCheck {
            orthogonal: false,
            witness: None,
        }),
    }
}

/// `Z^perp`: the functionals on `Y` vanishing on `Z`, as a subspace of `Y*`.
pub fn annihilator(space: &NormedSpace, z: &Subspace) -> Result<Subspace> {
    z.check_ambient(space)?;
    let basis = null_space(z.basis(), space.dim());
    Subspace::new(space.dim(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{ivec, ratio, rvec};

    fn span(dim: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::new(dim, vs.iter().map(|v| ivec(v)).collect()).unwrap()
    }

    #[test]
    fn linf_distance_to_diagonal() {
        // Oracle: d = min_c max(|1 - c|, |c|), scanned on a fine rational grid.
        let scan_min = (-400..=400)
            .map(|i| ratio(i, 200))
            .map(|c| std::cmp::max((int(1) - &c).abs(), c.abs()))
            .min()
            .unwrap();
        assert_eq!(scan_min, ratio(1, 2));

        let y = NormedSpace::linf(2).unwrap();
        let r = distance_to_subspace(&y, &ivec(&[1, 0]), &span(2, &[&[1, 1]])).unwrap();
        assert_eq!(r.distance, scan_min);
        assert_eq!(r.witness, rvec(&[(1, 2), (1, 2)]));
        assert!(r.is_unique());
    }

    #[test]
    fn member_has_zero_distance() {
        let y = NormedSpace::l1(3).unwrap();
        let w = span(3, &[&[1, 2, 0], &[0, 1, 1]]);
        let x = ivec(&[2, 5, 1]);
        let r = distance_to_subspace(&y, &x, &w).unwrap();
        assert_eq!(r.distance, int(0));
        assert_eq!(r.witness, x);
        assert_eq!(r.optimal_face_dim, 0);
    }

    #[test]
    fn l1_coordinate_decoupling() {
        let y = NormedSpace::l1(2).unwrap();
        let r = distance_to_subspace(&y, &ivec(&[0, 1]), &span(2, &[&[1, 0]])).unwrap();
        assert_eq!(r.distance, int(1));
        assert_eq!(r.witness, ivec(&[0, 0]));
    }

    #[test]
    fn non_unique_best_approximation() {
        // linf: x = (0,1), W = span(e1): every (c,0) with |c| <= 1 is optimal.
        let y = NormedSpace::linf(2).unwrap();
        let r = distance_to_subspace(&y, &ivec(&[0, 1]), &span(2, &[&[1, 0]])).unwrap();
        assert_eq!(r.distance, int(1));
        assert_eq!(r.optimal_face_dim, 1);
        assert_eq!(r.coefficients, ivec(&[-1]));
    }

    #[test]
    fn zero_subspace_distance_is_norm() {
        let y = NormedSpace::l1(2).unwrap();
        let r = distance_to_subspace(&y, &ivec(&[1, -2]), &Subspace::zero(2)).unwrap();
        assert_eq!(r.distance, int(3));
        assert!(distance_to_subspace(&y, &ivec(&[1]), &Subspace::zero(2)).is_err());
    }

    #[test]
    fn vector_orthogonality() {
        let l1 = NormedSpace::l1(2).unwrap();
        let linf = NormedSpace::linf(2).unwrap();
        assert!(bj_orthogonal_vec(&l1, &ivec(&[1, 0]), &ivec(&[0, 1])).unwrap());
        assert!(bj_orthogonal_vec(&linf, &ivec(&[1, 1]), &ivec(&[1, -1])).unwrap());
        assert!(!bj_orthogonal_vec(&l1, &rvec(&[(1, 2), (1, 2)]), &ivec(&[1, 1])).unwrap());
        assert!(bj_orthogonal_vec(&l1, &ivec(&[0, 0]), &ivec(&[1, 1])).is_err());
    }

    #[test]
    fn subspace_orthogonality() {
        let l1 = NormedSpace::l1(2).unwrap();
        let r = bj_orthogonal_subspace(&l1, &ivec(&[1, 0]), &span(2, &[&[0, 1]])).unwrap();
        assert!(r.orthogonal);
        assert_eq!(r.witness.unwrap()[0], int(1));

        let linf = NormedSpace::linf(2).unwrap();
        let r = bj_orthogonal_subspace(&linf, &ivec(&[1, 0]), &span(2, &[&[1, 1]])).unwrap();
        assert!(!r.orthogonal);
        assert!(r.witness.is_none());

        let r = bj_orthogonal_subspace(&linf, &ivec(&[1, 1]), &Subspace::zero(2)).unwrap();
        assert!(r.orthogonal);
    }

    #[test]
    fn annihilators() {
        let y = NormedSpace::linf(2).unwrap();
        let zp = annihilator(&y, &span(2, &[&[1, 1]])).unwrap();
        assert_eq!(zp.basis(), &[ivec(&[-1, 1])]);
        assert_eq!(annihilator(&y, &Subspace::whole(2)).unwrap().dim(), 0);
        assert_eq!(annihilator(&y, &Subspace::zero(2)).unwrap().dim(), 2);
    }
}
