//! Linear operators between polyhedral normed spaces.
//!
//! The extreme norming functionals of an operator `T` are the elementary
//! tensors `x (x) y*` with `x` extreme in the domain ball, `y*` extreme in the
//! codomain dual ball and `y*(T x) = |T|`. In the trace pairing such a
//! functional is the rank-one matrix `y* x^T`, so spans and ranks of operator
//! functionals reduce to ranks of flattened matrices.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlp::matrix::{rank_of_rows, RatMatrix};
use crate::exactlp::rational::{dot, one, zero, RatVector, Rational};
use crate::exactlp::{solve_standard_form, StandardOutcome};
use crate::space::{NormedSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    matrix: RatMatrix,
    domain: Arc<NormedSpace>,
    codomain: Arc<NormedSpace>,
}

impl Operator {
    /// `matrix` is `codomain.dim x domain.dim`.
    pub fn new(
        matrix: RatMatrix,
        domain: Arc<NormedSpace>,
        codomain: Arc<NormedSpace>,
    ) -> Result<Self> {
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: matrix.cols(),
            });
        }
        Ok(Self {
            matrix,
            domain,
            codomain,
        })
    }

    pub fn zero(domain: Arc<NormedSpace>, codomain: Arc<NormedSpace>) -> Self {
        Self {
            matrix: RatMatrix::zeros(codomain.dim(), domain.dim()),
            domain,
            codomain,
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> &Arc<NormedSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<NormedSpace> {
        &self.codomain
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[Rational]) -> Result<RatVector> {
        self.matrix.mul_vec(x)
    }

    /// Same spaces, different matrix.
    pub fn with_matrix(&self, matrix: RatMatrix) -> Result<Self> {
        Self::new(matrix, self.domain.clone(), self.codomain.clone())
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same_spaces(other)?;
        self.with_matrix(self.matrix.sub(&other.matrix)?)
    }

    pub fn scale(&self, s: &Rational) -> Operator {
        Self {
            matrix: self.matrix.scale(s),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn check_same_spaces(&self, other: &Operator) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::InvalidInput(
                "operators act between different spaces".into(),
            ));
        }
        Ok(())
    }

    fn require_nonzero(&self, what: &'static str) -> Result<()> {
        if self.is_zero() {
            return Err(Error::ZeroOperator(what));
        }
        Ok(())
    }

    /// Whether every column lies in `z`, i.e. `T` maps into `z`.
    pub fn maps_into(&self, z: &Subspace) -> bool {
        self.matrix.columns().iter().all(|c| z.contains(c))
    }
}

/// `|T| = max_v |T v|` over the extreme points of the domain ball.
pub fn operator_norm(t: &Operator) -> Result<Rational> {
    let mut best = zero();
    for v in t.domain.extreme_points() {
        let n = t.codomain.norm(&t.apply(v)?)?;
        if n > best {
            best = n;
        }
    }
    Ok(best)
}

/// Extreme points of the domain ball (one per antipodal pair) where `T`
/// attains its norm, sorted.
pub fn norm_attainment_extremes(t: &Operator) -> Result<Vec<RatVector>> {
    t.require_nonzero("norm attainment")?;
    let norm = operator_norm(t)?;
    let mut out = Vec::new();
    for v in t.domain.extreme_points() {
        if t.codomain.norm(&t.apply(v)?)? == norm {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// An extreme norming functional `x (x) y*` of an operator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SupportPair {
    pub x: RatVector,
    pub y_star: RatVector,
    /// `y* x^T`, the functional in the trace pairing.
    pub rep_matrix: RatMatrix,
}

impl SupportPair {
    fn new(x: RatVector, y_star: RatVector) -> Self {
        let rep_matrix = RatMatrix::outer(&y_star, &x);
        Self {
            x,
            y_star,
            rep_matrix,
        }
    }

    /// `y*(S x)`.
    pub fn evaluate(&self, s: &RatMatrix) -> Result<Rational> {
        Ok(dot(&self.y_star, &s.mul_vec(&self.x)?))
    }
}

/// All extreme norming functionals of `T`, sorted.
pub fn operator_support_extremes(t: &Operator) -> Result<Vec<SupportPair>> {
    t.require_nonzero("operator support set")?;
    let mut pairs = Vec::new();
    for x in norm_attainment_extremes(t)? {
        let tx = t.apply(&x)?;
        for y_star in t.codomain.support_set(&tx)?.extreme_functionals {
            pairs.push(SupportPair::new(x.clone(), y_star));
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Dimension of the span of `J(T)`; 1 exactly for smooth operators.
pub fn operator_smoothness_order(t: &Operator) -> Result<usize> {
    let flat: Vec<RatVector> = operator_support_extremes(t)?
        .iter()
        .map(|p| p.rep_matrix.flatten())
        .collect();
    Ok(rank_of_rows(&flat))
}

/// `A x = x_star(x) z`.
pub fn rank_one(
    domain: Arc<NormedSpace>,
    x_star: &[Rational],
    z: &[Rational],
    codomain: Arc<NormedSpace>,
) -> Result<Operator> {
    domain.check_vector(x_star)?;
    codomain.check_vector(z)?;
    Operator::new(RatMatrix::outer(z, x_star), domain, codomain)
}

/// Basis of `L(X, Z)`: the operators `e_j* (x) z_l`, ordered by `l` then `j`.
pub fn subspace_operator_basis(
    domain: &Arc<NormedSpace>,
    codomain: &Arc<NormedSpace>,
    z: &Subspace,
) -> Result<Vec<Operator>> {
    z.check_ambient(codomain)?;
    let n = domain.dim();
    let mut out = Vec::with_capacity(n * z.dim());
    for zl in z.basis() {
        for j in 0..n {
            let e = crate::exactlp::rational::unit(n, j);
            out.push(rank_one(domain.clone(), &e, zl, codomain.clone())?);
        }
    }
    Ok(out)
}

/// Convex combination of extreme norming functionals of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessDecomposition {
    pub pairs: Vec<SupportPair>,
    /// Positive, summing to one.
    pub weights: Vec<Rational>,
}

impl WitnessDecomposition {
    /// The represented functional as a matrix in the trace pairing.
    pub fn functional(&self) -> RatMatrix {
        let (rows, cols) = self
            .pairs
            .first()
            .map(|p| (p.rep_matrix.rows(), p.rep_matrix.cols()))
            .unwrap_or((0, 0));
        let mut acc = RatMatrix::zeros(rows, cols);
        for (p, w) in self.pairs.iter().zip(&self.weights) {
            acc = acc.add(&p.rep_matrix.scale(w)).expect("shapes agree");
        }
        acc
    }

    /// Value of the functional at `s`.
    pub fn evaluate(&self, s: &RatMatrix) -> Result<Rational> {
        let mut total = zero();
        for (p, w) in self.pairs.iter().zip(&self.weights) {
            total += w * p.evaluate(s)?;
        }
        Ok(total)
    }
}

/// A norming functional of `T` vanishing on `span(basis)`, when one exists.
///
/// `Ok(None)` means `T` is not Birkhoff-James orthogonal to the span. The
/// decomposition comes from a basic feasible solution, so it uses at most
/// `basis.len() + 1` pairs.
pub fn orthogonality_witness(
    t: &Operator,
    basis: &[Operator],
) -> Result<Option<WitnessDecomposition>> {
    t.require_nonzero("orthogonality witness")?;
    for a in basis {
        t.check_same_spaces(a)?;
    }
    let pairs = operator_support_extremes(t)?;
    let m = pairs.len();
    let mut rows = vec![vec![one(); m]];
    let mut rhs = vec![one()];
    for a in basis {
        let row = pairs
            .iter()
            .map(|p| p.evaluate(a.matrix()))
            .collect::<Result<RatVector>>()?;
        rows.push(row);
        rhs.push(zero());
    }
    match solve_standard_form(&rows, &rhs, &vec![zero(); m])? {
        StandardOutcome::Optimal(sol) => {
            let (pairs, weights): (Vec<_>, Vec<_>) = pairs
                .into_iter()
                .zip(sol.x)
                .filter(|(_, w)| !w.is_zero())
                .unzip();
            Ok(Some(WitnessDecomposition { pairs, weights }))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{int, ivec, unit};
    use num_traits::Signed;

    fn spaces(x: NormedSpace, y: NormedSpace) -> (Arc<NormedSpace>, Arc<NormedSpace>) {
        (Arc::new(x), Arc::new(y))
    }

    fn op(rows: &[&[i64]], x: &Arc<NormedSpace>, y: &Arc<NormedSpace>) -> Operator {
        let m = RatMatrix::from_rows(rows.iter().map(|r| ivec(r)).collect()).unwrap();
        Operator::new(m, x.clone(), y.clone()).unwrap()
    }

    #[test]
    fn operator_norms() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        assert_eq!(operator_norm(&op(&[&[1, 0], &[0, 2]], &x, &y)).unwrap(), int(2));
        assert_eq!(operator_norm(&Operator::zero(x.clone(), y.clone())).unwrap(), int(0));

        // Oracle: evaluate |I v|_1 at both cube vertex representatives.
        let (x, y) = spaces(NormedSpace::linf(2).unwrap(), NormedSpace::l1(2).unwrap());
        let expected = [ivec(&[1, 1]), ivec(&[1, -1])]
            .iter()
            .map(|v| v.iter().map(|c| c.abs()).fold(int(0), |a, b| a + b))
            .max()
            .unwrap();
        assert_eq!(operator_norm(&op(&[&[1, 0], &[0, 1]], &x, &y)).unwrap(), expected);
    }

    #[test]
    fn attainment_sets() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        assert_eq!(
            norm_attainment_extremes(&op(&[&[1, 0], &[0, 2]], &x, &y)).unwrap(),
            vec![unit(2, 1)]
        );
        let ident = op(&[&[1, 0], &[0, 1]], &x, &y);
        assert_eq!(norm_attainment_extremes(&ident).unwrap().len(), 2);
        assert_eq!(
            norm_attainment_extremes(&Operator::zero(x, y)),
            Err(Error::ZeroOperator("norm attainment"))
        );
    }

    #[test]
    fn support_pairs_of_identity() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        let t = op(&[&[1, 0], &[0, 1]], &x, &y);
        let pairs = operator_support_extremes(&t).unwrap();
        let got: Vec<_> = pairs.iter().map(|p| (p.x.clone(), p.y_star.clone())).collect();
        assert_eq!(
            got,
            vec![(unit(2, 1), unit(2, 1)), (unit(2, 0), unit(2, 0))]
        );
        for p in &pairs {
            assert_eq!(p.evaluate(t.matrix()).unwrap(), int(1));
            assert_eq!(p.rep_matrix.rank(), 1);
        }
        assert_eq!(operator_smoothness_order(&t).unwrap(), 2);
    }

    #[test]
    fn support_pairs_of_projection_on_l1() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::l1(2).unwrap());
        let t = op(&[&[1, 0], &[0, 0]], &x, &y);
        let pairs = operator_support_extremes(&t).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p.x == unit(2, 0)));
    }

    #[test]
    fn smooth_operator() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        assert_eq!(operator_smoothness_order(&op(&[&[1, 0], &[0, 2]], &x, &y)).unwrap(), 1);
        let (x, y) = spaces(NormedSpace::l1(1).unwrap(), NormedSpace::l1(1).unwrap());
        let t = op(&[&[3]], &x, &y);
        assert_eq!(operator_support_extremes(&t).unwrap().len(), 1);
        assert_eq!(operator_smoothness_order(&t).unwrap(), 1);
    }

    #[test]
    fn rank_one_operators() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        let a = rank_one(x.clone(), &unit(2, 0), &unit(2, 1), y.clone()).unwrap();
        assert_eq!(a.matrix(), &RatMatrix::from_rows(vec![ivec(&[0, 0]), ivec(&[1, 0])]).unwrap());
        assert!(rank_one(x.clone(), &ivec(&[1, 1]), &ivec(&[0, 0]), y.clone()).unwrap().is_zero());
        let a = rank_one(x.clone(), &ivec(&[1, 1]), &ivec(&[1, 0]), y.clone()).unwrap();
        assert_eq!(a.apply(&ivec(&[2, 3])).unwrap(), ivec(&[5, 0]));
        assert!(rank_one(x, &ivec(&[1]), &ivec(&[1, 0]), y).is_err());
    }

    #[test]
    fn witnesses() {
        let (x, y) = spaces(NormedSpace::l1(2).unwrap(), NormedSpace::linf(2).unwrap());
        let z = Subspace::coordinate(2, 1);
        let basis = subspace_operator_basis(&x, &y, &z).unwrap();
        assert_eq!(basis.len(), 2);

        for t in [op(&[&[1, 0], &[0, 1]], &x, &y), op(&[&[1, 0], &[0, 2]], &x, &y)] {
            let w = orthogonality_witness(&t, &basis).unwrap().expect("orthogonal");
            assert_eq!(w.pairs.len(), 1);
            assert_eq!(w.pairs[0].x, unit(2, 1));
            assert_eq!(w.pairs[0].y_star, unit(2, 1));
            assert_eq!(w.weights, vec![int(1)]);
            for a in &basis {
                assert_eq!(w.evaluate(a.matrix()).unwrap(), int(0));
            }
        }

        let t = basis[0].clone();
        assert!(orthogonality_witness(&t, &basis).unwrap().is_none());
    }
}
