//! Centrally symmetric polytopes in both facet and vertex form.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use super::matrix::{inverse, rank_of_rows};
use super::rational::{canonical_sign, dot, is_zero_vec, RatVector, Rational};
use crate::error::{Error, Result};

/// A full-dimensional, centrally symmetric polytope `{x : |f.x| <= 1 for all f}`.
///
/// Facets and vertices are stored once per antipodal pair, with the first
/// nonzero coordinate positive, sorted lexicographically. The two lists are
/// mutually polar: the facets of this polytope are the vertices of its polar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricPolytope {
    dim: usize,
    facets: Vec<RatVector>,
    vertices: Vec<RatVector>,
}

impl SymmetricPolytope {
    /// Builds the polytope cut out by `|f.x| <= 1`. Redundant facets are dropped.
    pub fn from_facets(dim: usize, facets: &[RatVector]) -> Result<Self> {
        let vertices = enumerate_vertices(facets, dim)?;
        let facets = supporting_facets(facets, &vertices, dim);
        Ok(Self {
            dim,
            facets,
            vertices,
        })
    }

    /// Builds `conv(+-v)`. Points that are not extreme are dropped.
    pub fn from_vertices(dim: usize, points: &[RatVector]) -> Result<Self> {
        check_dims(points, dim)?;
        let rank = rank_of_rows(points);
        if rank < dim {
            return Err(Error::LowerDimensional { rank, dim });
        }
        Self::from_facets(dim, points).map(|p| p.polar_dual())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[RatVector] {
        &self.facets
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// The polar body: vertices and facets trade places.
    pub fn polar_dual(&self) -> Self {
        Self {
            dim: self.dim,
            facets: self.vertices.clone(),
            vertices: self.facets.clone(),
        }
    }

    /// Gauge of the polytope, `max_f |f.x|`.
    pub fn gauge(&self, x: &[Rational]) -> Rational {
        self.facets
            .iter()
            .map(|f| dot(f, x).abs())
            .max()
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }

    /// Checks the stored invariants: every vertex lies on the boundary, on at
    /// least `dim` facets, and every facet is active at some vertex.
    pub fn is_consistent(&self) -> bool {
        let on_boundary = self.vertices.iter().all(|v| {
            let values: Vec<Rational> = self.facets.iter().map(|f| dot(f, v).abs()).collect();
            values.iter().all(|a| *a <= Rational::one())
                && values.iter().filter(|a| a.is_one()).count() >= self.dim
        });
        let facets_active = self
            .facets
            .iter()
            .all(|f| self.vertices.iter().any(|v| dot(f, v).abs().is_one()));
        on_boundary && facets_active && rank_of_rows(&self.vertices) == self.dim
    }
}

fn check_dims(vectors: &[RatVector], dim: usize) -> Result<()> {
    match vectors.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

/// The input facets that touch the polytope in a `(dim - 1)`-face, i.e. whose
/// tight vertices span the whole space. Canonical sign, sorted, deduplicated.
fn supporting_facets(facets: &[RatVector], vertices: &[RatVector], dim: usize) -> Vec<RatVector> {
    let candidates: BTreeSet<RatVector> = facets
        .iter()
        .filter(|f| !is_zero_vec(f))
        .map(|f| canonical_sign(f.clone()))
        .collect();
    candidates
        .into_iter()
        .filter(|f| {
            let tight: Vec<RatVector> = vertices
                .iter()
                .filter(|v| dot(f, v).abs().is_one())
                .cloned()
                .collect();
            rank_of_rows(&tight) == dim
        })
        .collect()
}

/// Vertices of `{x : |f.x| <= 1}`, one per antipodal pair, canonical sign,
/// sorted.
///
/// Every `dim`-subset of facets with every sign pattern is intersected and
/// the feasible intersection points are kept. Exhaustive, so only suitable for
/// small dimensions and facet counts.
pub fn enumerate_vertices(facets: &[RatVector], dim: usize) -> Result<Vec<RatVector>> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    check_dims(facets, dim)?;
    let facets: Vec<&RatVector> = {
        let mut seen = BTreeSet::new();
        facets
            .iter()
            .filter(|f| !is_zero_vec(f))
            .filter(|f| seen.insert(canonical_sign((*f).clone())))
            .collect()
    };
    let owned: Vec<RatVector> = facets.iter().map(|f| (*f).clone()).collect();
    let rank = rank_of_rows(&owned);
    if rank < dim {
        return Err(Error::Unbounded { rank, dim });
    }

    let signs: Vec<RatVector> = sign_patterns(dim);
    let mut found = BTreeSet::new();
    for subset in Combinations::new(facets.len(), dim) {
        let rows: Vec<RatVector> = subset.iter().map(|&i| facets[i].clone()).collect();
        let Some(inv) = inverse(&rows) else {
            continue;
        };
        for s in &signs {
            let x: RatVector = inv.iter().map(|row| dot(row, s)).collect();
            if facets.iter().all(|f| dot(f, &x).abs() <= Rational::one()) {
                found.insert(canonical_sign(x));
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// All `+-1` vectors of length `dim` with a positive first entry.
fn sign_patterns(dim: usize) -> Vec<RatVector> {
    (0..1usize << (dim - 1))
        .map(|mask| {
            (0..dim)
                .map(|k| {
                    if k > 0 && mask & (1 << (k - 1)) != 0 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect()
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::{int, ivec};

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(3, 0).count(), 1);
    }

    #[test]
    fn square_vertices() {
        let v = enumerate_vertices(&[ivec(&[1, 0]), ivec(&[0, 1])], 2).unwrap();
        assert_eq!(v, vec![ivec(&[1, -1]), ivec(&[1, 1])]);
    }

    #[test]
    fn segment_vertices() {
        assert_eq!(enumerate_vertices(&[ivec(&[1])], 1).unwrap(), vec![ivec(&[1])]);
    }

    #[test]
    fn unbounded_system_rejected() {
        let err = enumerate_vertices(&[ivec(&[1, 0])], 2).unwrap_err();
        assert_eq!(err, Error::Unbounded { rank: 1, dim: 2 });
        assert!(SymmetricPolytope::from_vertices(2, &[ivec(&[1, 1])]).is_err());
    }

    #[test]
    fn redundant_facets_are_dropped() {
        let p = SymmetricPolytope::from_facets(
            2,
            &[ivec(&[1, 0]), ivec(&[0, 1]), vec![int(1) / int(2), int(0)], ivec(&[0, 0])],
        )
        .unwrap();
        assert_eq!(p.facets(), &[ivec(&[0, 1]), ivec(&[1, 0])]);
        assert!(p.is_consistent());
    }
}
