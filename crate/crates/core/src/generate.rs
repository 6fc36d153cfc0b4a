//! Seeded random instances, optionally constrained to satisfy the hypotheses
//! of one of the verifiers.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlp::matrix::{null_space, rank_of_rows, RatMatrix};
use crate::exactlp::rational::{int, is_zero_vec, zero, RatVector};
use crate::minimax::{distance_operator_subspace, make_m_summand, Instance};
use crate::operators::{norm_attainment_extremes, operator_norm, operator_smoothness_order, Operator};
use crate::space::{NormedSpace, SpaceSpec, Subspace};

pub const MAX_DIM: usize = 4;
pub const DEFAULT_BUDGET: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    ThGen,
    L1Prop,
    LinInd,
    Prop1,
    Generic,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 5] = [
        InstanceKind::ThGen,
        InstanceKind::L1Prop,
        InstanceKind::LinInd,
        InstanceKind::Prop1,
        InstanceKind::Generic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::ThGen => "thgen",
            InstanceKind::L1Prop => "l1prop",
            InstanceKind::LinInd => "linind",
            InstanceKind::Prop1 => "prop1",
            InstanceKind::Generic => "generic",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn generate_instance(kind: InstanceKind, seed: u64, max_dim: usize) -> Result<Instance> {
    generate_with_budget(kind, seed, max_dim, DEFAULT_BUDGET)
}

/// Draws up to `budget` candidates and returns the first one whose
/// hypotheses check out.
pub fn generate_with_budget(
    kind: InstanceKind,
    seed: u64,
    max_dim: usize,
    budget: usize,
) -> Result<Instance> {
    if !(1..=MAX_DIM).contains(&max_dim) {
        return Err(Error::InvalidInput(format!("max_dim must lie in 1..={MAX_DIM}")));
    }
    if kind == InstanceKind::ThGen && max_dim < 2 {
        return Err(Error::InvalidInput("thgen instances need max_dim >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let candidate = match kind {
            InstanceKind::Generic => generic(&mut rng, max_dim)?,
            InstanceKind::ThGen => thgen(&mut rng, max_dim)?,
            InstanceKind::L1Prop => l1prop(&mut rng, max_dim)?,
            InstanceKind::LinInd => linind(&mut rng, max_dim)?,
            InstanceKind::Prop1 => prop1(&mut rng, max_dim)?,
        };
        if let Some(inst) = candidate {
            return Ok(inst.with_provenance(seed, kind.name()));
        }
    }
    Err(Error::BudgetExhausted {
        kind: kind.name().into(),
        budget,
    })
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> RatVector {
    (0..dim).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> Vec<RatVector> {
    loop {
        let rows: Vec<RatVector> = (0..dim).map(|_| random_vector(rng, dim, 2)).collect();
        if rank_of_rows(&rows) == dim {
            return rows;
        }
    }
}

/// l1, l_inf, a parallelotope, a cross-polytope image, or a small random
/// polytope with at most `dim + 2` facet pairs.
fn random_space(rng: &mut ChaCha8Rng, dim: usize) -> Result<NormedSpace> {
    let spec = match rng.gen_range(0..5) {
        0 => SpaceSpec::L1(dim),
        1 => SpaceSpec::Linf(dim),
        2 => SpaceSpec::Facets {
            dim,
            facets: random_invertible(rng, dim),
        },
        3 => SpaceSpec::Vertices {
            dim,
            vertices: random_invertible(rng, dim),
        },
        _ => loop {
            let count = dim + rng.gen_range(0..=2);
            let facets: Vec<RatVector> = (0..count).map(|_| random_vector(rng, dim, 2)).collect();
            if rank_of_rows(&facets) == dim {
                break SpaceSpec::Facets { dim, facets };
            }
        },
    };
    NormedSpace::new(spec)
}

/// A space whose extreme points are linearly independent.
fn random_l1_like(rng: &mut ChaCha8Rng, dim: usize) -> Result<NormedSpace> {
    let spec = if rng.gen_bool(0.5) {
        SpaceSpec::L1(dim)
    } else {
        SpaceSpec::Vertices {
            dim,
            vertices: random_invertible(rng, dim),
        }
    };
    NormedSpace::new(spec)
}

fn random_subspace_of(rng: &mut ChaCha8Rng, ambient: &[RatVector], n: usize, k: usize) -> Subspace {
    if k == 0 {
        return Subspace::zero(n);
    }
    loop {
        let basis: Vec<RatVector> = (0..k)
            .map(|_| {
                let mut v = vec![zero(); n];
                for a in ambient {
                    let c = int(rng.gen_range(-2..=2));
                    for (vi, ai) in v.iter_mut().zip(a) {
                        *vi += &c * ai;
                    }
                }
                v
            })
            .collect();
        if let Ok(z) = Subspace::new(n, basis) {
            return z;
        }
    }
}

fn random_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    let ambient: Vec<RatVector> = (0..n).map(|i| crate::exactlp::rational::unit(n, i)).collect();
    random_subspace_of(rng, &ambient, n, k)
}

fn random_operator(
    rng: &mut ChaCha8Rng,
    x: &Arc<NormedSpace>,
    y: &Arc<NormedSpace>,
) -> Result<Operator> {
    loop {
        let rows: Vec<RatVector> = (0..y.dim()).map(|_| random_vector(rng, x.dim(), 3)).collect();
        if rows.iter().all(|r| is_zero_vec(r)) {
            continue;
        }
        return Operator::new(RatMatrix::from_rows(rows)?, x.clone(), y.clone());
    }
}

fn pick_dim(rng: &mut ChaCha8Rng, max_dim: usize) -> usize {
    rng.gen_range(1..=max_dim)
}

/// A proper subspace dimension, nonzero whenever that is possible.
fn proper_dim(rng: &mut ChaCha8Rng, n: usize) -> usize {
    if n == 1 {
        0
    } else {
        rng.gen_range(1..n)
    }
}

/// `T0 - best_S(T0)`, which is orthogonal to `L(X, Z)` by construction.
/// `None` when it vanishes or the orthogonality check fails.
fn orthogonalise(t0: &Operator, z: &Subspace) -> Result<Option<Operator>> {
    let d = distance_operator_subspace(t0, z)?;
    let t = t0.sub(&d.best_s)?;
    if t.is_zero() {
        return Ok(None);
    }
    let recheck = distance_operator_subspace(&t, z)?.value;
    Ok((recheck == operator_norm(&t)?).then_some(t))
}

fn generic(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Option<Instance>> {
    let x = {
        let d = pick_dim(rng, max_dim);
        Arc::new(random_space(rng, d)?)
    };
    let n = pick_dim(rng, max_dim);
    let y = Arc::new(random_space(rng, n)?);
    let k = rng.gen_range(0..=n);
    let z = random_subspace(rng, n, k);
    let t = random_operator(rng, &x, &y)?;
    Instance::new(t, z).map(Some)
}

fn thgen(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Option<Instance>> {
    let k = rng.gen_range(1..max_dim);
    let m = rng.gen_range(1..=max_dim - k);
    let z_sp = NormedSpace::linf(k)?;
    let w_sp = random_space(rng, m)?;
    let sum = make_m_summand(&z_sp, &w_sp)?;
    let x = {
        let d = pick_dim(rng, max_dim);
        Arc::new(random_space(rng, d)?)
    };
    let y = Arc::new(sum.y);
    let t0 = random_operator(rng, &x, &y)?;
    let Some(t) = orthogonalise(&t0, &sum.z)? else {
        return Ok(None);
    };
    let inst = Instance::new(t, sum.z)?.with_certificate(k);
    let predual = inst.z().induced_space(inst.y())?.is_l1_predual();
    Ok((predual && inst.certificate_holds()).then_some(inst))
}

fn l1prop(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Option<Instance>> {
    let x = {
        let d = pick_dim(rng, max_dim);
        Arc::new(random_l1_like(rng, d)?)
    };
    if !x.has_l1_property() {
        return Ok(None);
    }
    let n = pick_dim(rng, max_dim);
    let y = Arc::new(random_space(rng, n)?);
    let k = proper_dim(rng, n);
    let z = random_subspace(rng, n, k);
    let t0 = random_operator(rng, &x, &y)?;
    let Some(t) = orthogonalise(&t0, &z)? else {
        return Ok(None);
    };
    Instance::new(t, z).map(Some)
}

fn linind(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Option<Instance>> {
    let x = {
        let d = pick_dim(rng, max_dim);
        Arc::new(random_space(rng, d)?)
    };
    let n = pick_dim(rng, max_dim);
    let y = Arc::new(random_space(rng, n)?);
    let k = proper_dim(rng, n);
    let z = random_subspace(rng, n, k);
    let t0 = random_operator(rng, &x, &y)?;
    let Some(t) = orthogonalise(&t0, &z)? else {
        return Ok(None);
    };
    let attaining = norm_attainment_extremes(&t)?;
    if rank_of_rows(&attaining) != attaining.len() {
        return Ok(None);
    }
    Instance::new(t, z).map(Some)
}

/// `Z` is drawn inside the kernel of a facet functional of `Y`, so that some
/// extreme dual functional annihilates it.
fn prop1(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Option<Instance>> {
    let x = {
        let d = pick_dim(rng, max_dim);
        Arc::new(random_space(rng, d)?)
    };
    let n = pick_dim(rng, max_dim);
    let y = Arc::new(random_space(rng, n)?);
    let g = y
        .dual_extreme_points()
        .choose(rng)
        .cloned()
        .ok_or_else(|| Error::Invariant("space without facets".into()))?;
    let kernel = null_space(&[g], n);
    let k = rng.gen_range(0..=kernel.len());
    let z = random_subspace_of(rng, &kernel, n, k);
    let t = random_operator(rng, &x, &y)?;
    let s = distance_operator_subspace(&t, &z)?.best_s;
    let t0 = t.sub(&s)?;
    if t0.is_zero() || operator_smoothness_order(&t0)? != 1 {
        return Ok(None);
    }
    Instance::new(t, z).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for kind in InstanceKind::ALL {
            let a = generate_instance(kind, 11, 3).unwrap();
            let b = generate_instance(kind, 11, 3).unwrap();
            assert_eq!(a, b, "{kind}");
            assert_eq!(a.provenance.as_ref().unwrap().kind, kind.name());
        }
    }

    #[test]
    fn zero_budget_is_exhausted() {
        let err = generate_with_budget(InstanceKind::LinInd, 1, 2, 0).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExhausted {
                kind: "linind".into(),
                budget: 0
            }
        );
    }

    #[test]
    fn caps_are_enforced() {
        assert!(generate_instance(InstanceKind::Generic, 1, 0).is_err());
        assert!(generate_instance(InstanceKind::Generic, 1, 5).is_err());
        assert!(generate_instance(InstanceKind::ThGen, 1, 1).is_err());
    }

    #[test]
    fn thgen_carries_a_valid_certificate() {
        let inst = generate_instance(InstanceKind::ThGen, 1, 2).unwrap();
        assert!(inst.certificate_holds());
        assert!(!inst.t().is_zero());
    }
}
