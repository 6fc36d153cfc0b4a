//! Brute-force estimators used to cross-check the exact pipeline. Every value
//! they return is an exact evaluation at a sampled point, so comparisons with
//! the LP results are one-sided but exact.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlp::matrix::{solve_square, RatMatrix};
use crate::exactlp::rational::{add, dot, int, is_zero_vec, ratio, scale, zero, RatVector, Rational};
use crate::operators::{operator_norm, Operator};
use crate::space::{NormedSpace, Subspace};

pub const DEFAULT_GRID_STEPS: usize = 4097;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    /// Half-width of the lambda grid; `None` picks `4|x| / max(|y|, 1)`.
    pub lambda_range: Option<Rational>,
    pub grid_steps: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            lambda_range: None,
            grid_steps: DEFAULT_GRID_STEPS,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> RatVector {
    loop {
        let v: RatVector = (0..dim)
            .map(|_| ratio(rng.gen_range(-64..=64), rng.gen_range(1..=16)))
            .collect();
        if !is_zero_vec(&v) {
            return v;
        }
    }
}

/// Random points of the unit sphere, exactly normalised.
pub fn sample_sphere(space: &NormedSpace, cfg: &SampleConfig) -> Vec<RatVector> {
    let mut rng = cfg.rng();
    (0..cfg.count)
        .map(|_| {
            let v = random_direction(&mut rng, space.dim());
            let n = space.ball().gauge(&v);
            scale(&(Rational::from_integer(1.into()) / n), &v)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaScan {
    pub holds_on_grid: bool,
    pub min_value: Rational,
    pub argmin_lambda: Rational,
}

/// Evaluates `|x + lambda y|` on an evenly spaced grid over
/// `[-range, range]`; the smallest `lambda` wins ties.
pub fn bj_lambda_scan(
    space: &NormedSpace,
    x: &[Rational],
    y: &[Rational],
    cfg: &SampleConfig,
) -> Result<LambdaScan> {
    space.check_vector(x)?;
    space.check_vector(y)?;
    if is_zero_vec(x) {
        return Err(Error::ZeroVector("lambda scan"));
    }
    if cfg.grid_steps < 2 {
        return Err(Error::InvalidInput("grid needs at least two steps".into()));
    }
    let norm_x = space.norm(x)?;
    let range = match &cfg.lambda_range {
        Some(r) => r.abs(),
        None => int(4) * &norm_x / std::cmp::max(space.norm(y)?, int(1)),
    };
    let facets = space.dual_extreme_points();
    let fx: Vec<Rational> = facets.iter().map(|f| dot(f, x)).collect();
    let fy: Vec<Rational> = facets.iter().map(|f| dot(f, y)).collect();
    let step = int(2) * &range / int(cfg.grid_steps as i64 - 1);

    let mut best: Option<(Rational, Rational)> = None;
    for i in 0..cfg.grid_steps {
        let lambda = -&range + &step * int(i as i64);
        let value = fx
            .iter()
            .zip(&fy)
            .map(|(a, b)| (a + &lambda * b).abs())
            .max()
            .unwrap_or_else(zero);
        if best.as_ref().map_or(true, |(m, _)| value < *m) {
            best = Some((value, lambda));
        }
    }
    let (min_value, argmin_lambda) = best.expect("grid is nonempty");
    Ok(LambdaScan {
        holds_on_grid: min_value >= norm_x,
        min_value,
        argmin_lambda,
    })
}

/// Candidate `S` as coefficients `c[l * n + j]` on `z_l e_j^T`.
fn build_s(c: &[Rational], z: &Subspace, n: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(z.ambient_dim(), n);
    for (l, zl) in z.basis().iter().enumerate() {
        for j in 0..n {
            let cij = &c[l * n + j];
            if cij.is_zero() {
                continue;
            }
            for (i, zi) in zl.iter().enumerate() {
                m[(i, j)] += cij * zi;
            }
        }
    }
    m
}

/// Coefficients of the least-squares projection of each column of `T` onto
/// `Z`, which reproduce `T` exactly when `T` maps into `Z`.
fn projection_coefficients(t: &Operator, z: &Subspace) -> Option<RatVector> {
    let n = t.domain().dim();
    let k = z.dim();
    let gram: Vec<RatVector> = z
        .basis()
        .iter()
        .map(|a| z.basis().iter().map(|b| dot(a, b)).collect())
        .collect();
    let mut c = vec![zero(); k * n];
    for (j, col) in t.matrix().columns().iter().enumerate() {
        let rhs: RatVector = z.basis().iter().map(|b| dot(b, col)).collect();
        let coords = solve_square(&gram, &rhs)?;
        for (l, v) in coords.into_iter().enumerate() {
            c[l * n + j] = v;
        }
    }
    Some(c)
}

/// An upper bound on `d(T, L(X, Z))` from random restarts and coordinate
/// descent. Each candidate is scored by the exact operator norm.
pub fn estimate_operator_distance(t: &Operator, z: &Subspace, cfg: &SampleConfig) -> Result<Rational> {
    z.check_ambient(t.codomain())?;
    let n = t.domain().dim();
    let vars = z.dim() * n;
    let score = |c: &[Rational]| -> Result<Rational> {
        let s = t.with_matrix(build_s(c, z, n))?;
        operator_norm(&t.sub(&s)?)
    };

    let mut starts = vec![vec![zero(); vars]];
    if let Some(c) = projection_coefficients(t, z) {
        starts.push(c);
    }
    let mut rng = cfg.rng();
    let norm = operator_norm(t)?;
    let spread = std::cmp::max(norm.ceil().to_integer(), 1.into());
    let spread = i64::try_from(spread).unwrap_or(i64::MAX / 64).min(1 << 20);
    for _ in 0..cfg.count {
        starts.push(
            (0..vars)
                .map(|_| ratio(rng.gen_range(-8 * spread..=8 * spread), 8))
                .collect(),
        );
    }

    let mut best = score(&starts[0])?;
    for start in starts {
        let mut c = start;
        let mut value = score(&c)?;
        let mut step = Rational::from_integer(spread.into());
        for _ in 0..12 {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..vars {
                    for dir in [&step, &-&step] {
                        let mut trial = c.clone();
                        trial[i] += dir;
                        let v = score(&trial)?;
                        if v < value {
                            value = v;
                            c = trial;
                            improved = true;
                        }
                    }
                }
            }
            step /= int(2);
        }
        if value < best {
            best = value;
        }
    }
    Ok(best)
}

/// `x + lambda y`.
pub fn shifted(x: &[Rational], lambda: &Rational, y: &[Rational]) -> RatVector {
    add(x, &scale(lambda, y))
}
