//! Exact rational arithmetic, linear programming and symmetric polytopes.

pub mod lp;
pub mod matrix;
pub mod polytope;
pub mod rational;

pub use lp::{
    relative_interior, solve_lp, solve_standard_form, Constraint, LinearProgram, LpOutcome,
    LpSolution, Relation, Sense, StandardOutcome, StandardSolution,
};
pub use matrix::{affine_rank, null_space, RatMatrix};
pub use polytope::{enumerate_vertices, SymmetricPolytope};
pub use rational::{RatVector, Rational};

/// The polar body of `p`.
pub fn polar_dual(p: &SymmetricPolytope) -> SymmetricPolytope {
    p.polar_dual()
}
