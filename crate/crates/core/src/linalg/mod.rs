//! Exact linear algebra over ℚ.
//!
//! The algebras in this crate are defined over an algebraically closed
//! field, but every quantity computed here (dimensions of Hom, Ext and
//! derivation spaces, ranks of morphisms, rigidity) is the dimension of
//! the solution space of a linear system with rational coefficients.
//! Such dimensions do not change under extension of scalars, so working
//! over ℚ gives the same answers as working over its algebraic closure.
//! A prime-field mode is provided for fast cross-checks only.

mod matrix;
mod poly;
mod prime;
mod rational;

pub mod json;

pub use matrix::{preimage, span_intersection, span_sum, Mat, Rref};
pub use poly::{charpoly, coprime_factors, coprime_split, Poly};
pub use prime::{is_prime, rank_in, rank_mod_p, FieldMode, DEFAULT_PRIME};
pub use rational::{ParseRationalError, Rational};

/// Alias used throughout for the ground-field scalar.
pub type Scalar = Rational;

/// Solve `A x = b`, `None` when inconsistent.
pub fn solve_linear(a: &Mat, b: &[Rational]) -> Option<Vec<Rational>> {
    a.solve(b)
}

/// `(rank, nullspace basis)` of `a`.
pub fn rank_nullspace(a: &Mat) -> (usize, Vec<Vec<Rational>>) {
    a.rank_nullspace()
}
