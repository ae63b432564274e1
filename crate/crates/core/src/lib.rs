//! Max-plus linear algebra over `B(T)` for finite `T`, tropical polytopes,
//! and fixed points of monotone self-maps of tropical polytopes.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the bottom of this file fix the scalar type for everyday use.
//!
//! * [`semiring`]: the scalar semiring `(ℝ ∪ {⊥}, max, +)`.
//! * [`space`]: finite vectors, the uniform metric, linear functionals.
//! * [`polytope`]: ⊕-convex hulls, membership, the retraction onto a hull.
//! * [`fixpoint`]: the solver with certificates and the reduction to finitely
//!   many functionals.
//! * [`eigen`]: maximum cycle mean and eigenvectors.
//! * [`oracle`]: brute-force cross-checks.
//! * [`cli`]: the `tropfix` command-line front end.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fixpoint;
pub mod json;
pub mod map;
pub mod matrix;
pub mod oracle;
pub mod polytope;
pub mod problem;
pub mod real;
pub mod semiring;
pub mod space;

pub use eigen::{eigenvector, karp_eigenvalue, Eigenpair};
pub use error::{Error, Result};
pub use fixpoint::{
    embed, find_fixpoint, image_polytope, project_sublevel, solve_on_functionals, FixpointReport,
    FunctionalReport, SolverOptions, Status,
};
pub use map::{Expr, MapExpr, SelfMap};
pub use matrix::Matrix;
pub use polytope::{clamped_residual, residual, Membership, Polytope, Retraction};
pub use real::Real;
pub use semiring::MaxPlus;
pub use space::{arctan_distance, convex_combination, in_ball, uniform_distance, Functional, Vector};

pub type Scalar = MaxPlus<f64>;
pub type VectorF64 = Vector<f64>;
pub type FunctionalF64 = Functional<f64>;
pub type PolytopeF64 = Polytope<f64>;
pub type MatrixF64 = Matrix<f64>;
pub type MapExprF64 = MapExpr<f64>;

pub type Scalar32 = MaxPlus<f32>;
pub type VectorF32 = Vector<f32>;
pub type FunctionalF32 = Functional<f32>;
pub type PolytopeF32 = Polytope<f32>;
pub type MatrixF32 = Matrix<f32>;
pub type MapExprF32 = MapExpr<f32>;
