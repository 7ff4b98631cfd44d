//! Combinatorial and linear-algebraic toolkit for rational nodal curves.
//!
//! A curve whose components are projective lines glued at nodes with no
//! closed chains is described by its dual tree: one vertex per component,
//! one edge per node. This crate makes that picture computable:
//!
//! - [`tree`]: dual trees, canonical codes, enumeration up to isomorphism,
//!   automorphism groups, edge contraction;
//! - [`strata`]: automorphism-group structure per topological type,
//!   stratum dimensions, first-order deformations, and the specialization
//!   poset ordered by edge contraction;
//! - [`cohomology`]: exact `h0`/`h1` of line bundles on trees of projective
//!   lines via node-gluing linear algebra;
//! - [`fitting`]: Fitting ideals of presentation matrices and node-count
//!   stratification of local families at rational points.
//!
//! The numeric modules are generic over a [`Scalar`]; the exact instance
//! used throughout the tests and the CLI is [`Rat`].

pub mod cohomology;
pub mod fitting;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod strata;
pub mod tree;

pub use scalar::Scalar;

/// The exact scalar: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// Polynomials with exact rational coefficients.
pub type RatPoly = poly::MultiPoly<Rat>;

/// Dense matrices with exact rational entries.
pub type RatMatrix = linalg::Matrix<Rat>;

/// Section spaces computed over exact rationals.
pub type RatSectionSpace = cohomology::SectionSpace<Rat>;

/// Local families with exact rational coefficients.
pub type RatLocalFamily = fitting::LocalFamily<Rat>;

/// Presentation matrices with exact rational coefficients.
pub type RatPresentationMatrix = fitting::PresentationMatrix<Rat>;
