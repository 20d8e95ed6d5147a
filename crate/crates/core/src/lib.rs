//! Finite certificates for ℓ∞-cohomology of finitely presented groups.
//!
//! The crate builds finite truncations of universal covers of presentation
//! complexes (Cayley 2-complex balls, grid products, cusped balls) and
//! decides isoperimetric and filling statements on them by exact linear
//! programming. Every LP answer carries a primal witness and a dual
//! certificate whose objective values agree exactly.
//!
//! The chain algebra and the simplex engine are generic over [`Scalar`];
//! [`Rational`] is the default and the only type used for reports.

pub mod certificates;
pub mod chains;
pub mod complexes;
pub mod corpus;
pub mod lpcore;
pub mod presentations;
pub mod report;
pub mod scalar;

pub use scalar::{q, qi, Extended, Rational, Scalar};

/// Exact chains, the default.
pub type Chain = chains::SparseChain<Rational>;
/// Exact cochains, the default.
pub type Cochain = chains::SparseCochain<Rational>;
/// Exact linear program.
pub type LpProblem = lpcore::LpProblem<Rational>;
/// Exact LP solution with certificates.
pub type LpSolution = lpcore::LpSolution<Rational>;

/// Floating-point chains for exploratory runs.
pub type FloatChain = chains::SparseChain<f64>;
/// Floating-point cochains for exploratory runs.
pub type FloatCochain = chains::SparseCochain<f64>;
