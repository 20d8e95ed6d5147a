//! Certificates built on the LP layer: truncated isoperimetric constants
//! and primitives, the Johnson cocycle, mean retractions over finite groups,
//! the product non-vanishing witness, strong-vanishing sampling and horoball
//! filling probes.

mod horoprobe;
mod iso;
mod johnson;
mod mean;
mod sample;
mod witness;

use thiserror::Error;

use crate::chains::ChainError;
use crate::complexes::ComplexError;
use crate::lpcore::LpError;
use crate::presentations::OracleError;

pub use horoprobe::{horoball_iso_probe, HoroProbe, ProbeLoop};
pub use iso::{
    area_cocycle, comparison_class, dehn_filling_constant, iso_constant, iso_constant_dual_route,
    iso_constant_relative, IsoCertificate,
};
pub use johnson::{johnson_check, johnson_cocycle, johnson_primitive, JohnsonReport};
pub use mean::{actions_from_matrices, mean_retraction_check, uniform_mean, MeanReport, SignedPermutation};
pub use sample::{random_unit_cocycle, strong_vanishing_sample, SampleReport};
pub use witness::{product_cocycle, product_witness, WitnessReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("cochains of degree {0} are not supported on this complex")]
    Degree(usize),
    #[error("not a cocycle: the coboundary is nonzero on cell {cell}")]
    NotCocycle { cell: usize },
    #[error("the cocycle is not orbit-constant")]
    NotOrbitConstant,
    #[error("relative cocycles must vanish on horoball cells; cell {cell} does not")]
    NonzeroOnHoroball { cell: usize },
    #[error("no eligible cells")]
    NoEligibleCells,
    #[error("oracle `{0}` is not complete for this presentation")]
    IncompleteOracle(String),
    #[error("the group is infinite or above the enumeration bound")]
    NotFinite,
    #[error("base ball too small: {0}")]
    BaseTooSmall(String),
    #[error("generator {generator} does not act by a signed permutation")]
    NonIsometric { generator: usize },
    #[error("relator {relator} acts nontrivially, so the action is not a module")]
    NotAModule { relator: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no horoball cells")]
    NoHoroballCells,
    #[error("internal inconsistency: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
