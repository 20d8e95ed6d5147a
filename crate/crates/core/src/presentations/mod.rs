//! Finite group presentations, relative presentations, and word oracles.

mod abelian;
mod coset;
mod dehn;
mod oracle;
mod parse;
mod presentation;
mod word;

pub use abelian::{AbelianQuotient, LatticeOverflow};
pub use coset::{EnumerationError, FiniteGroup};
pub use dehn::{max_piece_ratio, satisfies_c_prime, symmetrized_relators, DehnReducer};
pub use oracle::{
    enumeration_coset_limit, word_equal, OracleError, OracleKey, PreparedOracle, Verdict,
    WordOracle,
};
pub use parse::{parse_presentation, parse_relative_presentation, ParseError, ParseErrorKind};
pub use presentation::{zn_product, Peripheral, Presentation, PresentationError, RelativePresentation};
pub use word::{free_reduce, letter_generator, letter_slot, slot_letter, Word};
