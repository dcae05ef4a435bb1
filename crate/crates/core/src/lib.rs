//! Words, substitutions, S-adic languages and their balance properties.

pub mod balance;
pub mod error;
mod index;
pub mod language;
pub mod linalg;
pub mod substitution;
pub mod tms;
pub mod words;

pub use balance::{
    balance_report, decompose_pair, frequency_deviation, frequency_vector, imbalance, lift_frequency, perron_frequency,
    wxyz_decompose, BalanceReport, Decomposition, FrequencyVector, LengthBalance, Witness,
};
pub use error::{Error, Result};
pub use language::{
    factorial_closure, is_everywhere_growing, sample_level_language, DirectiveSequence, LanguageSample, SampleMeta,
    SampleMode, SampleOptions,
};
pub use linalg::{eigencheck, EigenpairClaim, RationalMatrix};
pub use substitution::{
    induced_block_substitution, AnchorSide, BlockSubstitution, IncidenceMatrix, PropernessProfile, Substitution,
};
pub use words::{Alphabet, Letter, OccurrenceVector, Word};
