//! Trace ideals of monomial fractional ideals over numerical semigroup rings
//! `k[t^S]`, and the Ext/Tor annihilators that characterize them.

pub mod cli;
pub mod error;
pub mod field;
pub mod fracideal;
pub mod graded;
pub mod homology;
pub mod semigroup;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField, ScalarMatrix, DEFAULT_PRIME};
pub use fracideal::MonomialFractionalIdeal;
pub use graded::{present, FPGradedModule, GradedFreeModule, GradedRing, Resolution, TermMatrix};
pub use homology::{ext, tor, FiniteLengthGradedModule};
pub use semigroup::NumericalSemigroup;
pub use theorems::{run_corpus, Check, CheckReport, Config, CorpusReport};
