//! Real-time counter automata as language recognizers.
//!
//! The crate covers the machine model ([`machine`]), its JSON format
//! ([`format`]), exhaustive differential testing ([`enumerate`]),
//! simulation constructions between machine variants and closure products
//! ([`transforms`]), canonical example languages and the boolean-evaluation
//! census ([`languages`]), Parikh-image decompositions ([`semilinear`]) and
//! the saturated LSTM ([`slstm`]).

pub mod enumerate;
pub mod error;
pub mod format;
pub mod languages;
pub mod machine;
pub mod random;
pub mod semilinear;
pub mod slstm;
pub mod transforms;

pub use enumerate::{difftest, DiffReport};
pub use error::{Error, Result};
pub use machine::{
    Alphabet, Configuration, CounterMachine, Entry, UpdateAction, VariantReport, ZeroPattern,
};
