//! Infinite words, morphisms, avoidance checks and shuffle factorizations.
//!
//! The crate is organized around a small set of primitives:
//!
//! * [`word`] — alphabets, finite words, morphisms and bifix decoding
//! * [`stream`] — lazily extended infinite words with memoized prefixes
//! * [`avoidance`] — square / pattern / fractional-repetition scans
//! * [`shuffle`] — interleaving DP, block-factorization verification,
//!   explicit self-shuffle witnesses and the recurrent shuffle builder
//! * [`catalog`] — named constructors for the morphisms and words the
//!   rest of the crate (and the CLI) refer to

pub mod avoidance;
pub mod catalog;
pub mod error;
pub mod shuffle;
pub mod stream;
pub mod word;

pub use error::Error;
pub use stream::{Occurrence, WordStream};
pub use word::{Alphabet, Morphism, Word};

pub type Result<T> = std::result::Result<T, Error>;
