//! Automorphism groups and conjugacy of shifts generated by primitive
//! constant-length substitutions.
//!
//! The pipeline is: parse a [`Substitution`], build its [`Shift`] (language
//! cache), normalize it with [`reduce`] (pure base, injectivization), study the
//! odometer fibres through the subset automaton in [`sofic`], then search for
//! automorphisms ([`autgroup`]) or conjugacies ([`conj`]) as explicit
//! [`BlockCode`]s whose odometer fingerprints live in [`radic`].

pub mod autgroup;
pub mod code;
pub mod conj;
mod error;
pub mod language;
pub mod radic;
pub mod reduce;
mod search;
pub mod smith;
pub mod sofic;
pub mod substitution;

pub use autgroup::{aut_group, AutPresentation};
pub use code::BlockCode;
pub use conj::{decide_conjugacy, ConjReport, Decision};
pub use error::{Error, Result};
pub use language::Shift;
pub use radic::{AdicInt, RAdicDigits, RAdicRational};
pub use substitution::{Letter, Substitution, Word};

/// Fingerprints with arbitrary-precision numerators and denominators.
pub type RAdic = RAdicRational<num_bigint::BigInt>;
/// Fingerprints backed by machine integers; fine for small denominators.
pub type RAdic64 = RAdicRational<i64>;
/// Digit expansions matching [`RAdic`].
pub type Digits = RAdicDigits;

/// Resource caps shared by every search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Limits {
    /// Longest word `θ^m(a)` that may be materialized.
    pub word_len: usize,
    /// Largest radius tried when searching for an inverse block code.
    pub radius: usize,
    /// Maximum number of search nodes visited by a block-map enumeration.
    pub search_nodes: u64,
    /// Largest period of the Σ̂ points probed by the fingerprint prune.
    pub pmax: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            word_len: 1_000_000,
            radius: 16,
            search_nodes: 10_000_000,
            pmax: 64,
        }
    }
}
