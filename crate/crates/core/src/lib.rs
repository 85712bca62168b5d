//! Odd covers of complete graphs and complete r-uniform hypergraphs.
//!
//! - [`cover`]: blocks, covers, GF(2) footprints and the brute-force verifier.
//! - [`constructions`]: explicit odd covers for r = 2, 3, 4 and the
//!   reductions between uniformities.
//! - [`bounds`]: the ledger of known values and bounds.
//! - [`search`]: exact minimum odd covers for small instances.
//! - [`cli`]: the `oddcover` command line.

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod cover;
pub mod error;
pub mod search;

pub use cover::{
    binomial, canonicalize, colex_rank, colex_unrank, contains_rset, cover_parity,
    incidence_vector, is_odd_cover, rsets, Block, Cover, ParityVector, RSet, Verdict,
};
pub use error::{Error, Result};
