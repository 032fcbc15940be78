//! Time-side machinery of the inhomogeneous estimates: Whitney squares of
//! `{s < t}`, the bilinear forms `B`, `B_Q`, `B^N`, atomic decompositions
//! and randomized checks of the two sequence lemmas.

mod atoms;
mod bilinear;
mod lemmas;
mod whitney;

use thiserror::Error;

use crate::spectral::SpectralError;

pub use atoms::{atomic_decompose, lp_norm, Atom, AtomicDecomposition};
pub use bilinear::{bilinear_b, bilinear_bn, bilinear_bq, whitney_sum, PulledBack};
pub use lemmas::{
    holder_sequence_sum, verify_sequence_lemmas, young_sequence_sum, LemmaTally, SequenceLemmaReport,
    HOLDER_MULTIPLICITY,
};
pub use whitney::{whitney_decompose, whitney_level, write_whitney_csv, DyadicInterval, WhitneySquare};

#[derive(Debug, Error, PartialEq)]
pub enum DecompError {
    #[error("T/dt = {0} is not a power of two")]
    Misaligned(f64),
    #[error("{levels} levels exceed log2(T/dt) = {max}")]
    TooManyLevels { levels: u32, max: u32 },
    #[error("square reaches cell {cell} but the slab has {len} cells")]
    SquareOutOfRange { cell: usize, len: usize },
    #[error("slabs differ in grid, length or time lattice")]
    SlabMismatch,
    #[error("exponent p = {0} must lie in [1, inf)")]
    Exponent(f64),
    #[error("cell list: {0}")]
    Cells(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
