//! Bit-stream to codeword mapping: EGIM bit stuffing and the classical
//! OFDM-IM group mapper used as baseline.

mod classical;
pub mod combinadic;
mod constellation;
mod stuffing;

use thiserror::Error;

pub use classical::{classical_im_map, GroupSpec};
pub use constellation::{map_codewords, payload_point, Codeword, ConstellationTable, Scheme};
pub use stuffing::{destuff, stuff, stuff_frame, BitQueue, StuffedFrame};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("modulation order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("codeword {0} has an off index bit but a nonzero payload")]
    InvalidCodeword(Codeword),
    #[error("codeword {0} is not in the constellation table")]
    UnknownCodeword(Codeword),
    #[error("codeword width {got} does not match table width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("label {label} out of range for {m}-ary constellation")]
    LabelOutOfRange { label: u8, m: usize },
    #[error("invalid group: k={k} active of n={n}")]
    InvalidGroup { n: usize, k: usize },
    #[error("rank {rank} out of range for C({n},{k}) pattern table")]
    RankOutOfRange { rank: u64, n: usize, k: usize },
    #[error("subset must be strictly ascending and below n")]
    InvalidSubset,
    #[error("need {needed} bits, got {got}")]
    InsufficientBits { needed: usize, got: usize },
}
