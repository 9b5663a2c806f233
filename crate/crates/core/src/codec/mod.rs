//! Convolutional coding for on/off symbol streams: the nonlinear rate-1/3
//! autoencoder, the linear (15,17) benchmark, trellis construction and
//! Viterbi decoding.
//!
//! All codes here are binary-input shift registers of memory `m`. A state is
//! the register content with bit 0 holding the most recent input, so the
//! input bit that led into a state is `state & 1`. Polynomial term `x^i`
//! taps the input delayed by `i` (`x^0` is the current bit).

mod autoencoder;
mod benchmark;
mod trellis;
mod viterbi;

use serde::{Deserialize, Serialize};

pub use autoencoder::{GeneratorSet, ImAutoencoder};
pub use benchmark::ConvCode;
pub use trellis::{build_trellis, free_distance, pairwise_free_distance, Branch, Trellis};
pub use viterbi::{viterbi_hard, viterbi_soft, DEFAULT_TRACEBACK};

/// How an encoded stream ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `memory` zero bits are appended so the encoder returns to state 0.
    #[default]
    Flush,
    /// The stream just stops; the decoder traces back from its best state.
    Truncated,
}

/// A feed-forward binary shift-register code.
pub trait ShiftRegisterCode {
    /// Number of delay elements.
    fn memory(&self) -> usize;
    /// Output bits per input bit.
    fn output_width(&self) -> usize;
    /// Packed output (first output bit in the MSB) for a tap window whose
    /// bit `i` is the input delayed by `i`.
    fn output(&self, window: u8) -> u8;

    fn state_mask(&self) -> u8 {
        ((1u16 << self.memory()) - 1) as u8
    }

    /// One encoder step: `(next state, packed output)`.
    fn step(&self, state: u8, input: u8) -> (u8, u8) {
        let window = (state << 1) | (input & 1);
        (window & self.state_mask(), self.output(window))
    }
}

pub(crate) fn parity(x: u8) -> u8 {
    (x.count_ones() & 1) as u8
}

/// Runs `code` over `bits` from the zero state.
pub fn encode_bits<C: ShiftRegisterCode + ?Sized>(
    code: &C,
    bits: &[u8],
    termination: Termination,
) -> Vec<u8> {
    let flush = match termination {
        Termination::Flush => code.memory(),
        Termination::Truncated => 0,
    };
    let mut state = 0u8;
    bits.iter()
        .copied()
        .chain(std::iter::repeat_n(0, flush))
        .map(|b| {
            let (next, out) = code.step(state, b);
            state = next;
            out
        })
        .collect()
}
