use super::{encode_bits, parity, ShiftRegisterCode, Termination};
use crate::mapping::Codeword;

/// Tap sets of the autoencoder, each a mask whose bit `i` selects the input
/// delayed by `i`.
///
/// Output 1 is the parity of `g1`. Outputs 2 and 3 are the parities of `h2`
/// and `h3` ANDed with output 1, so a zero on output 1 always yields the off
/// codeword `000`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSet {
    pub g1: u8,
    pub h2: u8,
    pub h3: u8,
}

impl GeneratorSet {
    /// g1 = x^3+x^2+x+1, h2 = x^3+x^2+x, h3 = x^3+x+1.
    pub const fn autoencoder() -> Self {
        GeneratorSet {
            g1: 0b1111,
            h2: 0b1110,
            h3: 0b1011,
        }
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        Self::autoencoder()
    }
}

impl ShiftRegisterCode for GeneratorSet {
    fn memory(&self) -> usize {
        3
    }

    fn output_width(&self) -> usize {
        3
    }

    fn output(&self, window: u8) -> u8 {
        let o1 = parity(window & self.g1);
        let o2 = parity(window & self.h2) & o1;
        let o3 = parity(window & self.h3) & o1;
        (o1 << 2) | (o2 << 1) | o3
    }
}

/// Streaming encoder that emits one 3-bit EGIM-4QAM codeword per input bit.
#[derive(Debug, Clone, Default)]
pub struct ImAutoencoder {
    gen: GeneratorSet,
    state: u8,
}

impl ImAutoencoder {
    pub fn new(gen: GeneratorSet) -> Self {
        ImAutoencoder { gen, state: 0 }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gen
    }

    pub fn reset(&mut self) {
        self.state = 0;
    }

    /// Register content, bit 0 = most recent input.
    pub fn state(&self) -> u8 {
        self.state
    }

    pub fn push(&mut self, bit: u8) -> Codeword {
        let (next, out) = self.gen.step(self.state, bit);
        self.state = next;
        Codeword::new(out, 3)
    }

    /// Encodes a whole block from the zero state.
    pub fn encode(&mut self, bits: &[u8], termination: Termination) -> Vec<Codeword> {
        self.reset();
        let out = encode_bits(&self.gen, bits, termination)
            .into_iter()
            .map(|v| Codeword::new(v, 3))
            .collect();
        if termination == Termination::Truncated {
            self.state = bits.iter().fold(0u8, |s, &b| ((s << 1) | b) & 0b111);
        }
        out
    }
}
