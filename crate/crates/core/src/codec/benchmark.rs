use num_complex::Complex64;

use super::{encode_bits, parity, ShiftRegisterCode, Termination};
use crate::mapping::ConstellationTable;

/// Linear feed-forward convolutional code given by tap masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvCode {
    taps: Vec<u8>,
    memory: usize,
}

impl ConvCode {
    /// Builds a code from octal generators in the usual notation where the
    /// leftmost of the `constraint_length` bits taps the current input.
    pub fn from_octal(generators: &[u32], constraint_length: usize) -> Self {
        assert!((2..=8).contains(&constraint_length));
        let taps = generators
            .iter()
            .map(|&g| {
                (0..constraint_length).fold(0u8, |mask, delay| {
                    let bit = (g >> (constraint_length - 1 - delay)) & 1;
                    mask | ((bit as u8) << delay)
                })
            })
            .collect();
        ConvCode {
            taps,
            memory: constraint_length - 1,
        }
    }

    /// The rate-1/2, K=4 (15,17) code.
    pub fn benchmark() -> Self {
        Self::from_octal(&[0o15, 0o17], 4)
    }

    pub fn taps(&self) -> &[u8] {
        &self.taps
    }

    pub fn encode(&self, bits: &[u8], termination: Termination) -> Vec<u8> {
        encode_bits(self, bits, termination)
    }

    /// Encodes and maps each 2-bit output onto Gray QPSK.
    pub fn encode_qpsk(&self, bits: &[u8], termination: Termination) -> Vec<Complex64> {
        assert_eq!(self.output_width(), 2, "QPSK mapping needs a rate-1/2 code");
        let table = ConstellationTable::qpsk();
        self.encode(bits, termination)
            .into_iter()
            .map(|out| {
                let idx = table
                    .entries()
                    .iter()
                    .position(|(c, _)| c.value() == out)
                    .expect("every 2-bit label is in the table");
                table.point_at(idx)
            })
            .collect()
    }
}

impl ShiftRegisterCode for ConvCode {
    fn memory(&self) -> usize {
        self.memory
    }

    fn output_width(&self) -> usize {
        self.taps.len()
    }

    fn output(&self, window: u8) -> u8 {
        self.taps
            .iter()
            .fold(0u8, |acc, &t| (acc << 1) | parity(window & t))
    }
}
