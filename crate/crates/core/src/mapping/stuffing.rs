//! Bit stuffing: one input bit decides whether a subcarrier is on, and an
//! active subcarrier additionally consumes `log2(M)` payload bits.

use super::{Codeword, MappingError, Scheme};

/// Front-to-back reader over a bit slice that yields zeros once exhausted.
#[derive(Debug, Clone)]
pub struct BitQueue<'a> {
    bits: &'a [u8],
    pos: usize,
    padded: usize,
}

impl<'a> BitQueue<'a> {
    pub fn new(bits: &'a [u8]) -> Self {
        BitQueue {
            bits,
            pos: 0,
            padded: 0,
        }
    }

    /// Next bit, or a pad zero past the end.
    pub fn next_bit(&mut self) -> u8 {
        match self.bits.get(self.pos) {
            Some(&b) => {
                self.pos += 1;
                b & 1
            }
            None => {
                self.padded += 1;
                0
            }
        }
    }

    /// Real (non-pad) bits consumed so far.
    pub fn consumed(&self) -> usize {
        self.pos
    }

    pub fn padded(&self) -> usize {
        self.padded
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos >= self.bits.len()
    }
}

/// Output of stuffing one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuffedFrame {
    pub codewords: Vec<Codeword>,
    /// Source bits consumed, pad excluded.
    pub consumed: usize,
    /// Zero bits appended because the source ran out mid-frame.
    pub padded: usize,
}

impl StuffedFrame {
    pub fn active_count(&self) -> usize {
        self.codewords.iter().filter(|c| c.is_active()).count()
    }
}

/// Emits exactly `count` codewords, pulling bits from a shared queue.
pub fn stuff_frame(queue: &mut BitQueue<'_>, scheme: Scheme, count: usize) -> StuffedFrame {
    let width = scheme.codeword_width();
    let start_consumed = queue.consumed();
    let start_padded = queue.padded();
    let codewords = (0..count)
        .map(|_| {
            if queue.next_bit() == 0 {
                Codeword::off(width)
            } else {
                let payload =
                    (0..scheme.payload_bits()).fold(0u8, |acc, _| (acc << 1) | queue.next_bit());
                Codeword::new((1 << (width - 1)) | payload, width)
            }
        })
        .collect();
    StuffedFrame {
        codewords,
        consumed: queue.consumed() - start_consumed,
        padded: queue.padded() - start_padded,
    }
}

/// Stuffs the start of `bits` into `count` codewords.
pub fn stuff(bits: &[u8], scheme: Scheme, count: usize) -> StuffedFrame {
    stuff_frame(&mut BitQueue::new(bits), scheme, count)
}

/// Inverse of stuffing: off → `0`, active → `1` followed by the payload.
pub fn destuff(codewords: &[Codeword]) -> Result<Vec<u8>, MappingError> {
    let mut out = Vec::with_capacity(codewords.len() * 2);
    for &c in codewords {
        if !c.is_valid() {
            return Err(MappingError::InvalidCodeword(c));
        }
        if c.is_active() {
            out.extend(c.bits());
        } else {
            out.push(0);
        }
    }
    Ok(out)
}
