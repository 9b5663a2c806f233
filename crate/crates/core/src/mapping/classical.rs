//! Classical sub-block OFDM-IM mapper (fixed `k` of `n` active per group).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{combinadic, payload_point, MappingError};
use crate::ofdm::FrequencyFrame;

/// Sub-block geometry of classical OFDM-IM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// Subcarriers per group.
    pub n: usize,
    /// Active subcarriers per group.
    pub k: usize,
    /// Modulation order on active subcarriers.
    pub m: usize,
}

impl GroupSpec {
    pub fn new(n: usize, k: usize, m: usize) -> Result<Self, MappingError> {
        let spec = GroupSpec { n, k, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), MappingError> {
        if self.k == 0 || self.k > self.n || combinadic::index_bits(self.n, self.k)? > 63 {
            return Err(MappingError::InvalidGroup {
                n: self.n,
                k: self.k,
            });
        }
        if !matches!(self.m, 2 | 4 | 8) {
            return Err(MappingError::UnsupportedOrder(self.m));
        }
        Ok(())
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m.trailing_zeros() as usize
    }

    /// Index bits per group, `floor(log2 C(n,k))`.
    pub fn p1(&self) -> usize {
        combinadic::index_bits(self.n, self.k).expect("validated group") as usize
    }

    /// Symbol bits per group, `k log2 M`.
    pub fn p2(&self) -> usize {
        self.k * self.bits_per_symbol()
    }

    pub fn bits_per_group(&self) -> usize {
        self.p1() + self.p2()
    }
}

fn bits_to_u64(bits: &[u8]) -> u64 {
    bits.iter()
        .fold(0u64, |acc, &b| (acc << 1) | u64::from(b & 1))
}

/// Maps `(p1 + p2) * groups` bits onto `n * groups` subcarriers.
///
/// Per group the first `p1` bits (MSB first) are the rank of the active
/// pattern, the next `p2` bits are the symbol labels of the active
/// subcarriers in ascending index order.
pub fn classical_im_map(
    bits: &[u8],
    spec: &GroupSpec,
    groups: usize,
) -> Result<FrequencyFrame, MappingError> {
    spec.validate()?;
    let per_group = spec.bits_per_group();
    let needed = per_group * groups;
    if bits.len() < needed {
        return Err(MappingError::InsufficientBits {
            needed,
            got: bits.len(),
        });
    }
    let q = spec.bits_per_symbol();
    let mut symbols = vec![Complex64::new(0.0, 0.0); spec.n * groups];
    for (g, chunk) in bits[..needed].chunks_exact(per_group).enumerate() {
        let (index_bits, payload) = chunk.split_at(spec.p1());
        let active = combinadic::unrank(bits_to_u64(index_bits), spec.n, spec.k)?;
        for (slot, label_bits) in active.iter().zip(payload.chunks_exact(q)) {
            symbols[g * spec.n + slot] = payload_point(spec.m, bits_to_u64(label_bits) as u8)?;
        }
    }
    Ok(FrequencyFrame::new(symbols))
}
