//! Codewords and the augmented constellations with an off point.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MappingError;

/// Modulation scheme used on the active subcarriers of an EGIM frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Four QAM points plus the off point (3-bit codewords).
    Egim4Qam,
    /// Eight PSK points plus the off point (4-bit codewords).
    Egim8Psk,
}

impl Scheme {
    pub fn from_order(m: usize) -> Result<Self, MappingError> {
        match m {
            4 => Ok(Scheme::Egim4Qam),
            8 => Ok(Scheme::Egim8Psk),
            other => Err(MappingError::UnsupportedOrder(other)),
        }
    }

    pub fn modulation_order(self) -> usize {
        match self {
            Scheme::Egim4Qam => 4,
            Scheme::Egim8Psk => 8,
        }
    }

    /// Number of payload bits carried by an active codeword, `log2(M)`.
    pub fn payload_bits(self) -> usize {
        match self {
            Scheme::Egim4Qam => 2,
            Scheme::Egim8Psk => 3,
        }
    }

    /// Index bit plus payload.
    pub fn codeword_width(self) -> usize {
        1 + self.payload_bits()
    }
}

/// Fixed-width bit label of one constellation point.
///
/// Bits are packed MSB-first: the most significant of the `width` bits is the
/// index bit, the remaining bits are the payload.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword {
    value: u8,
    width: u8,
}

impl Codeword {
    /// Creates a codeword from its packed value. Bits above `width` are masked off.
    pub fn new(value: u8, width: usize) -> Self {
        assert!(
            (1..=8).contains(&width),
            "codeword width {width} out of range"
        );
        let mask = if width == 8 {
            u8::MAX
        } else {
            (1u8 << width) - 1
        };
        Codeword {
            value: value & mask,
            width: width as u8,
        }
    }

    /// Builds a codeword from individual bits, first element = index bit.
    pub fn from_bits(bits: &[u8]) -> Self {
        let value = bits.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1));
        Codeword::new(value, bits.len())
    }

    /// The all-zero codeword of the given width.
    pub fn off(width: usize) -> Self {
        Codeword::new(0, width)
    }

    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Bit `i` counted from the index bit (`i = 0`).
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.width());
        (self.value >> (self.width() - 1 - i)) & 1
    }

    pub fn index_bit(&self) -> u8 {
        self.bit(0)
    }

    pub fn is_active(&self) -> bool {
        self.index_bit() == 1
    }

    /// Payload bits packed into the low `width - 1` bits.
    pub fn payload(&self) -> u8 {
        self.value & ((1u8 << (self.width() - 1)) - 1)
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.width()).map(move |i| self.bit(i))
    }

    /// An off codeword must carry an all-zero payload.
    pub fn is_valid(&self) -> bool {
        self.is_active() || self.payload() == 0
    }

    pub fn hamming(&self, other: &Codeword) -> u32 {
        (self.value ^ other.value).count_ones()
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword({self})")
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Bijection between codewords and complex points, ordered by symbol index.
/// In the EGIM tables `S_0` is the off point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationTable {
    width: usize,
    entries: Vec<(Codeword, Complex64)>,
}

impl ConstellationTable {
    /// Four QAM points plus the origin.
    pub fn egim_4qam() -> Self {
        let r = FRAC_1_SQRT_2;
        let entries = [
            (0b000, Complex64::new(0.0, 0.0)),
            (0b100, Complex64::new(r, r)),
            (0b110, Complex64::new(-r, r)),
            (0b111, Complex64::new(-r, -r)),
            (0b101, Complex64::new(r, -r)),
        ];
        Self::from_entries(3, &entries)
    }

    /// Plain Gray-labelled QPSK (no off point), the active points of the
    /// 4-QAM table with the index bit dropped.
    pub fn qpsk() -> Self {
        let r = FRAC_1_SQRT_2;
        let entries = [
            (0b00, Complex64::new(r, r)),
            (0b10, Complex64::new(-r, r)),
            (0b11, Complex64::new(-r, -r)),
            (0b01, Complex64::new(r, -r)),
        ];
        Self::from_entries(2, &entries)
    }

    /// Eight PSK points plus the origin.
    pub fn egim_8psk() -> Self {
        let r = FRAC_1_SQRT_2;
        let entries = [
            (0b0000, Complex64::new(0.0, 0.0)),
            (0b1000, Complex64::new(1.0, 0.0)),
            (0b1001, Complex64::new(0.0, 1.0)),
            (0b1010, Complex64::new(-1.0, 0.0)),
            (0b1011, Complex64::new(0.0, -1.0)),
            (0b1100, Complex64::new(r, r)),
            (0b1110, Complex64::new(-r, r)),
            (0b1111, Complex64::new(-r, -r)),
            (0b1101, Complex64::new(r, -r)),
        ];
        Self::from_entries(4, &entries)
    }

    pub fn for_scheme(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Egim4Qam => Self::egim_4qam(),
            Scheme::Egim8Psk => Self::egim_8psk(),
        }
    }

    /// Table from packed `width`-bit labels, in symbol-index order.
    pub fn from_entries(width: usize, entries: &[(u8, Complex64)]) -> Self {
        ConstellationTable {
            width,
            entries: entries
                .iter()
                .map(|&(v, p)| (Codeword::new(v, width), p))
                .collect(),
        }
    }

    /// Same labels, every point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ConstellationTable {
            width: self.width,
            entries: self.entries.iter().map(|&(c, p)| (c, p * factor)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entries(&self) -> &[(Codeword, Complex64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codeword(&self, symbol: usize) -> Codeword {
        self.entries[symbol].0
    }

    pub fn point_at(&self, symbol: usize) -> Complex64 {
        self.entries[symbol].1
    }

    pub fn symbol_index(&self, codeword: Codeword) -> Option<usize> {
        self.entries.iter().position(|(c, _)| *c == codeword)
    }

    pub fn point(&self, codeword: Codeword) -> Result<Complex64, MappingError> {
        if codeword.width() != self.width() {
            return Err(MappingError::WidthMismatch {
                expected: self.width(),
                got: codeword.width(),
            });
        }
        self.symbol_index(codeword)
            .map(|i| self.entries[i].1)
            .ok_or(MappingError::UnknownCodeword(codeword))
    }

    /// Smallest distance from the origin to an active point.
    pub fn min_active_radius(&self) -> f64 {
        self.entries
            .iter()
            .filter(|(c, _)| c.is_active())
            .map(|(_, p)| p.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean energy over the active points.
    pub fn active_energy(&self) -> f64 {
        let active: Vec<f64> = self
            .entries
            .iter()
            .filter(|(c, _)| c.is_active())
            .map(|(_, p)| p.norm_sqr())
            .collect();
        active.iter().sum::<f64>() / active.len() as f64
    }
}

/// Looks up every codeword in `table`.
pub fn map_codewords(
    codewords: &[Codeword],
    table: &ConstellationTable,
) -> Result<Vec<Complex64>, MappingError> {
    codewords.iter().map(|&c| table.point(c)).collect()
}

/// Point of an `m`-ary constellation (no off point) for a `log2(m)`-bit label.
///
/// `m = 2` is BPSK, `m = 4` reuses the active 4-QAM points and `m = 8` the
/// active 8-PSK points, so label `0` always maps to the same point as the
/// corresponding active codeword with an all-zero payload.
pub fn payload_point(m: usize, label: u8) -> Result<Complex64, MappingError> {
    match m {
        2 => match label {
            0 => Ok(Complex64::new(1.0, 0.0)),
            1 => Ok(Complex64::new(-1.0, 0.0)),
            _ => Err(MappingError::LabelOutOfRange { label, m }),
        },
        4 | 8 => {
            let table = ConstellationTable::for_scheme(Scheme::from_order(m)?);
            let width = table.width();
            if usize::from(label) >= m {
                return Err(MappingError::LabelOutOfRange { label, m });
            }
            let cw = Codeword::new((1 << (width - 1)) | label, width);
            table.point(cw)
        }
        other => Err(MappingError::UnsupportedOrder(other)),
    }
}
