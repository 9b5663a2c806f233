//! Maximum-likelihood symbol decisions, the on/off radius test and
//! max-log LLRs for soft decoding.

use num_complex::Complex64;
use thiserror::Error;

use crate::mapping::{combinadic, payload_point, Codeword, ConstellationTable, GroupSpec};

#[derive(Debug, Error, PartialEq)]
pub enum DetectionError {
    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("bit index {index} out of range for width {width}")]
    BitIndexOutOfRange { index: usize, width: usize },
    #[error("expected {expected} received samples, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Index of the table point nearest to `y`; lowest symbol index wins ties.
pub fn ml_detect_index(y: Complex64, table: &ConstellationTable) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &(_, s)) in table.entries().iter().enumerate() {
        let d = (y - s).norm_sqr();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Codeword of the nearest table point.
///
/// EGIM symbols are independent across subcarriers, so this per-subcarrier
/// decision is also the frame-level ML decision.
pub fn ml_detect(y: Complex64, table: &ConstellationTable) -> Codeword {
    table.codeword(ml_detect_index(y, table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnOff {
    Active,
    Inactive,
}

/// Half the smallest origin-to-active-point distance.
pub fn default_ook_radius(table: &ConstellationTable) -> f64 {
    0.5 * table.min_active_radius()
}

/// Inactive iff `|y| < radius`.
pub fn ook_decide(y: Complex64, radius: f64) -> OnOff {
    if y.norm() < radius {
        OnOff::Inactive
    } else {
        OnOff::Active
    }
}

/// Per-bit LLRs of one received codeword position. Positive favours bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(pub Vec<f64>);

impl LlrVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Hard decision per bit (ties go to 0).
    pub fn hard_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&l| u8::from(l < 0.0)).collect()
    }
}

/// Max-log LLR of bit `bit_index` (0 = index bit):
/// `-(min_{s: b=0} |y-s|^2 - min_{s: b=1} |y-s|^2) / sigma2`.
///
/// `sigma2` is the total complex noise variance.
pub fn approx_llr(
    y: Complex64,
    sigma2: f64,
    table: &ConstellationTable,
    bit_index: usize,
) -> Result<f64, DetectionError> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(DetectionError::NonPositiveVariance(sigma2));
    }
    let width = table.width();
    if bit_index >= width {
        return Err(DetectionError::BitIndexOutOfRange {
            index: bit_index,
            width,
        });
    }
    let (d0, d1) = nearest_by_bit(y, table, bit_index);
    Ok(-(d0 - d1) / sigma2)
}

fn nearest_by_bit(y: Complex64, table: &ConstellationTable, bit_index: usize) -> (f64, f64) {
    let mut d = [f64::INFINITY; 2];
    for &(c, s) in table.entries() {
        let b = c.bit(bit_index) as usize;
        d[b] = d[b].min((y - s).norm_sqr());
    }
    (d[0], d[1])
}

/// LLRs for every bit of the codeword at one subcarrier.
pub fn llr_vector(
    y: Complex64,
    sigma2: f64,
    table: &ConstellationTable,
) -> Result<LlrVector, DetectionError> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(DetectionError::NonPositiveVariance(sigma2));
    }
    Ok(LlrVector(
        (0..table.width())
            .map(|b| {
                let (d0, d1) = nearest_by_bit(y, table, b);
                -(d0 - d1) / sigma2
            })
            .collect(),
    ))
}

/// Decision of the classical sub-block detector for one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubblockDecision {
    pub rank: u64,
    pub active: Vec<usize>,
    /// `p1` index bits followed by `p2` symbol bits, MSB first.
    pub labels: Vec<u8>,
    pub bits: Vec<u8>,
}

fn push_bits(out: &mut Vec<u8>, value: u64, width: usize) {
    out.extend((0..width).rev().map(|i| ((value >> i) & 1) as u8));
}

/// Joint ML over every legal activation pattern and symbol assignment.
///
/// For a fixed pattern the metric separates over subcarriers, so each active
/// subcarrier takes its nearest point; the pattern with the smallest total
/// wins (lowest rank on ties). `amplitude` scales the reference points.
pub fn subblock_ml_detect(
    y: &[Complex64],
    spec: &GroupSpec,
    amplitude: f64,
) -> Result<SubblockDecision, DetectionError> {
    if y.len() != spec.n {
        return Err(DetectionError::WrongLength {
            expected: spec.n,
            got: y.len(),
        });
    }
    let points: Vec<Complex64> = (0..spec.m)
        .map(|l| payload_point(spec.m, l as u8).expect("validated order") * amplitude)
        .collect();
    // per subcarrier: cost if inactive, best label and cost if active
    let per_sc: Vec<(f64, u8, f64)> = y
        .iter()
        .map(|&yi| {
            let mut best = (0u8, f64::INFINITY);
            for (l, &p) in points.iter().enumerate() {
                let d = (yi - p).norm_sqr();
                if d < best.1 {
                    best = (l as u8, d);
                }
            }
            (yi.norm_sqr(), best.0, best.1)
        })
        .collect();

    let patterns = 1u64 << spec.p1();
    let mut best: Option<(u64, Vec<usize>, f64)> = None;
    for rank in 0..patterns {
        let active = combinadic::unrank(rank, spec.n, spec.k).expect("rank below 2^p1");
        let mut is_active = vec![false; spec.n];
        active.iter().for_each(|&i| is_active[i] = true);
        let cost: f64 = per_sc
            .iter()
            .zip(&is_active)
            .map(|(&(off, _, on), &a)| if a { on } else { off })
            .sum();
        if best.as_ref().is_none_or(|b| cost < b.2) {
            best = Some((rank, active, cost));
        }
    }
    let (rank, active, _) = best.expect("at least one pattern");
    let labels: Vec<u8> = active.iter().map(|&i| per_sc[i].1).collect();
    let mut bits = Vec::with_capacity(spec.bits_per_group());
    push_bits(&mut bits, rank, spec.p1());
    for &l in &labels {
        push_bits(&mut bits, u64::from(l), spec.bits_per_symbol());
    }
    Ok(SubblockDecision {
        rank,
        active,
        labels,
        bits,
    })
}
