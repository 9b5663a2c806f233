//! Block-fading multipath channel, AWGN and per-subcarrier MMSE equalization.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::ofdm::{FrequencyFrame, TimeFrame};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChannelError {
    #[error("{taps} taps exceed the cyclic prefix length {cp_len}")]
    TooManyTaps { taps: usize, cp_len: usize },
    #[error("a channel needs at least one tap")]
    NoTaps,
}

/// Circularly symmetric complex Gaussian sample with total variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let sigma = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sigma, im * sigma)
}

/// Tap gains of one channel draw and their N-point frequency response.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<Complex64>,
    freq_response: Vec<Complex64>,
}

impl ChannelRealization {
    /// `H(i) = sum_l h_l exp(-j 2 pi i l / n)`.
    pub fn from_taps(taps: Vec<Complex64>, n: usize) -> Self {
        let freq_response = (0..n)
            .map(|i| {
                taps.iter()
                    .enumerate()
                    .map(|(l, &h)| {
                        h * Complex64::from_polar(1.0, -2.0 * PI * (i * l) as f64 / n as f64)
                    })
                    .sum()
            })
            .collect();
        ChannelRealization {
            taps,
            freq_response,
        }
    }

    /// Unit-gain single-tap channel.
    pub fn identity(n: usize) -> Self {
        Self::from_taps(vec![Complex64::new(1.0, 0.0)], n)
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn tap_count(&self) -> usize {
        self.taps.len()
    }

    pub fn freq_response(&self) -> &[Complex64] {
        &self.freq_response
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|h| h.norm_sqr()).sum()
    }
}

/// Noise level and the symbol energy it is referenced to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Noise variance per complex sample.
    pub n0: f64,
    /// Average energy of an active symbol, `E_s`.
    pub symbol_energy: f64,
}

impl NoiseSpec {
    pub fn new(n0: f64, symbol_energy: f64) -> Self {
        NoiseSpec { n0, symbol_energy }
    }

    pub fn noiseless(symbol_energy: f64) -> Self {
        NoiseSpec {
            n0: 0.0,
            symbol_energy,
        }
    }

    /// Noise for a target average SNR per subcarrier `E_s / N0` in dB.
    pub fn from_snr_db(snr_db: f64, symbol_energy: f64) -> Self {
        NoiseSpec {
            n0: symbol_energy / 10f64.powf(snr_db / 10.0),
            symbol_energy,
        }
    }

    pub fn snr_linear(&self) -> f64 {
        self.symbol_energy / self.n0
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.snr_linear().log10()
    }
}

/// Draws `taps` iid CN(0, 1/taps) gains (uniform power-delay profile).
pub fn draw_channel<R: Rng + ?Sized>(
    taps: usize,
    n: usize,
    cp_len: usize,
    rng: &mut R,
) -> Result<ChannelRealization, ChannelError> {
    if taps == 0 {
        return Err(ChannelError::NoTaps);
    }
    if taps > cp_len.max(1) {
        return Err(ChannelError::TooManyTaps { taps, cp_len });
    }
    let var = 1.0 / taps as f64;
    let gains = (0..taps).map(|_| complex_gaussian(rng, var)).collect();
    Ok(ChannelRealization::from_taps(gains, n))
}

/// Linear convolution with the taps (truncated to the frame) plus AWGN of
/// variance `noise.n0` per sample.
pub fn propagate<R: Rng + ?Sized>(
    time: &TimeFrame,
    ch: &ChannelRealization,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<TimeFrame, ChannelError> {
    if ch.tap_count() > time.cp_len.max(1) {
        return Err(ChannelError::TooManyTaps {
            taps: ch.tap_count(),
            cp_len: time.cp_len,
        });
    }
    let x = &time.samples;
    let samples = (0..x.len())
        .map(|t| {
            let faded: Complex64 = ch
                .taps
                .iter()
                .enumerate()
                .take(t + 1)
                .map(|(l, &h)| h * x[t - l])
                .sum();
            if noise.n0 > 0.0 {
                faded + complex_gaussian(rng, noise.n0)
            } else {
                faded
            }
        })
        .collect();
    Ok(TimeFrame {
        samples,
        cp_len: time.cp_len,
    })
}

/// `Y(i) conj(H(i)) / (|H(i)|^2 + N0/E_s)`; zero where the denominator vanishes.
pub fn mmse_equalize(
    y: &FrequencyFrame,
    ch: &ChannelRealization,
    noise: &NoiseSpec,
) -> FrequencyFrame {
    let reg = if noise.symbol_energy > 0.0 {
        noise.n0 / noise.symbol_energy
    } else {
        0.0
    };
    FrequencyFrame::new(
        y.symbols
            .iter()
            .zip(ch.freq_response())
            .map(|(&yi, &h)| {
                let den = h.norm_sqr() + reg;
                if den > 0.0 {
                    yi * h.conj() / den
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    )
}
