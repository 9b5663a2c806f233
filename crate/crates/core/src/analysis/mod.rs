//! Closed-form symbol error rates over Rayleigh fading and spectral
//! efficiency of the EGIM and classical OFDM-IM mappers.
//!
//! All SNR arguments are linear average SNR per subcarrier. The closed forms
//! are checked against [`quadrature`], which averages the exact conditional
//! AWGN error over the exponential SNR density.

pub mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapping::combinadic;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("average SNR must be non-negative, got {0}")]
    NegativeSnr(f64),
    #[error("modulation order {0} must be a power of two >= 2")]
    InvalidOrder(usize),
    #[error("invalid group: k={k} active of n={n}")]
    InvalidGroup { n: usize, k: usize },
}

fn check_snr(g: f64) -> Result<(), AnalysisError> {
    if g.is_nan() || g < 0.0 {
        Err(AnalysisError::NegativeSnr(g))
    } else {
        Ok(())
    }
}

fn check_order(m: usize) -> Result<(), AnalysisError> {
    if m < 2 || !m.is_power_of_two() {
        Err(AnalysisError::InvalidOrder(m))
    } else {
        Ok(())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Off/on decision error at half the average SNR:
/// `(1 - sqrt(0.5 g / (1 + 0.5 g))) / 2`.
pub fn p_ook(mean_snr: f64) -> Result<f64, AnalysisError> {
    check_snr(mean_snr)?;
    if mean_snr.is_infinite() {
        return Ok(0.0);
    }
    let h = 0.5 * mean_snr;
    Ok(0.5 * (1.0 - (h / (1.0 + h)).sqrt()))
}

/// 4-QAM symbol error over Rayleigh fading,
/// `3/4 - mu/2 - (mu/pi) atan(mu)` with `mu = sqrt(g / (2 + g))`.
pub fn p_qam4_rayleigh(mean_snr: f64) -> Result<f64, AnalysisError> {
    check_snr(mean_snr)?;
    if mean_snr.is_infinite() {
        return Ok(0.0);
    }
    let mu = (mean_snr / (2.0 + mean_snr)).sqrt();
    Ok(0.75 - 0.5 * mu - mu / PI * mu.atan())
}

/// M-PSK symbol error over Rayleigh fading,
/// `(M-1)/M - (mu/pi) (pi/2 + atan(mu cot(pi/M)))` with
/// `mu = sqrt(g sin^2(pi/M) / (1 + g sin^2(pi/M)))`.
pub fn p_mpsk_rayleigh(mean_snr: f64, m: usize) -> Result<f64, AnalysisError> {
    check_order(m)?;
    check_snr(mean_snr)?;
    if mean_snr.is_infinite() {
        return Ok(0.0);
    }
    let s2 = (PI / m as f64).sin().powi(2);
    let mu = (mean_snr * s2 / (1.0 + mean_snr * s2)).sqrt();
    let cot = 1.0 / (PI / m as f64).tan();
    let p = (m - 1) as f64 / m as f64 - mu / PI * (PI / 2.0 + (mu * cot).atan());
    Ok(p.max(0.0))
}

/// Equal-weight mixture of the on/off and 4-QAM errors.
pub fn ser_egim_4qam(mean_snr: f64) -> Result<f64, AnalysisError> {
    Ok(0.5 * p_ook(mean_snr)? + 0.5 * p_qam4_rayleigh(mean_snr)?)
}

/// Equal-weight mixture of the on/off and 8-PSK errors.
pub fn ser_egim_8psk(mean_snr: f64) -> Result<f64, AnalysisError> {
    Ok(0.5 * p_ook(mean_snr)? + 0.5 * p_mpsk_rayleigh(mean_snr, 8)?)
}

/// Bits per subcarrier of classical OFDM-IM, `(floor(log2 C(n,k)) + k log2 M) / n`.
pub fn se_classical(n: usize, k: usize, m: usize) -> Result<f64, AnalysisError> {
    check_order(m)?;
    if k == 0 || k > n {
        return Err(AnalysisError::InvalidGroup { n, k });
    }
    let p1 = combinadic::index_bits(n, k).map_err(|_| AnalysisError::InvalidGroup { n, k })?;
    let p2 = k * m.trailing_zeros() as usize;
    Ok((p1 as usize + p2) as f64 / n as f64)
}

/// Lower bound on EGIM bits per subcarrier, `1 + log2(M)/2`.
pub fn se_egim(m: usize) -> Result<f64, AnalysisError> {
    check_order(m)?;
    Ok(1.0 + 0.5 * m.trailing_zeros() as f64)
}

/// Grid of average SNR points in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    pub db: Vec<f64>,
}

impl SnrGrid {
    /// `start, start + step, ...` up to and including `stop` (within rounding).
    pub fn range(start: f64, stop: f64, step: f64) -> Self {
        assert!(step > 0.0);
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        SnrGrid {
            db: (0..count).map(|i| start + i as f64 * step).collect(),
        }
    }

    pub fn linear(&self) -> impl Iterator<Item = f64> + '_ {
        self.db.iter().map(|&d| db_to_linear(d))
    }
}

/// Analytic SER curve of one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SerCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Which closed form to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoryCurve {
    Egim4Qam,
    Egim8Psk,
    Ook,
    Qam4,
    Psk(usize),
}

impl TheoryCurve {
    pub fn evaluate(self, mean_snr: f64) -> Result<f64, AnalysisError> {
        match self {
            TheoryCurve::Egim4Qam => ser_egim_4qam(mean_snr),
            TheoryCurve::Egim8Psk => ser_egim_8psk(mean_snr),
            TheoryCurve::Ook => p_ook(mean_snr),
            TheoryCurve::Qam4 => p_qam4_rayleigh(mean_snr),
            TheoryCurve::Psk(m) => p_mpsk_rayleigh(mean_snr, m),
        }
    }

    pub fn label(self) -> String {
        match self {
            TheoryCurve::Egim4Qam => "egim4qam theory".into(),
            TheoryCurve::Egim8Psk => "egim8psk theory".into(),
            TheoryCurve::Ook => "ook theory".into(),
            TheoryCurve::Qam4 => "4qam theory".into(),
            TheoryCurve::Psk(m) => format!("{m}psk theory"),
        }
    }

    pub fn curve(self, grid: &SnrGrid) -> Result<SerCurve, AnalysisError> {
        let points = grid
            .db
            .iter()
            .map(|&db| Ok((db, self.evaluate(db_to_linear(db))?)))
            .collect::<Result<_, AnalysisError>>()?;
        Ok(SerCurve {
            label: self.label(),
            points,
        })
    }
}
