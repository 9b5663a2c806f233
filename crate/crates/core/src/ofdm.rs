//! OFDM modulation with a unitary transform, cyclic prefix and the two
//! transmit power policies.
//!
//! The transform is scaled by `1/sqrt(N)` in both directions so that frame
//! energy is preserved and the receiver never needs to know how many
//! subcarriers were active. Power policy is applied per active symbol instead.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_FFT_SIZE: usize = 64;
pub const DEFAULT_CP_LEN: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PhyError {
    #[error("expected {expected} samples, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid OFDM geometry: fft size {n}, cyclic prefix {cp}")]
    InvalidGeometry { n: usize, cp: usize },
}

/// What to do with the energy not spent on inactive subcarriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerPolicy {
    /// Active symbols keep unit energy; a half-active frame uses half power.
    #[default]
    PowerSaving,
    /// Active symbols are boosted by `sqrt(2)` so average frame power matches
    /// an all-active system.
    Reinvest,
}

impl PowerPolicy {
    /// Amplitude factor applied to every nonzero symbol.
    pub fn active_scale(self) -> f64 {
        match self {
            PowerPolicy::PowerSaving => 1.0,
            PowerPolicy::Reinvest => SQRT_2,
        }
    }

    /// Energy of a unit-energy active symbol after scaling.
    pub fn active_energy(self) -> f64 {
        let s = self.active_scale();
        s * s
    }

    pub fn label(self) -> &'static str {
        match self {
            PowerPolicy::PowerSaving => "power_saving",
            PowerPolicy::Reinvest => "reinvest",
        }
    }
}

impl fmt::Display for PowerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One OFDM symbol in the frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyFrame {
    pub symbols: Vec<Complex64>,
}

impl FrequencyFrame {
    pub fn new(symbols: Vec<Complex64>) -> Self {
        FrequencyFrame { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.symbols.iter().map(|s| s.norm_sqr()).sum()
    }
}

/// One OFDM symbol in the time domain, cyclic prefix first.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFrame {
    pub samples: Vec<Complex64>,
    pub cp_len: usize,
}

impl TimeFrame {
    /// Samples after the cyclic prefix.
    pub fn body(&self) -> &[Complex64] {
        &self.samples[self.cp_len..]
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// FFT-size/CP-length pair with cached transform plans. Cheap to share
/// across threads.
#[derive(Clone)]
pub struct OfdmModem {
    n: usize,
    cp_len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for OfdmModem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OfdmModem")
            .field("n", &self.n)
            .field("cp_len", &self.cp_len)
            .finish()
    }
}

impl OfdmModem {
    pub fn new(n: usize, cp_len: usize) -> Result<Self, PhyError> {
        if n == 0 || cp_len > n {
            return Err(PhyError::InvalidGeometry { n, cp: cp_len });
        }
        let mut planner = FftPlanner::new();
        Ok(OfdmModem {
            n,
            cp_len,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn fft_size(&self) -> usize {
        self.n
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    /// Applies the power policy to nonzero symbols, unitary IDFT, prepends CP.
    pub fn modulate(
        &self,
        frame: &FrequencyFrame,
        policy: PowerPolicy,
    ) -> Result<TimeFrame, PhyError> {
        if frame.len() != self.n {
            return Err(PhyError::WrongLength {
                expected: self.n,
                got: frame.len(),
            });
        }
        let gain = policy.active_scale() / (self.n as f64).sqrt();
        let mut body: Vec<Complex64> = frame.symbols.iter().map(|&s| s * gain).collect();
        self.inverse.process(&mut body);
        let mut samples = Vec::with_capacity(self.n + self.cp_len);
        samples.extend_from_slice(&body[self.n - self.cp_len..]);
        samples.extend_from_slice(&body);
        Ok(TimeFrame {
            samples,
            cp_len: self.cp_len,
        })
    }

    /// Strips CP and applies the unitary DFT. Policy scaling is left in place.
    pub fn demodulate(&self, time: &TimeFrame) -> Result<FrequencyFrame, PhyError> {
        let expected = self.n + self.cp_len;
        if time.len() != expected || time.cp_len != self.cp_len {
            return Err(PhyError::WrongLength {
                expected,
                got: time.len(),
            });
        }
        let scale = 1.0 / (self.n as f64).sqrt();
        let mut body = time.body().to_vec();
        self.forward.process(&mut body);
        body.iter_mut().for_each(|x| *x *= scale);
        Ok(FrequencyFrame::new(body))
    }
}
