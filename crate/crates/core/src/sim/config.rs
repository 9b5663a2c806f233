use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::codec::DEFAULT_TRACEBACK;
use crate::mapping::{GroupSpec, Scheme};
use crate::ofdm::{PowerPolicy, DEFAULT_CP_LEN, DEFAULT_FFT_SIZE};

/// Transmit chain under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimScheme {
    /// Uncoded bit stuffing onto 4-QAM plus the off point.
    #[serde(rename = "egim4qam")]
    Egim4Qam,
    /// Uncoded bit stuffing onto 8-PSK plus the off point.
    #[serde(rename = "egim8psk")]
    Egim8Psk,
    /// Fixed k-of-n sub-block OFDM-IM.
    #[serde(rename = "classical_im", alias = "classical-im")]
    ClassicalIm,
    /// Rate-1/3 on/off autoencoder, one 4-QAM-or-off symbol per info bit.
    #[serde(rename = "autoencoder")]
    Autoencoder,
    /// Rate-1/2 (15,17) code on Gray QPSK, one symbol per info bit.
    #[serde(rename = "benchmark_codec", alias = "benchmark-codec")]
    BenchmarkCodec,
}

impl SimScheme {
    pub fn label(self) -> &'static str {
        match self {
            SimScheme::Egim4Qam => "egim4qam",
            SimScheme::Egim8Psk => "egim8psk",
            SimScheme::ClassicalIm => "classical_im",
            SimScheme::Autoencoder => "autoencoder",
            SimScheme::BenchmarkCodec => "benchmark_codec",
        }
    }

    pub fn is_coded(self) -> bool {
        matches!(self, SimScheme::Autoencoder | SimScheme::BenchmarkCodec)
    }

    /// Mapping scheme for the uncoded EGIM chains.
    pub fn egim(self) -> Option<Scheme> {
        match self {
            SimScheme::Egim4Qam => Some(Scheme::Egim4Qam),
            SimScheme::Egim8Psk => Some(Scheme::Egim8Psk),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Unit channel, no equalizer.
    Awgn,
    /// Block-fading multipath with MMSE equalization.
    Rayleigh,
}

impl ChannelKind {
    pub fn label(self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Viterbi input for the coded schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    #[default]
    Hard,
    Soft,
}

fn default_fft_size() -> usize {
    DEFAULT_FFT_SIZE
}
fn default_cp_len() -> usize {
    DEFAULT_CP_LEN
}
fn default_taps() -> usize {
    10
}
fn default_traceback() -> usize {
    DEFAULT_TRACEBACK
}
fn default_min_errors() -> u64 {
    500
}
fn default_max_frames() -> u64 {
    100_000
}
fn default_group() -> GroupSpec {
    GroupSpec { n: 4, k: 2, m: 4 }
}
fn default_block_frames() -> usize {
    16
}

/// One sweep: a scheme, a channel and a list of SNR points.
///
/// `snr_db` is the average SNR per active subcarrier (`E_s/N0`, with `E_s`
/// the policy-scaled active symbol energy) for uncoded schemes, and `Eb/N0`
/// referenced to a unit-energy all-active frame for coded schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub scheme: SimScheme,
    pub channel: ChannelKind,
    #[serde(default)]
    pub policy: PowerPolicy,
    pub snr_db: Vec<f64>,
    #[serde(default = "default_fft_size")]
    pub fft_size: usize,
    #[serde(default = "default_cp_len")]
    pub cp_len: usize,
    #[serde(default = "default_taps")]
    pub taps: usize,
    #[serde(default = "default_traceback")]
    pub traceback: usize,
    /// A point stops once this many errors are counted (symbol errors for
    /// uncoded schemes, decoded bit errors for coded ones).
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub decision: Decision,
    /// Sub-block geometry for `classical_im`.
    #[serde(default = "default_group")]
    pub group: GroupSpec,
    /// OFDM frames per coded block (coded schemes only).
    #[serde(default = "default_block_frames")]
    pub block_frames: usize,
}

impl SimConfig {
    pub fn new(scheme: SimScheme, channel: ChannelKind, snr_db: Vec<f64>) -> Self {
        SimConfig {
            scheme,
            channel,
            policy: PowerPolicy::default(),
            snr_db,
            fft_size: default_fft_size(),
            cp_len: default_cp_len(),
            taps: default_taps(),
            traceback: default_traceback(),
            min_errors: default_min_errors(),
            max_frames: default_max_frames(),
            seed: 0,
            decision: Decision::default(),
            group: default_group(),
            block_frames: default_block_frames(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cfg: SimConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Scheme column label; coded schemes carry their decision mode.
    pub fn scheme_label(&self) -> String {
        if self.scheme.is_coded() {
            let d = match self.decision {
                Decision::Hard => "hard",
                Decision::Soft => "soft",
            };
            format!("{}_{d}", self.scheme.label())
        } else {
            self.scheme.label().to_string()
        }
    }

    /// Whether every point will be backed by enough errors to publish.
    pub fn is_publishable(&self) -> bool {
        self.min_errors >= 100
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.snr_db.is_empty() {
            return bad("snr_db must list at least one point".into());
        }
        if let Some(x) = self.snr_db.iter().find(|x| !x.is_finite()) {
            return bad(format!("snr_db contains non-finite value {x}"));
        }
        if self.fft_size == 0 {
            return bad("fft_size must be positive".into());
        }
        if self.cp_len > self.fft_size {
            return bad(format!(
                "cp_len {} exceeds fft_size {}",
                self.cp_len, self.fft_size
            ));
        }
        if self.taps == 0 || self.taps > self.cp_len.max(1) {
            return bad(format!(
                "taps {} must be in 1..=cp_len ({})",
                self.taps, self.cp_len
            ));
        }
        if self.traceback == 0 {
            return bad("traceback must be positive".into());
        }
        if self.min_errors == 0 {
            return bad("min_errors must be positive".into());
        }
        if self.max_frames == 0 {
            return bad("max_frames must be positive".into());
        }
        if self.scheme == SimScheme::ClassicalIm {
            self.group
                .validate()
                .map_err(|e| SimError::InvalidConfig(format!("group: {e}")))?;
            if !self.fft_size.is_multiple_of(self.group.n) {
                return bad(format!(
                    "fft_size {} is not a multiple of group size {}",
                    self.fft_size, self.group.n
                ));
            }
        }
        if self.scheme.is_coded()
            && (self.block_frames == 0 || self.block_frames * self.fft_size <= 3)
        {
            return bad("block_frames too small for a terminated code block".into());
        }
        if self.scheme.is_coded() && self.max_frames < self.block_frames as u64 {
            return bad(format!(
                "max_frames {} is below one coded block of {} frames",
                self.max_frames, self.block_frames
            ));
        }
        Ok(())
    }
}
