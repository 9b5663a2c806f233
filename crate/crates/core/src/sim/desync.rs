use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::codec::{
    build_trellis, viterbi_hard, GeneratorSet, ImAutoencoder, Termination, DEFAULT_TRACEBACK,
};
use crate::mapping::{destuff, stuff_frame, BitQueue, Codeword, Scheme};

fn default_trials() -> usize {
    1000
}
fn default_stream_bits() -> usize {
    2048
}
fn default_traceback() -> usize {
    DEFAULT_TRACEBACK
}
fn default_inject() -> bool {
    true
}

/// Single on/off decision flips injected into an otherwise clean stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesyncConfig {
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Information bits per trial.
    #[serde(default = "default_stream_bits")]
    pub stream_bits: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_traceback")]
    pub traceback: usize,
    /// With `false` the streams are passed through untouched.
    #[serde(default = "default_inject")]
    pub inject: bool,
}

impl Default for DesyncConfig {
    fn default() -> Self {
        DesyncConfig {
            trials: default_trials(),
            stream_bits: default_stream_bits(),
            seed: 0,
            traceback: default_traceback(),
            inject: default_inject(),
        }
    }
}

impl DesyncConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cfg: DesyncConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.trials == 0 || self.stream_bits < 16 || self.traceback == 0 {
            return Err(SimError::InvalidConfig(
                "desync needs trials >= 1, stream_bits >= 16 and traceback >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flip {
    /// An idle subcarrier detected as active (`0` read as `1` plus payload).
    OffToOn,
    /// An active subcarrier detected as idle.
    OnToOff,
}

/// Bit errors caused by one flip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipOutcome {
    pub errors: usize,
    /// Distance from the first to the last wrong bit, inclusive (0 if none).
    pub footprint: usize,
    /// Error rate over the bits after the flipped subcarrier.
    pub downstream_ber: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesyncTrial {
    pub position: usize,
    pub uncoded_flip: Flip,
    pub uncoded: FlipOutcome,
    pub coded_flip: Flip,
    pub coded: FlipOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesyncReport {
    pub trials: Vec<DesyncTrial>,
}

impl DesyncReport {
    pub fn mean_uncoded_downstream_ber(&self) -> f64 {
        mean(self.trials.iter().map(|t| t.uncoded.downstream_ber))
    }

    pub fn mean_coded_downstream_ber(&self) -> f64 {
        mean(self.trials.iter().map(|t| t.coded.downstream_ber))
    }

    pub fn max_coded_footprint(&self) -> usize {
        self.trials
            .iter()
            .map(|t| t.coded.footprint)
            .max()
            .unwrap_or(0)
    }

    pub fn total_errors(&self) -> (usize, usize) {
        self.trials.iter().fold((0, 0), |(u, c), t| {
            (u + t.uncoded.errors, c + t.coded.errors)
        })
    }
}

impl DesyncReport {
    /// One row per trial.
    pub fn csv_string(&self) -> String {
        let mut out = String::from(
            "trial,position,uncoded_flip,uncoded_errors,uncoded_footprint,uncoded_downstream_ber,\
             coded_flip,coded_errors,coded_footprint,coded_downstream_ber\n",
        );
        let name = |f: Flip| match f {
            Flip::OffToOn => "off_to_on",
            Flip::OnToOff => "on_to_off",
        };
        for (i, t) in self.trials.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{},{},{},{},{},{},{},{}\n",
                t.position,
                name(t.uncoded_flip),
                t.uncoded.errors,
                t.uncoded.footprint,
                t.uncoded.downstream_ber,
                name(t.coded_flip),
                t.coded.errors,
                t.coded.footprint,
                t.coded.downstream_ber
            ));
        }
        out
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// What the on/off detector outputs when it gets `cw` wrong: an idle
/// subcarrier reads as the active point with an all-zero payload, an active
/// one reads as idle.
pub fn flip_codeword(cw: Codeword) -> (Codeword, Flip) {
    if cw.is_active() {
        (Codeword::off(cw.width()), Flip::OnToOff)
    } else {
        (
            Codeword::new(1 << (cw.width() - 1), cw.width()),
            Flip::OffToOn,
        )
    }
}

/// Compares `rx` with `tx` position by position (the receiver has no way to
/// realign), counting missing tail bits as errors.
fn outcome(tx: &[u8], rx: &[u8], downstream_from: usize) -> FlipOutcome {
    let wrong: Vec<usize> = (0..tx.len())
        .filter(|&i| rx.get(i) != Some(&tx[i]))
        .collect();
    let footprint = match (wrong.first(), wrong.last()) {
        (Some(a), Some(b)) => b - a + 1,
        _ => 0,
    };
    let tail = tx.len().saturating_sub(downstream_from);
    let downstream = wrong.iter().filter(|&&i| i >= downstream_from).count();
    FlipOutcome {
        errors: wrong.len(),
        footprint,
        downstream_ber: if tail == 0 {
            0.0
        } else {
            downstream as f64 / tail as f64
        },
    }
}

fn carried_bits(cw: Codeword) -> usize {
    if cw.is_active() {
        cw.width()
    } else {
        1
    }
}

/// Stuffs `bits` one subcarrier at a time until all of them are placed.
fn stuff_stream(bits: &[u8], scheme: Scheme) -> Vec<Codeword> {
    let mut queue = BitQueue::new(bits);
    let mut out = Vec::new();
    while queue.consumed() < bits.len() {
        out.extend(stuff_frame(&mut queue, scheme, 1).codewords);
    }
    out
}

/// Injects one on/off error per trial into an uncoded EGIM 4-QAM stream and
/// into an autoencoded stream, and measures how far the damage spreads.
pub fn desync_experiment(cfg: &DesyncConfig) -> Result<DesyncReport, SimError> {
    cfg.validate()?;
    let gen = GeneratorSet::autoencoder();
    let trellis = build_trellis(&gen);
    let scheme = Scheme::Egim4Qam;
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64);
        let bits: Vec<u8> = (0..cfg.stream_bits)
            .map(|_| rng.random_range(0..=1u8))
            .collect();
        // the flip lands in the first half so there is a tail to measure
        let frac: f64 = rng.random();

        // uncoded
        let mut stream = stuff_stream(&bits, scheme);
        let pos_u = (frac * 0.5 * stream.len() as f64) as usize;
        let start_u: usize = stream[..pos_u].iter().map(|&c| carried_bits(c)).sum();
        let (flipped, uncoded_flip) = flip_codeword(stream[pos_u]);
        let end_u = start_u + carried_bits(stream[pos_u]);
        if cfg.inject {
            stream[pos_u] = flipped;
        }
        let rx = destuff(&stream)?;
        let uncoded = outcome(&bits, &rx, end_u);

        // autoencoded, one subcarrier per info bit
        let mut enc = ImAutoencoder::new(gen);
        let mut coded_stream: Vec<u8> = enc
            .encode(&bits, Termination::Flush)
            .iter()
            .map(Codeword::value)
            .collect();
        let pos_c = (frac * 0.5 * bits.len() as f64) as usize;
        let (flipped, coded_flip) = flip_codeword(Codeword::new(coded_stream[pos_c], 3));
        if cfg.inject {
            coded_stream[pos_c] = flipped.value();
        }
        let decoded = viterbi_hard(&coded_stream, &trellis, cfg.traceback, Termination::Flush);
        let coded = outcome(&bits, &decoded, pos_c + 1);

        trials.push(DesyncTrial {
            position: pos_c,
            uncoded_flip,
            uncoded,
            coded_flip,
            coded,
        });
    }
    Ok(DesyncReport { trials })
}
