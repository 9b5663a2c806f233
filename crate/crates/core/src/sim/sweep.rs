use std::ops::AddAssign;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ChannelKind, Decision, SimConfig, SimError, SimScheme};
use crate::analysis::db_to_linear;
use crate::channel::{draw_channel, mmse_equalize, propagate, ChannelRealization, NoiseSpec};
use crate::codec::{
    build_trellis, encode_bits, viterbi_hard, viterbi_soft, ConvCode, GeneratorSet, Termination,
    Trellis,
};
use crate::detection::{llr_vector, ml_detect, subblock_ml_detect, LlrVector};
use crate::mapping::{
    classical_im_map, map_codewords, stuff, Codeword, ConstellationTable, Scheme,
};
use crate::ofdm::{FrequencyFrame, OfdmModem, PowerPolicy};

/// Trials evaluated between two stop checks. Fixed so that the set of
/// simulated trials never depends on the worker count.
const BATCH: usize = 32;

/// Error counts of one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub snr_db: f64,
    pub frames: u64,
    pub symbols: u64,
    pub bits: u64,
    pub symbol_errors: u64,
    pub bit_errors: u64,
    pub ser: f64,
    pub ber: f64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// One scheme/channel/policy curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scheme: String,
    pub channel: String,
    pub policy: String,
    pub points: Vec<PointResult>,
}

impl SweepResult {
    /// `(snr_db, ser)` pairs, skipping points without symbols.
    pub fn ser_curve(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.symbols > 0)
            .map(|p| (p.snr_db, p.ser))
            .collect()
    }

    pub fn ber_curve(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.bits > 0)
            .map(|p| (p.snr_db, p.ber))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    frames: u64,
    symbols: u64,
    bits: u64,
    symbol_errors: u64,
    bit_errors: u64,
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.frames += o.frames;
        self.symbols += o.symbols;
        self.bits += o.bits;
        self.symbol_errors += o.symbol_errors;
        self.bit_errors += o.bit_errors;
    }
}

/// Independent generator for trial `trial` of point `point`.
pub fn trial_rng(seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) ^ trial);
    rng
}

fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let word: u64 = rng.random();
        let take = (n - out.len()).min(64);
        out.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    out
}

enum Coder {
    Autoencoder(GeneratorSet),
    Benchmark(ConvCode),
}

/// Everything a trial needs, built once per sweep.
struct Link {
    cfg: SimConfig,
    modem: OfdmModem,
    /// Transmit table (uncoded EGIM, autoencoder, or QPSK for the benchmark).
    tx_table: ConstellationTable,
    /// Receive reference, scaled by the transmit power policy.
    rx_table: ConstellationTable,
    /// Policy applied by the modulator.
    policy: PowerPolicy,
    coder: Option<(Coder, Trellis)>,
}

impl Link {
    fn new(cfg: &SimConfig) -> Result<Self, SimError> {
        let modem = OfdmModem::new(cfg.fft_size, cfg.cp_len)?;
        // the benchmark has no idle subcarriers, so there is nothing to reinvest
        let policy = match cfg.scheme {
            SimScheme::BenchmarkCodec => PowerPolicy::PowerSaving,
            _ => cfg.policy,
        };
        let tx_table = match cfg.scheme {
            SimScheme::Egim8Psk => ConstellationTable::egim_8psk(),
            SimScheme::BenchmarkCodec => ConstellationTable::qpsk(),
            _ => ConstellationTable::egim_4qam(),
        };
        let rx_table = tx_table.scaled(policy.active_scale());
        let coder = match cfg.scheme {
            SimScheme::Autoencoder => {
                let gen = GeneratorSet::autoencoder();
                let trellis = build_trellis(&gen);
                Some((Coder::Autoencoder(gen), trellis))
            }
            SimScheme::BenchmarkCodec => {
                let code = ConvCode::benchmark();
                let trellis = Trellis::from_code(&code);
                Some((Coder::Benchmark(code), trellis))
            }
            _ => None,
        };
        Ok(Link {
            cfg: cfg.clone(),
            modem,
            tx_table,
            rx_table,
            policy,
            coder,
        })
    }

    fn frames_per_trial(&self) -> u64 {
        if self.cfg.scheme.is_coded() {
            self.cfg.block_frames as u64
        } else {
            1
        }
    }

    fn coded_block(&self) -> (usize, usize) {
        let symbols = self.cfg.block_frames * self.cfg.fft_size;
        let memory = self.coder.as_ref().map_or(0, |(_, t)| t.memory());
        (symbols - memory, symbols)
    }

    fn noise(&self, snr_db: f64) -> NoiseSpec {
        let es = self.policy.active_energy();
        if self.cfg.scheme.is_coded() {
            // Eb/N0 against a unit-energy all-active symbol carrying `rate` info bits
            let (info, symbols) = self.coded_block();
            let rate = info as f64 / symbols as f64;
            NoiseSpec::new(1.0 / (rate * db_to_linear(snr_db)), es)
        } else {
            NoiseSpec::from_snr_db(snr_db, es)
        }
    }

    /// Sends one frame and returns the demodulated subcarriers with the
    /// channel that was applied (`None` for AWGN).
    fn transmit(
        &self,
        symbols: Vec<Complex64>,
        noise: &NoiseSpec,
        rng: &mut ChaCha8Rng,
    ) -> Result<(FrequencyFrame, Option<ChannelRealization>), SimError> {
        let n = self.cfg.fft_size;
        let time = self
            .modem
            .modulate(&FrequencyFrame::new(symbols), self.policy)?;
        let ch = match self.cfg.channel {
            ChannelKind::Awgn => None,
            ChannelKind::Rayleigh => Some(draw_channel(self.cfg.taps, n, self.cfg.cp_len, rng)?),
        };
        let rx = match &ch {
            Some(c) => propagate(&time, c, noise, rng)?,
            None => propagate(&time, &ChannelRealization::identity(n), noise, rng)?,
        };
        Ok((self.modem.demodulate(&rx)?, ch))
    }

    fn equalize(
        &self,
        y: FrequencyFrame,
        ch: Option<&ChannelRealization>,
        noise: &NoiseSpec,
    ) -> FrequencyFrame {
        match ch {
            Some(c) => mmse_equalize(&y, c, noise),
            None => y,
        }
    }

    fn run_trial(&self, point: usize, trial: u64, noise: &NoiseSpec) -> Result<Counts, SimError> {
        let mut rng = trial_rng(self.cfg.seed, point, trial);
        match self.cfg.scheme {
            SimScheme::Egim4Qam | SimScheme::Egim8Psk => self.uncoded_trial(&mut rng, noise),
            SimScheme::ClassicalIm => self.classical_trial(&mut rng, noise),
            SimScheme::Autoencoder | SimScheme::BenchmarkCodec => self.coded_trial(&mut rng, noise),
        }
    }

    fn uncoded_trial(&self, rng: &mut ChaCha8Rng, noise: &NoiseSpec) -> Result<Counts, SimError> {
        let scheme: Scheme = self.cfg.scheme.egim().expect("uncoded EGIM scheme");
        let n = self.cfg.fft_size;
        let bits = random_bits(rng, n * scheme.codeword_width());
        let stuffed = stuff(&bits, scheme, n);
        let symbols = map_codewords(&stuffed.codewords, &self.tx_table)?;
        let (y, ch) = self.transmit(symbols, noise, rng)?;
        let eq = self.equalize(y, ch.as_ref(), noise);
        let mut c = Counts {
            frames: 1,
            symbols: n as u64,
            bits: stuffed.consumed as u64,
            ..Counts::default()
        };
        for (tx, &yi) in stuffed.codewords.iter().zip(&eq.symbols) {
            let rx = ml_detect(yi, &self.rx_table);
            if rx != *tx {
                c.symbol_errors += 1;
                // an idle subcarrier carries only its index bit
                c.bit_errors += if tx.is_active() {
                    u64::from(tx.hamming(&rx))
                } else {
                    u64::from(rx.index_bit())
                };
            }
        }
        Ok(c)
    }

    fn classical_trial(&self, rng: &mut ChaCha8Rng, noise: &NoiseSpec) -> Result<Counts, SimError> {
        let spec = &self.cfg.group;
        let n = self.cfg.fft_size;
        let groups = n / spec.n;
        let bits = random_bits(rng, groups * spec.bits_per_group());
        let tx = classical_im_map(&bits, spec, groups)?;
        let (y, ch) = self.transmit(tx.symbols.clone(), noise, rng)?;
        let eq = self.equalize(y, ch.as_ref(), noise);
        let amplitude = self.policy.active_scale();
        let mut detected = Vec::with_capacity(bits.len());
        for block in eq.symbols.chunks_exact(spec.n) {
            detected.extend(subblock_ml_detect(block, spec, amplitude)?.bits);
        }
        let rebuilt = classical_im_map(&detected, spec, groups)?;
        Ok(Counts {
            frames: 1,
            symbols: n as u64,
            bits: bits.len() as u64,
            symbol_errors: tx
                .symbols
                .iter()
                .zip(&rebuilt.symbols)
                .filter(|(a, b)| a != b)
                .count() as u64,
            bit_errors: bits.iter().zip(&detected).filter(|(a, b)| a != b).count() as u64,
        })
    }

    fn coded_trial(&self, rng: &mut ChaCha8Rng, noise: &NoiseSpec) -> Result<Counts, SimError> {
        let (coder, trellis) = self.coder.as_ref().expect("coded scheme");
        let (info_len, total) = self.coded_block();
        let width = trellis.width();
        let info = random_bits(rng, info_len);
        let words = match coder {
            Coder::Autoencoder(g) => encode_bits(g, &info, Termination::Flush),
            Coder::Benchmark(c) => encode_bits(c, &info, Termination::Flush),
        };
        debug_assert_eq!(words.len(), total);
        let n = self.cfg.fft_size;
        let mut hard = Vec::with_capacity(total);
        let mut soft = Vec::new();
        for chunk in words.chunks(n) {
            let cws: Vec<Codeword> = chunk.iter().map(|&w| Codeword::new(w, width)).collect();
            let symbols = map_codewords(&cws, &self.tx_table)?;
            let (y, ch) = self.transmit(symbols, noise, rng)?;
            if self.cfg.decision == Decision::Soft {
                for (i, &yi) in y.symbols.iter().enumerate() {
                    // per-subcarrier zero-forced observation with its own noise level
                    let (obs, sigma2) = match &ch {
                        Some(c) => {
                            let h = c.freq_response()[i];
                            let g = h.norm_sqr();
                            if g == 0.0 {
                                soft.push(LlrVector(vec![0.0; width]));
                                continue;
                            }
                            (yi / h, noise.n0 / g)
                        }
                        None => (yi, noise.n0),
                    };
                    soft.push(llr_vector(obs, sigma2, &self.rx_table)?);
                }
            }
            let eq = self.equalize(y, ch.as_ref(), noise);
            hard.extend(
                eq.symbols
                    .iter()
                    .map(|&yi| ml_detect(yi, &self.rx_table).value()),
            );
        }
        let decoded = match self.cfg.decision {
            Decision::Hard => viterbi_hard(&hard, trellis, self.cfg.traceback, Termination::Flush),
            Decision::Soft => viterbi_soft(&soft, trellis, self.cfg.traceback, Termination::Flush),
        };
        Ok(Counts {
            frames: self.cfg.block_frames as u64,
            symbols: total as u64,
            bits: info_len as u64,
            symbol_errors: words.iter().zip(&hard).filter(|(a, b)| a != b).count() as u64,
            bit_errors: info.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64,
        })
    }

    fn run_point(&self, point: usize, snr_db: f64) -> Result<PointResult, SimError> {
        let start = Instant::now();
        let noise = self.noise(snr_db);
        let per_trial = self.frames_per_trial();
        let max_trials = self.cfg.max_frames / per_trial;
        let coded = self.cfg.scheme.is_coded();
        let mut acc = Counts::default();
        let mut next = 0u64;
        while next < max_trials {
            let errors = if coded {
                acc.bit_errors
            } else {
                acc.symbol_errors
            };
            if errors >= self.cfg.min_errors {
                break;
            }
            let end = (next + BATCH as u64).min(max_trials);
            let batch: Vec<Counts> = (next..end)
                .into_par_iter()
                .map(|t| self.run_trial(point, t, &noise))
                .collect::<Result<_, _>>()?;
            for c in batch {
                acc += c;
            }
            next = end;
        }
        let ratio = |e: u64, n: u64| if n == 0 { 0.0 } else { e as f64 / n as f64 };
        Ok(PointResult {
            snr_db,
            frames: acc.frames,
            symbols: acc.symbols,
            bits: acc.bits,
            symbol_errors: acc.symbol_errors,
            bit_errors: acc.bit_errors,
            ser: ratio(acc.symbol_errors, acc.symbols),
            ber: ratio(acc.bit_errors, acc.bits),
            elapsed: start.elapsed(),
        })
    }
}

/// Runs every SNR point of `cfg`.
///
/// Each trial draws from its own generator keyed by `(seed, point, trial)`,
/// and trials are evaluated in fixed batches, so the counts are identical
/// for any `workers` value. `workers = 0` uses all cores.
pub fn run_sweep(cfg: &SimConfig, workers: usize) -> Result<SweepResult, SimError> {
    cfg.validate()?;
    let link = Link::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    let points = pool.install(|| {
        cfg.snr_db
            .iter()
            .enumerate()
            .map(|(i, &snr)| link.run_point(i, snr))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SweepResult {
        scheme: cfg.scheme_label(),
        channel: cfg.channel.label().to_string(),
        policy: cfg.policy.label().to_string(),
        points,
    })
}
