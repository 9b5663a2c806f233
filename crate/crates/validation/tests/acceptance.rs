//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any of them fails.

use std::process::ExitCode;
use std::time::Instant;

use egim::analysis::quadrature::{
    conditional_mpsk, conditional_ook, conditional_qpsk, rayleigh_average,
};
use egim::analysis::{
    db_to_linear, p_mpsk_rayleigh, p_ook, p_qam4_rayleigh, ser_egim_4qam, ser_egim_8psk,
    AnalysisError, SnrGrid,
};
use egim::channel::{mmse_equalize, propagate, ChannelRealization, NoiseSpec};
use egim::codec::{
    build_trellis, encode_bits, free_distance, viterbi_hard, viterbi_soft, ConvCode, GeneratorSet,
    Termination,
};
use egim::detection::{ml_detect, LlrVector};
use egim::mapping::{
    destuff, map_codewords, stuff_frame, BitQueue, Codeword, ConstellationTable, Scheme,
};
use egim::ofdm::{FrequencyFrame, OfdmModem, PowerPolicy};
use egim::sim::{
    csv_string, desync_experiment, run_sweep, ChannelKind, Decision, DesyncConfig, SimConfig,
    SimScheme, SweepResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn random_bits(seed: u64, n: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
}

fn round_trip(scheme: Scheme, bits: &[u8]) -> Result<usize, Box<dyn std::error::Error>> {
    let n = 64;
    let modem = OfdmModem::new(n, 16)?;
    let table = ConstellationTable::for_scheme(scheme);
    let flat = ChannelRealization::identity(n);
    let noise = NoiseSpec::noiseless(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut queue = BitQueue::new(bits);
    let mut detected: Vec<Codeword> = Vec::new();
    while queue.consumed() < bits.len() {
        let frame = stuff_frame(&mut queue, scheme, n);
        let x = FrequencyFrame::new(map_codewords(&frame.codewords, &table)?);
        let rx = propagate(
            &modem.modulate(&x, PowerPolicy::PowerSaving)?,
            &flat,
            &noise,
            &mut rng,
        )?;
        let y = mmse_equalize(&modem.demodulate(&rx)?, &flat, &noise);
        detected.extend(y.symbols.iter().map(|&s| ml_detect(s, &table)));
    }
    let out = destuff(&detected)?;
    Ok(
        bits.iter().zip(&out).filter(|(a, b)| a != b).count()
            + bits.len().saturating_sub(out.len()),
    )
}

fn c1_round_trip() -> Verdict {
    let start = Instant::now();
    let bits = random_bits(11, 1_000_000);
    let mut errors = Vec::new();
    for scheme in [Scheme::Egim4Qam, Scheme::Egim8Psk] {
        match round_trip(scheme, &bits) {
            Ok(e) => errors.push(e),
            Err(e) => return verdict(false, format!("{scheme:?}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        errors.iter().all(|&e| e == 0) && secs < 60.0,
        format!(
            "bit errors 4qam={} 8psk={} on 1e6 bits, {secs:.1} s",
            errors[0], errors[1]
        ),
    )
}

fn c2_spectral_efficiency() -> Verdict {
    let frames = 10_000;
    let n = 64;
    let mut measured = Vec::new();
    for (scheme, seed) in [(Scheme::Egim4Qam, 21), (Scheme::Egim8Psk, 22)] {
        let bits = random_bits(seed, frames * n * scheme.codeword_width());
        let mut queue = BitQueue::new(&bits);
        for _ in 0..frames {
            stuff_frame(&mut queue, scheme, n);
        }
        measured.push(queue.consumed() as f64 / (frames * n) as f64);
    }
    let ok = (measured[0] - 2.0).abs() <= 0.02 && (measured[1] - 2.5).abs() <= 0.025;
    verdict(
        ok,
        format!(
            "bits/subcarrier 4qam={:.4} (2.00) 8psk={:.4} (2.50)",
            measured[0], measured[1]
        ),
    )
}

fn c3_theory_vs_oracle() -> Verdict {
    let grid = SnrGrid::range(0.0, 40.0, 0.5);
    let mut worst = (0.0f64, String::new());
    let mut record = |name: &str, db: f64, closed: f64, oracle: f64| {
        let d = (closed - oracle).abs();
        if d > worst.0 || worst.1.is_empty() {
            worst = (d, format!("{name} at {db} dB"));
        }
    };
    for &db in &grid.db {
        let g = db_to_linear(db);
        record(
            "p_ook",
            db,
            p_ook(g).unwrap(),
            rayleigh_average(conditional_ook, g, 1e-11),
        );
        record(
            "p_qam4",
            db,
            p_qam4_rayleigh(g).unwrap(),
            rayleigh_average(conditional_qpsk, g, 1e-11),
        );
        for m in [2, 4, 8] {
            let oracle = rayleigh_average(|x| conditional_mpsk(x, m), g, 1e-11);
            record(
                &format!("p_mpsk(M={m})"),
                db,
                p_mpsk_rayleigh(g, m).unwrap(),
                oracle,
            );
        }
    }
    verdict(
        worst.0 <= 1e-6,
        format!("max |closed - oracle| = {:.2e} ({})", worst.0, worst.1),
    )
}

fn c4_monte_carlo_ser() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (scheme, theory) in [
        (
            SimScheme::Egim4Qam,
            ser_egim_4qam as fn(f64) -> Result<f64, AnalysisError>,
        ),
        (
            SimScheme::Egim8Psk,
            ser_egim_8psk as fn(f64) -> Result<f64, AnalysisError>,
        ),
    ] {
        let mut cfg = SimConfig::new(scheme, ChannelKind::Rayleigh, vec![10.0, 20.0, 30.0]);
        cfg.min_errors = 500;
        cfg.max_frames = 2_000_000;
        cfg.seed = 4;
        let res = match run_sweep(&cfg, 0) {
            Ok(r) => r,
            Err(e) => return verdict(false, e.to_string()),
        };
        for p in &res.points {
            let t = theory(db_to_linear(p.snr_db)).unwrap();
            let rel = p.ser / t - 1.0;
            ok &= p.symbol_errors >= 500 && rel.abs() <= 0.15;
            lines.push(format!(
                "{} {}dB sim={:.3e} theory={:.3e} ({:+.0}%)",
                res.scheme,
                p.snr_db,
                p.ser,
                t,
                100.0 * rel
            ));
        }
    }
    verdict(ok, lines.join("; "))
}

fn c5_autoencoder_integrity() -> Verdict {
    let gen = GeneratorSet::autoencoder();
    let trellis = build_trellis(&gen);
    let bits = random_bits(51, 100_000);
    let coded = encode_bits(&gen, &bits, Termination::Flush);
    let hard_ok = viterbi_hard(&coded, &trellis, 12, Termination::Flush) == bits;
    let llrs: Vec<LlrVector> = coded
        .iter()
        .map(|&w| {
            LlrVector(
                (0..3)
                    .map(|i| if (w >> (2 - i)) & 1 == 1 { -8.0 } else { 8.0 })
                    .collect(),
            )
        })
        .collect();
    let soft_ok = viterbi_soft(&llrs, &trellis, 12, Termination::Flush) == bits;
    let dfree = free_distance(&trellis).unwrap_or(0);

    // every single codeword-bit error, over the all-zero stream and over random streams
    let single_errors = |stream: &[u8]| -> (usize, usize) {
        let tx = encode_bits(&gen, stream, Termination::Flush);
        let mut failed = 0;
        for pos in 0..tx.len() {
            for bit in 0..3 {
                let mut rx = tx.clone();
                rx[pos] ^= 1 << bit;
                if viterbi_hard(&rx, &trellis, 12, Termination::Flush) != stream {
                    failed += 1;
                }
            }
        }
        (failed, 3 * tx.len())
    };
    let (zero_failed, zero_total) = single_errors(&[0u8; 64]);
    let (mut rand_failed, mut rand_total) = (0, 0);
    for s in 0..200 {
        let (f, t) = single_errors(&random_bits(500 + s, 64));
        rand_failed += f;
        rand_total += t;
    }
    verdict(
        hard_ok && soft_ok && dfree >= 3 && zero_failed == 0 && rand_failed == 0,
        format!(
            "identity hard={hard_ok} soft={soft_ok}; dfree={dfree}; uncorrected single errors: \
             zero stream {zero_failed}/{zero_total}, random streams {rand_failed}/{rand_total}"
        ),
    )
}

fn c6_power_ledger() -> Verdict {
    let n = 64;
    let frames = 2000;
    let modem = OfdmModem::new(n, 16).unwrap();
    let gen = GeneratorSet::autoencoder();
    let bench = ConvCode::benchmark();
    let bits = random_bits(61, frames * n);
    let per_subcarrier = |symbols: &[num_complex::Complex64], policy: PowerPolicy| -> f64 {
        let mut e = 0.0;
        for chunk in symbols.chunks(n) {
            let t = modem
                .modulate(&FrequencyFrame::new(chunk.to_vec()), policy)
                .unwrap();
            e += t.body().iter().map(|x| x.norm_sqr()).sum::<f64>();
        }
        e / symbols.len() as f64
    };
    let table = ConstellationTable::egim_4qam();
    let cws: Vec<Codeword> = encode_bits(&gen, &bits, Termination::Truncated)
        .into_iter()
        .map(|w| Codeword::new(w, 3))
        .collect();
    let auto_symbols = map_codewords(&cws, &table).unwrap();
    let bench_symbols = bench.encode_qpsk(&bits, Termination::Truncated);
    let reference = per_subcarrier(&bench_symbols, PowerPolicy::PowerSaving);
    let saving = per_subcarrier(&auto_symbols, PowerPolicy::PowerSaving) / reference;
    let reinvest = per_subcarrier(&auto_symbols, PowerPolicy::Reinvest) / reference;
    verdict(
        (saving - 0.5).abs() <= 0.01 && (reinvest - 1.0).abs() <= 0.02,
        format!("energy ratio to benchmark: power-saving {saving:.4} (0.5), reinvest {reinvest:.4} (1.0)"),
    )
}

/// SNR where a BER curve crosses `target`, by log-linear interpolation.
fn crossing(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    curve.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target && y1 > 0.0 {
            let t = (y0.log10() - target.log10()) / (y0.log10() - y1.log10());
            Some(x0 + t * (x1 - x0))
        } else {
            None
        }
    })
}

fn c7_coded_comparison() -> Verdict {
    let run = |scheme, decision, top: u32| -> Result<SweepResult, String> {
        let grid = (0..=top).map(f64::from).collect();
        let mut cfg = SimConfig::new(scheme, ChannelKind::Awgn, grid);
        cfg.policy = PowerPolicy::Reinvest;
        cfg.decision = decision;
        cfg.min_errors = 300;
        cfg.max_frames = 400_000;
        cfg.seed = 7;
        run_sweep(&cfg, 0).map_err(|e| e.to_string())
    };
    // each grid stops where the curve still collects enough errors in reasonable time
    let mut curves = Vec::new();
    for (scheme, decision, top) in [
        (SimScheme::Autoencoder, Decision::Hard, 10),
        (SimScheme::Autoencoder, Decision::Soft, 8),
        (SimScheme::BenchmarkCodec, Decision::Hard, 6),
        (SimScheme::BenchmarkCodec, Decision::Soft, 5),
    ] {
        match run(scheme, decision, top) {
            Ok(r) => curves.push(r),
            Err(e) => return verdict(false, e),
        }
    }
    let ber = |r: &SweepResult| {
        r.points
            .iter()
            .map(|p| (p.snr_db, p.ber))
            .collect::<Vec<_>>()
    };
    let (ah, as_, bh, bs) = (
        ber(&curves[0]),
        ber(&curves[1]),
        ber(&curves[2]),
        ber(&curves[3]),
    );
    let soft_le_hard = ah.iter().zip(&as_).all(|(h, s)| s.1 <= h.1);
    let monotone = [&ah, &as_, &bh, &bs]
        .iter()
        .all(|c| c.windows(2).all(|w| w[1].1 < w[0].1));
    let gap = |a: &[(f64, f64)], b: &[(f64, f64)]| match (crossing(a, 1e-3), crossing(b, 1e-3)) {
        (Some(x), Some(y)) => format!("{:+.2} dB", y - x),
        _ => "n/a".into(),
    };
    verdict(
        soft_le_hard && monotone,
        format!(
            "soft<=hard={soft_le_hard} monotone={monotone}; informational gain over benchmark at BER 1e-3 \
             (target +0.8 soft / +1.2 hard, +/-0.5): soft {} hard {}",
            gap(&as_, &bs),
            gap(&ah, &bh)
        ),
    )
}

fn c8_desync() -> Verdict {
    let report = match desync_experiment(&DesyncConfig::default()) {
        Ok(r) => r,
        Err(e) => return verdict(false, e.to_string()),
    };
    let uncoded = report.mean_uncoded_downstream_ber();
    let footprint = report.max_coded_footprint();
    let over = report
        .trials
        .iter()
        .filter(|t| t.coded.footprint > 12)
        .count();
    verdict(
        (uncoded - 0.5).abs() <= 0.05 && footprint <= 12,
        format!(
            "{} trials: uncoded downstream BER {uncoded:.4}; autoencoder max footprint {footprint} bits \
             ({over} trials above 12)",
            report.trials.len()
        ),
    )
}

fn c9_determinism() -> Verdict {
    let mut cfg = SimConfig::new(
        SimScheme::Egim8Psk,
        ChannelKind::Rayleigh,
        vec![5.0, 15.0, 25.0],
    );
    cfg.min_errors = 200;
    cfg.seed = 99;
    let mut coded = SimConfig::new(
        SimScheme::Autoencoder,
        ChannelKind::Rayleigh,
        vec![6.0, 10.0],
    );
    coded.decision = Decision::Soft;
    coded.min_errors = 100;
    coded.seed = 99;
    let text = |workers| -> Result<String, String> {
        let a = run_sweep(&cfg, workers).map_err(|e| e.to_string())?;
        let b = run_sweep(&coded, workers).map_err(|e| e.to_string())?;
        Ok(csv_string(&[a, b]))
    };
    match (text(1), text(4)) {
        (Ok(a), Ok(b)) => verdict(
            a == b,
            format!("{} bytes, workers 1 vs 4 identical: {}", a.len(), a == b),
        ),
        (Err(e), _) | (_, Err(e)) => verdict(false, e),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("round-trip identity", c1_round_trip),
        ("spectral efficiency", c2_spectral_efficiency),
        ("closed forms vs quadrature", c3_theory_vs_oracle),
        ("Monte Carlo SER vs closed form", c4_monte_carlo_ser),
        ("autoencoder integrity", c5_autoencoder_integrity),
        ("power ledger", c6_power_ledger),
        ("coded comparison", c7_coded_comparison),
        ("error propagation", c8_desync),
        ("determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} {} {name} [{:.1}s]: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
