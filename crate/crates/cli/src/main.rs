//! Command-line front end: SNR sweeps, analytic curves, the desync
//! experiment and plotting of saved sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use egim::analysis::{SerCurve, SnrGrid, TheoryCurve};
use egim::sim::{
    desync_experiment, emit_csv, emit_plot, parse_csv, run_sweep, theory_csv_string, DesyncConfig,
    PlotSeries, SimConfig, SweepResult,
};

#[derive(Parser)]
#[command(name = "egim", version, about = "OFDM index modulation link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo error-rate sweep; writes sweep.csv and sweep.svg.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads (0 = all cores). Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Closed-form SER curves over Rayleigh fading; writes theory.csv and theory.svg.
    Theory {
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 40.0)]
        to: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Single on/off flip injection; writes desync.csv.
    Desync {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Plots one or more sweep CSV files into an SVG.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output SVG file.
        #[arg(long, default_value = "plot.svg")]
        out: PathBuf,
        /// Overlay the closed-form curves of uncoded EGIM schemes.
        #[arg(long)]
        theory: bool,
    },
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Closed forms matching the simulated uncoded EGIM curves over Rayleigh fading.
fn overlays(results: &[SweepResult]) -> Result<Vec<SerCurve>> {
    let mut out = Vec::new();
    for r in results.iter().filter(|r| r.channel == "rayleigh") {
        let curve = match r.scheme.as_str() {
            "egim4qam" => TheoryCurve::Egim4Qam,
            "egim8psk" => TheoryCurve::Egim8Psk,
            _ => continue,
        };
        let (lo, hi) = r
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.snr_db), b.max(p.snr_db))
            });
        let c = curve.curve(&SnrGrid::range(lo, hi, 0.5))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

fn sweep(config: &Path, seed: Option<u64>, out: &Path, workers: usize) -> Result<()> {
    let mut cfg = SimConfig::from_path(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if !cfg.is_publishable() {
        eprintln!(
            "warning: min_errors {} is below 100; points are not publishable",
            cfg.min_errors
        );
    }
    ensure_dir(out)?;
    let result = run_sweep(&cfg, workers)?;
    for p in &result.points {
        println!(
            "{} {} {:>6.2} dB  frames {:>8}  ser {:.4e}  ber {:.4e}  ({:.2?})",
            result.scheme, result.channel, p.snr_db, p.frames, p.ser, p.ber, p.elapsed
        );
    }
    let results = [result];
    emit_csv(&results, &out.join("sweep.csv"))?;
    emit_plot(&results, &overlays(&results)?, &out.join("sweep.svg"))?;
    Ok(())
}

fn theory(from: f64, to: f64, step: f64, out: &Path) -> Result<()> {
    if !(step > 0.0 && to >= from && from >= -100.0) {
        bail!("need step > 0 and to >= from");
    }
    ensure_dir(out)?;
    let grid = SnrGrid::range(from, to, step);
    let curves = [
        TheoryCurve::Egim4Qam,
        TheoryCurve::Egim8Psk,
        TheoryCurve::Ook,
        TheoryCurve::Qam4,
        TheoryCurve::Psk(8),
    ]
    .into_iter()
    .map(|c| c.curve(&grid))
    .collect::<Result<Vec<_>, _>>()?;
    let path = out.join("theory.csv");
    fs::write(&path, theory_csv_string(&curves, "rayleigh"))
        .with_context(|| format!("writing {}", path.display()))?;
    let series: Vec<PlotSeries> = curves.iter().map(PlotSeries::from_theory).collect();
    let path = out.join("theory.svg");
    fs::write(&path, egim::sim::svg_string(&series, "SER"))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn desync(config: Option<&Path>, seed: Option<u64>, out: &Path) -> Result<()> {
    let mut cfg = match config {
        Some(p) => DesyncConfig::from_path(p)?,
        None => DesyncConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    ensure_dir(out)?;
    let report = desync_experiment(&cfg)?;
    let path = out.join("desync.csv");
    fs::write(&path, report.csv_string()).with_context(|| format!("writing {}", path.display()))?;
    println!("trials                     {}", report.trials.len());
    println!(
        "uncoded downstream BER     {:.4}",
        report.mean_uncoded_downstream_ber()
    );
    println!(
        "autoencoded downstream BER {:.4}",
        report.mean_coded_downstream_ber()
    );
    println!(
        "autoencoded max footprint  {} bits",
        report.max_coded_footprint()
    );
    Ok(())
}

fn plot(inputs: &[PathBuf], out: &Path, with_theory: bool) -> Result<()> {
    let mut results = Vec::new();
    for p in inputs {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        results.extend(parse_csv(&text).with_context(|| format!("parsing {}", p.display()))?);
    }
    let theory = if with_theory {
        overlays(&results)?
    } else {
        Vec::new()
    };
    if !emit_plot(&results, &theory, out)? {
        eprintln!("no data points; nothing plotted");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep {
            config,
            seed,
            out,
            workers,
        } => sweep(&config, seed, &out, workers),
        Command::Theory {
            from,
            to,
            step,
            out,
        } => theory(from, to, step, &out),
        Command::Desync { config, seed, out } => desync(config.as_deref(), seed, &out),
        Command::Plot {
            inputs,
            out,
            theory,
        } => plot(&inputs, &out, theory),
    }
}
