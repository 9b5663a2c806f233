use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use super::{PointResult, SimError, SweepResult};
use crate::analysis::SerCurve;

pub const CSV_HEADER: &str =
    "scheme,channel,policy,snr_db,frames,symbols,bits,symbol_errors,bit_errors,ser,ber";

fn write_file(path: &Path, text: &str) -> Result<(), SimError> {
    std::fs::write(path, text).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// CSV text with one row per point, LF line endings.
pub fn csv_string(results: &[SweepResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        for p in &r.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.scheme,
                r.channel,
                r.policy,
                p.snr_db,
                p.frames,
                p.symbols,
                p.bits,
                p.symbol_errors,
                p.bit_errors,
                p.ser,
                p.ber
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn emit_csv(results: &[SweepResult], path: &Path) -> Result<(), SimError> {
    write_file(path, &csv_string(results))
}

/// Analytic curves in the same column layout: counts are zero and `ber`
/// is left empty.
pub fn theory_csv_string(curves: &[SerCurve], channel: &str) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        let scheme = c.label.replace(' ', "_");
        for &(db, ser) in &c.points {
            writeln!(out, "{scheme},{channel},theory,{db},0,0,0,0,0,{ser},")
                .expect("writing to a String");
        }
    }
    out
}

/// Parses CSV written by [`emit_csv`], grouping consecutive rows that share
/// scheme, channel and policy.
pub fn parse_csv(text: &str) -> Result<Vec<SweepResult>, SimError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        other => {
            return Err(SimError::Csv(format!(
                "expected header `{CSV_HEADER}`, found `{}`",
                other.unwrap_or("")
            )))
        }
    }
    let mut out: Vec<SweepResult> = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 11 {
            return Err(SimError::Csv(format!(
                "row {}: expected 11 fields, got {}",
                i + 2,
                f.len()
            )));
        }
        let bad = |what: &str| SimError::Csv(format!("row {}: bad {what}", i + 2));
        let int = |s: &str, what: &str| s.parse::<u64>().map_err(|_| bad(what));
        let real = |s: &str, what: &str| {
            if s.is_empty() {
                Ok(f64::NAN)
            } else {
                s.parse::<f64>().map_err(|_| bad(what))
            }
        };
        let point = PointResult {
            snr_db: real(f[3], "snr_db")?,
            frames: int(f[4], "frames")?,
            symbols: int(f[5], "symbols")?,
            bits: int(f[6], "bits")?,
            symbol_errors: int(f[7], "symbol_errors")?,
            bit_errors: int(f[8], "bit_errors")?,
            ser: real(f[9], "ser")?,
            ber: real(f[10], "ber")?,
            elapsed: Duration::ZERO,
        };
        match out.last_mut() {
            Some(r) if r.scheme == f[0] && r.channel == f[1] && r.policy == f[2] => {
                r.points.push(point)
            }
            _ => out.push(SweepResult {
                scheme: f[0].to_string(),
                channel: f[1].to_string(),
                policy: f[2].to_string(),
                points: vec![point],
            }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    /// Simulated points.
    Markers,
    /// Analytic curve.
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

impl PlotSeries {
    /// SER for uncoded curves, BER for coded ones (their counts are per info bit).
    pub fn from_sweep(r: &SweepResult) -> Self {
        let coded = r.scheme.starts_with("autoencoder") || r.scheme.starts_with("benchmark");
        let (points, metric) = if coded {
            (r.ber_curve(), "ber")
        } else {
            (r.ser_curve(), "ser")
        };
        PlotSeries {
            label: format!("{} {} {} {metric}", r.scheme, r.channel, r.policy),
            points,
            style: SeriesStyle::Markers,
        }
    }

    pub fn from_theory(c: &SerCurve) -> Self {
        PlotSeries {
            label: c.label.clone(),
            points: c.points.clone(),
            style: SeriesStyle::Line,
        }
    }
}

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Log-y SVG of the given series.
pub fn svg_string(series: &[PlotSeries], y_label: &str) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (80.0, 220.0, 30.0, 60.0);
    let (pw, ph) = (w - left - right, h - top - bottom);

    let visible = |&(x, y): &(f64, f64)| x.is_finite() && y.is_finite() && y > 0.0;
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(visible)
        .collect();
    let (mut x0, mut x1) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    let (ymin, ymax) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.1), b.max(p.1))
        });
    if all.is_empty() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let (d0, mut d1) = if all.is_empty() {
        (-6, 0)
    } else {
        (ymin.log10().floor() as i32, ymax.log10().ceil() as i32)
    };
    if d1 <= d0 {
        d1 = d0 + 1;
    }
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + (f64::from(d1) - y.log10()) / f64::from(d1 - d0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for d in d0..=d1 {
        let y = sy(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        );
    }
    let ticks = 8;
    for i in 0..=ticks {
        let x = x0 + (x1 - x0) * f64::from(i) / f64::from(ticks);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(x),
            top + ph + 18.0,
            (x * 10.0).round() / 10.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">SNR (dB)</text>"#,
        left + pw / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{y_label}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<(f64, f64)> = ser.points.iter().copied().filter(visible).collect();
        let _ = writeln!(s, r#"<g class="series" stroke="{color}" fill="{color}">"#);
        match ser.style {
            SeriesStyle::Line => {
                let path: Vec<String> = pts
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke-width="1.5" points="{}"/>"#,
                    path.join(" ")
                );
            }
            SeriesStyle::Markers => {
                for &(x, y) in &pts {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, sx(x), sy(y));
                }
            }
        }
        let ly = top + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="12" height="4"/><text x="{:.2}" y="{:.2}" stroke="none" fill="black">{}</text>"#,
            left + pw + 12.0,
            ly - 6.0,
            left + pw + 30.0,
            ly,
            xml_escape(&ser.label)
        );
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Writes the simulated curves plus any analytic overlays. Returns `false`
/// without touching the filesystem when there is nothing to draw.
pub fn emit_plot(
    results: &[SweepResult],
    theory: &[SerCurve],
    path: &Path,
) -> Result<bool, SimError> {
    if results.is_empty() {
        return Ok(false);
    }
    let mut series: Vec<PlotSeries> = results.iter().map(PlotSeries::from_sweep).collect();
    series.extend(theory.iter().map(PlotSeries::from_theory));
    write_file(path, &svg_string(&series, "error rate"))?;
    Ok(true)
}
