use std::f64::consts::PI;

use egim::analysis::se_classical;
use egim::channel::{draw_channel, mmse_equalize, propagate, NoiseSpec};
use egim::detection::{default_ook_radius, ml_detect, ook_decide, subblock_ml_detect, OnOff};
use egim::mapping::{
    classical_im_map, destuff, map_codewords, stuff, ConstellationTable, GroupSpec, Scheme,
};
use egim::ofdm::{FrequencyFrame, OfdmModem, PowerPolicy};
use egim::sim::{run_sweep, ChannelKind, SimConfig, SimScheme};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
}

#[test]
fn noiseless_multipath_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let modem = OfdmModem::new(64, 16).unwrap();
    for scheme in [Scheme::Egim4Qam, Scheme::Egim8Psk] {
        for policy in [PowerPolicy::PowerSaving, PowerPolicy::Reinvest] {
            let table = ConstellationTable::for_scheme(scheme);
            let rx_table = table.scaled(policy.active_scale());
            for _ in 0..50 {
                let src = bits(&mut rng, 64 * scheme.codeword_width());
                let frame = stuff(&src, scheme, 64);
                let x = FrequencyFrame::new(map_codewords(&frame.codewords, &table).unwrap());
                let ch = draw_channel(10, 64, 16, &mut rng).unwrap();
                let noise = NoiseSpec::noiseless(policy.active_energy());
                let rx =
                    propagate(&modem.modulate(&x, policy).unwrap(), &ch, &noise, &mut rng).unwrap();
                let y = mmse_equalize(&modem.demodulate(&rx).unwrap(), &ch, &noise);
                let detected: Vec<_> = y.symbols.iter().map(|&s| ml_detect(s, &rx_table)).collect();
                assert_eq!(detected, frame.codewords);
                let out = destuff(&detected).unwrap();
                assert_eq!(&out[..frame.consumed], &src[..frame.consumed]);
            }
        }
    }
}

#[test]
fn classical_chain_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let modem = OfdmModem::new(64, 16).unwrap();
    for spec in [
        GroupSpec::new(4, 2, 4).unwrap(),
        GroupSpec::new(8, 3, 2).unwrap(),
    ] {
        let groups = 64 / spec.n;
        let src = bits(&mut rng, groups * spec.bits_per_group());
        let x = classical_im_map(&src, &spec, groups).unwrap();
        let ch = draw_channel(10, 64, 16, &mut rng).unwrap();
        let noise = NoiseSpec::noiseless(1.0);
        let rx = propagate(
            &modem.modulate(&x, PowerPolicy::PowerSaving).unwrap(),
            &ch,
            &noise,
            &mut rng,
        )
        .unwrap();
        let y = mmse_equalize(&modem.demodulate(&rx).unwrap(), &ch, &noise);
        let out: Vec<u8> = y
            .symbols
            .chunks(spec.n)
            .flat_map(|b| subblock_ml_detect(b, &spec, 1.0).unwrap().bits)
            .collect();
        assert_eq!(out, src);
    }
}

#[test]
fn classical_sweep_carries_the_nominal_rate() {
    let mut cfg = SimConfig::new(SimScheme::ClassicalIm, ChannelKind::Awgn, vec![60.0]);
    cfg.max_frames = 100;
    let p = &run_sweep(&cfg, 1).unwrap().points[0];
    let rate = p.bits as f64 / p.symbols as f64;
    assert_eq!(rate, se_classical(4, 2, 4).unwrap());
    assert_eq!(p.bit_errors, 0);
}

/// Inscribed and circumscribed radii of the origin's ML decision cell.
fn off_cell_radii(table: &ConstellationTable) -> (f64, f64) {
    let active = table
        .entries()
        .iter()
        .filter(|(c, _)| c.is_active())
        .count();
    let inner = default_ook_radius(table);
    (inner, inner / (PI / active as f64).cos())
}

#[test]
fn ook_agrees_with_ml_outside_the_boundary_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for table in [
        ConstellationTable::egim_4qam(),
        ConstellationTable::egim_8psk(),
    ] {
        let radius = default_ook_radius(&table);
        let (inner, outer) = off_cell_radii(&table);
        let mut disagreements = 0;
        for _ in 0..200_000 {
            let y = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let ml_active = ml_detect(y, &table).is_active();
            let ook_active = ook_decide(y, radius) == OnOff::Active;
            let r = y.norm();
            if r < inner - 1e-12 || r > outer + 1e-12 {
                assert_eq!(ml_active, ook_active, "y = {y}");
            } else if ml_active != ook_active {
                disagreements += 1;
            }
        }
        // the ML cell is a polygon, so the circular test differs near its corners
        assert!(disagreements > 0);
    }
}

#[test]
fn power_saving_halves_the_transmitted_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let modem = OfdmModem::new(64, 16).unwrap();
    let table = ConstellationTable::egim_4qam();
    let (mut saving, mut reinvest, mut symbols) = (0.0, 0.0, 0usize);
    for _ in 0..500 {
        let frame = stuff(&bits(&mut rng, 192), Scheme::Egim4Qam, 64);
        let x = FrequencyFrame::new(map_codewords(&frame.codewords, &table).unwrap());
        let energy = |p| {
            let t = modem.modulate(&x, p).unwrap();
            t.body().iter().map(|s| s.norm_sqr()).sum::<f64>()
        };
        saving += energy(PowerPolicy::PowerSaving);
        reinvest += energy(PowerPolicy::Reinvest);
        symbols += 64;
    }
    let (saving, reinvest) = (saving / symbols as f64, reinvest / symbols as f64);
    assert!((saving - 0.5).abs() < 0.01, "{saving}");
    assert!((reinvest - 1.0).abs() < 0.02, "{reinvest}");
}
