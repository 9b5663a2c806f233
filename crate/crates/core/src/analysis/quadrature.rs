//! Numerical reference for fading-averaged error rates: conditional AWGN
//! error probabilities integrated against the exponential SNR density with
//! adaptive Gauss–Kronrod quadrature.

use std::f64::consts::PI;

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive G7K15 integration of `f` over `[a, b]`, refining the worst
/// interval until the summed error estimate drops below `tol`.
///
/// `breaks` are extra interior points where the integrand changes scale.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut edges: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut parts: Vec<(f64, f64, f64, f64)> = edges
        .windows(2)
        .map(|w| {
            let (v, e) = kronrod(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    for _ in 0..10_000 {
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= tol {
            break;
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one interval");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e) = kronrod(&f, l, h);
            parts.push((l, h, v, e));
        }
    }
    parts.iter().map(|p| p.2).sum()
}

/// Gaussian tail `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// On/off decision error at instantaneous SNR `g`, evaluated at half the
/// per-subcarrier SNR: `Q(sqrt(2 * g/2))`.
pub fn conditional_ook(g: f64) -> f64 {
    q_function(g.sqrt())
}

/// Exact QPSK symbol error at SNR `g = E_s/N0`.
pub fn conditional_qpsk(g: f64) -> f64 {
    let q = q_function(g.sqrt());
    2.0 * q - q * q
}

/// Exact M-PSK symbol error at SNR `g` (Craig's form).
pub fn conditional_mpsk(g: f64, m: usize) -> f64 {
    let s2 = (PI / m as f64).sin().powi(2);
    let upper = PI * (m - 1) as f64 / m as f64;
    let integrand = |theta: f64| {
        let st = theta.sin();
        if st == 0.0 {
            0.0
        } else {
            (-g * s2 / (st * st)).exp()
        }
    };
    integrate(integrand, 0.0, upper, &[PI / 2.0], 1e-13) / PI
}

/// `E[P(gamma)]` for `gamma` exponential with mean `mean_snr`, over
/// `[0, 40 * mean_snr]`.
pub fn rayleigh_average<F: Fn(f64) -> f64>(conditional: F, mean_snr: f64, tol: f64) -> f64 {
    if mean_snr == 0.0 {
        return conditional(0.0);
    }
    // substitute gamma = mean * t; the integrand varies on the scale 1/mean near 0
    let scale = 1.0 / mean_snr;
    let breaks: Vec<f64> = [0.1 * scale, scale, 10.0 * scale, 100.0 * scale, 1.0, 5.0]
        .into_iter()
        .filter(|&x| x < 40.0)
        .collect();
    integrate(
        |t| conditional(mean_snr * t) * (-t).exp(),
        0.0,
        40.0,
        &breaks,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_and_exponentials() {
        let v = integrate(|x| x * x, 0.0, 3.0, &[], 1e-12);
        assert!((v - 9.0).abs() < 1e-12);
        let v = integrate(|x| (-x).exp(), 0.0, 40.0, &[1.0], 1e-12);
        assert!((v - (1.0 - (-40f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((q_function(1.0) - 0.158_655_253_931_457_05).abs() < 1e-14);
        assert!((q_function(3.0) - 0.001_349_898_031_630_094_6).abs() < 1e-15);
    }

    #[test]
    fn craig_form_matches_bpsk_and_qpsk() {
        for g in [0.1, 1.0, 5.0, 20.0] {
            assert!((conditional_mpsk(g, 2) - q_function((2.0 * g).sqrt())).abs() < 1e-12);
            assert!((conditional_mpsk(g, 4) - conditional_qpsk(g)).abs() < 1e-12);
        }
    }
}
