mod common;

use std::f64::consts::LN_2;

use num_complex::Complex64;
use proptest::prelude::*;

use pfrelay::analysis::*;
use pfrelay::montecarlo::{batch_rng, sample_e2e_snr, simulate_outage, SimConfig};
use pfrelay::special::quadrature::{integrate_1d, Tolerance};
use pfrelay::special::{modified_bessel_k, ContourSpec};

use common::rel_gap;

const REFERENCE: Tolerance = Tolerance {
    abs_tol: 1e-13,
    rel_tol: 1e-10,
    max_panels: 4000,
};

fn cfg(ns: u32, nr: u32, sr: f64, rd: f64) -> SystemConfig {
    SystemConfig::new(ns, nr, sr, rd).unwrap()
}

fn outage(th: f64, c: &SystemConfig) -> OutageValue {
    outage_exact(th, c, Truncation::default(), &ContourSpec::default()).unwrap()
}

fn integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let tol = Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_panels: 4000,
    };
    integrate_1d(|x| Ok(Complex64::new(f(x), 0.0)), a, b, 16, tol)
        .unwrap()
        .value
        .re
}

fn fig2_configs() -> Vec<SystemConfig> {
    let mut v = Vec::new();
    for ns in [2, 4] {
        for rd_db in [0.0, 10.0] {
            v.push(SystemConfig::from_db(ns, 2, 0.0, rd_db).unwrap());
        }
    }
    v
}

#[test]
fn first_hop_density_values() {
    let c = cfg(2, 2, 1.0, 1.0);
    assert!((pdf_gamma_sr(1.0, &c) - 2.0 * modified_bessel_k(0, 2.0)).abs() < 1e-14);
    assert!((pdf_gamma_sr(1.0, &c) - 0.227_787_7).abs() < 1e-7);
    assert_eq!(pdf_gamma_sr(0.0, &c), 0.0);
    let c = cfg(2, 2, 1.0, 3.0);
    assert_eq!(pdf_gamma_rd(0.0, &cfg(2, 2, 1.0, 1.0)), 1.0);
    assert!((pdf_gamma_rd(3.0, &c) - (-1f64).exp() / 3.0).abs() < 1e-15);
    let mean = integral(|g| g * pdf_gamma_rd(g, &c), 0.0, 300.0);
    assert!((mean - 3.0).abs() < 1e-9);
}

#[test]
fn coefficients() {
    assert_eq!(series_coefficient(0, 0), 1.0);
    assert_eq!(series_coefficient(1, 1), 1.0);
    assert_eq!(series_coefficient(0, 2), 0.0);
    for k in 1..12usize {
        for l in 0..6usize {
            let rising: f64 = (0..l).map(|i| (k + i) as f64).product();
            assert!(rel_gap(series_coefficient(k, l), rising) < 1e-12, "({k},{l})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn first_hop_density_is_normalised(ns in 2u32..=5, nr in 2u32..=5, log_snr in -1.0..2.0f64) {
        let snr = 10f64.powf(log_snr);
        let c = cfg(ns, nr, snr, 1.0);
        let upper = 200.0 * snr * (ns * nr) as f64;
        let mass = integral(|g| pdf_gamma_sr(g, &c), 0.0, upper);
        let mean = integral(|g| g * pdf_gamma_sr(g, &c), 0.0, upper);
        prop_assert!((mass - 1.0).abs() < 1e-6, "mass {}", mass);
        prop_assert!(rel_gap(mean, (ns * nr) as f64 * snr) < 5e-3, "mean {}", mean);
    }

    #[test]
    fn ccdf_complements_integrated_density(ns in 2u32..=4, nr in 2u32..=4, g in 0.05..20.0f64) {
        let c = cfg(ns, nr, 1.0, 1.0);
        let cdf = integral(|x| pdf_gamma_sr(x, &c), 0.0, g);
        prop_assert!((cdf + ccdf_gamma_sr(g, &c) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn outage_is_monotone_and_saturates() {
    for c in fig2_configs() {
        let mut prev = 0.0;
        for i in 0..=20 {
            let th = db_to_linear(-30.0 + 2.0 * i as f64);
            let p = outage(th, &c).probability;
            assert!(p >= prev, "{c:?}: {p} < {prev} at {th}");
            prev = p;
        }
        let far = 1e3 * c.snr_sr().max(c.snr_rd());
        assert!(outage(far, &c).probability > 0.999, "{c:?}");
    }
}

#[test]
fn outage_vanishes_at_small_threshold() {
    for c in fig2_configs() {
        assert!(outage(1e-6, &c).probability < 1e-3);
    }
    assert!(matches!(
        outage_exact(
            0.0,
            &cfg(2, 2, 1.0, 1.0),
            Truncation::default(),
            &ContourSpec::default()
        ),
        Err(pfrelay::Error::InvalidParameters(_))
    ));
}

#[test]
fn low_threshold_asymptote() {
    assert!((outage_asymptotic(0.01, &cfg(2, 2, 1.0, 10.0)) - 0.002).abs() < 1e-15);
    let big = cfg(100, 100, 1.0, 1.0);
    assert!(rel_gap(outage_asymptotic(0.3, &big), 0.3 * (1.0 + 1.0 / 9801.0)) < 1e-14);
    for ns in [2, 4] {
        let c = cfg(ns, 2, 1.0, 1.0);
        let th = 1e-3 * c.snr_rd();
        let ratio = outage(th, &c).raw / outage_asymptotic(th, &c);
        assert!((ratio - 1.0).abs() < 0.05, "({ns},2): ratio {ratio}");
    }
}

#[test]
fn outage_series_tracks_direct_quadrature() {
    // at (2,2,1,10) and threshold 0.01 the direct integral gives 0.0023128,
    // 16% above the first-order asymptote
    let c = cfg(2, 2, 1.0, 10.0);
    let reference = outage_quadrature(0.01, &c, REFERENCE).unwrap();
    assert!((reference - 0.002_312_8).abs() < 1e-7);
    assert!(rel_gap(outage(0.01, &c).raw, reference) < 0.02);
    let c = cfg(4, 2, 1.0, 1.0);
    for th in [0.1, 1.0, 3.0] {
        let reference = outage_quadrature(th, &c, REFERENCE).unwrap();
        assert!(rel_gap(outage(th, &c).raw, reference) < 1e-3, "threshold {th}");
    }
}

#[test]
fn outage_matches_simulation() {
    let c = cfg(4, 2, 1.0, 1.0);
    let mc = simulate_outage(1.0, &c, &SimConfig::with_trials(1_000_000, 1).unwrap());
    let exact = outage(1.0, &c).probability;
    assert!(
        (exact - mc.value).abs() <= 3.0 * mc.std_error,
        "{exact} vs {} ± {}",
        mc.value,
        mc.std_error
    );
}

#[test]
fn end_to_end_density_is_normalised() {
    let c = cfg(2, 2, 1.0, 1.0);
    let t = Truncation::default();
    let contour = ContourSpec::default();
    let upper = capacity_upper_limit(&c);
    let tol = Tolerance {
        abs_tol: 1e-5,
        rel_tol: 1e-6,
        max_panels: 400,
    };
    let mass = integrate_1d(
        |g| Ok(Complex64::new(e2e_cdf_derivative(g, &c, t, &contour)?, 0.0)),
        0.0,
        upper,
        4,
        tol,
    )
    .unwrap()
    .value
    .re;
    assert!((mass - 1.0).abs() < 1e-2, "mass {mass}");
}

#[test]
fn end_to_end_density_matches_histogram() {
    let c = cfg(2, 2, 1.0, 1.0);
    let at = c.snr_rd();
    let half = 0.05 * at;
    let n = 1_000_000;
    let mut rng = batch_rng(1, 0);
    let hits = (0..n)
        .filter(|_| (sample_e2e_snr(&c, &mut rng) - at).abs() < half)
        .count() as f64;
    let p = hits / n as f64;
    let width = 2.0 * half;
    let (estimate, se) = (p / width, (p * (1.0 - p) / n as f64).sqrt() / width);
    let density = e2e_cdf_derivative(at, &c, Truncation::default(), &ContourSpec::default()).unwrap();
    assert!((density - estimate).abs() <= 3.0 * se, "{density} vs {estimate} ± {se}");
}

#[test]
fn end_to_end_density_non_negative_on_grid() {
    let c = cfg(4, 2, 1.0, 10.0);
    for i in 0..=12 {
        let g = db_to_linear(-20.0 + 3.0 * i as f64);
        assert!(e2e_cdf_derivative(g, &c, Truncation::default(), &ContourSpec::default()).unwrap() >= 0.0);
    }
}

#[test]
fn capacity_series_equals_integrated_outage_series() {
    // ½ E log2(1+γ) = ∫ (1 - F(γ)) / ((1+γ) 2 ln 2) dγ, applied to the
    // truncated outage series term by term
    let c = cfg(2, 2, 1.0, 1.0);
    let t = Truncation::default();
    let contour = ContourSpec::default();
    let exact = capacity_exact(&c, t, &contour).unwrap();
    assert!(exact.is_finite() && exact >= 0.0);
    let tol = Tolerance {
        abs_tol: 1e-8,
        rel_tol: 1e-8,
        max_panels: 400,
    };
    let integrand = |g: f64| -> pfrelay::Result<Complex64> {
        let raw = outage_exact(g, &c, t, &contour)?.raw;
        Ok(Complex64::new((1.0 - raw) / (1.0 + g), 0.0))
    };
    let mut total = 0.0;
    for (a, b) in [(0.0, 2.0), (2.0, 10.0), (10.0, 40.0), (40.0, 150.0)] {
        total += integrate_1d(integrand, a, b, 2, tol).unwrap().value.re;
    }
    let by_parts = total / (2.0 * LN_2);
    assert!((exact - by_parts).abs() < 1e-5, "{exact} vs {by_parts}");
}

#[test]
fn numeric_capacity_limits() {
    let t = Truncation::default();
    let contour = ContourSpec::default();
    // with γ̄_rd = 1e-6 the outage series runs in powers of (γ+1)/γ̄_rd ~ 1e6,
    // far beyond what 50 outer terms can sum; the density check reports it
    let tiny = capacity_numeric_quadrature(&cfg(2, 2, 1.0, 1e-6), t, &contour);
    assert!(matches!(tiny, Err(pfrelay::Error::NegativeDensity { .. })), "{tiny:?}");
    let mut prev = 0.0;
    for rd in [0.5, 1.0, 2.0, 4.0] {
        let v = capacity_numeric_quadrature(&cfg(2, 2, 1.0, rd), t, &contour).unwrap();
        assert!(v > prev, "γ̄_rd={rd}: {v} <= {prev}");
        prev = v;
    }
}

#[test]
fn capacity_asymptotes() {
    let c = cfg(2, 2, 1e4, 1e6);
    let expected = (1e4f64.ln() + 2.0 * digamma_two()) / (2.0 * LN_2);
    assert!((capacity_asymptotic_high_snr(&c) - expected).abs() < 1e-12);
    assert!((capacity_asymptotic_high_snr(&c) - 7.2537).abs() < 2e-4);
    let slope =
        capacity_asymptotic_high_snr(&cfg(2, 2, 1e4 * std::f64::consts::E, 1.0)) - capacity_asymptotic_high_snr(&c);
    assert!((slope - 1.0 / (2.0 * LN_2)).abs() < 1e-12);
    assert_eq!(capacity_asymptotic_zero(&c), 0.0);

    let contour = ContourSpec::default();
    for ns in 2..=4 {
        for nr in 2..=4 {
            for sr in [1.0, 10.0, 100.0] {
                let v = capacity_asymptotic_large_beta(&cfg(ns, nr, sr, 100.0 * sr), &contour).unwrap();
                assert!(v.is_finite() && v > 0.0, "({ns},{nr},{sr}): {v}");
            }
        }
    }
    let lb = capacity_asymptotic_large_beta(&c, &contour).unwrap();
    assert!(rel_gap(lb, capacity_asymptotic_high_snr(&c)) < 0.02);
}

fn digamma_two() -> f64 {
    1.0 - pfrelay::special::EULER_GAMMA
}
