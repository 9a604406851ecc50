#![allow(dead_code)]

use num_complex::Complex64;
use pfrelay::analysis::{pdf_gamma_sr, SystemConfig};
use pfrelay::special::quadrature::{integrate_1d, Tolerance};

/// One-sample Kolmogorov-Smirnov statistic of sorted `samples` against `cdf`
/// evaluated at the same points.
pub fn ks_one_sample(samples: &[f64], cdf: &[f64]) -> f64 {
    let n = samples.len() as f64;
    cdf.iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs()))
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic of sorted inputs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// CDF of the first-hop SNR at each point of `sorted`, accumulated by
/// integrating the density between consecutive points.
pub fn integrated_sr_cdf(sorted: &[f64], config: &SystemConfig) -> Vec<f64> {
    let tol = Tolerance {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_panels: 200,
    };
    let mut out = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &x in sorted {
        if x > prev {
            acc += integrate_1d(|g| Ok(Complex64::new(pdf_gamma_sr(g, config), 0.0)), prev, x, 1, tol)
                .expect("density integral")
                .value
                .re;
            prev = x;
        }
        out.push(acc);
    }
    out
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

pub fn rel_gap(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
