use std::collections::HashMap;
use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::config::{SystemConfig, Truncation};
use super::density::ccdf_gamma_sr;
use super::outage::e2e_cdf_derivative;
use super::series::{ln_binomial, ln_factorial, ln_series_coefficient, CompensatedSum};
use crate::error::{Error, Result, TermIndex};
use crate::special::quadrature::{integrate_1d, Tolerance};
use crate::special::{
    auto_contour_bivariate_with, auto_contour_univariate_with, bivariate_meijer_g_log, digamma, ln_gamma_real,
    meijer_g, BivariateGSpec, ContourSpec, MeijerGSpec, ScaledValue,
};

/// Tail probability at which the capacity integral is cut off.
pub const CAPACITY_TAIL: f64 = 1e-8;

/// Relative size of the last outer term above which the series is reported
/// as possibly under-truncated.
pub const OUTER_TERM_WARNING: f64 = 1e-4;

/// The two bivariate G-functions of the capacity series for `j = k + l` and
/// `m = k + l + n`, in that order.
pub fn capacity_kernel_specs(config: &SystemConfig, j: usize, m: usize) -> (BivariateGSpec, BivariateGSpec) {
    let half_nu = 0.5 * config.nu() as f64;
    let shift = config.alpha() - j as f64;
    let fn3 = vec![-1.0, half_nu + shift, -half_nu + shift];
    let m = m as f64;
    let first = BivariateGSpec {
        am1: vec![m + 2.0],
        cm2: vec![1.0, 1.0],
        dn2: vec![1.0],
        dq2: vec![0.0],
        ep3: vec![0.0],
        fn3: fn3.clone(),
        ..Default::default()
    };
    let second = BivariateGSpec {
        am1: vec![m + 1.0],
        cm2: vec![1.0, 1.0],
        dn2: vec![1.0],
        dq2: vec![0.0],
        em3: vec![-(m + 1.0)],
        ep3: vec![0.0],
        fn3,
        fq3: vec![-m],
        ..Default::default()
    };
    (first, second)
}

fn evaluate(spec: &BivariateGSpec, x: f64, y: f64, base: &ContourSpec) -> Result<ScaledValue> {
    let contour = auto_contour_bivariate_with(spec, base)?;
    bivariate_meijer_g_log(spec, x, y, 0.0, &contour)
}

/// Difference of the two bivariate terms as sign and log-magnitude.
fn kernel_difference(config: &SystemConfig, j: usize, m: usize, base: &ContourSpec) -> Result<(f64, f64)> {
    let (first, second) = capacity_kernel_specs(config, j, m);
    let x = config.snr_rd();
    let y = config.beta();
    let a = evaluate(&first, x, y, base)?;
    let b = evaluate(&second, x, y, base)?;
    let top = a.ln_scale.max(b.ln_scale);
    let d = a.mantissa * (a.ln_scale - top).exp() - b.mantissa * (b.ln_scale - top).exp();
    Ok((d.signum(), d.abs().ln() + top))
}

/// Ergodic capacity in bits/s/Hz from the truncated triple series over `k`,
/// `n <= k` and `l`.
///
/// Only the half-length and tolerances of `contour` are used. Terms are
/// cached by `(k + l, k + l + n)`, the only indices the bivariate G-functions
/// depend on.
pub fn capacity_exact(config: &SystemConfig, trunc: Truncation, contour: &ContourSpec) -> Result<f64> {
    let ln_rd = config.snr_rd().ln();
    let ln_sr = config.snr_sr().ln();
    let mut cache: HashMap<(usize, usize), (f64, f64)> = HashMap::new();
    let mut total = CompensatedSum::default();
    let mut last_outer = 0.0;
    for k in 0..=trunc.k {
        let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut outer = CompensatedSum::default();
        for n in 0..=k {
            for l in 0..=trunc.l {
                let Some(ln_a) = ln_series_coefficient(k, l) else {
                    continue;
                };
                let index = TermIndex::Capacity { k, n, l };
                let (j, m) = (k + l, k + l + n);
                let (sign_g, ln_g) = match cache.get(&(j, m)) {
                    Some(&v) => v,
                    None => {
                        let v = kernel_difference(config, j, m, contour).map_err(|e| e.at(index))?;
                        cache.insert((j, m), v);
                        v
                    }
                };
                if sign_g == 0.0 {
                    continue;
                }
                let ln_coef = -ln_factorial(k) + ln_binomial(k, n) + ln_a - ln_factorial(l)
                    + (l + n + 1) as f64 * ln_rd
                    - (k + l + 1) as f64 * ln_sr;
                let term = sign_k * sign_g * (ln_coef + ln_g).exp();
                if !term.is_finite() {
                    return Err(Error::NonFinite("capacity series term").at(index));
                }
                outer.add(term);
            }
        }
        last_outer = outer.value();
        total.add(last_outer);
    }
    let sum = total.value();
    if last_outer.abs() > OUTER_TERM_WARNING * sum.abs() {
        log::warn!(
            "capacity series: last outer term {last_outer:e} exceeds {OUTER_TERM_WARNING:e} of the sum {sum:e} (K={}, L={})",
            trunc.k,
            trunc.l
        );
    }
    let pre = 2.0 * LN_2 * (ln_gamma_real(config.n_s() as f64) + ln_gamma_real(config.n_r() as f64)).exp();
    let value = sum / pre;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("capacity series"))
    }
}

/// Smallest threshold beyond which the end-to-end CCDF is certainly below
/// [`CAPACITY_TAIL`], using `P[γ_srd > γ] <= P[γ_sr > γ] P[γ_rd > γ]`.
pub fn capacity_upper_limit(config: &SystemConfig) -> f64 {
    let bound = |g: f64| ccdf_gamma_sr(g, config) * (-g / config.snr_rd()).exp();
    let mut hi = config.snr_rd().min(config.snr_sr()).max(1e-12);
    while bound(hi) >= CAPACITY_TAIL {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) >= CAPACITY_TAIL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Ergodic capacity by integrating `½ log2(1+γ)` against the numerical
/// density of [`e2e_cdf_derivative`] up to [`capacity_upper_limit`].
pub fn capacity_numeric_quadrature(config: &SystemConfig, trunc: Truncation, contour: &ContourSpec) -> Result<f64> {
    let upper = capacity_upper_limit(config);
    let tol = Tolerance {
        abs_tol: 1e-5,
        rel_tol: 1e-6,
        max_panels: 400,
    };
    let r = integrate_1d(
        |g| {
            let f = e2e_cdf_derivative(g, config, trunc, contour)?;
            Ok(Complex64::new(0.5 * (1.0 + g).log2() * f, 0.0))
        },
        0.0,
        upper,
        4,
        tol,
    )?;
    Ok(r.value.re)
}

/// Large-β capacity asymptote built on
/// `G^{2,5}_{6,4}(γ̄_sr | 1,1,1,1-n_r,1-n_s,0; 1,1,0,0) / (2 ln2 Γ(n_s) Γ(n_r))`.
///
/// With the sign convention of [`crate::special`] this G-function is negative:
/// its integrand has a double pole at `s = 0` with residue
/// `-Γ(n_s)Γ(n_r)(ln γ̄_sr + ψ(n_s) + ψ(n_r))`. The value is negated so that
/// the result is the (positive) capacity and meets
/// [`capacity_asymptotic_high_snr`] as `γ̄_sr` grows.
pub fn capacity_asymptotic_large_beta(config: &SystemConfig, contour: &ContourSpec) -> Result<f64> {
    let (ns, nr) = (config.n_s() as f64, config.n_r() as f64);
    let spec = MeijerGSpec::new(
        2,
        5,
        vec![1.0, 1.0, 1.0, 1.0 - nr, 1.0 - ns, 0.0],
        vec![1.0, 1.0, 0.0, 0.0],
    )?;
    let c = auto_contour_univariate_with(&spec, contour)?;
    let g = meijer_g(&spec, config.snr_sr(), &c)?;
    Ok(-g / (2.0 * LN_2 * (ln_gamma_real(ns) + ln_gamma_real(nr)).exp()))
}

/// High-SNR capacity asymptote `(ln γ̄_sr + ψ(n_s) + ψ(n_r)) / (2 ln 2)`.
pub fn capacity_asymptotic_high_snr(config: &SystemConfig) -> f64 {
    (config.snr_sr().ln() + digamma(config.n_s()) + digamma(config.n_r())) / (2.0 * LN_2)
}

/// Capacity limit when `β → 0` or `γ̄_sr → 0`.
pub fn capacity_asymptotic_zero(_config: &SystemConfig) -> f64 {
    0.0
}
