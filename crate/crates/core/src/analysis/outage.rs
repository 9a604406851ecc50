use num_complex::Complex64;

use super::config::{SystemConfig, Truncation};
use super::density::pdf_gamma_sr;
use super::series::{ln_factorial, ln_series_coefficient, CompensatedSum};
use crate::error::{Error, Result, TermIndex};
use crate::special::quadrature::{integrate_1d, Tolerance};
use crate::special::{auto_contour_univariate_with, ln_gamma_real, meijer_g_log, ContourSpec, MeijerGSpec};

/// Density values below this are treated as evidence of an inadequate
/// truncation rather than finite-difference noise.
pub const NEGATIVE_DENSITY_FLOOR: f64 = -1e-4;

/// Outage probability clamped to `[0, 1]`, with the raw series value kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageValue {
    pub probability: f64,
    pub raw: f64,
}

impl OutageValue {
    fn from_raw(raw: f64) -> Self {
        let probability = raw.clamp(0.0, 1.0);
        if probability != raw {
            log::debug!("outage series value {raw:e} clamped to {probability}");
        }
        Self { probability, raw }
    }
}

fn check_threshold(gamma_th: f64) -> Result<()> {
    if gamma_th > 0.0 && gamma_th.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "threshold must be positive and finite, got {gamma_th}"
        )))
    }
}

/// `G^{3,0}_{1,3}(x | 0; -1, ν/2+α-j, -ν/2+α-j)`.
pub(crate) fn outage_kernel_spec(config: &SystemConfig, j: usize) -> Result<MeijerGSpec> {
    let half_nu = 0.5 * config.nu() as f64;
    let shift = config.alpha() - j as f64;
    MeijerGSpec::new(3, 0, vec![0.0], vec![-1.0, half_nu + shift, -half_nu + shift])
}

/// Sign and log-magnitude of `x^{j+1} G^{3,0}_{1,3}(x | ...)`.
fn outage_kernel(config: &SystemConfig, j: usize, x: f64, base: &ContourSpec) -> Result<(f64, f64)> {
    let spec = outage_kernel_spec(config, j)?;
    let contour = auto_contour_univariate_with(&spec, base)?;
    let v = meijer_g_log(&spec, x, (j + 1) as f64 * x.ln(), &contour)?;
    Ok((v.mantissa.signum(), v.mantissa.abs().ln() + v.ln_scale))
}

/// Outage probability from the truncated double series in `k` and `l`.
///
/// Only the half-length and tolerances of `contour` are used; each Meijer G
/// term gets its own abscissa. Terms sharing `k + l` share one kernel
/// evaluation.
pub fn outage_exact(
    gamma_th: f64,
    config: &SystemConfig,
    trunc: Truncation,
    contour: &ContourSpec,
) -> Result<OutageValue> {
    check_threshold(gamma_th)?;
    let x = gamma_th / config.snr_sr();
    let ln_ratio = ((gamma_th + 1.0) / config.snr_rd()).ln();
    let mut kernels: Vec<Option<(f64, f64)>> = vec![None; trunc.k + trunc.l + 1];
    let mut total = CompensatedSum::default();
    for k in 0..=trunc.k {
        let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
        let ln_outer = k as f64 * ln_ratio - ln_factorial(k);
        let mut inner = CompensatedSum::default();
        for l in 0..=trunc.l {
            let Some(ln_a) = ln_series_coefficient(k, l) else {
                continue;
            };
            let j = k + l;
            let (sign_g, ln_g) = match kernels[j] {
                Some(v) => v,
                None => {
                    let v = outage_kernel(config, j, x, contour).map_err(|e| e.at(TermIndex::Outage { k, l }))?;
                    kernels[j] = Some(v);
                    v
                }
            };
            let term = sign_k * sign_g * (ln_outer + ln_a - ln_factorial(l) + ln_g).exp();
            if !term.is_finite() {
                return Err(Error::NonFinite("outage series term").at(TermIndex::Outage { k, l }));
            }
            inner.add(term);
        }
        total.add(inner.value());
    }
    let ln_pre = -gamma_th / config.snr_rd() - ln_gamma_real(config.n_s() as f64) - ln_gamma_real(config.n_r() as f64);
    let raw = 1.0 - ln_pre.exp() * total.value();
    if !raw.is_finite() {
        return Err(Error::NonFinite("outage series"));
    }
    Ok(OutageValue::from_raw(raw))
}

/// Low-threshold asymptote `(1 + 1/((n_s-1)(n_r-1)γ̄_sr)) γ_th/γ̄_rd`.
pub fn outage_asymptotic(gamma_th: f64, config: &SystemConfig) -> f64 {
    let d = ((config.n_s() - 1) * (config.n_r() - 1)) as f64;
    (1.0 + 1.0 / (d * config.snr_sr())) * gamma_th / config.snr_rd()
}

/// Outage probability by direct quadrature over the first-hop SNR.
///
/// Conditioned on `γ_sr = a`, the end-to-end SNR falls below `γ_th` when
/// `a <= γ_th`, or otherwise when `γ_rd < γ_th (a + 1)/(a - γ_th)`. The result
/// is `∫_0^{γ_th} f + ∫_0^∞ (1 - exp(-γ_th(γ_th+t+1)/(t γ̄_rd))) f(γ_th+t) dt`.
/// Used as an independent reference for the series.
pub fn outage_quadrature(gamma_th: f64, config: &SystemConfig, tol: Tolerance) -> Result<f64> {
    check_threshold(gamma_th)?;
    let pdf = |g: f64| pdf_gamma_sr(g, config);
    let head = integrate_1d(|a| Ok(Complex64::new(pdf(a), 0.0)), 0.0, gamma_th, 4, tol)?
        .value
        .re;
    let scale = config.snr_sr() * (config.n_s() * config.n_r()) as f64;
    let tail = integrate_1d(
        |v| {
            let t = scale * v / (1.0 - v);
            let jac = scale / ((1.0 - v) * (1.0 - v));
            let f = pdf(gamma_th + t);
            if f == 0.0 || !t.is_finite() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let cond = -(-gamma_th * (gamma_th + t + 1.0) / (t * config.snr_rd())).exp_m1();
            Ok(Complex64::new(cond * f * jac, 0.0))
        },
        0.0,
        1.0,
        8,
        tol,
    )?
    .value
    .re;
    Ok(head + tail)
}

/// Contour settings tight enough for finite differences of the series.
fn derivative_contour(contour: &ContourSpec) -> ContourSpec {
    contour
        .with_tolerances(contour.abs_tol.min(1e-13), contour.rel_tol.min(1e-11))
        .with_max_evals(contour.max_evals.max(10_000))
}

/// Density of the end-to-end SNR as a central difference of [`outage_exact`]
/// with step `max(1e-4 γ, 1e-6)` (one-sided when the step reaches zero).
///
/// The series is evaluated with tolerances tightened to suit differencing.
/// Values below [`NEGATIVE_DENSITY_FLOOR`] are reported as errors; smaller
/// negative values are rounded up to zero.
pub fn e2e_cdf_derivative(gamma: f64, config: &SystemConfig, trunc: Truncation, contour: &ContourSpec) -> Result<f64> {
    check_threshold(gamma)?;
    let tight = derivative_contour(contour);
    let h = (1e-4 * gamma).max(1e-6);
    let upper = outage_exact(gamma + h, config, trunc, &tight)?.raw;
    let density = if gamma > h {
        let lower = outage_exact(gamma - h, config, trunc, &tight)?.raw;
        (upper - lower) / (2.0 * h)
    } else {
        let mid = outage_exact(gamma, config, trunc, &tight)?.raw;
        (upper - mid) / h
    };
    if density < NEGATIVE_DENSITY_FLOOR {
        return Err(Error::NegativeDensity { gamma, value: density });
    }
    Ok(density.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::modified_bessel_k;

    const REF_TOL: Tolerance = Tolerance {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_panels: 4000,
    };

    fn cfg(ns: u32, nr: u32, sr: f64, rd: f64) -> SystemConfig {
        SystemConfig::new(ns, nr, sr, rd).unwrap()
    }

    /// `x^{j+1} G(x | 0; -1, b2, b3) = x^j ∫_x^∞ v^{-j-1} G^{2,0}_{0,2}(v | n_r, n_s) dv` where
    /// `G^{2,0}_{0,2}(v | n_r, n_s) = 2 v^{α+1} K_ν(2√v)`.
    fn kernel_oracle(c: &SystemConfig, j: usize, x: f64) -> f64 {
        let g2 = |v: f64| 2.0 * v.powf(c.alpha() + 1.0) * modified_bessel_k(c.nu(), 2.0 * v.sqrt());
        let tail = integrate_1d(
            |w| {
                // v = x / w, w in (0, 1]
                let v = x / w;
                Ok(Complex64::new(v.powi(-(j as i32) - 1) * g2(v) * x / (w * w), 0.0))
            },
            0.0,
            1.0,
            8,
            REF_TOL,
        )
        .unwrap()
        .value
        .re;
        x.powi(j as i32) * tail
    }

    #[test]
    fn kernel_matches_bessel_integral() {
        let base = ContourSpec::default().with_tolerances(1e-12, 1e-10);
        for &(ns, nr) in &[(2, 2), (4, 2), (2, 3)] {
            let c = cfg(ns, nr, 1.0, 1.0);
            for j in [0, 1, 3, 6] {
                for &x in &[0.01, 0.3, 2.0] {
                    let (s, ln) = outage_kernel(&c, j, x, &base).unwrap();
                    let v = s * ln.exp();
                    let r = kernel_oracle(&c, j, x);
                    assert!(((v - r) / r).abs() < 1e-7, "ns={ns} nr={nr} j={j} x={x}: {v} vs {r}");
                }
            }
        }
    }

    #[test]
    fn quadrature_reference_limits() {
        let c = cfg(2, 2, 1.0, 10.0);
        let small = outage_quadrature(1e-6, &c, REF_TOL).unwrap();
        assert!(small > 0.0 && small < 1e-5);
        let big = outage_quadrature(1e4, &c, REF_TOL).unwrap();
        assert!(big > 0.999_999);
    }

    #[test]
    fn series_tracks_reference_at_unit_average() {
        let base = ContourSpec::default();
        for &(ns, nr) in &[(2, 2), (4, 2)] {
            let c = cfg(ns, nr, 1.0, 1.0);
            for &th in &[0.01, 0.1, 1.0] {
                let s = outage_exact(th, &c, Truncation::default(), &base).unwrap();
                let r = outage_quadrature(th, &c, REF_TOL).unwrap();
                assert!(((s.raw - r) / r).abs() < 1e-2, "ns={ns} th={th}: {} vs {r}", s.raw);
            }
        }
    }

    #[test]
    fn small_threshold_vanishes() {
        let c = cfg(2, 2, 1.0, 10.0);
        let v = outage_exact(1e-6, &c, Truncation::default(), &ContourSpec::default()).unwrap();
        assert!(v.probability < 1e-3);
    }

    #[test]
    fn asymptote_arithmetic() {
        let c = cfg(2, 2, 1.0, 10.0);
        assert!((outage_asymptotic(0.01, &c) - 0.002).abs() < 1e-15);
        let c = cfg(100, 100, 1.0, 1.0);
        assert!((outage_asymptotic(0.3, &c) - 0.3 * (1.0 + 1.0 / 9801.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_threshold() {
        let c = cfg(2, 2, 1.0, 1.0);
        assert!(outage_exact(0.0, &c, Truncation::default(), &ContourSpec::default()).is_err());
        assert!(e2e_cdf_derivative(-1.0, &c, Truncation::default(), &ContourSpec::default()).is_err());
    }

    #[test]
    fn clamping_keeps_raw() {
        let v = OutageValue::from_raw(-3e-7);
        assert_eq!(v.probability, 0.0);
        assert_eq!(v.raw, -3e-7);
    }

    #[test]
    fn failures_carry_term_index() {
        let c = cfg(2, 2, 1.0, 1.0);
        let starved = ContourSpec::default().with_tolerances(1e-15, 1e-15).with_max_evals(1);
        match outage_exact(0.5, &c, Truncation::default(), &starved) {
            Err(Error::SeriesTerm { index, .. }) => assert_eq!(index, TermIndex::Outage { k: 0, l: 0 }),
            other => panic!("expected a tagged failure, got {other:?}"),
        }
    }
}
