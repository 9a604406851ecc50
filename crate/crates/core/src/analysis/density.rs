use super::config::SystemConfig;
use crate::special::{ln_gamma_real, modified_bessel_k};

/// Density of the first-hop SNR, the scaled product of two independent
/// gamma variates with shapes `n_s` and `n_r`.
pub fn pdf_gamma_sr(gamma: f64, config: &SystemConfig) -> f64 {
    assert!(gamma >= 0.0, "pdf_gamma_sr needs gamma >= 0, got {gamma}");
    if gamma == 0.0 {
        return 0.0;
    }
    let z = gamma / config.snr_sr();
    let k = modified_bessel_k(config.nu(), 2.0 * z.sqrt());
    if k == 0.0 {
        return 0.0;
    }
    let ln = std::f64::consts::LN_2
        - ln_gamma_real(config.n_s() as f64)
        - ln_gamma_real(config.n_r() as f64)
        - config.snr_sr().ln()
        + config.alpha() * z.ln()
        + k.ln();
    ln.exp()
}

/// Complementary CDF of the first-hop SNR in closed form:
/// `(2/Γ(n_r)) Σ_{i<n_s} z^{(n_r+i)/2} K_{n_r-i}(2√z) / i!` with `z = γ/γ̄_sr`.
pub fn ccdf_gamma_sr(gamma: f64, config: &SystemConfig) -> f64 {
    assert!(gamma >= 0.0, "ccdf_gamma_sr needs gamma >= 0, got {gamma}");
    if gamma == 0.0 {
        return 1.0;
    }
    let z = gamma / config.snr_sr();
    let n_r = config.n_r() as i32;
    let mut acc = 0.0;
    for i in 0..config.n_s() as i32 {
        let k = modified_bessel_k(n_r - i, 2.0 * z.sqrt());
        if k == 0.0 {
            continue;
        }
        let ln = 0.5 * (n_r + i) as f64 * z.ln() + k.ln() - ln_gamma_real(i as f64 + 1.0);
        acc += ln.exp();
    }
    (2.0 * acc / (ln_gamma_real(n_r as f64)).exp()).min(1.0)
}

/// Density of the exponentially distributed second-hop SNR.
pub fn pdf_gamma_rd(gamma: f64, config: &SystemConfig) -> f64 {
    assert!(gamma >= 0.0, "pdf_gamma_rd needs gamma >= 0, got {gamma}");
    (-gamma / config.snr_rd()).exp() / config.snr_rd()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::{integrate_1d, Tolerance};
    use num_complex::Complex64;

    const TOL: Tolerance = Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_panels: 4000,
    };

    fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        integrate_1d(|x| Ok(Complex64::new(f(x), 0.0)), a, b, 16, TOL)
            .unwrap()
            .value
            .re
    }

    #[test]
    fn value_at_one() {
        let c = SystemConfig::new(2, 2, 1.0, 1.0).unwrap();
        assert!((pdf_gamma_sr(1.0, &c) - 0.227_787_745_4).abs() < 1e-9);
        assert_eq!(pdf_gamma_sr(0.0, &c), 0.0);
    }

    #[test]
    fn normalization_and_mean() {
        for &(ns, nr, g) in &[(2, 2, 1.0), (4, 2, 1.0), (2, 3, 10.0), (3, 4, 0.5)] {
            let c = SystemConfig::new(ns, nr, g, 1.0).unwrap();
            let upper = 200.0 * g * (ns * nr) as f64;
            let mass = integrate(|x| pdf_gamma_sr(x, &c), 0.0, upper);
            let mean = integrate(|x| x * pdf_gamma_sr(x, &c), 0.0, upper);
            assert!((mass - 1.0).abs() < 1e-6, "{ns},{nr}: mass {mass}");
            let expected = (ns * nr) as f64 * g;
            assert!((mean / expected - 1.0).abs() < 5e-3, "{ns},{nr}: mean {mean}");
        }
    }

    #[test]
    fn ccdf_matches_integrated_density() {
        for &(ns, nr) in &[(2, 2), (4, 2), (2, 3)] {
            let c = SystemConfig::new(ns, nr, 2.0, 1.0).unwrap();
            for &x in &[0.05, 1.0, 7.0, 40.0] {
                let tail = 1.0 - integrate(|t| pdf_gamma_sr(t, &c), 0.0, x);
                assert!((ccdf_gamma_sr(x, &c) - tail).abs() < 1e-9, "{ns},{nr} at {x}");
            }
        }
    }

    #[test]
    fn exponential_second_hop() {
        let c = SystemConfig::new(2, 2, 1.0, 3.0).unwrap();
        assert_eq!(pdf_gamma_rd(0.0, &c), 1.0 / 3.0);
        assert!((pdf_gamma_rd(3.0, &c) - (-1f64).exp() / 3.0).abs() < 1e-15);
        let mean = integrate(|x| x * pdf_gamma_rd(x, &c), 0.0, 150.0);
        assert!((mean - 3.0).abs() < 1e-9);
    }
}
