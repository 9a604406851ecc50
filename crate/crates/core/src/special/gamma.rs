//! Gamma-function machinery on the complex plane.
//!
//! Every Mellin-Barnes integrand in this crate is a ratio of gamma products,
//! so everything is carried as a logarithm and exponentiated once. The
//! imaginary part of [`ln_gamma`] is only defined modulo `2π`; that is enough
//! because the value is always exponentiated.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const SHIFT_TARGET: f64 = 12.0;
const POLE_EPS: f64 = 1e-12;

/// True when `z` sits on a pole of Γ (a non-positive integer).
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im.abs() < POLE_EPS && z.re < 0.5 && (z.re - z.re.round()).abs() < POLE_EPS
}

/// `ln Γ(z)` for complex `z` away from the poles.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut ln_shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET {
        prod *= w;
        if prod.norm_sqr() > 1e200 {
            ln_shift += prod.ln();
            prod = Complex64::new(1.0, 0.0);
        }
        w += 1.0;
    }
    ln_shift += prod.ln();
    stirling(w) - ln_shift
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 15.0 {
        return (z * PI).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = e^{-iπz} (1 - e^{2iπz}) i/2, with |e^{2iπz}| tiny here
    let i = Complex64::new(0.0, 1.0);
    let e2 = (i * z * (2.0 * PI)).exp();
    -i * z * PI + (Complex64::new(1.0, 0.0) - e2).ln() + Complex64::new(-(2.0f64).ln(), PI / 2.0)
}

/// `Σ_i ln Γ(params_i + z)`; errors on a pole.
pub fn ln_gamma_prod(params: &[f64], z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in params {
        let arg = z + p;
        if is_gamma_pole(arg) {
            return Err(Error::Pole(arg));
        }
        acc += ln_gamma(arg);
    }
    Ok(acc)
}

/// `∏_i Γ(params_i + z)`, exactly 1 for an empty list.
pub fn gamma_prod(params: &[f64], z: Complex64) -> Result<Complex64> {
    if params.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ln = ln_gamma_prod(params, z)?;
    let v = ln.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite("gamma product"));
    }
    Ok(v)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// ψ(n) = -γ_E + Σ_{j<n} 1/j for positive integer `n`.
pub fn digamma(n: u32) -> f64 {
    assert!(n >= 1, "digamma is defined here for positive integers only");
    (1..n).fold(-EULER_GAMMA, |acc, j| acc + 1.0 / j as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_prod_examples() {
        assert_eq!(gamma_prod(&[], c(3.0, 2.0)).unwrap(), c(1.0, 0.0));
        let g2 = gamma_prod(&[1.0], c(1.0, 0.0)).unwrap();
        assert!((g2.re - 1.0).abs() < 1e-14 && g2.im.abs() < 1e-14);
        let g = gamma_prod(&[2.0, 3.0], c(0.0, 0.0)).unwrap();
        assert!((g.re - 2.0).abs() < 1e-13 && g.im.abs() < 1e-13);
    }

    #[test]
    fn gamma_prod_signals_pole() {
        assert!(matches!(gamma_prod(&[0.5], c(-2.5, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_prod(&[1.0, 2.0], c(-1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn factorials_and_half_integers() {
        let mut fact = 1.0f64;
        for n in 1..30u32 {
            fact *= n as f64;
            let lg = ln_gamma_real(n as f64 + 1.0);
            assert!((lg - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0), "n={n}");
        }
        assert!((ln_gamma_real(0.5) - PI.sqrt().ln()).abs() < 1e-14);
        // Γ(-1/2) = -2√π, so exp(lnΓ) must carry the sign.
        let v = ln_gamma(c(-0.5, 0.0)).exp();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-13, "{v}");
    }

    #[test]
    fn modulus_on_imaginary_lines() {
        // |Γ(iy)|² = π / (y sinh πy), |Γ(1/2 + iy)|² = π / cosh πy
        for &y in &[0.3, 1.0, 4.0, 12.0, 20.0, 40.0] {
            let lhs = 2.0 * ln_gamma(c(0.0, y)).re;
            let rhs = PI.ln() - y.ln() - (PI * y).sinh().ln();
            assert!((lhs - rhs).abs() < 1e-11, "y={y}: {lhs} vs {rhs}");
            let lhs = 2.0 * ln_gamma(c(0.5, y)).re;
            let rhs = PI.ln() - (PI * y).cosh().ln();
            assert!((lhs - rhs).abs() < 1e-11, "y={y}");
        }
    }

    #[test]
    fn recurrence_far_left() {
        // Γ(z+1) = zΓ(z) deep in the left half plane and off axis
        for &(x, y) in &[(-30.3, 0.7), (-7.5, -18.0), (-55.25, 3.0), (0.2, 25.0)] {
            let z = c(x, y);
            let lhs = ln_gamma(z + 1.0).exp() / ln_gamma(z).exp();
            let rel = (lhs - z).norm() / z.norm();
            assert!(rel < 1e-11, "z={z}: rel {rel}");
        }
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1) + 0.577_215_664_9).abs() < 1e-10);
        assert!((digamma(2) - 0.422_784_335_1).abs() < 1e-10);
        assert!((digamma(4) - (-EULER_GAMMA + 1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
    }
}
