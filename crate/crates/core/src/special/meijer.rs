//! Meijer G-functions of one and two variables by quadrature along truncated
//! vertical Mellin-Barnes contours.
//!
//! Sign convention: the univariate integrand is
//!
//! ```text
//! ∏_{k<=m} Γ(b_k - s) ∏_{j<=n} Γ(1 - a_j + s)
//! ------------------------------------------- z^s
//! ∏_{k>m} Γ(1 - b_k + s) ∏_{j>n} Γ(a_j - s)
//! ```
//!
//! integrated upward along `Re s = cs`, which is the orientation the
//! bivariate integrand uses for each of its single-variable groups.
//!
//! The line `s = c + iτ`, `|τ| <= W`, is reparametrised as `τ = W sin(πu/2)`
//! so the quadrature nodes cluster toward the truncation points. The largest
//! log-magnitude on the line is factored out before exponentiating so that
//! gamma products far beyond `f64` range in isolation still combine safely.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::contour::{BivariateGSpec, ContourSpec, MeijerGSpec};
use super::gamma::{is_gamma_pole, ln_gamma, ln_gamma_prod};
use super::quadrature::{integrate_1d, integrate_2d, Tolerance, NODES};
use crate::error::{Error, Result};

const INITIAL_PANELS_1D: usize = 8;
const INITIAL_TILES_2D: usize = 4;

/// `-Σ ln Γ(params_i + z)`, or `None` when a factor sits on a pole (the
/// reciprocal gamma vanishes there).
fn ln_recip_gamma_prod(params: &[f64], z: Complex64) -> Option<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in params {
        let arg = z + p;
        if is_gamma_pole(arg) {
            return None;
        }
        acc -= ln_gamma(arg);
    }
    Some(acc)
}

fn one_minus(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| 1.0 - x).collect()
}

/// Maps `u ∈ [-1, 1]` onto the contour; returns the point and `dτ/du`.
fn contour_point(c: f64, w: f64, u: f64) -> (Complex64, f64) {
    let (sin, cos) = (FRAC_PI_2 * u).sin_cos();
    (Complex64::new(c, w * sin), w * FRAC_PI_2 * cos)
}

/// A real value stored as `mantissa · exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl ScaledValue {
    pub fn value(&self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }
}

/// Realness check in scaled units, then drop the imaginary part. `roundoff`
/// is the resolution of the quadrature, in the same units as `scaled`.
fn finish(scaled: Complex64, roundoff: f64, ln_scale: f64, contour: &ContourSpec) -> Result<ScaledValue> {
    if !scaled.re.is_finite() {
        return Err(Error::NonFinite("Meijer G value"));
    }
    let abs_scaled = contour.abs_tol * (-ln_scale).exp().min(f64::MAX);
    let bound = abs_scaled.max(contour.rel_tol * scaled.re.abs()).max(roundoff);
    if scaled.im.abs() > bound {
        return Err(Error::ImaginaryResidue {
            imag: scaled.im * ln_scale.exp(),
            tol: bound * ln_scale.exp(),
        });
    }
    Ok(ScaledValue {
        mantissa: scaled.re,
        ln_scale,
    })
}

fn unscale(v: ScaledValue) -> Result<f64> {
    let out = v.value();
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("Meijer G value"))
    }
}

struct Univariate {
    num_minus: Vec<f64>,
    num_plus: Vec<f64>,
    den_plus: Vec<f64>,
    den_minus: Vec<f64>,
    ln_z: f64,
}

impl Univariate {
    fn new(spec: &MeijerGSpec, ln_z: f64) -> Self {
        let (m, n) = (spec.m(), spec.n());
        Self {
            num_minus: spec.b()[..m].to_vec(),
            num_plus: one_minus(&spec.a()[..n]),
            den_plus: one_minus(&spec.b()[m..]),
            den_minus: spec.a()[n..].to_vec(),
            ln_z,
        }
    }

    /// Log of the integrand; `Ok(None)` where a reciprocal gamma vanishes.
    fn ln_integrand(&self, s: Complex64) -> Result<Option<Complex64>> {
        let num = ln_gamma_prod(&self.num_minus, -s)? + ln_gamma_prod(&self.num_plus, s)?;
        let Some(den_p) = ln_recip_gamma_prod(&self.den_plus, s) else {
            return Ok(None);
        };
        let Some(den_m) = ln_recip_gamma_prod(&self.den_minus, -s) else {
            return Ok(None);
        };
        Ok(Some(num + den_p + den_m + s * self.ln_z))
    }
}

fn reference_scale(samples: impl IntoIterator<Item = Result<Option<Complex64>>>) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for s in samples {
        if let Some(v) = s? {
            best = best.max(v.re);
        }
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}

/// `exp(ln_factor) · G^{m,n}_{p,q}(z | a; b)`.
///
/// Folding a power or scale factor into the integrand keeps products such as
/// `z^{40} G(z | ...)` representable when each factor alone would over- or
/// underflow.
pub fn meijer_g_scaled(spec: &MeijerGSpec, z: f64, ln_factor: f64, contour: &ContourSpec) -> Result<f64> {
    unscale(meijer_g_log(spec, z, ln_factor, contour)?)
}

/// [`meijer_g_scaled`] returned in mantissa/exponent form, for values that do
/// not fit in an `f64`.
pub fn meijer_g_log(spec: &MeijerGSpec, z: f64, ln_factor: f64, contour: &ContourSpec) -> Result<ScaledValue> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "Meijer G argument must be positive, got {z}"
        )));
    }
    contour.validate()?;
    let integrand = Univariate::new(spec, z.ln());
    let (c, w) = (contour.cs, contour.half_length);
    let ln_scale = reference_scale(
        [0.0, 0.1, -0.1, 0.5, -0.5]
            .iter()
            .map(|&u| integrand.ln_integrand(contour_point(c, w, u).0)),
    )?;
    let norm = ln_scale + ln_factor;
    let tol = Tolerance {
        abs_tol: contour.abs_tol * (-ln_scale - ln_factor).exp().min(f64::MAX),
        rel_tol: contour.rel_tol,
        max_panels: contour.max_evals,
    };
    let r = integrate_1d(
        |u| {
            let (s, jac) = contour_point(c, w, u);
            Ok(match integrand.ln_integrand(s)? {
                Some(l) => (l - ln_scale).exp() * jac,
                None => Complex64::new(0.0, 0.0),
            })
        },
        -1.0,
        1.0,
        INITIAL_PANELS_1D,
        tol,
    )?;
    finish(r.value / (2.0 * PI), r.roundoff() / (2.0 * PI), norm, contour)
}

/// `G^{m,n}_{p,q}(z | a; b)` for real `z > 0`.
pub fn meijer_g(spec: &MeijerGSpec, z: f64, contour: &ContourSpec) -> Result<f64> {
    meijer_g_scaled(spec, z, 0.0, contour)
}

struct Bivariate<'a> {
    spec: &'a BivariateGSpec,
    one_minus_cm2: Vec<f64>,
    one_minus_dq2: Vec<f64>,
    one_minus_em3: Vec<f64>,
    one_minus_fq3: Vec<f64>,
    one_minus_ap1: Vec<f64>,
    ln_x: f64,
    ln_y: f64,
}

impl<'a> Bivariate<'a> {
    fn new(spec: &'a BivariateGSpec, x: f64, y: f64) -> Self {
        Self {
            spec,
            one_minus_cm2: one_minus(&spec.cm2),
            one_minus_dq2: one_minus(&spec.dq2),
            one_minus_em3: one_minus(&spec.em3),
            one_minus_fq3: one_minus(&spec.fq3),
            one_minus_ap1: one_minus(&spec.ap1),
            ln_x: x.ln(),
            ln_y: y.ln(),
        }
    }

    fn ln_s_part(&self, s: Complex64) -> Result<Option<Complex64>> {
        let num = ln_gamma_prod(&self.one_minus_cm2, s)? + ln_gamma_prod(&self.spec.dn2, -s)?;
        let Some(d1) = ln_recip_gamma_prod(&self.spec.cp2, -s) else {
            return Ok(None);
        };
        let Some(d2) = ln_recip_gamma_prod(&self.one_minus_dq2, s) else {
            return Ok(None);
        };
        Ok(Some(num + d1 + d2 + s * self.ln_x))
    }

    fn ln_t_part(&self, t: Complex64) -> Result<Option<Complex64>> {
        let num = ln_gamma_prod(&self.one_minus_em3, t)? + ln_gamma_prod(&self.spec.fn3, -t)?;
        let Some(d1) = ln_recip_gamma_prod(&self.spec.ep3, -t) else {
            return Ok(None);
        };
        let Some(d2) = ln_recip_gamma_prod(&self.one_minus_fq3, t) else {
            return Ok(None);
        };
        Ok(Some(num + d1 + d2 + t * self.ln_y))
    }

    fn ln_joint(&self, st: Complex64) -> Result<Option<Complex64>> {
        let num = ln_gamma_prod(&self.spec.am1, st)?;
        let Some(d1) = ln_recip_gamma_prod(&self.one_minus_ap1, -st) else {
            return Ok(None);
        };
        let Some(d2) = ln_recip_gamma_prod(&self.spec.bq1, st) else {
            return Ok(None);
        };
        Ok(Some(num + d1 + d2))
    }

    fn ln_integrand(&self, s: Complex64, t: Complex64) -> Result<Option<Complex64>> {
        let (Some(a), Some(b), Some(c)) = (self.ln_s_part(s)?, self.ln_t_part(t)?, self.ln_joint(s + t)?) else {
            return Ok(None);
        };
        Ok(Some(a + b + c))
    }
}

/// Two-variable Meijer G-function: `(1/(2πi))²` times the double contour
/// integral of the integrand documented on [`BivariateGSpec`].
pub fn bivariate_meijer_g(spec: &BivariateGSpec, x: f64, y: f64, contour: &ContourSpec) -> Result<f64> {
    unscale(bivariate_meijer_g_log(spec, x, y, 0.0, contour)?)
}

/// `exp(ln_factor)` times [`bivariate_meijer_g`], in mantissa/exponent form.
pub fn bivariate_meijer_g_log(
    spec: &BivariateGSpec,
    x: f64,
    y: f64,
    ln_factor: f64,
    contour: &ContourSpec,
) -> Result<ScaledValue> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "bivariate Meijer G arguments must be positive, got ({x}, {y})"
        )));
    }
    contour.validate()?;
    spec.validate()?;
    let integrand = Bivariate::new(spec, x, y);
    let (cs, ct, w) = (contour.cs, contour.ct, contour.half_length);
    let probes = [
        (0.0, 0.0),
        (0.2, 0.0),
        (0.0, 0.2),
        (-0.2, 0.0),
        (0.0, -0.2),
        (0.2, -0.2),
        (-0.2, 0.2),
    ];
    let ln_scale = reference_scale(
        probes
            .iter()
            .map(|&(u, v)| integrand.ln_integrand(contour_point(cs, w, u).0, contour_point(ct, w, v).0)),
    )?;
    let norm = ln_scale + ln_factor;
    let tol = Tolerance {
        abs_tol: contour.abs_tol * (-ln_scale - ln_factor).exp().min(f64::MAX),
        rel_tol: contour.rel_tol,
        max_panels: contour.max_evals,
    };
    let mut s_part = [None; NODES];
    let mut t_part = [None; NODES];
    let mut s_pts = [Complex64::new(0.0, 0.0); NODES];
    let mut t_pts = [Complex64::new(0.0, 0.0); NODES];
    let r = integrate_2d(
        |us, vs, out| {
            for i in 0..NODES {
                let (s, js) = contour_point(cs, w, us[i]);
                s_pts[i] = s;
                s_part[i] = integrand.ln_s_part(s)?.map(|l| l + js.ln());
                let (t, jt) = contour_point(ct, w, vs[i]);
                t_pts[i] = t;
                t_part[i] = integrand.ln_t_part(t)?.map(|l| l + jt.ln());
            }
            for i in 0..NODES {
                for j in 0..NODES {
                    out[i * NODES + j] = match (s_part[i], t_part[j]) {
                        (Some(a), Some(b)) => match integrand.ln_joint(s_pts[i] + t_pts[j])? {
                            Some(c) => (a + b + c - ln_scale).exp(),
                            None => Complex64::new(0.0, 0.0),
                        },
                        _ => Complex64::new(0.0, 0.0),
                    };
                }
            }
            Ok(())
        },
        [-1.0, -1.0],
        [1.0, 1.0],
        INITIAL_TILES_2D,
        tol,
    )?;
    finish(r.value / (4.0 * PI * PI), r.roundoff() / (4.0 * PI * PI), norm, contour)
}
