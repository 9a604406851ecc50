use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::analysis::SystemConfig;
use crate::error::{Error, Result};

/// Antenna counts and average SNRs of one relaying chain. Unlike
/// [`SystemConfig`] this admits single-antenna relays, which the AF baseline
/// needs for its reduction to the PF chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub n_s: u32,
    pub n_r: u32,
    pub snr_sr: f64,
    pub snr_rd: f64,
}

impl From<&SystemConfig> for ChainParams {
    fn from(c: &SystemConfig) -> Self {
        Self {
            n_s: c.n_s(),
            n_r: c.n_r(),
            snr_sr: c.snr_sr(),
            snr_rd: c.snr_rd(),
        }
    }
}

/// `‖g‖²` of a vector of `n` standard complex Gaussians, a unit-scale gamma
/// variate of shape `n`.
fn gain<R: Rng + ?Sized>(n: u32, rng: &mut R) -> f64 {
    (0..n).map(|_| complex_gaussian(rng).norm_sqr()).sum()
}

/// Standard circularly-symmetric complex Gaussian, variance ½ per real
/// dimension.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn pinhole_snr<R: Rng + ?Sized>(p: &ChainParams, rng: &mut R) -> f64 {
    let g_s = gain(p.n_s, rng);
    let g_r = gain(p.n_r, rng);
    p.snr_sr * g_s * g_r
}

/// First-hop SNR `γ̄_sr ‖g_s‖² ‖g_r‖²`, each squared norm a unit-scale gamma
/// variate of shape `n_i`.
///
/// All samplers in this module draw the same complex Gaussian entries in the
/// same order (`g_s`, then `g_r`, then r-d coefficients), so runs sharing a
/// seed are coupled draw by draw.
pub fn sample_pinhole_snr<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    pinhole_snr(&ChainParams::from(config), rng)
}

/// Output of the QR projection of a rank-one channel.
#[derive(Debug, Clone)]
pub struct QrProjection {
    /// Upper-triangular factor, `n_r x n_s`.
    pub r: DMatrix<Complex64>,
    /// First row of `r`.
    pub h_r: Vec<Complex64>,
}

/// QR factorisation of `H = g_r g_s^H`. Fails when `H` is numerically zero.
pub fn qr_projection(g_s: &[Complex64], g_r: &[Complex64]) -> Result<QrProjection> {
    let h = DMatrix::from_fn(g_r.len(), g_s.len(), |i, j| g_r[i] * g_s[j].conj());
    if h.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::NonFinite("degenerate channel draw"));
    }
    // pad to a square matrix so that `r` is n_r x n_s with explicit zero rows
    let (nr, ns) = h.shape();
    let cols = ns.max(nr);
    let padded = DMatrix::from_fn(
        nr,
        cols,
        |i, j| if j < ns { h[(i, j)] } else { Complex64::new(0.0, 0.0) },
    );
    let full_r = padded.qr().r();
    let r = DMatrix::from_fn(nr, ns, |i, j| {
        if i < full_r.nrows() {
            full_r[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let h_r = (0..ns).map(|j| r[(0, j)]).collect();
    Ok(QrProjection { r, h_r })
}

/// First-hop SNR through explicit channel vectors and a QR projection,
/// `γ̄_sr ‖h_r‖²`. A degenerate draw is retried once.
pub fn sample_qr_dof_snr<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Result<f64> {
    let mut last = None;
    for _ in 0..2 {
        let g_s = gaussian_vector(config.n_s(), rng);
        let g_r = gaussian_vector(config.n_r(), rng);
        match qr_projection(&g_s, &g_r) {
            Ok(p) => return Ok(config.snr_sr() * norm_sq(&p.h_r)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("two attempts made"))
}

fn e2e(sr: f64, rd: f64) -> f64 {
    sr * rd / (sr + rd + 1.0)
}

/// End-to-end PF SNR for possibly single-antenna relays.
pub fn sample_pf_snr<R: Rng + ?Sized>(p: &ChainParams, rng: &mut R) -> f64 {
    let sr = pinhole_snr(p, rng);
    let rd = p.snr_rd * complex_gaussian(rng).norm_sqr();
    e2e(sr, rd)
}

/// End-to-end SNR `γ_sr γ_rd / (γ_sr + γ_rd + 1)` of the PF chain.
pub fn sample_e2e_snr<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    sample_pf_snr(&ChainParams::from(config), rng)
}

/// End-to-end SNR of the per-antenna CSI-assisted AF baseline.
///
/// The source beamforms along `g_s`, so relay antenna `n` sees the scalar
/// channel `h_n = g_{r,n} ‖g_s‖`. Each antenna scales its received sample by
/// the real gain `(γ̄_sr |h_n|² + 1)^{-1/2}` (it knows only its own s-r
/// channel) and transmits with power `1/n_r` over its own r-d coefficient
/// `f_n`. The branches superpose at the destination, which detects coherently
/// against the composite channel, so
///
/// ```text
///            γ̄_sr γ̄_rd |Σ_n f_n h_n a_n|² / n_r
/// SNR = --------------------------------------   a_n = (γ̄_sr |h_n|² + 1)^{-1/2}
///         1 + γ̄_rd Σ_n |f_n|² a_n² / n_r
/// ```
///
/// For `n_r = 1` this is the PF end-to-end SNR, and draws are consumed in the
/// same order as [`sample_pf_snr`].
pub fn sample_af_snr<R: Rng + ?Sized>(p: &ChainParams, rng: &mut R) -> f64 {
    let norm_s = gain(p.n_s, rng).sqrt();
    let h: Vec<Complex64> = (0..p.n_r).map(|_| complex_gaussian(rng) * norm_s).collect();
    let nr = p.n_r as f64;
    let mut signal = Complex64::new(0.0, 0.0);
    let mut noise = 0.0;
    for h_n in &h {
        let f_n = complex_gaussian(rng);
        let a_sq = 1.0 / (p.snr_sr * h_n.norm_sqr() + 1.0);
        signal += f_n * h_n * a_sq.sqrt();
        noise += f_n.norm_sqr() * a_sq;
    }
    p.snr_sr * p.snr_rd * signal.norm_sqr() / nr / (1.0 + p.snr_rd * noise / nr)
}
