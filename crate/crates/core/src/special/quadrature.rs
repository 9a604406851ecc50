//! Globally adaptive Gauss-Kronrod quadrature of complex-valued integrands on
//! intervals and rectangles.
//!
//! A "panel" is one 15-point Kronrod segment in 1-D or one 15x15 tensor tile in
//! 2-D, and evaluation budgets are counted in panels. The error estimate of a
//! panel is the distance between the Kronrod and the embedded 7-point Gauss
//! results. Refinement also stops once that estimate reaches the roundoff
//! level `50 ε ∫|f|`, below which further splitting cannot help.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Number of nodes in one Kronrod panel along each axis.
pub const NODES: usize = 15;

/// Reference nodes on [-1, 1] with Kronrod and Gauss weights (Gauss weight is
/// zero on Kronrod-only nodes).
fn reference_rule() -> ([f64; NODES], [f64; NODES], [f64; NODES]) {
    let mut x = [0.0; NODES];
    let mut wk = [0.0; NODES];
    let mut wg = [0.0; NODES];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[NODES - 1 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[NODES - 1 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[NODES - 1 - i] = WG[i / 2];
        }
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (x, wk, wg)
}

/// Stopping rule shared by the 1-D and 2-D drivers.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Tolerance {
    fn bound(&self, estimate: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.norm())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    /// Integral of `|f|`, which sets the roundoff level of `value`.
    pub magnitude: f64,
    pub panels: usize,
}

impl QuadratureResult {
    /// Absolute error below which the result cannot be resolved in `f64`.
    pub fn roundoff(&self) -> f64 {
        ROUNDOFF * self.magnitude
    }
}

struct Panel<const D: usize> {
    lo: [f64; D],
    hi: [f64; D],
    value: Complex64,
    error: f64,
    magnitude: f64,
}

/// Kronrod value, error estimate and Kronrod integral of `|f|` of one panel.
type PanelResult = (Complex64, f64, f64);

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

impl<const D: usize> PartialEq for Panel<D> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<const D: usize> Eq for Panel<D> {}
impl<const D: usize> PartialOrd for Panel<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const D: usize> Ord for Panel<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn drive<const D: usize, E>(initial: Vec<([f64; D], [f64; D])>, tol: Tolerance, mut eval: E) -> Result<QuadratureResult>
where
    E: FnMut(&[f64; D], &[f64; D]) -> Result<PanelResult>,
{
    let mut heap = BinaryHeap::new();
    let mut panels = 0usize;
    for (lo, hi) in initial {
        let (value, error, magnitude) = eval(&lo, &hi)?;
        panels += 1;
        heap.push(Panel {
            lo,
            hi,
            value,
            error,
            magnitude,
        });
    }
    let children = 1usize << D;
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let magnitude: f64 = heap.iter().map(|p| p.magnitude).sum();
        if !(value.re.is_finite() && value.im.is_finite() && error.is_finite()) {
            return Err(Error::NonFinite("quadrature"));
        }
        if error <= tol.bound(value) || error <= ROUNDOFF * magnitude {
            return Ok(QuadratureResult {
                value,
                error,
                magnitude,
                panels,
            });
        }
        if panels + children > tol.max_panels {
            return Err(Error::QuadratureNonConvergence {
                evals: panels,
                estimate: value.re,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        for c in 0..children {
            let mut lo = worst.lo;
            let mut hi = worst.hi;
            for d in 0..D {
                let mid = 0.5 * (worst.lo[d] + worst.hi[d]);
                if c >> d & 1 == 0 {
                    hi[d] = mid;
                } else {
                    lo[d] = mid;
                }
            }
            let (value, error, magnitude) = eval(&lo, &hi)?;
            panels += 1;
            heap.push(Panel {
                lo,
                hi,
                value,
                error,
                magnitude,
            });
        }
    }
}

/// Integrate `f` over `[a, b]`, starting from `initial` equal panels.
pub fn integrate_1d<F>(mut f: F, a: f64, b: f64, initial: usize, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let (x, wk, wg) = reference_rule();
    let n = initial.max(1);
    let h = (b - a) / n as f64;
    let panels = (0..n)
        .map(|i| {
            (
                [a + i as f64 * h],
                [if i + 1 == n { b } else { a + (i + 1) as f64 * h }],
            )
        })
        .collect();
    drive::<1, _>(panels, tol, |lo, hi| {
        let half = 0.5 * (hi[0] - lo[0]);
        let mid = 0.5 * (hi[0] + lo[0]);
        let mut k = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for i in 0..NODES {
            let v = f(mid + half * x[i])?;
            k += v * wk[i];
            g += v * wg[i];
            a += v.norm() * wk[i];
        }
        Ok((k * half, ((k - g) * half).norm(), a * half.abs()))
    })
}

/// Integrate over the rectangle `[a0, b0] x [a1, b1]`.
///
/// `grid(xs, ys, out)` must fill `out[i * 15 + j]` with the integrand at
/// `(xs[i], ys[j])`; evaluating a whole tensor tile at once lets callers share
/// factors that depend on one coordinate only.
pub fn integrate_2d<G>(
    mut grid: G,
    lo: [f64; 2],
    hi: [f64; 2],
    initial: usize,
    tol: Tolerance,
) -> Result<QuadratureResult>
where
    G: FnMut(&[f64; NODES], &[f64; NODES], &mut [Complex64; NODES * NODES]) -> Result<()>,
{
    let (x, wk, wg) = reference_rule();
    let n = initial.max(1);
    let h = [(hi[0] - lo[0]) / n as f64, (hi[1] - lo[1]) / n as f64];
    let mut tiles = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            tiles.push((
                [lo[0] + i as f64 * h[0], lo[1] + j as f64 * h[1]],
                [lo[0] + (i + 1) as f64 * h[0], lo[1] + (j + 1) as f64 * h[1]],
            ));
        }
    }
    let mut values = [Complex64::new(0.0, 0.0); NODES * NODES];
    drive::<2, _>(tiles, tol, |l, u| {
        let hx = 0.5 * (u[0] - l[0]);
        let hy = 0.5 * (u[1] - l[1]);
        let mx = 0.5 * (u[0] + l[0]);
        let my = 0.5 * (u[1] + l[1]);
        let xs: [f64; NODES] = std::array::from_fn(|i| mx + hx * x[i]);
        let ys: [f64; NODES] = std::array::from_fn(|j| my + hy * x[j]);
        grid(&xs, &ys, &mut values)?;
        let mut k = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for i in 0..NODES {
            let mut rk = Complex64::new(0.0, 0.0);
            let mut rg = Complex64::new(0.0, 0.0);
            let mut ra = 0.0;
            for j in 0..NODES {
                let v = values[i * NODES + j];
                rk += v * wk[j];
                rg += v * wg[j];
                ra += v.norm() * wk[j];
            }
            k += rk * wk[i];
            g += rg * wg[i];
            a += ra * wk[i];
        }
        let area = hx * hy;
        Ok((k * area, ((k - g) * area).norm(), a * area.abs()))
    })
}
