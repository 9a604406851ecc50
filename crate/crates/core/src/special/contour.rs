//! Parameter bundles for Mellin-Barnes integrals and placement of the
//! vertical integration lines.

use log::warn;

use crate::error::{Error, Result};

/// Poles closer than this to the integration line trigger a nudge.
const POLE_PROXIMITY: f64 = 1e-3;
const NUDGE_FRACTION: f64 = 0.1;

/// Parameters of `G^{m,n}_{p,q}(z | a; b)` with `p = a.len()`, `q = b.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MeijerGSpec {
    /// Builds the spec, rejecting index overflows and pole collisions
    /// (`a_j - b_k` a positive integer for `j <= n`, `k <= m`).
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::InvalidParameters(format!(
                "need m <= q and n <= p, got m={m}, n={n}, p={}, q={}",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("non-finite parameter".into()));
        }
        for &aj in &a[..n] {
            for &bk in &b[..m] {
                let d = aj - bk;
                if d > 0.5 && (d - d.round()).abs() < 1e-12 {
                    return Err(Error::PoleCollision { a: aj, b: bk });
                }
            }
        }
        Ok(Self { m, n, a, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.a.len()
    }
    pub fn q(&self) -> usize {
        self.b.len()
    }
    pub fn a(&self) -> &[f64] {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Leftmost pole generated by `Γ(b_k - s)`, `k <= m`.
    pub(crate) fn right_boundary(&self) -> Option<f64> {
        min_of(&self.b[..self.m])
    }

    /// Rightmost pole generated by `Γ(1 - a_j + s)`, `j <= n`.
    pub(crate) fn left_boundary(&self) -> Option<f64> {
        max_of(&self.a[..self.n]).map(|v| v - 1.0)
    }
}

/// Parameter groups of the two-variable Meijer G-function, named after the
/// argument order of the reference MATLAB routine: joint group
/// (`am1, ap1, bn1, bq1`), first-argument group (`cm2, cp2, dn2, dq2`) and
/// second-argument group (`em3, ep3, fn3, fq3`).
///
/// The integrand is
///
/// ```text
/// Γ(am1+s+t) Γ(1-cm2+s) Γ(dn2-s) Γ(1-em3+t) Γ(fn3-t) x^s y^t
/// -----------------------------------------------------------------------------------
/// Γ(1-ap1-(s+t)) Γ(bq1+s+t) Γ(cp2-s) Γ(1-dq2+s) Γ(ep3-t) Γ(1-fq3+t)
/// ```
///
/// with every list contributing a product over its entries (empty lists
/// contribute 1). `bn1` is carried for signature compatibility and does not
/// enter the integrand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BivariateGSpec {
    pub am1: Vec<f64>,
    pub ap1: Vec<f64>,
    pub bn1: Vec<f64>,
    pub bq1: Vec<f64>,
    pub cm2: Vec<f64>,
    pub cp2: Vec<f64>,
    pub dn2: Vec<f64>,
    pub dq2: Vec<f64>,
    pub em3: Vec<f64>,
    pub ep3: Vec<f64>,
    pub fn3: Vec<f64>,
    pub fq3: Vec<f64>,
}

impl BivariateGSpec {
    pub(crate) fn validate(&self) -> Result<()> {
        let all = [
            &self.am1, &self.ap1, &self.bn1, &self.bq1, &self.cm2, &self.cp2, &self.dn2, &self.dq2, &self.em3,
            &self.ep3, &self.fn3, &self.fq3,
        ];
        if all.iter().flat_map(|v| v.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("non-finite bivariate parameter".into()));
        }
        Ok(())
    }
}

/// Vertical integration lines `Re s = cs`, `Re t = ct`, truncated to
/// `|Im| <= half_length`, plus quadrature controls.
///
/// `max_evals` counts quadrature panels: 15-point segments for the
/// univariate integral, 15x15 tiles for the bivariate one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub cs: f64,
    pub ct: f64,
    pub half_length: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            cs: 0.0,
            ct: 0.0,
            half_length: 10.0,
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            max_evals: 2000,
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.cs.is_finite()
            && self.ct.is_finite()
            && self.half_length > 0.0
            && self.half_length.is_finite()
            && self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_evals >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("invalid contour {self:?}")))
        }
    }

    pub fn with_half_length(mut self, w: f64) -> Self {
        self.half_length = w;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }
}

fn min_of(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::min)
}

fn max_of(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::max)
}

/// Moves `c` toward the middle of `(left, right)` by a tenth of the gap when
/// it sits within `POLE_PROXIMITY` of either boundary.
fn nudge(c: f64, left: Option<f64>, right: Option<f64>, axis: &str) -> f64 {
    let near = |p: Option<f64>| p.is_some_and(|p| (c - p).abs() < POLE_PROXIMITY);
    if !(near(left) || near(right)) {
        return c;
    }
    match (left, right) {
        (Some(l), Some(r)) if r > l => {
            let mid = 0.5 * (l + r);
            let step = NUDGE_FRACTION * (r - l);
            let moved = if c < mid {
                (c + step).min(mid)
            } else {
                (c - step).max(mid)
            };
            warn!("{axis}-contour at {c} is within {POLE_PROXIMITY} of a pole; nudged to {moved}");
            moved
        }
        _ => {
            warn!("{axis}-contour at {c} is within {POLE_PROXIMITY} of a pole and cannot be nudged");
            c
        }
    }
}

/// Places the line between the two pole families of `spec` at the midpoint of
/// their boundaries, or one unit away from the only non-empty family.
/// Half-length and tolerances come from `base`.
pub fn auto_contour_univariate_with(spec: &MeijerGSpec, base: &ContourSpec) -> Result<ContourSpec> {
    let left = spec.left_boundary();
    let right = spec.right_boundary();
    let c = match (left, right) {
        (Some(l), Some(r)) => {
            if l >= r {
                return Err(Error::NoSeparatingContour { left: l, right: r });
            }
            0.5 * (l + r)
        }
        (Some(l), None) => l + 1.0,
        (None, Some(r)) => r - 1.0,
        (None, None) => 0.0,
    };
    Ok(ContourSpec {
        cs: nudge(c, left, right, "s"),
        ..*base
    })
}

/// [`auto_contour_univariate_with`] on the default half-length and tolerances.
pub fn auto_contour_univariate(spec: &MeijerGSpec) -> Result<ContourSpec> {
    auto_contour_univariate_with(spec, &ContourSpec::default())
}

/// Contour rule of the reference MATLAB routine:
///
/// ```text
/// Sups = min(dn2);  Infs = -max(1 - cm2);  cs = (Sups + Infs) / 2
/// Supt = min(fn3);  Inft = max([-am1 - cs, em3 - 1]);  ct = Supt - (Supt - Inft) / 10
/// ```
///
/// When one side of a pair is empty the line goes one unit away from the
/// other; when both are empty the group is reported missing. `x` and `y` do
/// not move the lines; they are accepted so callers can adapt `half_length`.
pub fn auto_contour_bivariate_with(spec: &BivariateGSpec, base: &ContourSpec) -> Result<ContourSpec> {
    spec.validate()?;
    let sups = min_of(&spec.dn2);
    let infs = max_of(&spec.cm2.iter().map(|c| 1.0 - c).collect::<Vec<_>>()).map(|v| -v);
    let cs = match (infs, sups) {
        (Some(l), Some(r)) => 0.5 * (l + r),
        (Some(l), None) => l + 1.0,
        (None, Some(r)) => r - 1.0,
        (None, None) => return Err(Error::MissingParameterGroup("dn2 and cm2")),
    };
    let cs = nudge(cs, infs, sups, "s");

    let supt = min_of(&spec.fn3);
    let inft = spec
        .am1
        .iter()
        .map(|a| -a - cs)
        .chain(spec.em3.iter().map(|e| e - 1.0))
        .reduce(f64::max);
    let ct = match (inft, supt) {
        (Some(l), Some(r)) => r - (r - l) / 10.0,
        (Some(l), None) => l + 1.0,
        (None, Some(r)) => r - 1.0,
        (None, None) => return Err(Error::MissingParameterGroup("fn3 and am1/em3")),
    };
    let ct = nudge(ct, inft, supt, "t");
    Ok(ContourSpec { cs, ct, ..*base })
}

pub fn auto_contour_bivariate(spec: &BivariateGSpec, _x: f64, _y: f64) -> Result<ContourSpec> {
    auto_contour_bivariate_with(spec, &ContourSpec::default())
}
