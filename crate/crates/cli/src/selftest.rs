use std::fmt::Write;

use num_complex::Complex64;
use pfrelay::analysis::{capacity_kernel_specs, outage_exact, pdf_gamma_sr, SystemConfig, Truncation};
use pfrelay::special::quadrature::{integrate_1d, Tolerance};
use pfrelay::special::{
    auto_contour_bivariate_with, auto_contour_univariate_with, bivariate_meijer_g, meijer_g, modified_bessel_k,
    BivariateGSpec, ContourSpec, MeijerGSpec,
};

use crate::sweep::Plan;

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String), pfrelay::Error>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn univariate(m: usize, n: usize, a: &[f64], b: &[f64], z: f64, base: &ContourSpec) -> pfrelay::Result<f64> {
    let spec = MeijerGSpec::new(m, n, a.to_vec(), b.to_vec())?;
    let c = auto_contour_univariate_with(&spec, base)?;
    meijer_g(&spec, z, &c)
}

/// Largest absolute deviation over a grid, with its location.
fn worst(points: impl IntoIterator<Item = pfrelay::Result<(f64, String)>>) -> pfrelay::Result<(f64, String)> {
    let mut best = (0.0, String::new());
    for p in points {
        let (err, at) = p?;
        if err.is_nan() || err > best.0 {
            best = (err, at);
        }
    }
    Ok(best)
}

const IDENTITY_TOL: f64 = 1e-6;

fn identity_exp(base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    let (err, at) = worst([0.1, 1.0, 5.0].map(|z| {
        let g = univariate(1, 0, &[], &[0.0], z, base)?;
        Ok(((g - (-z).exp()).abs(), format!("z={z}")))
    }))?;
    Ok((err < IDENTITY_TOL, format!("max error {err:.2e} at {at}")))
}

fn identity_log(base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    let (err, at) = worst([0.5, 1.0, 3.0].map(|z| {
        let g = univariate(1, 2, &[1.0, 1.0], &[1.0, 0.0], z, base)?;
        Ok(((g - z.ln_1p()).abs(), format!("z={z}")))
    }))?;
    Ok((err < IDENTITY_TOL, format!("max error {err:.2e} at {at}")))
}

fn identity_bessel(base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    let mut pts = Vec::new();
    for nu in 0..3 {
        for z in [0.25, 1.0, 4.0] {
            pts.push((nu, z));
        }
    }
    let (err, at) = worst(pts.into_iter().map(|(nu, z)| {
        let h = 0.5 * nu as f64;
        let g = univariate(2, 0, &[], &[h, -h], z, base)?;
        Ok((
            (0.5 * g - modified_bessel_k(nu, 2.0 * z.sqrt())).abs(),
            format!("nu={nu} z={z}"),
        ))
    }))?;
    Ok((err < IDENTITY_TOL, format!("max error {err:.2e} at {at}")))
}

fn factorization(base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    // exp(-x) ln(1+y)
    let spec = BivariateGSpec {
        dn2: vec![0.0],
        em3: vec![1.0, 1.0],
        fn3: vec![1.0],
        fq3: vec![0.0],
        ..Default::default()
    };
    let (x, y) = (0.7, 1.5);
    let c = auto_contour_bivariate_with(&spec, base)?;
    let joint = bivariate_meijer_g(&spec, x, y, &c)?;
    let gx = univariate(1, 0, &[], &[0.0], x, base)?;
    let gy = univariate(1, 2, &[1.0, 1.0], &[1.0, 0.0], y, base)?;
    let rel = (joint / (gx * gy) - 1.0).abs();
    Ok((rel < 1e-4, format!("relative gap {rel:.2e}")))
}

fn doubling(base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    let cfg = SystemConfig::new(2, 2, 1.0, 1.0)?;
    let (first, _) = capacity_kernel_specs(&cfg, 0, 0);
    let c = auto_contour_bivariate_with(&first, base)?;
    let a = bivariate_meijer_g(&first, 1.0, 1.0, &c)?;
    let wide = c.with_half_length(2.0 * c.half_length);
    let b = bivariate_meijer_g(&first, 1.0, 1.0, &wide)?;
    let rel = ((a - b) / b).abs();
    Ok((
        rel < base.rel_tol,
        format!("W={} vs {}: relative change {rel:.2e}", c.half_length, wide.half_length),
    ))
}

fn normalization() -> pfrelay::Result<(bool, String)> {
    let tol = Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_panels: 4000,
    };
    let mut detail = String::new();
    let mut ok = true;
    for (ns, nr, g) in [(2, 2, 1.0), (4, 2, 1.0), (2, 3, 10.0)] {
        let c = SystemConfig::new(ns, nr, g, 1.0)?;
        let upper = 200.0 * g * (ns * nr) as f64;
        let mass = integrate_1d(|x| Ok(Complex64::new(pdf_gamma_sr(x, &c), 0.0)), 0.0, upper, 16, tol)?
            .value
            .re;
        let mean = integrate_1d(
            |x| Ok(Complex64::new(x * pdf_gamma_sr(x, &c), 0.0)),
            0.0,
            upper,
            16,
            tol,
        )?
        .value
        .re;
        let mean_gap = mean / ((ns * nr) as f64 * g) - 1.0;
        ok &= (mass - 1.0).abs() < 1e-6 && mean_gap.abs() < 5e-3;
        let _ = write!(
            detail,
            "({ns},{nr}) mass-1={:.1e} mean gap={:.1e}; ",
            mass - 1.0,
            mean_gap
        );
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

/// Largest accepted relative change of the outage series when both
/// truncation orders grow. This is a coarse adequacy check: at the default
/// orders the series still moves by about 2e-3 between (50,5) and (60,7).
pub const STABILITY_TOL: f64 = 1e-2;

fn truncation_stability(trunc: Truncation, base: &ContourSpec) -> pfrelay::Result<(bool, String)> {
    let longer = Truncation {
        k: trunc.k + 10,
        l: trunc.l + 2,
    };
    let mut worst_change: f64 = 0.0;
    let mut at = String::new();
    for (ns, nr) in [(2, 2), (4, 2)] {
        let cfg = SystemConfig::new(ns, nr, 1.0, 1.0)?;
        for th in [0.1, 1.0] {
            let a = outage_exact(th, &cfg, trunc, base)?.raw;
            let b = outage_exact(th, &cfg, longer, base)?.raw;
            let change = ((a - b) / b).abs();
            if change.is_nan() || change > worst_change {
                worst_change = change;
                at = format!("({ns},{nr}) at threshold {th}");
            }
        }
    }
    Ok((
        worst_change < STABILITY_TOL,
        format!(
            "(K,L)=({},{})->({},{}): max relative change {worst_change:.2e} at {at}",
            trunc.k, trunc.l, longer.k, longer.l
        ),
    ))
}

pub fn run(plan: &Plan) -> Vec<Check> {
    let base = &plan.contour;
    vec![
        check("identity exp", identity_exp(base)),
        check("identity log", identity_log(base)),
        check("identity bessel", identity_bessel(base)),
        check("contour doubling", doubling(base)),
        check("bivariate factorization", factorization(base)),
        check("density normalization", normalization()),
        check("truncation stability", truncation_stability(plan.trunc, base)),
    ]
}

pub fn report(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{:width$}  {}  {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    out
}
