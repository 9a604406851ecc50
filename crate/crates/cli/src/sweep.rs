use std::time::Instant;

use pfrelay::analysis::{
    capacity_asymptotic_high_snr, capacity_asymptotic_large_beta, capacity_exact, capacity_numeric_quadrature,
    db_to_linear, outage_asymptotic, outage_exact, SystemConfig, Truncation,
};
use pfrelay::montecarlo::{simulate_capacity, simulate_outage, SimConfig};
use pfrelay::special::ContourSpec;
use rayon::prelude::*;

use crate::args::Common;
use crate::output::{Cell, SweepResult};

/// Validated settings shared by every grid point.
#[derive(Debug, Clone)]
pub struct Plan {
    pub config: SystemConfig,
    /// SNRs as given on the command line, echoed verbatim in every row.
    pub snr_sr_db: f64,
    pub snr_rd_db: f64,
    pub trunc: Truncation,
    pub contour: ContourSpec,
    pub sim: SimConfig,
    pub jobs: usize,
    pub timing: bool,
}

impl Plan {
    pub fn from_common(c: &Common) -> Result<Self, String> {
        let config = SystemConfig::from_db(c.ns, c.nr, c.snr_sr_db, c.snr_rd_db).map_err(|e| e.to_string())?;
        let contour = ContourSpec::default().with_half_length(c.w);
        contour.validate().map_err(|e| format!("--W: {e}"))?;
        let sim = SimConfig::with_trials(c.trials, c.seed).map_err(|e| format!("--trials: {e}"))?;
        if c.jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        Ok(Self {
            config,
            snr_sr_db: c.snr_sr_db,
            snr_rd_db: c.snr_rd_db,
            trunc: Truncation { k: c.k, l: c.l },
            contour,
            sim,
            jobs: c.jobs,
            timing: c.timing,
        })
    }

    fn row(&self, command: &'static str, snr_rd_db: f64, variable: &'static str, value_db: f64) -> SweepResult {
        SweepResult {
            command,
            n_s: self.config.n_s(),
            n_r: self.config.n_r(),
            snr_sr_db: self.snr_sr_db,
            snr_rd_db,
            sweep_variable: variable,
            sweep_value_db: value_db,
            analytic: Cell::Absent,
            asymptotic: Cell::Absent,
            asymptotic_high_snr: Cell::Absent,
            numeric: Cell::Absent,
            mc_value: Cell::Absent,
            mc_std_error: Cell::Absent,
            analytic_raw: Cell::Absent,
            k: self.trunc.k,
            l: self.trunc.l,
            w: self.contour.half_length,
            trials: self.sim.trials(),
            failures: Vec::new(),
            wall_ms: None,
        }
    }
}

fn settle<E: std::fmt::Display + Class>(row: &mut SweepResult, column: &'static str, r: Result<f64, E>) -> Cell {
    match r {
        Ok(v) if v.is_finite() => Cell::Value(v),
        Ok(_) => {
            row.failures.push((column, "non_finite"));
            Cell::Failed
        }
        Err(e) => {
            log::warn!("{column}: {e}");
            row.failures.push((column, e.class()));
            Cell::Failed
        }
    }
}

pub trait Class {
    fn class(&self) -> &'static str;
}

impl Class for pfrelay::Error {
    fn class(&self) -> &'static str {
        pfrelay::Error::class(self)
    }
}

pub fn outage_point(plan: &Plan, th_db: f64) -> SweepResult {
    let start = Instant::now();
    let cfg = plan.config;
    let th = db_to_linear(th_db);
    let mut row = plan.row("outage", plan.snr_rd_db, "gamma_th_db", th_db);
    match outage_exact(th, &cfg, plan.trunc, &plan.contour) {
        Ok(v) => {
            row.analytic = Cell::Value(v.probability);
            row.analytic_raw = Cell::Value(v.raw);
        }
        Err(e) => {
            row.analytic = settle(&mut row, "analytic", Err::<f64, _>(e));
            row.analytic_raw = Cell::Failed;
        }
    }
    row.asymptotic = Cell::Value(outage_asymptotic(th, &cfg));
    let mc = simulate_outage(th, &cfg, &plan.sim);
    row.mc_value = Cell::Value(mc.value);
    row.mc_std_error = Cell::Value(mc.std_error);
    if plan.timing {
        row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    row
}

pub fn capacity_point(plan: &Plan, beta_db: f64, numeric: bool) -> SweepResult {
    let start = Instant::now();
    let snr_rd = plan.config.snr_sr() * db_to_linear(beta_db);
    let mut row;
    match plan.config.with_snr_rd(snr_rd) {
        Ok(cfg) => {
            row = plan.row("capacity", plan.snr_sr_db + beta_db, "beta_db", beta_db);
            let exact = capacity_exact(&cfg, plan.trunc, &plan.contour);
            row.analytic = settle(&mut row, "analytic", exact);
            row.analytic_raw = row.analytic;
            let large = capacity_asymptotic_large_beta(&cfg, &plan.contour);
            row.asymptotic = settle(&mut row, "asymptotic", large);
            row.asymptotic_high_snr = Cell::Value(capacity_asymptotic_high_snr(&cfg));
            if numeric {
                let n = capacity_numeric_quadrature(&cfg, plan.trunc, &plan.contour);
                row.numeric = settle(&mut row, "numeric", n);
            }
            let mc = simulate_capacity(&cfg, &plan.sim);
            row.mc_value = Cell::Value(mc.value);
            row.mc_std_error = Cell::Value(mc.std_error);
        }
        Err(e) => {
            row = plan.row("capacity", plan.snr_sr_db + beta_db, "beta_db", beta_db);
            row.failures.push(("config", e.class()));
        }
    }
    if plan.timing {
        row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    row
}

/// Evaluates `points` on at most `jobs` threads, keeping grid order.
pub fn run<F>(points: &[f64], jobs: usize, f: F) -> Result<Vec<SweepResult>, rayon::ThreadPoolBuildError>
where
    F: Fn(f64) -> SweepResult + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| points.par_iter().map(|&p| f(p)).collect()))
}
