use std::io::Write;

/// One numeric cell of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Failed,
    Absent,
}

impl Cell {
    pub fn render(&self) -> String {
        match *self {
            Cell::Value(v) => format_number(v),
            Cell::Failed | Cell::Absent => String::new(),
        }
    }
}

/// Plain decimals, switching to scientific notation below `1e-4` in
/// magnitude. Both forms are the shortest that round-trip.
pub fn format_number(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub const HEADER: [&str; 21] = [
    "command",
    "n_s",
    "n_r",
    "snr_sr_db",
    "snr_rd_db",
    "sweep_variable",
    "sweep_value_db",
    "analytic",
    "asymptotic",
    "asymptotic_high_snr",
    "numeric",
    "mc_value",
    "mc_std_error",
    "analytic_raw",
    "K",
    "L",
    "W",
    "trials",
    "status",
    "error_class",
    "wall_ms",
];

/// One grid point of a sweep. SNRs are in dB, capacities in bits/s/Hz.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub command: &'static str,
    pub n_s: u32,
    pub n_r: u32,
    pub snr_sr_db: f64,
    pub snr_rd_db: f64,
    pub sweep_variable: &'static str,
    pub sweep_value_db: f64,
    pub analytic: Cell,
    pub asymptotic: Cell,
    pub asymptotic_high_snr: Cell,
    pub numeric: Cell,
    pub mc_value: Cell,
    pub mc_std_error: Cell,
    pub analytic_raw: Cell,
    pub k: usize,
    pub l: usize,
    pub w: f64,
    pub trials: u64,
    /// `(column, error class)` for every failed cell.
    pub failures: Vec<(&'static str, &'static str)>,
    pub wall_ms: Option<f64>,
}

impl SweepResult {
    pub fn failed(&self) -> bool {
        !self.failures.is_empty()
    }

    fn record(&self) -> Vec<String> {
        let status = if self.failed() { "failed" } else { "ok" };
        let classes = self
            .failures
            .iter()
            .map(|(c, e)| format!("{c}:{e}"))
            .collect::<Vec<_>>()
            .join(";");
        vec![
            self.command.to_string(),
            self.n_s.to_string(),
            self.n_r.to_string(),
            format_number(self.snr_sr_db),
            format_number(self.snr_rd_db),
            self.sweep_variable.to_string(),
            format_number(self.sweep_value_db),
            self.analytic.render(),
            self.asymptotic.render(),
            self.asymptotic_high_snr.render(),
            self.numeric.render(),
            self.mc_value.render(),
            self.mc_std_error.render(),
            self.analytic_raw.render(),
            self.k.to_string(),
            self.l.to_string(),
            format_number(self.w),
            self.trials.to_string(),
            status.to_string(),
            classes,
            self.wall_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}
