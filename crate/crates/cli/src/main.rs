mod args;
mod output;
mod selftest;
mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Common};
use sweep::Plan;

const EXIT_FLAGS: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 4;

enum Failure {
    Flags(String),
    Numeric(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Flags(_) => EXIT_FLAGS,
            Failure::Numeric(_) => EXIT_NUMERIC,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Flags(m) | Failure::Numeric(m) | Failure::Io(m) => m,
        }
    }
}

/// Inserts config-file arguments right after the subcommand so that
/// explicit flags, which come later, take precedence.
fn merged_args(raw: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = args::find_config(&raw) else {
        return Ok(raw);
    };
    let from_file = args::config_file_args(&path).map_err(|e| {
        if e.downcast_ref::<io::Error>().is_some() {
            Failure::Io(format!("{e:#}"))
        } else {
            Failure::Flags(format!("{e:#}"))
        }
    })?;
    let Some(pos) = raw
        .iter()
        .position(|a| matches!(a.to_str(), Some("outage" | "capacity" | "selftest")))
    else {
        return Ok(raw);
    };
    let mut out = raw[..=pos].to_vec();
    out.extend(from_file);
    out.extend_from_slice(&raw[pos + 1..]);
    Ok(out)
}

fn open_output(common: &Common) -> Result<Box<dyn Write>, Failure> {
    match &common.out {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Io(format!("creating {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn sweep(
    common: &Common,
    eval: impl Fn(&Plan, f64) -> output::SweepResult + Sync + Send,
    grid: &[f64],
) -> Result<(), Failure> {
    let plan = Plan::from_common(common).map_err(Failure::Flags)?;
    // open before the (possibly long) computation so path errors surface early
    let out = open_output(common)?;
    let rows = sweep::run(grid, plan.jobs, |p| eval(&plan, p)).map_err(|e| Failure::Io(e.to_string()))?;
    output::write_csv(out, &rows).map_err(|e| Failure::Io(format!("writing CSV: {e}")))?;
    let failed = rows.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        return Err(Failure::Numeric(format!(
            "{failed} of {} rows have failed cells",
            rows.len()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Outage(c) => sweep(&c, sweep::outage_point, &c.th_db.0),
        Command::Capacity(c) => {
            let numeric = c.numeric;
            sweep(
                &c.common,
                move |p, b| sweep::capacity_point(p, b, numeric),
                &c.common.beta.0,
            )
        }
        Command::Selftest(c) => {
            let plan = Plan::from_common(&c).map_err(Failure::Flags)?;
            let checks = selftest::run(&plan);
            let report = selftest::report(&checks);
            let mut out = open_output(&c)?;
            out.write_all(report.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(e.to_string()))?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Failure::Numeric(format!("{failed} of {} checks failed", checks.len())));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = merged_args(std::env::args_os().collect()).and_then(|argv| match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            Ok(())
        }
        Err(e) => {
            let _ = e.print();
            Err(Failure::Flags(String::new()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("pfrelay: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
