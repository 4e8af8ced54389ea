//! Config-driven runs of the `simulate` binary and their file outputs.
//!
//! Files written to the output directory:
//!
//! | file            | columns                                                  |
//! |-----------------|----------------------------------------------------------|
//! | `entropy.csv`   | `t,tau,s_x,s_p,s_joint_closed,s_joint_numeric,bound`     |
//! | `density_x.csv` | `t,x,rho`                                                |
//! | `density_p.csv` | `t,p,rho`                                                |
//! | `report.json`   | validation checks: name, measured, tolerance, passed     |

mod config;
mod sweep;
mod validation;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::{Output, RunConfig};
pub use sweep::{run_density_surface, run_entropy_sweep, run_momentum_surface, DensitySlice};
pub use validation::{action_by_quadrature, run_validation, CheckResult, Suite, ValidationReport};

use crate::error::{Error, Result};
use crate::model::{EntropyRecord, Lattice};

pub const ENTROPY_HEADER: &str = "t,tau,s_x,s_p,s_joint_closed,s_joint_numeric,bound";
pub const DENSITY_X_HEADER: &str = "t,x,rho";
pub const DENSITY_P_HEADER: &str = "t,p,rho";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Renders `v` with 9 significant digits, `%g` style.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

pub fn write_entropy_csv(mut w: impl Write, records: &[EntropyRecord]) -> Result<()> {
    writeln!(w, "{ENTROPY_HEADER}")?;
    for r in records {
        let row = [
            r.t,
            r.tau,
            r.s_x,
            r.s_p,
            r.s_joint_closed,
            r.s_joint_numeric,
            r.bound,
        ];
        writeln!(w, "{}", row.map(fmt_sig9).join(","))?;
    }
    Ok(())
}

pub fn write_density_csv<G: Lattice>(
    mut w: impl Write,
    header: &str,
    slices: &[DensitySlice<G>],
) -> Result<()> {
    writeln!(w, "{header}")?;
    for slice in slices {
        let t = fmt_sig9(slice.t);
        let grid = slice.density.grid().lattice();
        for (x, rho) in grid.points().zip(slice.density.values()) {
            writeln!(w, "{t},{},{}", fmt_sig9(x), fmt_sig9(*rho))?;
        }
    }
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub report: Option<ValidationReport>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        match &self.report {
            Some(r) if !r.all_passed() => EXIT_VALIDATION,
            _ => EXIT_OK,
        }
    }
}

/// Executes every output requested by `config`, writing into `out_dir`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunSummary> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut summary = RunSummary::default();

    if config.wants(Output::Entropy) {
        let records = run_entropy_sweep(config)?;
        let mut w = create(out_dir, "entropy.csv")?;
        write_entropy_csv(&mut w, &records)?;
        w.flush()?;
        summary.files.push(out_dir.join("entropy.csv"));
    }
    if config.wants(Output::DensityX) {
        let slices = run_density_surface(config)?;
        let mut w = create(out_dir, "density_x.csv")?;
        write_density_csv(&mut w, DENSITY_X_HEADER, &slices)?;
        w.flush()?;
        summary.files.push(out_dir.join("density_x.csv"));
    }
    if config.wants(Output::DensityP) {
        let slices = run_momentum_surface(config)?;
        let mut w = create(out_dir, "density_p.csv")?;
        write_density_csv(&mut w, DENSITY_P_HEADER, &slices)?;
        w.flush()?;
        summary.files.push(out_dir.join("density_p.csv"));
    }
    let suite = if config.wants(Output::Validate) {
        Some(Suite::Full)
    } else if config.wants(Output::KernelCheck) {
        Some(Suite::Kernel)
    } else {
        None
    };
    if let Some(suite) = suite {
        let report = run_validation(config, suite)?;
        let mut w = create(out_dir, "report.json")?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
        w.flush()?;
        summary.files.push(out_dir.join("report.json"));
        summary.report = Some(report);
    }
    Ok(summary)
}

/// Loads the config at `config_path` (`-` for stdin), runs it, and maps the
/// outcome to a process exit code.
pub fn execute(config_path: &Path, out_dir: &Path) -> i32 {
    let config = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&config, out_dir) {
        Ok(summary) => {
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
            if let Some(report) = &summary.report {
                for c in &report.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    println!(
                        "[{status}] {:<22} measured {:.3e}  tolerance {:.1e}",
                        c.name, c.measured, c.tolerance
                    );
                }
            }
            summary.exit_code()
        }
        Err(Error::Config(msg)) => {
            eprintln!("error: config: {msg}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_VALIDATION
        }
    }
}
