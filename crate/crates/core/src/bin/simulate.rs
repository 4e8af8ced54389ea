use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Constant-force Gaussian wave packet: entropy sweeps, density surfaces and
/// validation reports.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    /// JSON run configuration, or `-` to read it from standard input.
    #[arg(long)]
    config: PathBuf,

    /// Directory for the CSV files and report.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = packet_entropy::cli::execute(&args.config, &args.out);
    ExitCode::from(code as u8)
}
