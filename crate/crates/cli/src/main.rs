//! `colift`: lifting certificates, conjugator recovery and cohomology reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "colift", version, about = "Exact lifting of invertible column-finite matrices and related checks")]
struct Cli {
    /// Output format for reports on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lift an invertible matrix along a registered ring map and write a certificate.
    Lift(LiftArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
    /// Matrix-algebra automorphisms.
    #[command(subcommand)]
    Skolem(SkolemCommand),
    /// Positivity conditions and counterexample reports on projective space.
    Cohomology(CohomologyArgs),
    /// Run the bundled end-to-end examples.
    Demo(DemoArgs),
}

fn window_arg(s: &str) -> Result<usize, String> {
    let w: usize = s.parse().map_err(|_| format!("`{s}` is not a window size"))?;
    if w < 8 {
        return Err("window must be at least 8".into());
    }
    Ok(w)
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// Name of a registered ring map.
    #[arg(long)]
    pub hom: String,
    /// Matrix JSON over the map's target ring.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Extra ring maps (registry JSON), added to the built-in ones.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[arg(long, default_value = "64", value_parser = window_arg)]
    pub window: usize,
    /// Certificate output path.
    #[arg(long, default_value = "certificate.json")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Defaults to the certificate's verified window.
    #[arg(long, value_parser = window_arg)]
    pub window: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum SkolemCommand {
    /// Recover a conjugator from matrix-unit images.
    Recover {
        #[arg(long)]
        spec: PathBuf,
        /// Write the conjugator JSON here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the automorphism invariants only.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Punctured,
    Quotient,
    Nonfree,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// System, e.g. `standard:P2`, `shifted_sum:P1`, `constant:P2:-3`.
    #[arg(long, required_unless_present = "report")]
    pub system: Option<String>,
    /// Condition: G, G', V<l> or V'<l>.
    #[arg(long, required_unless_present = "report")]
    pub cond: Option<String>,
    /// Twist degrees (repeatable or comma separated).
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "0")]
    pub twist: Vec<i64>,
    #[arg(long, default_value_t = 12)]
    pub horizon: usize,
    /// Run a counterexample report instead of a condition check.
    #[arg(long, value_enum, conflicts_with_all = ["system", "cond"])]
    pub report: Option<ReportKind>,
    /// Degree window for the punctured-plane report.
    #[arg(long, default_value_t = 6)]
    pub degree_window: i64,
    /// Stages for the pullback report.
    #[arg(long, default_value_t = 3)]
    pub stages: usize,
    /// Generator degree bound for the pullback report.
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    /// Write the JSON report here as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoPart {
    Lift,
    Skolem,
    Cohomology,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    #[arg(long, value_enum)]
    pub only: Option<DemoPart>,
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[arg(long, default_value = "32", value_parser = window_arg)]
    pub window: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lift(a) => commands::lift(&a, cli.format),
        Command::Verify(a) => commands::verify(&a, cli.format),
        Command::Skolem(c) => commands::skolem(&c, cli.format),
        Command::Cohomology(a) => commands::cohomology(&a, cli.format),
        Command::Demo(a) => commands::demo(&a, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
