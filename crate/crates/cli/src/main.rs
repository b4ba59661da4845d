use clap::{Args, Parser, Subcommand};
use filpiv_cli::config::{Overrides, RunConfig};
use filpiv_cli::output::{write_artifacts, CmdOutput};
use filpiv_cli::{checks, commands, exit, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "filpiv", version, about = "Self-similar vortex filaments and Painleve IV")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Integrate over [-s_max, s_max].
    #[arg(long)]
    s_max: Option<f64>,
    /// Accepted for scripting; every run is deterministic.
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the flow and write the trajectory with diagnostics.
    Integrate(Common),
    /// Fit both tails and check the connection formulas.
    Fit(Common),
    /// Map tail data of one side to the other.
    Connect(Common),
    /// Compare the a = 0 closed forms with the numerics.
    ZeroA(Common),
    /// Symmetric solutions against their conjectured tails.
    Symmetric(Common),
    /// Physical filament curves at the requested times.
    Filament(Common),
    /// Run the built-in verification suite.
    Selfcheck {
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seedless: bool,
    },
}

fn load(c: &Common, mode: &str) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&c.config).map_err(|e| CliError::config(format!("cannot read {}: {e}", c.config.display())))?;
    let ov = Overrides { rel_tol: c.tol_rel, abs_tol: c.tol_abs, s_max: c.s_max };
    RunConfig::from_json(&text)?.resolve(mode, ov)
}

fn finish(out: &std::path::Path, res: CmdOutput) -> Result<i32, CliError> {
    write_artifacts(out, &res.artifacts)?;
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "summary": res.summary, "violations": res.violations })).unwrap());
    Ok(if res.violations.is_empty() { exit::OK } else { exit::INVARIANT })
}

type Handler = fn(&RunConfig) -> Result<CmdOutput, CliError>;

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let (c, mode, f): (Common, &str, Handler) = match cli.cmd {
        Cmd::Integrate(c) => (c, "integrate", commands::cmd_integrate),
        Cmd::Fit(c) => (c, "fit", commands::cmd_fit),
        Cmd::Connect(c) => (c, "connect", commands::cmd_connect),
        Cmd::ZeroA(c) => (c, "zero-a", commands::cmd_zero_a),
        Cmd::Symmetric(c) => (c, "symmetric", commands::cmd_symmetric),
        Cmd::Filament(c) => (c, "filament", commands::cmd_filament),
        Cmd::Selfcheck { out, .. } => return finish(&out, checks::cmd_selfcheck()?),
    };
    let cfg = load(&c, mode)?;
    finish(&c.out, f(&cfg)?)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FILPIV_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::config(format!("FILPIV_THREADS must be a positive integer (got {v:?})")))?;
        if n == 0 {
            return Err(CliError::config("FILPIV_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = init_threads().and_then(|_| dispatch(cli)).unwrap_or_else(|e| {
        eprintln!("{}", e.to_json());
        e.exit_code
    });
    ExitCode::from(code as u8)
}
