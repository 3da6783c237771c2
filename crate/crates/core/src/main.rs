use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tridecomp::report::{run, Mode, RunConfig, RunFailure, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Decompose,
    UnmixedOnly,
    BoundsOnly,
    Verify,
}

/// Triangular decomposition into squarefree regular chains over Q.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// Polynomial system, one polynomial per line.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "decompose")]
    mode: ModeArg,
    /// Variable order, lowest first: x1,x2,...
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Chain length used in the bound formulas (default n).
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compare against the split-linear oracle.
    #[arg(long)]
    verify: bool,
    /// Use these chains instead of computing candidates.
    #[arg(long)]
    bypass_chains: Option<PathBuf>,
    /// Bound parameters for bounds-only runs without --input.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    /// Log progress to standard error.
    #[arg(short, long)]
    verbose: bool,
}

fn read(path: &PathBuf) -> Result<String, RunFailure> {
    fs::read_to_string(path).map_err(|e| RunFailure {
        code: 1,
        message: format!("{}: {e}", path.display()),
        detail: serde_json::Value::Null,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        mode: match args.mode {
            ModeArg::Decompose => Mode::Decompose,
            ModeArg::UnmixedOnly => Mode::UnmixedOnly,
            ModeArg::BoundsOnly => Mode::BoundsOnly,
            ModeArg::Verify => Mode::Verify,
        },
        order: args.order.clone(),
        m: args.m,
        seed: args.seed,
        verify: args.verify,
        n: args.n,
        d: args.d,
        r: args.r,
    };
    let result = (|| {
        let input = args.input.as_ref().map(read).transpose()?;
        let bypass = args.bypass_chains.as_ref().map(read).transpose()?;
        if args.verbose {
            eprintln!("running {:?} with seed {}", cfg.mode, cfg.seed);
        }
        run(&cfg, input.as_deref(), bypass.as_deref())
    })();
    let (report, code) = match result {
        Ok(v) => (v, 0),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.to_json(), f.code)
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
