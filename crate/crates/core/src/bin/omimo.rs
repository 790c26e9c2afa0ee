//! `omimo`: evaluate scheme rates at a point or over a grid, or emit the
//! canned rates-versus-SNR dataset.
//!
//! Exit codes: 0 success, 2 validation, 3 I/O.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oblivious_mimo::sweep::{
    parse_capacity_axis, parse_real_axis, write_figure2, write_rows, OutputFormat, SchemeSelection,
    SweepGrid,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "omimo",
    version,
    about = "Rates of distributed MIMO with oblivious antennas over the circulant Wyner channel",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write figure2.csv and README.md for alpha^2 = 0.6, 0..40 dB.
    Figure2 {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Every axis takes a value, a comma list, or a `start:step:stop` range.
#[derive(Args, Debug)]
struct EvalArgs {
    /// Interference power alpha^2 in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<String>,

    /// Per-transmitter SNR in dB.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,

    /// Source-to-transmitter capacity, bit/symbol, or `inf`.
    #[arg(long, default_value = "inf")]
    c: String,

    /// Receiver-to-destination capacity, bit/symbol, or `inf`.
    #[arg(long, default_value = "inf")]
    cprime: String,

    /// Scheme names (UB, IM, QW, EC, DC, IM-EC, IM-DC, QW-EC, QW-DC) or `all`.
    #[arg(long, default_value = "all")]
    scheme: String,

    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value = "csv")]
    format: String,
}

enum Failure {
    Validation(String),
    Io(String),
}

impl From<oblivious_mimo::Error> for Failure {
    fn from(e: oblivious_mimo::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn build_grid(args: &EvalArgs) -> Result<SweepGrid, Failure> {
    let alpha2 = args
        .alpha2
        .as_deref()
        .ok_or_else(|| Failure::Validation("--alpha2 is required".into()))?;
    let snr_db = args
        .snr_db
        .as_deref()
        .ok_or_else(|| Failure::Validation("--snr-db is required".into()))?;
    let grid = SweepGrid {
        alpha2_values: parse_real_axis(alpha2)?,
        p_db_values: parse_real_axis(snr_db)?,
        c_values: parse_capacity_axis(&args.c)?,
        cprime_values: parse_capacity_axis(&args.cprime)?,
        schemes: SchemeSelection::parse(&args.scheme)?,
    };
    grid.validate()?;
    Ok(grid)
}

fn run_eval(args: &EvalArgs) -> Result<(), Failure> {
    let format: OutputFormat = args.format.parse()?;
    let grid = build_grid(args)?;
    let rows = grid.evaluate()?;
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_rows(&rows, format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_rows(&rows, format, &mut w).map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Some(Command::Figure2 { out }) => write_figure2(out)
            .map(|n| eprintln!("wrote {n} rows to {}", out.join("figure2.csv").display()))
            .map_err(|e| Failure::Io(format!("{}: {e}", out.display()))),
        None => run_eval(&cli.eval),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
