use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lightlike::cli::{execute, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "lightlike",
    version,
    about = "Classify and verify lightlike hypersurfaces of flat indefinite almost contact spaces"
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Overrides the null and residual tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Overrides the finite-difference step.
    #[arg(long, global = true)]
    fd_step: Option<f64>,
    /// Overrides the run and sampling seeds.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build frames and classify every configured point.
    Classify { config: PathBuf },
    /// Run the full identity suite.
    Verify { config: PathBuf },
    /// Dump the frame at one point.
    Frame {
        config: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        point: Vec<f64>,
    },
    /// Print the built-in configurations, or write them to a directory.
    Examples {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Classify { config } => Command::Classify { config },
        Cmd::Verify { config } => Command::Verify { config },
        Cmd::Frame { config, point } => Command::Frame { config, point },
        Cmd::Examples { out } => Command::Examples { out },
    };
    let overrides = Overrides {
        tol: args.tol,
        fd_step: args.fd_step,
        seed: args.seed,
    };
    let output = execute(&command, &overrides);
    print!("{}", output.stdout);
    eprint!("{}", output.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(output.code as u8)
}
