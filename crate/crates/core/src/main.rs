use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

use ncurrents::report::{Backend, Command, Format, RunConfig};
use ncurrents::suites;
use ncurrents::Error;

#[derive(Parser)]
#[command(
    name = "ncurrents",
    version,
    about = "Current Lie algebras over truncated free algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites
    Verify(Opts),
    /// Print dimensions of one object
    Compute(Opts),
    /// Evaluate the Cartan criteria on one diagonal
    Cartan(Opts),
}

#[derive(Args)]
struct Opts {
    /// sl:n, gl:n, so:n, sp:n, sl2irrep:n or jordan:n
    #[arg(long, default_value = "sl:2")]
    pair: String,
    /// generator count or comma-separated names
    #[arg(long, default_value = "2")]
    gens: String,
    /// truncation degree D
    #[arg(long, default_value_t = 3)]
    deg: usize,
    /// free or matrix:n
    #[arg(long, default_value = "free")]
    backend: String,
    /// adjoin a unit to the free algebra
    #[arg(long)]
    unital: bool,
    #[arg(long, default_value = "all")]
    suite: String,
    /// diagonal entries separated by ';'
    #[arg(long)]
    diag: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// object for compute: closure, tilde, overline, ik, ikl, ...
    #[arg(long)]
    object: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// also print bases
    #[arg(long)]
    basis: bool,
}

fn config(command: Command, o: &Opts) -> Result<RunConfig, Error> {
    let mut c = RunConfig::new(command, &o.pair);
    c.gens = RunConfig::parse_gens(&o.gens)?;
    c.deg = o.deg;
    c.backend = o.backend.parse::<Backend>()?;
    c.unital = o.unital;
    c.suite = o.suite.clone();
    c.diag = o.diag.clone();
    c.seed = o.seed;
    c.object = o.object.clone();
    c.k = o.k;
    c.format = if o.json { Format::Json } else { Format::Text };
    c.validate()?;
    Ok(c)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) => 3,
        Error::Config(_)
        | Error::Syntax { .. }
        | Error::UnknownGenerator(_)
        | Error::InvalidSize(_)
        | Error::UnitInNonunital
        | Error::NonUnit(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Compute(o) => (Command::Compute, o),
        Cmd::Cartan(o) => (Command::Cartan, o),
    };
    let result = config(command, opts).and_then(|c| suites::run(&c, opts.l, opts.basis));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let code = error_code(&e);
            if code == 2 {
                eprintln!("{}", Cli::command().render_usage());
            }
            return ExitCode::from(code);
        }
    };
    let text = if opts.json {
        report.to_json()
    } else {
        report.to_text()
    };
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            let last = report.to_text();
            print!(
                "{}",
                last.lines()
                    .last()
                    .map(|l| format!("{l}\n"))
                    .unwrap_or_default()
            );
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
