use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use k3lines::Error;

mod input;
mod report;

use input::ConfigFile;
use report::{Output, Report};

/// Exact lattice and line-configuration computations for real K3 surfaces.
#[derive(Parser)]
#[command(name = "k3lines", version)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 2 when a verdict is UNKNOWN.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a lattice given by a spec such as "2U(3)" or "E8+[-4]", or a file holding one.
    Lattice { spec: String },
    /// Enumerate h-fragments of a configuration file.
    Fragments {
        file: PathBuf,
        /// List the vertex set of every fragment.
        #[arg(long)]
        list_fragments: bool,
    },
    /// Real structure candidates of a configuration file.
    Real {
        file: PathBuf,
        #[arg(long)]
        list_fragments: bool,
    },
    /// Totally real criterion for N of a configuration file.
    TotallyReal { file: PathBuf },
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded(_) => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn config(path: &Path) -> Result<(String, k3lines::fano::LineConfiguration), Failure> {
    let text = read(path)?;
    let cfg = ConfigFile::parse(&text)?.configuration()?;
    Ok((digest(text.as_bytes()), cfg))
}

fn run(cli: &Cli) -> Result<(String, String, Output), Failure> {
    Ok(match &cli.command {
        Command::Lattice { spec } => {
            let path = Path::new(spec);
            let text = if path.is_file() { read(path)?.trim().to_string() } else { spec.clone() };
            (format!("lattice {spec}"), digest(text.as_bytes()), report::lattice(&text)?)
        }
        Command::Fragments { file, list_fragments } => {
            let (d, cfg) = config(file)?;
            (format!("fragments {}", file.display()), d, report::fragments(&cfg, *list_fragments)?)
        }
        Command::Real { file, list_fragments } => {
            let (d, cfg) = config(file)?;
            (format!("real {}", file.display()), d, report::real(&cfg, *list_fragments)?)
        }
        Command::TotallyReal { file } => {
            let (d, cfg) = config(file)?;
            (format!("totally-real {}", file.display()), d, report::totally_real(&cfg)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (command, input_digest, out) = match run(&cli) {
        Ok(x) => x,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
    };
    let mut buf = String::new();
    if cli.json {
        let report = Report { command, input_digest, result: out.result, warnings: out.warnings };
        buf.push_str(&serde_json::to_string_pretty(&report).expect("report serializes"));
        buf.push('\n');
    } else {
        buf.push_str(&format!("# {command}\n# sha256 {input_digest}\n"));
        for line in &out.text {
            buf.push_str(line);
            buf.push('\n');
        }
        for w in &out.warnings {
            buf.push_str(&format!("warning: {w}\n"));
        }
    }
    print!("{buf}");
    if cli.strict && out.unknown {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
