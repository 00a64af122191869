mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "qposet", version, about = "Primitive monoids, their assembly from chains, and the algebra of a labelled poset")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Degree bound for bounded-equality and refinement checks.
    #[arg(long, global = true)]
    bound: Option<u32>,
    /// Truncation depth for representation checks.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Seed for the random element generators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for reports and DOT files (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file with defaults for the flags above; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Export {
    Hasse,
    Quiver,
    Stages,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monoid summary, lattice size, maximal chains and shape flags.
    Info { poset: PathBuf },
    /// Rebuilds the monoid of a poset from chains and compares.
    Pipeline { poset: PathBuf },
    /// Relation suite, reduction oracle and exhaustive sandwich checks.
    VerifyAlgebra { poset: PathBuf },
    /// Hereditary saturated lattice and bounded equalities of a graph monoid.
    Graphmon { quiver: PathBuf },
    /// Writes DOT files.
    Export {
        poset: PathBuf,
        #[arg(long, value_enum)]
        what: Export,
    },
    /// Elements of bounded size of a primitive monoid with their φ tables.
    /// Accepts a poset file or a prime pair in JSON.
    Monoid { input: PathBuf },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    bound: Option<u32>,
    depth: Option<u32>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

/// Effective settings after merging the config file under the flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub bound: u32,
    pub depth: u32,
    pub seed: u64,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn settings(opts: &Opts) -> Result<Settings> {
    let file = match &opts.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => FileConfig::default(),
    };
    Ok(Settings {
        bound: opts.bound.or(file.bound).unwrap_or(4),
        depth: opts.depth.or(file.depth).unwrap_or(6),
        seed: opts.seed.or(file.seed).unwrap_or(0),
        format: opts.format.or(file.format),
        out: opts.out.clone().or(file.out),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes to stdout; a closed pipe ends output quietly.
fn stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit_json(report: &Report, out: &Option<PathBuf>) -> Result<()> {
    let text = report.to_pretty();
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}.json", report.command));
            std::fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => stdout(&text)?,
    }
    Ok(())
}

fn emit_dot(files: &[(String, String)], out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, body) in files {
                let path = dir.join(name);
                std::fs::write(&path, body)?;
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            for (_, body) in files {
                stdout(body)?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let s = settings(&cli.opts)?;
    if s.format == Some(Format::Dot) && !matches!(cli.command, Command::Export { .. }) {
        bail!("--format dot is only available for export");
    }
    let report = match &cli.command {
        Command::Info { poset } => commands::info(poset, &read(poset)?)?,
        Command::Pipeline { poset } => commands::pipeline(poset, &read(poset)?, &s)?,
        Command::VerifyAlgebra { poset } => commands::verify_algebra(poset, &read(poset)?, &s)?,
        Command::Graphmon { quiver } => commands::graphmon(quiver, &read(quiver)?, &s)?,
        Command::Monoid { input } => commands::monoid(input, &read(input)?, &s)?,
        Command::Export { poset, what } => {
            let text = read(poset)?;
            let files = commands::export(&text, *what)?;
            if s.format != Some(Format::Json) {
                emit_dot(&files, &s.out)?;
                return Ok(true);
            }
            commands::export_report(poset, &text, *what, &files)
        }
    };
    emit_json(&report, &s.out)?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
