use std::fs::File;
use std::io::{BufWriter, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anagen::commands::{continue_text, counterexample_table, demo, run_continue};
use anagen::config::{Schedule, SuiteConfig};
use anagen::output::{render_rows, summary, use_color};
use anagen::spec::{parse_complex, parse_element, parse_group, parse_list};
use anagen::{suite, CliError, Format};
use clap::{Parser, Subcommand};

/// Exit status for usage, config and parse errors.
const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "anagen", version, about = "Numerical checks for analytic generators of one-parameter groups")]
struct Cli {
    /// Config file (flat `key = value`, repeated keys form lists).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every invariant suite; exit 0 iff all checks pass.
    Verify,
    /// Evaluate alpha_z(x) by spectral calculus and by quadrature.
    Continue {
        /// Group spec, e.g. `integer:4` or `generator:1,0;0,-1`.
        #[arg(long)]
        group: String,
        /// Strip anchor, e.g. `-i` or `0.5-0.5i`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Element spec, e.g. `delta:1` or `unit:0,1`.
        #[arg(long)]
        element: String,
        /// Smearing parameter for the quadrature route.
        #[arg(long)]
        n: Option<f64>,
    },
    /// Tabulate the norm gap and weak pairing of the disc counterexample.
    Counterexample {
        /// Schedule `k_m = m^POWER`.
        #[arg(long, conflicts_with = "k")]
        power: Option<u32>,
        /// Explicit strictly increasing schedule `k_1,k_2,...`.
        #[arg(long)]
        k: Option<String>,
        /// Number of components N.
        #[arg(long)]
        components: Option<usize>,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Narrated single checks.
    Demo {
        /// One of: counterexample, domain-gap, kms, markov, three-lines.
        name: String,
    },
}

fn load_config(cli: &Cli) -> Result<SuiteConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = Some(o.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    for t in &cli.tol {
        cfg.override_tolerance(t)?;
    }
    Ok(cfg)
}

/// Writes `text` to `path`, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?);
            w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Verify => {
            let outcome = suite::run(&cfg)?;
            emit(cfg.output.as_deref(), &render_rows(&outcome.records, cfg.format)?)?;
            if cfg.output.is_some() {
                print!("{}", summary(&outcome, use_color(std::io::stdout().is_terminal())));
            } else {
                eprint!("{}", summary(&outcome, use_color(std::io::stderr().is_terminal())));
            }
            Ok(if outcome.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Continue { group, z, element, n } => {
            let g = parse_group(group).map_err(|e| e.relocate("--group", 1, 0))?;
            let zv = parse_complex(z).map_err(|e| e.relocate("--z", 1, 0))?;
            let x = parse_element(element).map_err(|e| e.relocate("--element", 1, 0))?;
            let res = run_continue(&g, zv, &x, *n)?;
            let text = match cli.format {
                Some(f) => render_rows(&res.rows, f)?,
                None => continue_text(&res, zv),
            };
            emit(cli.out.as_deref(), &text)?;
            if cli.format.is_some() {
                eprintln!("discrepancy {:.3e} (relative {:.3e}, n = {})", res.discrepancy, res.relative, res.n);
            }
            let tol = cfg.tolerances();
            Ok(if res.relative <= tol.cross_path { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Counterexample { power, k, components, from, to } => {
            let mut ce = cfg.counterexample.clone();
            if let Some(p) = power {
                ce.schedule = Schedule::Power(*p);
            }
            if let Some(list) = k {
                let parsed = parse_list(list, ',', |s| {
                    s.trim().parse::<u64>().map_err(|_| anagen::ParseError::at(s.len() - s.trim_start().len(), "expected a non-negative integer"))
                })
                .map_err(|e| e.relocate("--k", 1, 0))?;
                ce.schedule = Schedule::Explicit(parsed);
            }
            if let Some(c) = components {
                ce.components = *c;
            }
            if let Some(f) = from {
                ce.from = *f;
            }
            if let Some(t) = to {
                ce.to = *t;
            }
            let rows = counterexample_table(&ce)?;
            emit(cli.out.as_deref(), &render_rows(&rows, cli.format.unwrap_or(Format::Csv))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo { name } => {
            emit(cli.out.as_deref(), &demo(name, cfg.seed)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
