//! Command-line front end: analyze a cover-pair file, classify parameter
//! ranges, search for witnesses, and run the verification suites.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prym_core::classification::{classify_range, HurwitzParams, Regime};
use prym_core::report::{analyze, render_human, SuiteResult};
use prym_core::specfile;
use prym_core::witness::{witness_search, SearchBudget};
use prym_core::Error;

#[derive(Parser)]
#[command(
    name = "prym",
    version,
    about = "Exact Prym lattices of pairs of coverings of the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Both,
    Ramified,
    Etale,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Both => Regime::Both,
            RegimeArg::Ramified => Regime::Ramified,
            RegimeArg::Etale => Regime::Etale,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a cover-pair file: genera, parameters, diagram conditions,
    /// restricted polarization types, kernel decomposition, Prym-Tyurin
    /// verdict, projector checks, and the Seshadri bound for family members
    Analyze {
        /// Path to a cover-pair file
        file: PathBuf,
    },
    /// Enumerate parameter tuples solving the family systems within bounds
    Classify {
        #[arg(long)]
        max_d: i64,
        #[arg(long)]
        max_r: i64,
        #[arg(long, default_value_t = 0)]
        min_dim: i64,
        #[arg(long, value_enum, default_value_t = RegimeArg::Both)]
        regime: RegimeArg,
    },
    /// Search for a monodromy witness of a parameter tuple
    Search {
        /// Comma-separated tuple d1,d2,r1,r2,s1,s2
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        /// Write the witness file here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the verification suites (structural invariants on random covers,
    /// order identities on random lattices, family witness pipelines)
    Verify {
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cover_cases: usize,
        #[arg(long, default_value_t = 200)]
        lattice_cases: usize,
    },
}

fn parse_params(text: &str) -> anyhow::Result<HurwitzParams> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| anyhow::anyhow!("invalid parameter tuple {text:?}: {e}"))?;
    if parts.len() != 6 {
        anyhow::bail!("expected 6 comma-separated integers, got {}", parts.len());
    }
    Ok(HurwitzParams::new(
        parts[0], parts[1], parts[2], parts[3], parts[4], parts[5],
    )?)
}

/// Writes to stdout, exiting quietly when the consumer closed the pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn print_suite(format: Format, s: &SuiteResult) {
    match format {
        Format::Human => emit(&format!("ok {} ({} cases)\n", s.name, s.cases)),
        Format::Machine => emit(&format!(
            "{}\n",
            serde_json::to_string(s).expect("serializable")
        )),
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", file.display()))?;
            let diagram = specfile::parse_diagram(&text)?;
            let report = analyze(&diagram)?;
            match cli.format {
                Format::Human => emit(&render_human(&report)),
                Format::Machine => emit(&format!("{}\n", serde_json::to_string_pretty(&report)?)),
            }
            Ok(0)
        }
        Command::Classify {
            max_d,
            max_r,
            min_dim,
            regime,
        } => {
            let rows = classify_range(max_d, max_r, min_dim, regime.into());
            match cli.format {
                Format::Human => {
                    let mut text = String::from("d1,d2,r1,r2,s1,s2,dimP,family,case\n");
                    for row in &rows {
                        let p = row.params;
                        text.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{}\n",
                            p.d1,
                            p.d2,
                            p.r1,
                            p.r2,
                            p.s1,
                            p.s2,
                            row.dim_p,
                            row.family.map(|f| f.as_str()).unwrap_or("none"),
                            row.exclusion.map(|e| e.as_str()).unwrap_or("-")
                        ));
                    }
                    emit(&text);
                }
                Format::Machine => {
                    let doc = serde_json::json!({
                        "schema_version": prym_core::report::SCHEMA_VERSION,
                        "rows": rows,
                    });
                    emit(&format!("{}\n", serde_json::to_string_pretty(&doc)?));
                }
            }
            Ok(0)
        }
        Command::Search {
            params,
            budget,
            output,
        } => {
            let p = parse_params(&params)?;
            match witness_search(&p, SearchBudget { nodes: budget }) {
                Ok(diagram) => {
                    let text = specfile::emit(&diagram.g1, &diagram.g2);
                    match output {
                        Some(path) => {
                            std::fs::write(&path, &text)?;
                            eprintln!("witness written to {}", path.display());
                        }
                        None => emit(&text),
                    }
                    Ok(0)
                }
                Err(Error::NotFound(msg)) => {
                    eprintln!("NotFound: {msg}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify {
            seed,
            cover_cases,
            lattice_cases,
        } => {
            let suites = [
                prym_core::report::verify_cover_suite(cover_cases, seed)?,
                prym_core::report::verify_lattice_suite(lattice_cases, seed, 12, 20)?,
                prym_core::report::verify_classification_suite()?,
                prym_core::report::verify_family_suite()?,
            ];
            for s in &suites {
                print_suite(cli.format, s);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
