//! The `pnk` command line.
//!
//! Exit codes: 0 success, 1 violations or expectation mismatches, 2 usage,
//! parse or range errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{self, RecipeParams};
use crate::enumerate;
use crate::geometry::{self, DEFAULT_CAP};
use crate::invariants;
use crate::render;
use crate::scenario_file;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pnk", version, about = "Cohomology of structure sheaves on quotients of product varieties")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    /// Largest group the closure may build.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Suppress reports; only the exit code and diagnostics remain.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a scenario file (`-` reads standard input).
    Check { path: PathBuf },
    /// Print the scenario file of a built-in recipe.
    Construct {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(constructions::RECIPES))]
        recipe: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
    },
    /// Candidate universal covers for a `P^n[k]`-unit.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Print every rule trace.
        #[arg(long)]
        traces: bool,
    },
    /// Basis of the invariants in one degree.
    Invariants {
        path: PathBuf,
        #[arg(long)]
        degree: u32,
    },
}

fn load(path: &Path) -> Result<geometry::Scenario, String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
        scenario_file::parse(&text).map_err(|e| format!("stdin: {e}"))
    } else {
        scenario_file::read(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Check { path } => {
            let s = match load(&path) {
                Ok(s) => s,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let report = match geometry::validate(&s, cli.cap) {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            if !cli.quiet {
                if json {
                    emit_json(out, &render::check_json(&report));
                } else {
                    let _ = write!(out, "{}", render::check_table(&report));
                }
            }
            i32::from(!report.ok())
        }
        Command::Construct { recipe, n, k, e } => match constructions::build(&recipe, RecipeParams { n, k, e }) {
            Ok(s) => {
                let _ = write!(out, "{}", scenario_file::serialize(&s));
                0
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                let _ = writeln!(err, "usage: pnk construct <{}> [--n N] [--k K] [--e E]", constructions::RECIPES.join("|"));
                2
            }
        },
        Command::Enumerate { n, k, traces } => match enumerate::enumerate_covers(n, k, cli.cap) {
            Ok(r) => {
                if !cli.quiet {
                    if json {
                        emit_json(out, &render::enumerate_json(&r));
                    } else {
                        let _ = write!(out, "{}", render::enumerate_table(&r, traces));
                    }
                }
                i32::from(!r.soundness_conflicts.is_empty())
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                2
            }
        },
        Command::Invariants { path, degree } => {
            let s = match load(&path) {
                Ok(s) => s,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let group = match s.group(cli.cap) {
                Ok(g) => g,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let basis = invariants::invariant_basis(&group, degree);
            if !cli.quiet {
                if json {
                    emit_json(out, &render::invariants_json(&s.name, degree, &basis));
                } else {
                    let _ = write!(out, "{}", render::invariants_table(&basis));
                }
            }
            0
        }
    }
}
