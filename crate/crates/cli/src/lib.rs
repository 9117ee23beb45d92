//! The `asdim` command line.
//!
//! Exit codes: 0 success, 1 invalid cover witness, 2 input or usage error,
//! 3 inconsistent bounds.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use asdim_core::engine::{Consequence, EngineError, TraceStep};
use asdim_core::lab::{self, GroupSpec, LabError, SearchOutcome};
use asdim_core::manifold::{analyze, parse_manifold, CompileError, Verdict};
use asdim_core::{catalog, DimBound, GeometryFact};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const BUDGET_ENV: &str = "ASDIM_POINT_BUDGET";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "asdim",
    version,
    about = "Asymptotic-dimension bounds for geometrizable manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound the asymptotic dimension of a manifold's fundamental group
    Bound {
        file: PathBuf,
        /// Print the proof trace (always included in structured output)
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List the model geometries of one dimension
    Catalog {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Fixed-scale cover experiments
    Cover {
        #[command(subcommand)]
        action: CoverCmd,
    },
}

#[derive(Debug, Subcommand)]
enum CoverCmd {
    /// Brick cover of a ball in Z^n, written as a witness file
    Build {
        #[arg(long)]
        n: u32,
        #[arg(long = "d")]
        d: u32,
        #[arg(long)]
        radius: u32,
        /// Write the witness here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness file
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Smallest number of families at a fixed scale, by exhaustive search
    Search {
        /// FreeAbelian(n), FreeGroup(n) or Heisenberg3
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
        #[arg(long = "d")]
        d: u32,
        #[arg(long = "b")]
        b: u32,
        #[arg(long, default_value_t = lab::MAX_SEARCH_FAMILIES)]
        k_max: usize,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: u8, msg: impl std::fmt::Display) -> u8 {
        let _ = writeln!(self.err, "error: {msg}");
        code
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match cli.command {
        Command::Bound { file, trace, format } => cmd_bound(&mut io, &file, trace, format),
        Command::Catalog { dim, format } => cmd_catalog(&mut io, dim, format),
        Command::Cover { action } => match point_budget() {
            Ok(budget) => cmd_cover(&mut io, action, budget),
            Err(msg) => io.fail(EXIT_INPUT, msg),
        },
    }
}

fn point_budget() -> Result<usize, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be a positive integer, got `{v}`")),
        Err(_) => Ok(lab::DEFAULT_POINT_BUDGET),
    }
}

#[derive(Serialize)]
struct Input {
    sha256: String,
}

#[derive(Serialize)]
struct BoundReport<'a> {
    input: Input,
    expr: String,
    bound: DimBound,
    verdict: &'a Verdict,
    trace: &'a [TraceStep],
    consequences: &'a [Consequence],
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn cmd_bound(io: &mut Io, path: &Path, trace: bool, format: Format) -> u8 {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return io.fail(EXIT_INPUT, format!("{}: {e}", path.display())),
    };
    let Ok(src) = String::from_utf8(bytes.clone()) else {
        return io.fail(EXIT_INPUT, format!("{}: not UTF-8", path.display()));
    };
    let desc = match parse_manifold(&src) {
        Ok(d) => d,
        Err(e) => return io.fail(EXIT_INPUT, format!("{}:{e}", path.display())),
    };
    let a = match analyze(&desc) {
        Ok(a) => a,
        Err(e @ CompileError::Engine(EngineError::Inconsistent { .. })) => {
            return io.fail(EXIT_INCONSISTENT, format!("{}: {e}", path.display()))
        }
        Err(e) => return io.fail(EXIT_INPUT, format!("{}:{e}", path.display())),
    };
    let report = BoundReport {
        input: Input { sha256: hex::encode(Sha256::digest(&bytes)) },
        expr: a.compiled.expr.to_string(),
        bound: a.derivation.bound,
        verdict: &a.compiled.verdict,
        trace: &a.derivation.trace.steps,
        consequences: &a.consequences,
    };
    let text = match format {
        Format::Structured => to_json(&report),
        Format::Text => {
            let mut s = format!(
                "group: {}\nbound: {}\nverdict: {:?} ({})\n",
                report.expr, report.bound, report.verdict.kind, report.verdict.reason
            );
            for n in &report.verdict.notes {
                s += &format!("note: {n}\n");
            }
            if report.consequences.is_empty() {
                s += "consequences: none (no finite upper bound)\n";
            } else {
                s += "consequences:\n";
                for c in report.consequences {
                    s += &format!("  {:?}: {}\n", c.kind, c.citation);
                }
            }
            if trace {
                s += "trace:\n";
                s += &a.derivation.trace.to_string();
            }
            s
        }
    };
    let _ = io.out.write_all(text.as_bytes());
    EXIT_OK
}

#[derive(Serialize)]
struct CatalogReport<'a> {
    dim: u32,
    geometries: &'a [GeometryFact],
}

fn cmd_catalog(io: &mut Io, dim: u32, format: Format) -> u8 {
    let facts = match catalog::list_geometries(dim) {
        Ok(f) => f,
        Err(e) => return io.fail(EXIT_INPUT, e),
    };
    let text = match format {
        Format::Structured => to_json(&CatalogReport { dim, geometries: facts }),
        Format::Text => {
            let mut s = "name\tmodel\tlattice\taspherical\trules\n".to_string();
            for g in facts {
                s += &format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    g.name,
                    g.model_asdim,
                    g.lattice_asdim,
                    g.aspherical_model,
                    g.lattice_rules.join(",")
                );
            }
            s
        }
    };
    let _ = io.out.write_all(text.as_bytes());
    EXIT_OK
}

fn lab_code(e: &LabError) -> u8 {
    match e {
        LabError::BudgetExceeded { .. } | LabError::Precondition(_) | LabError::Witness { .. } => {
            EXIT_INPUT
        }
        LabError::NotAMetric(_) => EXIT_INPUT,
    }
}

fn cmd_cover(io: &mut Io, action: CoverCmd, budget: usize) -> u8 {
    match action {
        CoverCmd::Build { n, d, radius, out } => {
            let w = match lab::brick_cover(n, d, radius, budget) {
                Ok(w) => w,
                Err(e) => return io.fail(lab_code(&e), e),
            };
            let text = lab::write_witness(&w);
            match out {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        return io.fail(EXIT_INPUT, format!("{}: {e}", p.display()));
                    }
                    let _ = writeln!(
                        io.out,
                        "wrote {} ({} families, D={}, B={}, brick side {})",
                        p.display(),
                        w.families.len(),
                        w.d,
                        w.b,
                        lab::brick_side(n, d)
                    );
                }
                None => {
                    let _ = io.out.write_all(text.as_bytes());
                }
            }
            EXIT_OK
        }
        CoverCmd::Verify { file, format } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return io.fail(EXIT_INPUT, format!("{}: {e}", file.display())),
            };
            let w = match lab::read_witness(&text, budget) {
                Ok(w) => w,
                Err(e) => return io.fail(lab_code(&e), format!("{}: {e}", file.display())),
            };
            let rep = lab::verify_cover(&w);
            let text = match format {
                Format::Structured => to_json(&rep),
                Format::Text => {
                    let mut s = if rep.valid {
                        format!(
                            "valid fixed-scale witness: D={} B={} on {}\n",
                            w.d,
                            rep.b,
                            w.space.label()
                        )
                    } else {
                        format!("invalid: {} violation(s)\n", rep.violations.len())
                    };
                    for v in &rep.violations {
                        s += &format!("  {v}\n");
                    }
                    s
                }
            };
            let _ = io.out.write_all(text.as_bytes());
            if rep.valid {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        CoverCmd::Search { group, radius, d, b, k_max } => {
            let result = group
                .parse::<GroupSpec>()
                .and_then(|spec| lab::cayley_ball(spec, radius, budget))
                .and_then(|space| {
                    lab::min_families_exhaustive(&space, d, b, k_max).map(|o| (space, o))
                });
            match result {
                Ok((space, SearchOutcome::Found { k, witness })) => {
                    let _ = writeln!(io.out, "k={k}");
                    let _ = writeln!(
                        io.out,
                        "fixed-scale witness on {} at D={d}, B={b} (largest subset diameter {})",
                        space.label(),
                        witness.b
                    );
                    EXIT_OK
                }
                Ok((space, SearchOutcome::NoneUpTo(k))) => {
                    let _ = writeln!(io.out, "k=none");
                    let _ = writeln!(
                        io.out,
                        "no cover of {} with at most {k} families at D={d}, B={b}",
                        space.label()
                    );
                    EXIT_OK
                }
                Err(e) => io.fail(lab_code(&e), e),
            }
        }
    }
}
