//! `wrel`: weighted-relation algebra and dependency checking from the
//! command line.
//!
//! Exit codes are part of the interface so shell pipelines can branch
//! on verdicts:
//!
//! * 0 — the operation succeeded, the statement holds, or the report
//!   passes in full;
//! * 1 — a negative verdict (statement fails, not derivable, or a
//!   counterexample was found) — not an error;
//! * 2 — usage or input error;
//! * 3 — a resource bound was exceeded.
//!
//! Output is byte-deterministic unless `--timings` is given.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wrel::dependency::{
    check_ci, check_emvd_with, check_gemvd, check_gmvd, check_mvd, MvdMethod,
};
use wrel::implication::{
    check_implication, cover_contains, nonaxiomatizability_report, CoverQuery, ImplicationLimits,
    ZemvdSet,
};
use wrel::io::{parse_relation, parse_statement_list, parse_zemvd_set, write_relation};
use wrel::witness::{find_witness, SearchBounds, SearchOutcome};
use wrel::{
    AttributeSet, DependencyKind, DependencyStatement, Error, RationalRelation,
};

#[derive(Parser)]
#[command(
    name = "wrel",
    version,
    about = "Exact weighted-relation algebra and dependency checking"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include wall-clock timings in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Marginalize a weighted relation onto a subset of its attributes.
    Marg {
        /// Relation file.
        file: PathBuf,
        /// Attributes to keep, comma-separated (`_` for none).
        #[arg(long)]
        onto: String,
    },
    /// Product join of two weighted relations.
    Pjoin {
        /// Left relation file.
        left: PathBuf,
        /// Right relation file.
        right: PathBuf,
    },
    /// Monotone join of a relation across two attribute sets covering
    /// its schema.
    Mjoin {
        /// Relation file.
        file: PathBuf,
        /// Left attribute set, comma-separated.
        #[arg(long)]
        left: String,
        /// Right attribute set, comma-separated.
        #[arg(long)]
        right: String,
    },
    /// Pointwise inverse of a weighted relation.
    Inv {
        /// Relation file.
        file: PathBuf,
    },
    /// Decide a dependency statement on a relation.
    Check {
        /// Which dependency to decide. `mvd`/`emvd` use the support of
        /// the relation; the rest use the weights. For `ci`, the
        /// statement `X ->> Y | Z` asserts that Y and Z are independent
        /// given X.
        kind: CheckKind,
        /// Relation file.
        file: PathBuf,
        /// Statement, e.g. "A ->> B | C" (`_` for an empty set).
        statement: String,
        /// Decision procedure for `mvd`/`emvd` checks.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Test whether a statement's saturated set lies in the cover of a
    /// statement family.
    Cover {
        /// Statement-family file (`Z:` header plus one statement per line).
        sigma: PathBuf,
        /// Statement whose left side and first component form the query.
        statement: String,
    },
    /// Derive a statement from a family via cover membership plus
    /// symmetry, augmentation, and projection.
    Derive {
        /// Statement-family file (`Z:` header plus one statement per line).
        sigma: PathBuf,
        /// Target statement.
        statement: String,
    },
    /// Build the cyclic-family report: one statement implied by the
    /// family as a whole yet derivable from no single member.
    Counterexample {
        /// Number of statements in the family (at least 3).
        #[arg(long)]
        n: usize,
        /// Attributes per block.
        #[arg(long, default_value_t = 1)]
        block_size: usize,
        /// Attributes in the shared conditioning set.
        #[arg(long, default_value_t = 1)]
        z_size: usize,
    },
    /// Search all small relations for one satisfying a premise file
    /// while violating a target statement.
    Witness {
        /// Premise file: one statement per line (may be empty).
        sigma: PathBuf,
        /// Target statement.
        statement: String,
        /// Values per attribute.
        #[arg(long, default_value_t = 2)]
        domain: usize,
        /// Largest support size enumerated.
        #[arg(long, default_value_t = 6)]
        max_tuples: usize,
        /// Candidate budget.
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: usize,
        /// Seed reserved for randomized generation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Mvd,
    Emvd,
    Gmvd,
    Gemvd,
    Ci,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Quadratic pair-swap check straight from the definition.
    Definition,
    /// Grouped value-set comparison.
    ValueSets,
    /// Cardinality product test.
    Counting,
}

impl From<MethodArg> for MvdMethod {
    fn from(arg: MethodArg) -> MvdMethod {
        match arg {
            MethodArg::Definition => MvdMethod::Definition,
            MethodArg::ValueSets => MvdMethod::ValueSets,
            MethodArg::Counting => MvdMethod::Counting,
        }
    }
}

/// A diagnostic plus the exit code it maps to.
struct Failure {
    message: String,
    code: u8,
}

type CliResult<T> = Result<T, Failure>;

fn code_for(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => 3,
        _ => 2,
    }
}

fn plain(err: Error) -> Failure {
    Failure {
        message: err.to_string(),
        code: code_for(&err),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

/// Reads and parses a file, prefixing any diagnostic with the path so
/// errors name the offending file and line.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> wrel::Result<T>) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        code: code_for(&e),
    })
}

fn parse_attrs(text: &str) -> CliResult<AttributeSet> {
    AttributeSet::parse(text).map_err(plain)
}

fn parse_stmt(text: &str, kind: DependencyKind) -> CliResult<DependencyStatement> {
    DependencyStatement::parse(text, kind).map_err(plain)
}

/// Prints a relation in the flagged format.
fn emit_relation(rel: &RationalRelation, format: Format) {
    match format {
        Format::Text => print!("{}", write_relation(rel)),
        Format::Json => {
            let columns: Vec<_> = rel.schema().iter().collect();
            let rows: Vec<Vec<String>> = rel
                .iter()
                .map(|(t, w)| {
                    columns
                        .iter()
                        .map(|c| t.get(c).expect("row matches schema").as_str().to_string())
                        .chain([w.to_string()])
                        .collect()
                })
                .collect();
            let doc = json!({ "schema": rel.schema().to_string(), "rows": rows });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
    }
}

/// Prints a boolean verdict and returns the matching exit code.
fn emit_verdict(context: &str, statement: &DependencyStatement, verdict: bool, format: Format) -> u8 {
    match format {
        Format::Text => println!("{statement}: {}", if verdict { "holds" } else { "fails" }),
        Format::Json => {
            let doc = json!({
                "check": context,
                "statement": statement.to_string(),
                "verdict": verdict,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
    }
    u8::from(!verdict)
}

fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Marg { file, onto } => {
            let rel = load(file, parse_relation)?;
            let onto = parse_attrs(onto)?;
            let out = rel.marginalize(&onto).map_err(plain)?;
            emit_relation(&out, cli.format);
            Ok(0)
        }
        Command::Pjoin { left, right } => {
            let lhs = load(left, parse_relation)?;
            let rhs = load(right, parse_relation)?;
            emit_relation(&lhs.product_join(&rhs), cli.format);
            Ok(0)
        }
        Command::Mjoin { file, left, right } => {
            let rel = load(file, parse_relation)?;
            let left = parse_attrs(left)?;
            let right = parse_attrs(right)?;
            let out = rel.monotone_join(&left, &right).map_err(plain)?;
            emit_relation(&out, cli.format);
            Ok(0)
        }
        Command::Inv { file } => {
            let rel = load(file, parse_relation)?;
            emit_relation(&rel.inverse(), cli.format);
            Ok(0)
        }
        Command::Check {
            kind,
            file,
            statement,
            method,
        } => {
            if method.is_some() && !matches!(kind, CheckKind::Mvd | CheckKind::Emvd) {
                return Err(usage("--method applies only to mvd and emvd checks"));
            }
            let rel = load(file, parse_relation)?;
            let (name, stmt_kind) = match kind {
                CheckKind::Mvd => ("mvd", DependencyKind::Mvd),
                CheckKind::Emvd => ("emvd", DependencyKind::Emvd),
                CheckKind::Gmvd => ("gmvd", DependencyKind::Gmvd),
                CheckKind::Gemvd => ("gemvd", DependencyKind::Gemvd),
                CheckKind::Ci => ("ci", DependencyKind::Ci),
            };
            let stmt = parse_stmt(statement, stmt_kind)?;
            let chosen = method.map(MvdMethod::from).unwrap_or(MvdMethod::ValueSets);
            let verdict = match kind {
                CheckKind::Mvd => check_mvd(&rel.support(), &stmt, chosen),
                CheckKind::Emvd => check_emvd_with(&rel.support(), &stmt, chosen),
                CheckKind::Gmvd => check_gmvd(&rel, &stmt),
                CheckKind::Gemvd => check_gemvd(&rel, &stmt),
                CheckKind::Ci => check_ci(&rel, &stmt),
            }
            .map_err(plain)?;
            Ok(emit_verdict(name, &stmt, verdict, cli.format))
        }
        Command::Cover { sigma, statement } => {
            let set = load(sigma, parse_zemvd_set)?;
            let stmt = parse_stmt(statement, DependencyKind::Emvd)?;
            let query = cover_query_for(&set, &stmt)?;
            match cover_contains(&set, &query).map_err(plain)? {
                Some(path) => {
                    match cli.format {
                        Format::Text => println!("covered\n{path}"),
                        Format::Json => {
                            let doc = json!({
                                "statement": stmt.to_string(),
                                "covered": true,
                                "path": path.to_json(),
                            });
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&doc).expect("valid json")
                            );
                        }
                    }
                    Ok(0)
                }
                None => {
                    match cli.format {
                        Format::Text => println!("not covered"),
                        Format::Json => {
                            let doc =
                                json!({ "statement": stmt.to_string(), "covered": false });
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&doc).expect("valid json")
                            );
                        }
                    }
                    Ok(1)
                }
            }
        }
        Command::Derive { sigma, statement } => {
            let set = load(sigma, parse_zemvd_set)?;
            let stmt = parse_stmt(statement, DependencyKind::Emvd)?;
            match check_implication(&set, &stmt, &ImplicationLimits::default()).map_err(plain)? {
                Some(witness) => {
                    match cli.format {
                        Format::Text => println!(
                            "derivable\ncover member: {}\npath: {}\nderivation: {}",
                            witness.cover_member(),
                            witness.path(),
                            witness.derivation(),
                        ),
                        Format::Json => {
                            let doc = json!({
                                "statement": stmt.to_string(),
                                "derivable": true,
                                "witness": witness.to_json(),
                            });
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&doc).expect("valid json")
                            );
                        }
                    }
                    Ok(0)
                }
                None => {
                    match cli.format {
                        Format::Text => println!("not derivable"),
                        Format::Json => {
                            let doc =
                                json!({ "statement": stmt.to_string(), "derivable": false });
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&doc).expect("valid json")
                            );
                        }
                    }
                    Ok(1)
                }
            }
        }
        Command::Counterexample { n, block_size, z_size } => {
            let report = nonaxiomatizability_report(*n, *block_size, *z_size).map_err(plain)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text(cli.timings)),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json(cli.timings))
                        .expect("valid json")
                ),
            }
            Ok(u8::from(!report.all_pass()))
        }
        Command::Witness {
            sigma,
            statement,
            domain,
            max_tuples,
            max_candidates,
            seed,
        } => {
            let premises = load(sigma, parse_statement_list)?;
            let stmt = parse_stmt(statement, DependencyKind::Emvd)?;
            let bounds = SearchBounds {
                domain_size: *domain,
                max_tuples: *max_tuples,
                max_candidates: *max_candidates,
                seed: *seed,
            };
            let report = find_witness(&premises, &stmt, &bounds).map_err(plain)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text(cli.timings)),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json(cli.timings))
                        .expect("valid json")
                ),
            }
            Ok(u8::from(matches!(
                report.outcome(),
                SearchOutcome::Counterexample(_)
            )))
        }
    }
}

/// Builds the cover query for a statement: the left-hand side reaches
/// for the first component, with the family's conditioning set left
/// implicit. The statement must be conditioned on exactly that set.
fn cover_query_for(set: &ZemvdSet, stmt: &DependencyStatement) -> CliResult<CoverQuery> {
    if stmt.second() != set.z() {
        return Err(usage(format!(
            "{stmt} is conditioned on {} rather than the family's {}",
            stmt.second(),
            set.z(),
        )));
    }
    CoverQuery::new(stmt.lhs().clone(), stmt.first().clone()).map_err(plain)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
