use clap::{Parser, Subcommand, ValueEnum};
use pta_core::batch::compare_with_oracle;
use pta_core::batch::SweepOutcome;
use pta_core::checker::{check_overflow, OverflowReport};
use pta_core::interproc::{run_analysis, AnalysisError, AnalysisResult, AnalysisVariant};
use pta_core::ir::{parse_program, validate_program, Program, RegId};
use pta_core::oracle::{diff_alias, generate, GenConfig, OracleError, RuleSet, DEFAULT_FACT_LIMIT};
use pta_core::render::{self, RenderOptions};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod exit {
    pub const INPUT: u8 = 1;
    pub const INTERNAL: u8 = 2;
    pub const ALIAS_FOUND: u8 = 3;
    pub const RESOURCE_LIMIT: u8 = 4;
    pub const MISMATCH: u8 = 5;
}

#[derive(Parser)]
#[command(
    name = "pta",
    version,
    about = "Points-to analyses for a small LLVM-like IR"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Dot,
    Metrics,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a program and emit its points-to graphs.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value = "dsa")]
        variant: AnalysisVariant,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only emit this function's graph.
        #[arg(long)]
        function: Option<String>,
        /// Include phase wall times in JSON/metrics output.
        #[arg(long)]
        timings: bool,
    },
    /// Run the field-overflow checker and print its report as JSON.
    Check {
        input: PathBuf,
        #[arg(long, default_value = "dsa")]
        variant: AnalysisVariant,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 3 when any alias pair is reported.
        #[arg(long)]
        fail_on_alias: bool,
    },
    /// Compare the alias relations and checker counts of two variants.
    Diff {
        input: PathBuf,
        #[arg(long, num_args = 2, required = true, value_names = ["LEFT", "RIGHT"])]
        variant: Vec<AnalysisVariant>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the engine against the naive fixpoint evaluator.
    Oracle {
        input: PathBuf,
        /// Variant to check; all variants with an oracle rule set by default.
        #[arg(long)]
        variant: Option<AnalysisVariant>,
        #[arg(long, default_value_t = DEFAULT_FACT_LIMIT)]
        fact_limit: usize,
        /// Drop one engine alias pair before comparing (exercises the
        /// mismatch path).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print a seeded random program.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        functions: usize,
        #[arg(long, default_value_t = 10)]
        instrs: usize,
        /// Make the first N functions call each other in sequence.
        #[arg(long, default_value_t = 0)]
        chain: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: exit::INPUT,
            message: message.to_string(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::Validation(_) => exit::INPUT,
            _ => exit::INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn load(path: &Path) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let p = parse_program(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report =
        validate_program(&p).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(p)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: exit::INTERNAL,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(p: &Program, variant: AnalysisVariant) -> Result<AnalysisResult, Failure> {
    Ok(run_analysis(p, variant)?)
}

fn pair_names(r: &AnalysisResult, pairs: &[(RegId, RegId)]) -> Vec<[String; 2]> {
    pairs
        .iter()
        .map(|&(a, b)| [r.reg_name(a), r.reg_name(b)])
        .collect()
}

fn checker_counts(rep: &OverflowReport) -> serde_json::Value {
    json!({ "checks": rep.checks, "aliases": rep.aliases.len() })
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Analyze {
            input,
            variant,
            emit: kind,
            out,
            function,
            timings,
        } => {
            let r = analyze(&load(&input)?, variant)?;
            let opts = RenderOptions { function, timings };
            let text = match kind {
                Emit::Json => render::to_json(&r, &opts),
                Emit::Dot => render::to_dot(&r, &opts),
                Emit::Metrics => Ok(render::pretty(&json!({
                    "schema": render::SCHEMA_VERSION,
                    "variant": variant.name(),
                    "metrics": render::metrics_json(r.metrics(), timings),
                }))),
            }
            .map_err(Failure::input)?;
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Check {
            input,
            variant,
            out,
            fail_on_alias,
        } => {
            let rep = check_overflow(&analyze(&load(&input)?, variant)?);
            let mut text = rep.to_json();
            text.push('\n');
            emit(out.as_deref(), &text)?;
            Ok(if fail_on_alias && !rep.aliases.is_empty() {
                exit::ALIAS_FOUND
            } else {
                0
            })
        }
        Command::Diff {
            input,
            variant,
            out,
        } => {
            let p = load(&input)?;
            let (left, right) = (analyze(&p, variant[0])?, analyze(&p, variant[1])?);
            let d = diff_alias(&left.alias_pairs(), &right.alias_pairs());
            let v = json!({
                "schema": render::SCHEMA_VERSION,
                "left": variant[0].name(),
                "right": variant[1].name(),
                "alias": {
                    "empty": d.is_empty(),
                    "common": d.common,
                    "only_left": pair_names(&left, &d.only_left),
                    "only_right": pair_names(&left, &d.only_right),
                },
                "checker": {
                    "left": checker_counts(&check_overflow(&left)),
                    "right": checker_counts(&check_overflow(&right)),
                },
            });
            emit(out.as_deref(), &render::pretty(&v))?;
            Ok(0)
        }
        Command::Oracle {
            input,
            variant,
            fact_limit,
            inject_fault,
        } => {
            let p = load(&input)?;
            let variants: Vec<AnalysisVariant> = match variant {
                Some(v) => vec![v],
                None => AnalysisVariant::ALL
                    .into_iter()
                    .filter(|&v| RuleSet::for_variant(v).is_some())
                    .collect(),
            };
            let mut code = 0;
            for v in variants {
                let rs = RuleSet::for_variant(v).ok_or_else(|| {
                    Failure::input(format!("no oracle rule set for variant `{v}`"))
                })?;
                let outcome = if inject_fault {
                    faulty_compare(&p, v, rs, fact_limit)
                } else {
                    compare_with_oracle(&p, v, rs, fact_limit)
                };
                match outcome {
                    SweepOutcome::Agree => println!("{v}: ok"),
                    SweepOutcome::Mismatch(d) => {
                        let r = analyze(&p, v)?;
                        print!("{v}: mismatch {}", d.render(|x| r.reg_name(x)));
                        code = exit::MISMATCH;
                    }
                    SweepOutcome::Engine(e) => return Err(e.into()),
                    SweepOutcome::Oracle(OracleError::ResourceLimit { limit }) => {
                        eprintln!("{v}: oracle exceeded its fact limit of {limit}");
                        if code == 0 {
                            code = exit::RESOURCE_LIMIT;
                        }
                    }
                    SweepOutcome::Oracle(e) => return Err(Failure::input(e)),
                }
            }
            Ok(code)
        }
        Command::Gen {
            seed,
            functions,
            instrs,
            chain,
            out,
        } => {
            if functions == 0 {
                return Err(Failure::input("--functions must be at least 1"));
            }
            let p = generate(
                seed,
                GenConfig {
                    chain,
                    ..GenConfig::new(functions, instrs)
                },
            );
            emit(out.as_deref(), &p.to_string())?;
            Ok(0)
        }
    }
}

/// Like [`compare_with_oracle`], after removing the engine's first alias pair.
fn faulty_compare(p: &Program, v: AnalysisVariant, rs: RuleSet, limit: usize) -> SweepOutcome {
    let engine = match run_analysis(p, v) {
        Ok(r) => r,
        Err(e) => return SweepOutcome::Engine(e),
    };
    let mut pairs = engine.alias_pairs();
    pairs.pop_first();
    match pta_core::oracle::eval_naive_with(p, rs, limit) {
        Ok(fb) => {
            let d = diff_alias(&pairs, &fb.alias_pairs());
            if d.is_empty() {
                SweepOutcome::Agree
            } else {
                SweepOutcome::Mismatch(d)
            }
        }
        Err(e) => SweepOutcome::Oracle(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(exit::INPUT);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
