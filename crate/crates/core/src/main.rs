//! `pfms` command-line tool.
//!
//! Every command prints one JSON object `{"result", "witness", "report"}` on
//! standard output. Exit codes: 0 success or property holds, 1 property
//! fails (a witness is printed), 2 input or usage error (reported on
//! standard error).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pfms::convexity::level_report;
use pfms::format::{instance_value, parse_instance, FormatError};
use pfms::lab::run_suite;
use pfms::{
    complement, convex_combination, convex_hull, cut, intersection, is_convex_sampled,
    jensen_check, union, CutThresholds, PfmsError, PictureFuzzyMultiset, UnitValue, WeightVector,
};

#[derive(Parser)]
#[command(
    name = "pfms",
    version,
    about = "Picture fuzzy multisets on 1-D domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file
    Validate { file: PathBuf },
    /// Evaluate the grade at a domain coordinate
    Evaluate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Check convexity, per level
    CheckConvex {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Random point pairs for the sampled mode
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Interior λ values per pair for the sampled mode
        #[arg(long, default_value_t = 21)]
        lambdas: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Compute the (r,s,t)-cut
    Cut {
        file: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Compute the picture convex hull
    Hull { file: PathBuf },
    /// Apply an algebraic operation
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Evaluate the finite-point convexity criterion
    Jensen {
        file: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        points: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run a property suite
    Suite {
        #[arg(long)]
        name: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Op {
    Union {
        a: PathBuf,
        b: PathBuf,
    },
    Intersection {
        a: PathBuf,
        b: PathBuf,
    },
    Complement {
        a: PathBuf,
    },
    /// λ·A + (1 − λ)·B
    Blend {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

enum CliError {
    Io(PathBuf, std::io::Error),
    Format(PathBuf, FormatError),
    Pfms(PfmsError),
}

impl From<PfmsError> for CliError {
    fn from(e: PfmsError) -> Self {
        CliError::Pfms(e)
    }
}

impl CliError {
    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Io(path, e) => ("IoError", format!("{}: {e}", path.display())),
            CliError::Format(path, e) => (e.kind(), format!("{}: {e}", path.display())),
            CliError::Pfms(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

/// Command output and whether the checked property held.
struct Outcome {
    result: Value,
    witness: Value,
    report: Value,
    holds: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            witness: Value::Null,
            report: Value::Null,
            holds: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            eprintln!(
                "{}",
                json!({ "error": { "kind": "UsageError", "message": message.trim_end() } })
            );
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let doc = json!({ "result": out.result, "witness": out.witness, "report": out.report });
            println!("{doc}");
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<PictureFuzzyMultiset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    parse_instance(&text).map_err(|e| CliError::Format(path.to_owned(), e))
}

fn levels(d: &PictureFuzzyMultiset, level: Option<usize>) -> Result<Vec<usize>, CliError> {
    match level {
        Some(k) if k == 0 || k > d.depth() => Err(PfmsError::BadLevel {
            level: k,
            depth: d.depth(),
        }
        .into()),
        Some(k) => Ok(vec![k]),
        None => Ok((1..=d.depth()).collect()),
    }
}

/// A single requested level is reported flat; otherwise results are keyed
/// by level.
fn per_level(level: Option<usize>, results: Vec<(usize, Value)>) -> Value {
    match level {
        Some(k) => {
            let mut value = results
                .into_iter()
                .next()
                .map(|(_, v)| v)
                .unwrap_or(Value::Null);
            if let Value::Object(map) = &mut value {
                map.insert("level".into(), json!(k));
            }
            value
        }
        None => {
            let map: Map<String, Value> = results
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            json!({ "levels": map })
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => {
            let d = load(&file)?;
            Ok(Outcome::ok(json!({
                "valid": true,
                "points": d.len(),
                "depth": d.depth(),
            })))
        }
        Command::Evaluate { file, x, level } => {
            let d = load(&file)?;
            let mut results = Vec::new();
            for k in levels(&d, level)? {
                let g = d.evaluate(x, k)?;
                results.push((k, json!({ "grade": g.to_array(), "refusal": g.refusal() })));
            }
            let mut result = per_level(level, results);
            result["x"] = json!(x);
            Ok(Outcome::ok(result))
        }
        Command::CheckConvex {
            file,
            mode,
            samples,
            lambdas,
            seed,
            level,
        } => {
            let d = load(&file)?;
            let mut per = Map::new();
            let mut witness = Value::Null;
            let mut convex = true;
            let mut vacuous = false;
            for k in levels(&d, level)? {
                let report = match mode {
                    Mode::Exact => level_report(&d, k)?,
                    Mode::Sampled => {
                        let mut r = is_convex_sampled(&d.single_level(k)?, samples, lambdas, seed);
                        if let Some(w) = r.witness.as_mut() {
                            w.level = k;
                        }
                        r
                    }
                };
                vacuous |= report.vacuous;
                per.insert(k.to_string(), json!(report.convex));
                if !report.convex && convex {
                    convex = false;
                    witness = json!(report.witness);
                }
            }
            let mode_name = match mode {
                Mode::Exact => "exact",
                Mode::Sampled => "sampled",
            };
            let mut report = json!({ "mode": mode_name });
            if let Mode::Sampled = mode {
                report["samples"] = json!(samples);
                report["lambdas"] = json!(lambdas);
                report["seed"] = json!(seed);
                if vacuous {
                    report["warning"] = json!("no samples drawn; result is vacuous");
                }
            }
            Ok(Outcome {
                result: json!({ "convex": convex, "levels": per }),
                witness,
                report,
                holds: convex,
            })
        }
        Command::Cut {
            file,
            r,
            s,
            t,
            level,
        } => {
            let d = load(&file)?;
            let thresholds = CutThresholds::new(r, s, t)?;
            let mut results = Vec::new();
            for k in levels(&d, level)? {
                let region = cut(&d, thresholds, k)?;
                results.push((
                    k,
                    json!({ "intervals": region, "convex": region.is_convex() }),
                ));
            }
            let mut outcome = Outcome::ok(per_level(level, results));
            outcome.report = json!({
                "thresholds": thresholds,
                "conventional": thresholds.is_conventional(),
            });
            Ok(outcome)
        }
        Command::Hull { file } => {
            let d = load(&file)?;
            let hull = convex_hull(&d);
            let mut outcome = Outcome::ok(json!(hull));
            outcome.report = json!({
                "all_valid": hull.all_valid(),
                "invalid_count": hull.invalid_count(),
            });
            Ok(outcome)
        }
        Command::Op { op } => {
            let out = match op {
                Op::Union { a, b } => union(&load(&a)?, &load(&b)?)?,
                Op::Intersection { a, b } => intersection(&load(&a)?, &load(&b)?)?,
                Op::Complement { a } => complement(&load(&a)?),
                Op::Blend { a, b, lambda } => {
                    let lambda = UnitValue::new(lambda)?;
                    convex_combination(&load(&a)?, &load(&b)?, lambda)?
                }
            };
            Ok(Outcome::ok(instance_value(&out)))
        }
        Command::Jensen {
            file,
            points,
            weights,
            level,
        } => {
            let d = load(&file)?;
            let weights = WeightVector::new(weights)?;
            let mut results = Vec::new();
            let mut witness = Value::Null;
            let mut holds = true;
            for k in levels(&d, level)? {
                let report = jensen_check(&d, &points, &weights, k)?;
                let value = json!({
                    "point": report.point,
                    "slacks": {
                        "sigma": report.slacks[0],
                        "tau": report.slacks[1],
                        "eta": report.slacks[2],
                    },
                    "holds": report.holds,
                });
                if !report.holds && holds {
                    holds = false;
                    witness = json!({ "level": k, "slacks": value["slacks"].clone() });
                }
                results.push((k, value));
            }
            let mut result = per_level(level, results);
            result["holds"] = json!(holds);
            Ok(Outcome {
                result,
                witness,
                report: Value::Null,
                holds,
            })
        }
        Command::Suite { name, trials, seed } => {
            let result = run_suite(&name, trials, seed)?;
            let witness = result
                .failures
                .first()
                .map(|c| json!(c))
                .unwrap_or(Value::Null);
            Ok(Outcome {
                report: json!({
                    "passed": result.passed,
                    "expects_failures": result.expects_failures,
                    "failure_count": result.failure_count,
                }),
                holds: result.passed,
                witness,
                result: json!(result),
            })
        }
    }
}
