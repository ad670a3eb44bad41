//! Command-line front end: generation, avoidance checks, shuffle
//! verification, survival curves and the recurrent shuffle builder.
//!
//! Exit codes: 0 success/clean, 1 property violation or verification
//! mismatch, 2 resource/budget errors, 64 usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shuffleword::avoidance::{self, PatternReport, SquareReport};
use shuffleword::catalog;
use shuffleword::shuffle::{
    self, build_recurrent_shuffle, exact_finite_shuffle, hall_shuffle_witness,
    self_shuffle_witness_g, verify_block_factorization, BlockSchedule,
};
use shuffleword::{Error, Morphism, Word, WordStream};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "shuffleword", version, about = "infinite words, avoidance checks and shuffle factorizations")]
struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,

    /// Omit timing fields so identical invocations are byte-identical.
    #[arg(long, global = true)]
    stable: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog of named morphisms and words.
    List,
    /// Print a prefix of a word as digits.
    Gen {
        #[command(flatten)]
        source: WordSource,
        #[arg(long)]
        length: usize,
    },
    /// Scan a prefix for squares, the 3u1u3 pattern, or the maximal exponent.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        source: WordSource,
        #[arg(long)]
        length: usize,
    },
    /// Shuffle relations: witnesses, frontiers, survival curves, builder.
    Shuffle {
        #[command(subcommand)]
        command: ShuffleCommand,
    },
    /// Desubstitute a word under a morphism whose images form a bifix code.
    Decode {
        /// The word to decode, as digits.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        morphism: MorphismSource,
    },
    /// Apply or compose morphisms.
    Morph {
        #[command(subcommand)]
        command: MorphCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Squarefree,
    #[value(name = "pattern-3u1u3")]
    Pattern3u1u3,
    Exponent,
}

#[derive(Subcommand)]
enum ShuffleCommand {
    /// Verify one of the built-in block-schedule witnesses.
    VerifyWitness {
        #[arg(long)]
        witness: WitnessName,
        #[arg(long, default_value_t = 10_000)]
        depth: usize,
    },
    /// Print the split states of the interleaving frontier at a depth.
    Frontier {
        #[arg(long)]
        z: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        depth: usize,
    },
    /// Emit the balanced-survival curve as CSV (n,b with -inf when dead).
    Survival {
        #[arg(long)]
        z: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 2_000)]
        depth: usize,
    },
    /// Decide whether a finite word is an interleaving of two others.
    Finite {
        #[arg(long)]
        z: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Build a shuffle of a recurrent word inductively and verify it.
    Build {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
        /// Seed block U_0 as digits (defaults to the length-1 prefix).
        #[arg(long)]
        u0: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessName {
    #[value(name = "g-self")]
    GSelf,
    Hall,
}

#[derive(Subcommand)]
enum MorphCommand {
    Apply {
        #[command(flatten)]
        morphism: MorphismSource,
        /// Input word as digits.
        #[arg(long)]
        input: String,
    },
    Compose {
        /// Outer morphism (catalog name or file path).
        #[arg(long)]
        outer: String,
        /// Inner morphism (catalog name or file path).
        #[arg(long)]
        inner: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct WordSource {
    /// Catalog word name.
    #[arg(long, conflicts_with_all = ["morphism_file", "seed"])]
    word: Option<String>,
    /// Morphism file (one rule per line, `letter -> image`).
    #[arg(long, requires = "seed")]
    morphism_file: Option<PathBuf>,
    /// Seed letter for the fixed point of the morphism file.
    #[arg(long, requires = "morphism_file")]
    seed: Option<u8>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MorphismSource {
    /// Catalog morphism name.
    #[arg(long)]
    morphism: Option<String>,
    /// Morphism file path.
    #[arg(long)]
    morphism_file: Option<PathBuf>,
}

struct Report {
    command: &'static str,
    params: Value,
    outcome: &'static str,
    payload: Value,
    text: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap help/version are not usage errors
            let code = if err.exit_code() == 0 { EXIT_OK } else { EXIT_USAGE };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                let mut obj = json!({
                    "command": report.command,
                    "params": report.params,
                    "outcome": report.outcome,
                    "report": report.payload,
                });
                if !cli.stable {
                    obj["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
                }
                println!("{obj}");
            } else if !report.text.is_empty() {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_exit_code(&err))
        }
    }
}

fn error_exit_code(err: &Error) -> u8 {
    match err {
        Error::RecurrenceBudgetExceeded { .. } | Error::MemoryBudgetExceeded { .. } => EXIT_BUDGET,
        Error::UnknownName(_)
        | Error::InvalidInput(_)
        | Error::MorphismParse(_)
        | Error::LetterOutOfRange { .. }
        | Error::AlphabetMismatch(_)
        | Error::NotProlongable(_) => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

fn load_word_source(source: &WordSource) -> Result<WordStream, Error> {
    if let Some(name) = &source.word {
        return catalog::word(name);
    }
    let path = source.morphism_file.as_ref().expect("clap group");
    let seed = source.seed.expect("clap group");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let m = Morphism::parse(&text)?;
    WordStream::fixed_point(&m, seed)
}

fn load_morphism(source: &MorphismSource) -> Result<Morphism, Error> {
    if let Some(name) = &source.morphism {
        return catalog::morphism(name);
    }
    let path = source.morphism_file.as_ref().expect("clap group");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Morphism::parse(&text)
}

fn load_morphism_by_name_or_path(spec: &str) -> Result<Morphism, Error> {
    if catalog::MORPHISM_NAMES.contains(&spec) {
        catalog::morphism(spec)
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
        Morphism::parse(&text)
    }
}

fn parse_finite(digits: &str) -> Result<Word, Error> {
    let max = digits
        .chars()
        .filter_map(|c| c.to_digit(10))
        .max()
        .unwrap_or(1);
    let alphabet = shuffleword::Alphabet::new((max as usize + 1).max(2))?;
    Word::from_digits(digits, alphabet)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::List => {
            let entries = catalog::entries();
            let mut text = String::new();
            let mut items = Vec::new();
            for e in &entries {
                let kind = match e.kind {
                    catalog::Kind::Morphism => "morphism",
                    catalog::Kind::Word => "word",
                };
                text.push_str(&format!("{:<12} {:<8} alphabet {}\n", e.name, kind, e.alphabet));
                items.push(json!({"name": e.name, "kind": kind, "alphabet": e.alphabet}));
            }
            Ok(Report {
                command: "list",
                params: json!({}),
                outcome: "value",
                payload: json!(items),
                text,
                exit: EXIT_OK,
            })
        }
        Command::Gen { source, length } => {
            let stream = load_word_source(source)?;
            let prefix = stream.prefix(*length)?;
            Ok(Report {
                command: "gen",
                params: json!({"word": source.word, "length": length}),
                outcome: "value",
                payload: json!({"prefix": prefix.to_string()}),
                text: format!("{prefix}\n"),
                exit: EXIT_OK,
            })
        }
        Command::Check {
            kind,
            source,
            length,
        } => {
            let stream = load_word_source(source)?;
            let prefix = stream.prefix(*length)?;
            let (outcome, payload, text, exit) = match kind {
                CheckKind::Squarefree => match avoidance::find_square(&prefix) {
                    SquareReport::Clean => (
                        "clean",
                        json!({"clean": true}),
                        format!("clean: no square in the first {length} letters\n"),
                        EXIT_OK,
                    ),
                    SquareReport::Violation { position, root } => (
                        "violation",
                        json!({"clean": false, "position": position, "root": root.to_string()}),
                        format!("square {root}{root} at position {position}\n"),
                        EXIT_VIOLATION,
                    ),
                },
                CheckKind::Pattern3u1u3 => match avoidance::find_pattern_3u1u3(&prefix)? {
                    PatternReport::Clean => (
                        "clean",
                        json!({"clean": true}),
                        format!("clean: no 3u1u3 factor in the first {length} letters\n"),
                        EXIT_OK,
                    ),
                    PatternReport::Violation { position, middle } => (
                        "violation",
                        json!({"clean": false, "position": position, "root": middle.to_string()}),
                        format!("3u1u3 factor with u={middle} at position {position}\n"),
                        EXIT_VIOLATION,
                    ),
                },
                CheckKind::Exponent => {
                    let r = avoidance::max_exponent(&prefix)?;
                    (
                        "value",
                        json!({
                            "exponent": r.exponent.to_string(),
                            "position": r.position,
                            "period": r.period,
                            "length": r.length,
                        }),
                        format!(
                            "max exponent {} (factor at {}, period {}, length {})\n",
                            r.exponent, r.position, r.period, r.length
                        ),
                        EXIT_OK,
                    )
                }
            };
            let kind_name = match kind {
                CheckKind::Squarefree => "squarefree",
                CheckKind::Pattern3u1u3 => "pattern-3u1u3",
                CheckKind::Exponent => "exponent",
            };
            Ok(Report {
                command: "check",
                params: json!({"kind": kind_name, "word": source.word, "length": length}),
                outcome,
                payload,
                text,
                exit,
            })
        }
        Command::Shuffle { command } => run_shuffle(command),
        Command::Decode { input, morphism } => {
            let m = load_morphism(morphism)?;
            let w = Word::new(
                m.codomain(),
                parse_finite(input)?
                    .letters()
                    .to_vec(),
            )?;
            let decoded = m.decode_bifix(&w)?;
            Ok(Report {
                command: "decode",
                params: json!({"input": input}),
                outcome: "value",
                payload: json!({"preimage": decoded.to_string()}),
                text: format!("{decoded}\n"),
                exit: EXIT_OK,
            })
        }
        Command::Morph { command } => match command {
            MorphCommand::Apply { morphism, input } => {
                let m = load_morphism(morphism)?;
                let w = Word::new(m.domain(), parse_finite(input)?.letters().to_vec())?;
                let image = m.apply(&w)?;
                Ok(Report {
                    command: "morph-apply",
                    params: json!({"input": input}),
                    outcome: "value",
                    payload: json!({"image": image.to_string()}),
                    text: format!("{image}\n"),
                    exit: EXIT_OK,
                })
            }
            MorphCommand::Compose { outer, inner } => {
                let outer_m = load_morphism_by_name_or_path(outer)?;
                let inner_m = load_morphism_by_name_or_path(inner)?;
                let composed = Morphism::compose(&outer_m, &inner_m)?;
                Ok(Report {
                    command: "morph-compose",
                    params: json!({"outer": outer, "inner": inner}),
                    outcome: "value",
                    payload: json!({"rules": composed.render()}),
                    text: composed.render(),
                    exit: EXIT_OK,
                })
            }
        },
    }
}

fn run_shuffle(command: &ShuffleCommand) -> Result<Report, Error> {
    match command {
        ShuffleCommand::VerifyWitness { witness, depth } => {
            let (name, schedule, z, x, y): (&str, BlockSchedule, _, _, _) = match witness {
                WitnessName::GSelf => {
                    let gfix = catalog::word("g-fix")?;
                    (
                        "g-self",
                        self_shuffle_witness_g(),
                        gfix.clone(),
                        gfix.clone(),
                        gfix,
                    )
                }
                WitnessName::Hall => (
                    "hall",
                    hall_shuffle_witness(),
                    catalog::word("hall")?,
                    catalog::word("hall-u")?,
                    catalog::word("hall-v")?,
                ),
            };
            let report = verify_block_factorization(&z, &x, &y, &schedule, *depth)?;
            let params = json!({"witness": name, "depth": depth});
            if report.verified() {
                Ok(Report {
                    command: "shuffle-verify-witness",
                    params,
                    outcome: "pass",
                    payload: json!({"verified_depth": depth, "blocks_used": report.blocks_used}),
                    text: format!("pass: witness {name} verified to depth {depth}\n"),
                    exit: EXIT_OK,
                })
            } else {
                let mm = report.mismatch.expect("unverified without mismatch");
                Ok(Report {
                    command: "shuffle-verify-witness",
                    params,
                    outcome: "fail",
                    payload: json!({
                        "stream": mm.product.label(),
                        "position": mm.position,
                        "expected": mm.expected,
                        "actual": mm.actual,
                    }),
                    text: format!(
                        "fail: product {} disagrees at position {} (expected {}, got {})\n",
                        mm.product.label(),
                        mm.position,
                        mm.expected,
                        mm.actual
                    ),
                    exit: EXIT_VIOLATION,
                })
            }
        }
        ShuffleCommand::Frontier { z, x, y, depth } => {
            let (zs, xs, ys) = (catalog::word(z)?, catalog::word(x)?, catalog::word(y)?);
            let f = shuffle::shuffle_frontier(&zs, &xs, &ys, *depth)?;
            let states = f.states();
            let text = states
                .iter()
                .map(|(i, j)| format!("({i},{j})"))
                .collect::<Vec<_>>()
                .join(" ")
                + "\n";
            let empty = states.is_empty();
            Ok(Report {
                command: "shuffle-frontier",
                params: json!({"z": z, "x": x, "y": y, "depth": depth}),
                outcome: if empty { "fail" } else { "pass" },
                payload: json!({"states": states}),
                text,
                exit: if empty { EXIT_VIOLATION } else { EXIT_OK },
            })
        }
        ShuffleCommand::Survival { z, x, y, depth } => {
            let (zs, xs, ys) = (catalog::word(z)?, catalog::word(x)?, catalog::word(y)?);
            let curve = shuffle::survival_curve(&zs, &xs, &ys, *depth)?;
            let csv = curve.to_csv();
            Ok(Report {
                command: "shuffle-survival",
                params: json!({"z": z, "x": x, "y": y, "depth": depth}),
                outcome: "value",
                payload: json!({
                    "csv": csv,
                    "final": curve.value(*depth),
                }),
                text: csv,
                exit: EXIT_OK,
            })
        }
        ShuffleCommand::Finite { z, x, y } => {
            let zw = parse_finite(z)?;
            let xw = parse_finite(x)?;
            let yw = parse_finite(y)?;
            let size = zw
                .alphabet()
                .size()
                .max(xw.alphabet().size())
                .max(yw.alphabet().size());
            let a = shuffleword::Alphabet::new(size)?;
            let zw = Word::new(a, zw.letters().to_vec())?;
            let xw = Word::new(a, xw.letters().to_vec())?;
            let yw = Word::new(a, yw.letters().to_vec())?;
            let ok = exact_finite_shuffle(&zw, &xw, &yw)?;
            Ok(Report {
                command: "shuffle-finite",
                params: json!({"z": z, "x": x, "y": y}),
                outcome: if ok { "pass" } else { "fail" },
                payload: json!({"shuffle": ok}),
                text: format!("{}\n", if ok { "yes" } else { "no" }),
                exit: if ok { EXIT_OK } else { EXIT_VIOLATION },
            })
        }
        ShuffleCommand::Build {
            word,
            rounds,
            limit,
            u0,
        } => {
            let stream = catalog::word(word)?;
            let seed = match u0 {
                Some(digits) => Some(Word::new(
                    stream.alphabet(),
                    parse_finite(digits)?.letters().to_vec(),
                )?),
                None => None,
            };
            let built = build_recurrent_shuffle(&stream, *rounds, *limit, seed)?;
            let sched = built.schedule();
            let alphabet = stream.alphabet();
            let verify_depth = built.left_len.min(built.right_len);
            let report = verify_block_factorization(
                &sched.interleaved(alphabet),
                &sched.left_product(alphabet),
                &sched.right_product(alphabet),
                &sched,
                verify_depth,
            )?;
            // the interleaved product must reproduce the word itself
            let z_match = sched
                .interleaved(alphabet)
                .prefix(built.total_len)?
                == stream.prefix(built.total_len)?;
            let pass = report.verified() && z_match;
            let dump = sched.dump(built.blocks.len());
            Ok(Report {
                command: "shuffle-build",
                params: json!({"word": word, "rounds": rounds, "limit": limit}),
                outcome: if pass { "pass" } else { "fail" },
                payload: json!({
                    "positions": built.positions,
                    "total_len": built.total_len,
                    "left_len": built.left_len,
                    "right_len": built.right_len,
                    "schedule": dump,
                }),
                text: format!(
                    "{dump}covered {} letters ({} left, {} right): {}\n",
                    built.total_len,
                    built.left_len,
                    built.right_len,
                    if pass { "pass" } else { "fail" }
                ),
                exit: if pass { EXIT_OK } else { EXIT_VIOLATION },
            })
        }
    }
}
