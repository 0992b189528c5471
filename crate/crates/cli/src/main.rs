//! `ofrag`: command-line front end for omega-fragments.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 resource limit.

use std::fmt::Write as _;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omega_fragments::polynomials::synthesize_polynomial;
use omega_fragments::topology::topology_report;
use omega_fragments::{
    classify, load, syntactic_context, ClassifyOptions, Error, ExtBuchiAutomaton, Limits, Word,
};

#[derive(Parser, Debug)]
#[command(
    name = "ofrag",
    version,
    about = "Decide first-order fragments of regular languages of finite and infinite words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest transition-profile monoid to build.
    #[arg(long, global = true, default_value = "5000")]
    max_monoid: NonZeroUsize,

    /// Largest monomial degree tried by polynomial synthesis.
    #[arg(long, global = true, default_value = "3")]
    max_degree: NonZeroUsize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// Exactly one of `-e`, `-f` or a positional argument. A positional
/// argument naming an existing file is read as a file.
#[derive(Args, Debug)]
struct Input {
    /// Inline expression, `alphabet: <letters>; <expr>`.
    #[arg(short = 'e', long = "expr", value_name = "EXPR")]
    expr: Option<String>,

    /// Expression file or automaton in the text format.
    #[arg(short = 'f', long = "file", value_name = "FILE")]
    file: Option<PathBuf>,

    /// Expression or file path.
    #[arg(value_name = "INPUT")]
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fragment membership report.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Attach violating pairs and synthesized polynomials.
        #[arg(long)]
        witness: bool,
        /// Classify every file of a directory; reports are written beside them.
        #[arg(long, value_name = "DIR")]
        batch: Option<PathBuf>,
    },
    /// Alphabetic closure (or interior) with open/closed verdicts.
    Closure {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        interior: bool,
    },
    /// Syntactic monoid, linked pairs, conjugacy classes and egg-box.
    Monoid {
        #[command(flatten)]
        input: Input,
    },
    /// Language equivalence with a counterexample.
    Equiv {
        #[command(flatten)]
        input: Input,
        /// The other language: expression or file path.
        #[arg(long = "with", value_name = "EXPR|FILE")]
        other: String,
    },
    /// Membership of a finite word or a lasso `u(v)^w`.
    Member {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'w', long, value_name = "WORD")]
        word: String,
    },
    /// Search for a (unambiguous) polynomial describing the language.
    Synth {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        unambiguous: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    /// Some batch inputs failed; carries the worst exit code.
    Batch(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_resource_limit() => 2,
            Failure::Batch(code) => *code,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Batch(_) => "some batch inputs failed".into(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

struct Source {
    label: String,
    text: String,
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Lib(Error::Io(format!("{}: {e}", path.display()))))
}

/// Expression text labels the report; automaton files are labelled by path.
fn source_of_file(path: &Path) -> Result<Source, Failure> {
    let text = read_file(path)?;
    let label = if text.lines().any(|l| l.trim_start().starts_with("states:")) {
        path.display().to_string()
    } else {
        text.trim().to_string()
    };
    Ok(Source { label, text })
}

fn source_of_arg(arg: &str) -> Result<Source, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return source_of_file(path);
    }
    Ok(Source {
        label: arg.trim().to_string(),
        text: arg.to_string(),
    })
}

impl Input {
    fn given(&self) -> usize {
        usize::from(self.expr.is_some())
            + usize::from(self.file.is_some())
            + usize::from(self.input.is_some())
    }

    fn source(&self) -> Result<Source, Failure> {
        if self.given() != 1 {
            return Err(Failure::Usage(
                "give exactly one input: -e <expr>, -f <file> or a positional argument".into(),
            ));
        }
        if let Some(e) = &self.expr {
            return Ok(Source {
                label: e.trim().to_string(),
                text: e.clone(),
            });
        }
        if let Some(f) = &self.file {
            return source_of_file(f);
        }
        source_of_arg(self.input.as_deref().unwrap_or_default())
    }
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    Failure::Usage(format!(
        "{cmd} does not support --format {}",
        format!("{format:?}").to_lowercase()
    ))
}

fn json(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("plain data")
}

fn run_classify(src: &Source, witness: bool, format: Format, limits: &Limits) -> Outcome {
    let a = load(&src.text, limits)?;
    let opts = ClassifyOptions {
        witnesses: witness,
        synthesize: witness,
    };
    let report = classify(&a, &src.label, opts, limits)?;
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Json => Ok(report.to_json()),
        Format::Dot => Err(unsupported("classify", format)),
    }
}

fn run_closure(src: &Source, interior: bool, format: Format, limits: &Limits) -> Outcome {
    let a = load(&src.text, limits)?;
    let report = topology_report(&a, limits)?;
    let (what, result) = if interior {
        ("interior", report.interior_automaton.clone())
    } else {
        ("closure", report.closure_automaton.clone())
    };
    match format {
        Format::Text => Ok(format!("{}\n{}", result.to_text(), report.verdict_text())),
        Format::Dot => Ok(result.to_dot()),
        Format::Json => Ok(json(serde_json::json!({
            "operation": what,
            "automaton": result.to_text(),
            "verdict": report.verdict(),
            "topology": report,
        }))),
    }
}

fn run_monoid(src: &Source, format: Format, limits: &Limits) -> Outcome {
    let a = load(&src.text, limits)?;
    let dump = syntactic_context(&a, limits)?.dump();
    Ok(match format {
        Format::Text => dump.to_text(),
        Format::Json => dump.to_json(),
        Format::Dot => dump.to_dot(),
    })
}

fn run_equiv(left: &Source, right: &Source, format: Format, limits: &Limits) -> Outcome {
    let a = load(&left.text, limits)?;
    let b = load(&right.text, limits)?;
    let eq = a.equivalent(&b, limits)?;
    let witness = match eq.counterexample() {
        Some(w) => Some((w.to_string(), if a.member(w)? { "left" } else { "right" })),
        None => None,
    };
    match format {
        Format::Text => Ok(match &witness {
            None => "equivalent\n".to_string(),
            Some((w, side)) => format!("not equivalent\ncounterexample: {w} (only in {side})\n"),
        }),
        Format::Json => Ok(json(serde_json::json!({
            "equivalent": witness.is_none(),
            "counterexample": witness.as_ref().map(|w| &w.0),
            "only_in": witness.as_ref().map(|w| w.1),
        }))),
        Format::Dot => Err(unsupported("equiv", format)),
    }
}

fn run_member(src: &Source, word: &str, format: Format, limits: &Limits) -> Outcome {
    let a: ExtBuchiAutomaton = load(&src.text, limits)?;
    let w = Word::parse(word)?;
    let member = a.member(&w)?;
    match format {
        Format::Text => Ok(format!("{w}: {member}\n")),
        Format::Json => Ok(json(
            serde_json::json!({ "word": w.to_string(), "member": member }),
        )),
        Format::Dot => Err(unsupported("member", format)),
    }
}

fn run_synth(src: &Source, unambiguous: bool, format: Format, limits: &Limits) -> Outcome {
    let a = load(&src.text, limits)?;
    let p = synthesize_polynomial(&a, limits.max_degree, unambiguous, limits)?;
    match format {
        Format::Text => Ok(match &p {
            Some(p) => format!("polynomial: {p}\n"),
            None => format!("no polynomial up to degree {}\n", limits.max_degree),
        }),
        Format::Json => Ok(json(serde_json::json!({
            "max_degree": limits.max_degree,
            "unambiguous": unambiguous,
            "polynomial": p.map(|p| p.to_string()),
        }))),
        Format::Dot => Err(unsupported("synth", format)),
    }
}

fn is_report(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.contains(".report."))
}

/// Classifies each file on its own thread; each writes only its own report.
fn run_batch(dir: &Path, witness: bool, format: Format, limits: &Limits) -> (String, u8) {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && !is_report(p))
            .collect(),
        Err(e) => return (format!("error: {}: {e}\n", dir.display()), 1),
    };
    files.sort();
    let ext = if format == Format::Json {
        "json"
    } else {
        "txt"
    };
    let results: Vec<(PathBuf, Result<PathBuf, Failure>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let out = source_of_file(path)
                        .and_then(|src| run_classify(&src, witness, format, limits))
                        .and_then(|body| {
                            let mut target = path.clone().into_os_string();
                            target.push(format!(".report.{ext}"));
                            let target = PathBuf::from(target);
                            std::fs::write(&target, body).map_err(|e| {
                                Failure::Lib(Error::Io(format!("{}: {e}", target.display())))
                            })?;
                            Ok(target)
                        });
                    (path.clone(), out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("classifier thread panicked"))
            .collect()
    });
    let mut log = String::new();
    let mut code = 0;
    for (path, r) in results {
        match r {
            Ok(target) => writeln!(log, "{}: ok -> {}", path.display(), target.display()),
            Err(f) => {
                code = code.max(f.code());
                writeln!(log, "{}: error: {}", path.display(), f.message())
            }
        }
        .unwrap();
    }
    (log, code)
}

fn run(cli: &Cli) -> Outcome {
    let limits = Limits {
        max_monoid: cli.max_monoid.get(),
        max_degree: cli.max_degree.get(),
    };
    let format = cli.format;
    match &cli.command {
        Command::Classify {
            input,
            witness,
            batch,
        } => match batch {
            Some(dir) => {
                if input.given() != 0 {
                    return Err(Failure::Usage("--batch takes no other input".into()));
                }
                let (log, code) = run_batch(dir, *witness, format, &limits);
                print!("{log}");
                if code != 0 {
                    return Err(Failure::Batch(code));
                }
                Ok(String::new())
            }
            None => run_classify(&input.source()?, *witness, format, &limits),
        },
        Command::Closure { input, interior } => {
            run_closure(&input.source()?, *interior, format, &limits)
        }
        Command::Monoid { input } => run_monoid(&input.source()?, format, &limits),
        Command::Equiv { input, other } => {
            run_equiv(&input.source()?, &source_of_arg(other)?, format, &limits)
        }
        Command::Member { input, word } => run_member(&input.source()?, word, format, &limits),
        Command::Synth { input, unambiguous } => {
            run_synth(&input.source()?, *unambiguous, format, &limits)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.is_empty() && !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
