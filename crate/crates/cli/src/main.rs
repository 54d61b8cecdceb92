use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use autsub::autgroup::{analyze, Reduction};
use autsub::{aut_group, decide_conjugacy, Error, Limits, Shift, Substitution};

mod report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "autsub", version, about = "Automorphisms and conjugacy of constant-length substitution shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Longest θ-power word that may be built.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap_word: u64,
    /// Largest radius tried for inverse block codes.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap_radius: u64,
    /// Node budget of each block-map enumeration.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap_kernel: u64,
    /// Largest period probed by the fingerprint prune.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pmax: u64,
    /// Worker threads for candidate searches (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    jobs: Option<u64>,
    /// Only errors on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants: primitivity, height, column number, Σ data.
    Analyze { file: PathBuf },
    /// The automorphism group with explicit generators.
    Aut { file: PathBuf },
    /// Decide whether two substitution shifts are conjugate.
    Conj { first: PathBuf, second: PathBuf },
    /// The words of length n.
    Language {
        file: PathBuf,
        #[arg(short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// The labelled subset graph presenting Σ.
    Graph { file: PathBuf },
}

/// Failure with its exit status: 2 for bad input, 3 for caps and internal errors.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } | Error::Internal(_) => 3,
            _ => 2,
        };
        let message = match e {
            Error::ResourceLimit { .. } => format!("{e} (no authoritative result)"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

fn load(path: &Path) -> Result<Substitution, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Substitution::parse(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(mut text: String) {
    use std::io::Write;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let limits = Limits {
        word_len: cli.cap_word as usize,
        radius: cli.cap_radius as usize,
        search_nodes: cli.cap_kernel,
        pmax: cli.pmax as usize,
    };
    let dot_only = |what: &str| Failure {
        code: 2,
        message: format!("--format dot is only available for `graph`, not `{what}`"),
    };
    match &cli.command {
        Command::Analyze { file } => {
            let sub = load(file)?;
            let a = analyze(&sub, &limits)?;
            match cli.format {
                Format::Text => emit(report::analysis_text(&sub, &a)),
                Format::Json => emit(json(&report::analysis_json(file, &a))),
                Format::Dot => return Err(dot_only("analyze")),
            }
            Ok(0)
        }
        Command::Aut { file } => {
            let sub = load(file)?;
            if cli.format == Format::Dot {
                return Err(dot_only("aut"));
            }
            let p = aut_group(&sub, &limits)?;
            match cli.format {
                Format::Json => emit(json(&report::aut_json(file, &p))),
                _ => emit(report::aut_text(&p)),
            }
            Ok(0)
        }
        Command::Conj { first, second } => {
            let (s1, s2) = (load(first)?, load(second)?);
            if cli.format == Format::Dot {
                return Err(dot_only("conj"));
            }
            let rep = decide_conjugacy(&s1, &s2, &limits)?;
            match cli.format {
                Format::Json => emit(json(&report::conj_json([first, second], &s1, &s2, &rep))),
                _ => emit(report::conj_text(&s1, &s2, &rep)),
            }
            Ok(rep.decision.exit_code() as u8)
        }
        Command::Language { file, n } => {
            let sub = load(file)?;
            let shift = Shift::new(sub.clone());
            let words = shift.words(*n as usize);
            let words: Vec<String> = words.iter().map(|w| sub.format_word(w)).collect();
            match cli.format {
                Format::Text => emit(words.join("\n")),
                Format::Json => emit(json(&serde_json::json!({
                    "command": "language",
                    "input": file.display().to_string(),
                    "n": n,
                    "count": words.len(),
                    "words": words,
                }))),
                Format::Dot => return Err(dot_only("language")),
            }
            Ok(0)
        }
        Command::Graph { file } => {
            let sub = load(file)?;
            let red = Reduction::new(&sub, &limits)?;
            let work = red.work.substitution();
            match cli.format {
                Format::Dot => emit(red.graph.to_dot(work)),
                Format::Text => emit(report::graph_text(&red)),
                Format::Json => emit(json(&report::graph_json(file, &red))),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
