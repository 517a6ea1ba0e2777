use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use morphic_cli::app::{self, CrosscheckOptions, DecideOptions, Format};

/// Decide almost periodicity of morphic sequences and measure their
/// prefixes.
///
/// FILE is a spec file path, or `corpus:NAME` for a bundled entry.
/// Exit codes: 0 = AP (or success), 1 = NOT_AP (or a failed crosscheck),
/// 2 = input error or unsupported morphism.
#[derive(Parser)]
#[command(name = "morphic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the sequence is almost periodic.
    Decide {
        file: String,
        #[arg(long)]
        json: bool,
        /// Attach finite-prefix evidence for the verdict.
        #[arg(long)]
        verify: bool,
        /// Include wall-clock timings (makes the output non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Shorter prefix for --verify (default: a tenth of --n-large).
        #[arg(long)]
        n_small: Option<usize>,
        /// Longer prefix for --verify (default: the prefix cap, at most 10^6).
        #[arg(long)]
        n_large: Option<usize>,
        /// Longest factor compared by --verify.
        #[arg(long, default_value_t = 3)]
        factor_len: usize,
        /// Window growth tolerated by --verify.
        #[arg(long, default_value_t = 0)]
        slack: usize,
    },
    /// Show growth classes, components and tail graphs.
    Classify {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a prefix of the sequence.
    Generate {
        file: String,
        #[arg(long)]
        length: usize,
        /// Ignore the coding.
        #[arg(long)]
        raw: bool,
    },
    /// Occurrences and gaps of one factor in prefixes of the sequence.
    Gaps {
        file: String,
        /// Letters separated by spaces, or a run of one-character letters.
        #[arg(long)]
        factor: String,
        /// Prefix length; repeat for several.
        #[arg(long, required = true)]
        length: Vec<usize>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Empirical window length per factor length.
    Regulator {
        file: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 100_000)]
        length: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the agreement suites.
    Crosscheck {
        /// Directory of .morph files with `expect:` lines (default: bundled).
        #[arg(long)]
        corpus_dir: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        binary_max_len: usize,
        #[arg(long, default_value_t = 200)]
        uniform_count: usize,
        #[arg(long, default_value_t = 3)]
        uniform_max_n: usize,
        #[arg(long, default_value_t = 3)]
        uniform_max_k: usize,
        #[arg(long, default_value_t = 50)]
        oracle_count: usize,
        #[arg(long, default_value_t = 10_000)]
        oracle_small: usize,
        #[arg(long, default_value_t = 100_000)]
        oracle_large: usize,
        #[arg(long)]
        json: bool,
    },
    /// Inspect the bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Occurrence graph in Graphviz format.
    Dot { file: String },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Names and expected verdicts.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print one entry's spec text.
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                app::EXIT_ERROR as u8
            } else {
                0
            });
        }
    };
    let out = match cli.command {
        Command::Decide {
            file,
            json,
            verify,
            timings,
            n_small,
            n_large,
            factor_len,
            slack,
        } => app::decide_command(
            &file,
            &DecideOptions {
                json,
                verify,
                timings,
                n_small,
                n_large,
                factor_len,
                slack,
            },
        ),
        Command::Classify { file, json } => app::classify_command(&file, json),
        Command::Generate { file, length, raw } => app::generate_command(&file, length, raw),
        Command::Gaps {
            file,
            factor,
            length,
            json,
            csv,
        } => {
            let format = match (json, csv) {
                (true, _) => Format::Json,
                (_, true) => Format::Csv,
                _ => Format::Text,
            };
            app::gaps_command(&file, &factor, &length, format)
        }
        Command::Regulator {
            file,
            nmax,
            length,
            json,
        } => app::regulator_command(&file, nmax, length, json),
        Command::Crosscheck {
            corpus_dir,
            seed,
            binary_max_len,
            uniform_count,
            uniform_max_n,
            uniform_max_k,
            oracle_count,
            oracle_small,
            oracle_large,
            json,
        } => app::crosscheck_command(&CrosscheckOptions {
            corpus_dir,
            seed,
            binary_max_len,
            uniform_count,
            uniform_max_n,
            uniform_max_k,
            oracle_count,
            oracle_small,
            oracle_large,
            json,
        }),
        Command::Corpus { action } => match action {
            CorpusAction::List { json } => app::corpus_list_command(json),
            CorpusAction::Show { name } => app::corpus_show_command(&name),
        },
        Command::Dot { file } => app::dot_command(&file),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
