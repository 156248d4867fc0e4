use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use compact_nfa::SizeConvention;
use compact_nfa_cli::bench::{bench, BenchConfig};
use compact_nfa_cli::{
    add, build, enumerate, export_dot, query, verify, CliError, Order,
    DEFAULT_EQUIVALENCE_THRESHOLD, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE,
};

/// Build, query and verify compact acyclic NFA lexicons.
#[derive(Debug, Parser)]
#[command(name = "cnfa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an automaton from a word list (one word per line).
    Build {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Given)]
        order: Order,
        /// Seed for --order shuffled.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Insert one word and rewrite the file in place.
    Add { file: PathBuf, word: String },
    /// Exit 0 and print FOUND if the word is accepted, else exit 1.
    Query { file: PathBuf, word: String },
    /// Check structure and compactness, and optionally the language.
    Verify {
        file: PathBuf,
        /// Word list the language must equal.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Skip the equivalence check above this many states.
        #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_THRESHOLD)]
        equivalence_threshold: usize,
    },
    /// Print the accepted words in sorted order.
    Enumerate { file: PathBuf },
    /// Insert a word list one word at a time and record sizes as CSV.
    Bench {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        step: usize,
        #[arg(long)]
        csv: PathBuf,
        /// Also rebuild the minimal DFA at every sample point.
        #[arg(long)]
        compare_dfa: bool,
        /// Count DFA size with a single final sink state.
        #[arg(long, requires = "compare_dfa")]
        single_sink: bool,
        /// Run the similarity check at every sample point.
        #[arg(long)]
        verify_each: bool,
    },
    /// Print the automaton in Graphviz DOT form.
    ExportDot { file: PathBuf },
}

fn run(command: Command, out: &mut impl Write) -> Result<bool, CliError> {
    match command {
        Command::Build {
            input,
            output,
            order,
            seed,
        } => build(&input, &output, order, seed, out),
        Command::Add { file, word } => add(&file, &word, out),
        Command::Query { file, word } => query(&file, &word, out),
        Command::Verify {
            file,
            words,
            equivalence_threshold,
        } => verify(&file, words.as_deref(), equivalence_threshold, out),
        Command::Enumerate { file } => enumerate(&file, out),
        Command::Bench {
            input,
            step,
            csv,
            compare_dfa,
            single_sink,
            verify_each,
        } => {
            let convention = if single_sink {
                SizeConvention::SingleSink
            } else {
                SizeConvention::MultiFinal
            };
            let config = BenchConfig {
                step,
                compare_dfa: compare_dfa.then_some(convention),
                verify_each,
            };
            bench(&input, &csv, config, out)
        }
        Command::ExportDot { file } => export_dot(&file, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_NEGATIVE),
        Err(e) => {
            eprintln!("cnfa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
