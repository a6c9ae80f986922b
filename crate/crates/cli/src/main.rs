use std::io;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use maxreg::commands::{self, CompileArgs};

#[derive(Parser)]
#[command(name = "maxreg", version, about = "Max-automata: compile, check, emptiness, equivalence on a corpus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula file to an automaton (exit 3: parse error, 4: state budget).
    Compile {
        #[arg(short = 'f', long)]
        formula: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        state_budget: usize,
        /// Base alphabet; letters used by the formula are added.
        #[arg(long, default_value = "ab")]
        alphabet: String,
        /// Print the size after every compilation step.
        #[arg(long)]
        trace: bool,
    },
    /// Decide a word (exit 0: accept, 1: reject, 2: unknown, 3: bad input).
    Check {
        #[arg(short = 'a', long)]
        automaton: PathBuf,
        /// `lasso:u:v` or `ramp:u:v:w`.
        #[arg(short = 'w', long)]
        word: String,
        /// Blocks scanned when certifying a ramp.
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
    /// Search for an accepted word (exit 0: nonempty, 1: empty, 2: unknown).
    Empty {
        #[arg(short = 'a', long)]
        automaton: PathBuf,
        /// Candidate words tested before giving up.
        #[arg(long, default_value_t = 5000)]
        budget: usize,
    },
    /// Compare two automata on a corpus (exit 0: agree, 1: disagree).
    Eq {
        #[arg(short = 'a')]
        a: PathBuf,
        #[arg(short = 'b')]
        b: PathBuf,
        /// Word specs, one per line; defaults to the built-in corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match &cli.command {
        Command::Compile {
            formula,
            output,
            dot,
            state_budget,
            alphabet,
            trace,
        } => commands::cmd_compile(
            &CompileArgs {
                formula,
                output,
                dot: dot.as_deref(),
                state_budget: *state_budget,
                alphabet,
                trace: *trace,
            },
            &mut out,
            &mut err,
        ),
        Command::Check {
            automaton,
            word,
            horizon,
        } => commands::cmd_check(automaton, word, *horizon, &mut out, &mut err),
        Command::Empty { automaton, budget } => commands::cmd_empty(automaton, *budget, &mut out, &mut err),
        Command::Eq { a, b, corpus } => commands::cmd_eq(a, b, corpus.as_deref(), &mut out, &mut err),
    };
    std::process::exit(code);
}
