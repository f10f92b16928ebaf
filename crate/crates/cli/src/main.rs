use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mastermind_core::analysis::{compare_strategies, tournament, Report, TournamentMode, DEFAULT_BUDGET};
use mastermind_core::strategy::Game;
use mastermind_core::{score, solve, CodeSpace, Comparator, Feedback, GameConfig, SolveError, Strategy, Transcript};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONTRADICTORY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mastermind", version, about = "Hybrid model-based Mastermind solver")]
struct Cli {
    #[command(flatten)]
    board: BoardArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BoardArgs {
    /// Pawns per row
    #[arg(long, global = true, default_value_t = 5)]
    positions: usize,
    /// Palette size (letters B Y R G O P C M ...)
    #[arg(long, global = true, default_value_t = 8)]
    colors: usize,
    /// Row limit for a game; unlimited by default except in `play`
    #[arg(long, global = true)]
    max_rows: Option<usize>,
    /// Ordering of alternatives for the hybrid strategy
    #[arg(long, global = true, value_enum, default_value_t = ComparatorArg::Heuristic)]
    comparator: ComparatorArg,
    /// Seed for sampled tournaments
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComparatorArg {
    Heuristic,
    Count,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-score a transcript against its recorded secret
    Replay { path: PathBuf },
    /// Solve a known secret and print the transcript
    Solve {
        #[arg(long)]
        secret: String,
        #[arg(long, default_value = "hybrid")]
        strategy: String,
        /// Print the reasoning trace as comment lines
        #[arg(long)]
        verbose: bool,
        /// Echo each row's pins as o/● glyphs
        #[arg(long)]
        pins: bool,
    },
    /// Play against a human who answers each guess with `<int>W <int>B`
    Play {
        #[arg(long, default_value = "hybrid")]
        strategy: String,
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        pins: bool,
    },
    /// Run a strategy over many secrets
    Simulate {
        #[arg(long, default_value = "hybrid")]
        strategy: String,
        /// Every secret of the code space
        #[arg(long, conflicts_with = "games")]
        exhaustive: bool,
        /// Number of seeded random secrets
        #[arg(short = 'n', long = "games")]
        games: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Opening-pattern informativeness, optionally with a strategy comparison
    Analyze {
        /// Comma-separated strategies to compare as well
        #[arg(long, value_delimiter = ',')]
        strategies: Vec<String>,
        /// Sample size when the code space exceeds the budget
        #[arg(short = 'n', long = "games", default_value_t = 500)]
        games: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        csv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn usage(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn strategy_from(name: &str, comparator: ComparatorArg) -> Result<Strategy, String> {
    match (name.parse::<Strategy>()?, comparator) {
        (Strategy::Hybrid(Comparator::Heuristic), ComparatorArg::Count) => Ok(Strategy::Hybrid(Comparator::CountBased)),
        (s, _) => Ok(s),
    }
}

fn run(cli: Cli) -> u8 {
    let config = match GameConfig::new(cli.board.positions, cli.board.colors) {
        Ok(c) => c.with_max_rows(cli.board.max_rows),
        Err(e) => return usage(e),
    };
    let comparator = cli.board.comparator;
    match cli.command {
        Command::Replay { path } => replay(&config, &path),
        Command::Solve { secret, strategy, verbose, pins } => {
            let strategy = match strategy_from(&strategy, comparator) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let secret = match config.parse_code(&secret) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let space = CodeSpace::new(&config);
            let mut breaker = breaker_for(strategy, &config, &space, verbose);
            match solve(breaker.as_mut(), |g| score(g, &secret), &config) {
                Ok(game) => {
                    print_game(&config, &game, verbose, pins);
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INVALID
                }
            }
        }
        Command::Play { strategy, verbose, pins } => {
            let strategy = match strategy_from(&strategy, comparator) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let config = config.clone().with_max_rows(Some(cli.board.max_rows.unwrap_or(12)));
            let stdin = io::stdin();
            play(&config, strategy, verbose, pins, stdin.lock(), io::stdout().lock())
        }
        Command::Simulate { strategy, exhaustive, games, budget, csv } => {
            let strategy = match strategy_from(&strategy, comparator) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let mode = match (exhaustive, games) {
                (_, Some(n)) => TournamentMode::Sampled { seed: cli.board.seed, games: n },
                (true, None) => TournamentMode::Exhaustive,
                (false, None) if config.code_count() <= budget => TournamentMode::Exhaustive,
                (false, None) => TournamentMode::Sampled { seed: cli.board.seed, games: 500 },
            };
            match tournament(strategy, &config, mode, budget) {
                Ok(stats) => {
                    let report = Report { tournaments: vec![stats], configs: Vec::new() };
                    print!("{}", if csv { report.to_csv() } else { report.to_text() });
                    EXIT_OK
                }
                Err(e) => usage(e),
            }
        }
        Command::Analyze { strategies, games, budget, csv } => {
            let mut parsed = Vec::new();
            for name in &strategies {
                match strategy_from(name, comparator) {
                    Ok(s) => parsed.push(s),
                    Err(e) => return usage(e),
                }
            }
            let fallback = TournamentMode::Sampled { seed: cli.board.seed, games };
            let report = compare_strategies(std::slice::from_ref(&config), &parsed, budget, fallback);
            print!("{}", if csv { report.to_csv() } else { report.to_text() });
            EXIT_OK
        }
    }
}

fn breaker_for(
    strategy: Strategy,
    config: &GameConfig,
    space: &CodeSpace,
    verbose: bool,
) -> Box<dyn mastermind_core::Codebreaker + Send> {
    match strategy {
        Strategy::Hybrid(c) if verbose => Box::new(mastermind_core::HybridSolver::new(config, c, space).traced()),
        s => s.breaker(config, space),
    }
}

fn print_game(config: &GameConfig, game: &Game, verbose: bool, pins: bool) {
    if verbose {
        for e in &game.trace {
            println!("# {e}");
        }
    }
    for e in &game.transcript.entries {
        let row = format!("{} | {}", config.format_code(&e.guess), e.feedback);
        if pins {
            println!("{row}  # {}", e.feedback.glyphs());
        } else {
            println!("{row}");
        }
    }
    if let Some(s) = &game.transcript.secret {
        println!("secret: {}", config.format_code(s));
    }
}

fn replay(config: &GameConfig, path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", path.display())),
    };
    let transcript = match Transcript::parse(config, &text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return EXIT_INVALID;
        }
    };
    let Some(checks) = transcript.verify() else {
        eprintln!("{}: no `secret:` line; nothing to validate against", path.display());
        return EXIT_INVALID;
    };
    let mut failed = 0;
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        if c.passed() {
            println!("row {}: {} | {} {verdict}", c.row, config.format_code(&c.guess), c.recorded);
        } else {
            failed += 1;
            println!("row {}: {} | {} {verdict} (expected {})", c.row, config.format_code(&c.guess), c.recorded, c.recomputed);
        }
    }
    println!("{}/{} PASS", checks.len() - failed, checks.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

fn play(config: &GameConfig, strategy: Strategy, verbose: bool, pins: bool, mut input: impl BufRead, mut out: impl Write) -> u8 {
    let space = CodeSpace::new(config);
    let mut breaker = breaker_for(strategy, config, &space, verbose);
    let limit = config.max_rows().unwrap_or(usize::MAX);
    let mut line = String::new();
    let flush_trace = |breaker: &mut Box<dyn mastermind_core::Codebreaker + Send>, out: &mut dyn Write| {
        for e in breaker.trace() {
            let _ = writeln!(out, "# {e}");
        }
    };
    for row in 1.. {
        if row > limit {
            let _ = writeln!(out, "no rows left after {limit} guesses");
            return EXIT_INVALID;
        }
        let guess = match breaker.next_guess() {
            Ok(g) => g,
            Err(e) => {
                let _ = writeln!(out, "{e}");
                return EXIT_CONTRADICTORY;
            }
        };
        if verbose {
            flush_trace(&mut breaker, &mut out);
        }
        let _ = writeln!(out, "row {row}: {}", config.format_code(&guess));
        let feedback = loop {
            let _ = write!(out, "feedback> ");
            let _ = out.flush();
            line.clear();
            match input.read_line(&mut line) {
                Ok(0) | Err(_) => {
                    let _ = writeln!(out, "\ninput closed; game aborted");
                    return EXIT_OK;
                }
                Ok(_) => {}
            }
            match line.trim().parse::<Feedback>() {
                Ok(f) if config.is_legal_feedback(f) => break f,
                Ok(f) => {
                    let _ = writeln!(out, "impossible feedback {f} for {} positions; try again", config.positions());
                }
                Err(e) => {
                    let _ = writeln!(out, "{e}; try again");
                }
            }
        };
        if pins {
            let _ = writeln!(out, "pins: {}", feedback.glyphs());
        }
        if feedback == config.won() {
            let _ = writeln!(out, "solved in {row} rows");
            return EXIT_OK;
        }
        match breaker.observe(&guess, feedback) {
            Ok(()) => {}
            Err(SolveError::InconsistentHistory(_)) => {
                let _ = writeln!(out, "feedback history is contradictory");
                return EXIT_CONTRADICTORY;
            }
            Err(e) => {
                let _ = writeln!(out, "{e}");
                return EXIT_INVALID;
            }
        }
        if verbose {
            flush_trace(&mut breaker, &mut out);
        }
    }
    unreachable!("the row loop only exits by returning")
}
