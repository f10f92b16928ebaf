//! Codebreakers and the game loop.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{entropy_greedy_among, filter_among};
use crate::error::SolveError;
use crate::game::{score, Code, CodeSpace, Feedback, GameConfig, HistoryEntry};
use crate::reasoner::{Comparator, HybridSolver, TraceEvent};
use crate::transcript::Transcript;

/// Something that proposes guesses and learns from pins.
pub trait Codebreaker {
    fn next_guess(&mut self) -> Result<Code, SolveError>;
    fn observe(&mut self, guess: &Code, feedback: Feedback) -> Result<(), SolveError>;

    /// Reasoning events since the last call. Empty for strategies without a trace.
    fn trace(&mut self) -> Vec<TraceEvent> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Hybrid(Comparator),
    Filter,
    EntropyGreedy,
}

impl Strategy {
    pub fn name(&self) -> String {
        match self {
            Strategy::Hybrid(Comparator::Heuristic) => "hybrid".into(),
            Strategy::Hybrid(c) => format!("hybrid-{c}"),
            Strategy::Filter => "filter".into(),
            Strategy::EntropyGreedy => "entropy".into(),
        }
    }

    pub fn breaker(&self, config: &GameConfig, space: &CodeSpace) -> Box<dyn Codebreaker + Send> {
        match *self {
            Strategy::Hybrid(comparator) => Box::new(HybridSolver::new(config, comparator, space)),
            Strategy::Filter => Box::new(FilterBreaker::new(space)),
            Strategy::EntropyGreedy => Box::new(EntropyBreaker::new(config, space)),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hybrid" => Ok(Strategy::Hybrid(Comparator::Heuristic)),
            "hybrid-count" => Ok(Strategy::Hybrid(Comparator::CountBased)),
            "filter" => Ok(Strategy::Filter),
            "entropy" => Ok(Strategy::EntropyGreedy),
            other => Err(format!("unknown strategy {other:?} (hybrid, hybrid-count, filter, entropy)")),
        }
    }
}

/// Plays the lexicographically first code consistent with the history.
pub struct FilterBreaker {
    candidates: Vec<Code>,
}

impl FilterBreaker {
    pub fn new(space: &CodeSpace) -> Self {
        FilterBreaker { candidates: space.codes().to_vec() }
    }
}

impl Codebreaker for FilterBreaker {
    fn next_guess(&mut self) -> Result<Code, SolveError> {
        filter_among(&self.candidates).cloned().ok_or_else(|| SolveError::InconsistentHistory("no code agrees with every row".into()))
    }

    fn observe(&mut self, guess: &Code, feedback: Feedback) -> Result<(), SolveError> {
        self.candidates.retain(|c| score(guess, c) == feedback);
        if self.candidates.is_empty() {
            return Err(SolveError::InconsistentHistory("no code agrees with every row".into()));
        }
        Ok(())
    }
}

/// Plays the code whose pin partition of the candidates has maximal entropy.
pub struct EntropyBreaker {
    config: GameConfig,
    space: CodeSpace,
    candidates: Vec<Code>,
    fresh: bool,
}

impl EntropyBreaker {
    pub fn new(config: &GameConfig, space: &CodeSpace) -> Self {
        EntropyBreaker { config: config.clone(), space: space.clone(), candidates: space.codes().to_vec(), fresh: true }
    }
}

impl Codebreaker for EntropyBreaker {
    fn next_guess(&mut self) -> Result<Code, SolveError> {
        if self.candidates.is_empty() {
            return Err(SolveError::InconsistentHistory("no code agrees with every row".into()));
        }
        if self.fresh {
            return Ok(crate::baselines::entropy_opening(&self.config));
        }
        Ok(entropy_greedy_among(&self.config, self.space.codes(), &self.candidates))
    }

    fn observe(&mut self, guess: &Code, feedback: Feedback) -> Result<(), SolveError> {
        self.fresh = false;
        self.candidates.retain(|c| score(guess, c) == feedback);
        if self.candidates.is_empty() {
            return Err(SolveError::InconsistentHistory("no code agrees with every row".into()));
        }
        Ok(())
    }
}

/// A finished game, with any reasoning trace interleaved per row.
#[derive(Clone, Debug, Default)]
pub struct Game {
    pub transcript: Transcript,
    pub trace: Vec<TraceEvent>,
}

/// Plays `breaker` against `oracle` until it scores all whites. Gives up with
/// an invariant error after `M^N` rows, or earlier at the configured row limit.
pub fn solve<F>(breaker: &mut dyn Codebreaker, mut oracle: F, config: &GameConfig) -> Result<Game, SolveError>
where
    F: FnMut(&Code) -> Feedback,
{
    let limit = config.max_rows().map(|r| r as u64).unwrap_or(u64::MAX).min(config.code_count());
    let mut game = Game::default();
    let won = config.won();
    loop {
        if game.transcript.len() as u64 >= limit {
            return Err(match config.max_rows() {
                Some(r) if (r as u64) < config.code_count() => SolveError::RowLimit(r),
                _ => SolveError::LatticeExhausted,
            });
        }
        let guess = breaker.next_guess()?;
        game.trace.extend(breaker.trace());
        let feedback = oracle(&guess);
        game.transcript.entries.push(HistoryEntry::new(guess.clone(), feedback));
        if feedback == won {
            game.transcript.secret = Some(guess);
            return Ok(game);
        }
        breaker.observe(&guess, feedback)?;
        game.trace.extend(breaker.trace());
    }
}

/// [`solve`] against a known secret.
pub fn solve_secret(strategy: Strategy, secret: &Code, config: &GameConfig, space: &CodeSpace) -> Result<Game, SolveError> {
    let mut breaker = strategy.breaker(config, space);
    solve(breaker.as_mut(), |g| score(g, secret), config)
}
