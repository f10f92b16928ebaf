//! A Mastermind codebreaker that reasons with partial models.
//!
//! The [`reasoner`] interprets each row's pins as an ordered list of color
//! models, merges them across rows, and then narrows down places with
//! wildcard row models refined against the whole history, backtracking
//! through a [`lattice`] of hypotheses on contradiction. [`baselines`] holds
//! brute-force oracles and reference strategies; [`analysis`] measures
//! opening informativeness and runs tournaments.

pub mod analysis;
pub mod baselines;
pub mod error;
pub mod game;
pub mod lars;
pub mod lattice;
pub mod reasoner;
pub mod strategy;
pub mod transcript;

pub use error::{BudgetExceeded, GameError, ModelParseError, SolveError, TranscriptError};
pub use game::{consistent, enumerate_codes, score, Code, CodeSpace, Color, Feedback, GameConfig, HistoryEntry};
pub use lars::{ColorModel, CountConstraint, Model, Outcome, PlaceModel};
pub use reasoner::{Comparator, HybridSolver, Phase, SolverState};
pub use strategy::{solve, solve_secret, Codebreaker, Strategy};
pub use transcript::Transcript;
