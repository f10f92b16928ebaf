//! Line-oriented transcript files.
//!
//! ```text
//! B B Y Y R | 1W 1B
//! O O B B B | 0W 0B
//! secret: R R G Y G
//! ```
//!
//! Rows are oldest first. Blank lines are skipped and `#` starts a comment.

use std::fmt::Write as _;

use crate::error::TranscriptError;
use crate::game::{consistent, score, Code, Feedback, GameConfig, HistoryEntry};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<HistoryEntry>,
    pub secret: Option<Code>,
}

/// Outcome of re-scoring one row against the revealed secret.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub row: usize,
    pub guess: Code,
    pub recorded: Feedback,
    pub recomputed: Feedback,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.recorded == self.recomputed
    }
}

impl Transcript {
    pub fn new(entries: Vec<HistoryEntry>) -> Self {
        Transcript { entries, secret: None }
    }

    pub fn with_secret(mut self, secret: Code) -> Self {
        self.secret = Some(secret);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Re-scores every row against the secret. `None` when no secret is recorded.
    pub fn verify(&self) -> Option<Vec<RowCheck>> {
        let secret = self.secret.as_ref()?;
        Some(
            self.entries
                .iter()
                .enumerate()
                .map(|(i, e)| RowCheck {
                    row: i + 1,
                    guess: e.guess.clone(),
                    recorded: e.feedback,
                    recomputed: score(&e.guess, secret),
                })
                .collect(),
        )
    }

    pub fn is_consistent_with(&self, candidate: &Code) -> bool {
        consistent(candidate, &self.entries)
    }

    pub fn parse(config: &GameConfig, text: &str) -> Result<Self, TranscriptError> {
        let mut out = Transcript::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TranscriptError { line: line_no, message };
            if out.secret.is_some() {
                return Err(err("content after the secret line".into()));
            }
            if let Some(rest) = line.strip_prefix("secret:") {
                out.secret = Some(parse_row_code(config, rest).map_err(err)?);
                continue;
            }
            let (code_part, fb_part) = line
                .split_once('|')
                .ok_or_else(|| err("expected `<pawns> | <int>W <int>B`".into()))?;
            let guess = parse_row_code(config, code_part).map_err(err)?;
            let feedback: Feedback = fb_part.parse().map_err(|e: crate::error::GameError| err(e.to_string()))?;
            if feedback.total() > config.positions() {
                return Err(err(format!("feedback {feedback} has more pins than {} positions", config.positions())));
            }
            out.entries.push(HistoryEntry::new(guess, feedback));
        }
        Ok(out)
    }

    pub fn format(&self, config: &GameConfig) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{} | {}", config.format_code(&e.guess), e.feedback);
        }
        if let Some(secret) = &self.secret {
            let _ = writeln!(s, "secret: {}", config.format_code(secret));
        }
        s
    }
}

fn parse_row_code(config: &GameConfig, text: &str) -> Result<Code, String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != config.positions() {
        return Err(format!("expected {} pawns, found {}", config.positions(), tokens.len()));
    }
    let mut pawns = Vec::with_capacity(tokens.len());
    for t in tokens {
        let mut chars = t.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(format!("pawn {t:?} is not a single color letter")),
        };
        pawns.push(config.color(letter).ok_or_else(|| format!("unknown color {letter:?}"))?);
    }
    config.code(pawns).map_err(|e| e.to_string())
}
