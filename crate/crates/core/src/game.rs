//! Board configuration, codes and the pin function.
//!
//! Pins follow the white-means-exact convention: a white pin is a pawn of the
//! right color in the right place, a black pin a right color in the wrong
//! place.

use std::fmt;
use std::sync::Arc;

use crate::error::GameError;

/// Largest palette supported. Colors are single letters.
pub const MAX_COLORS: usize = 26;

/// Default palette order. The first five letters are the colors seen in the
/// reference game; the rest fill out the classic eight-color set and beyond.
pub const DEFAULT_LETTERS: &str = "BYRGOPCMWKNTADEFHIJLQSUVXZ";

/// Index of a color in the configured palette.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u8);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameConfig {
    positions: usize,
    palette: Vec<char>,
    max_rows: Option<usize>,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig::new(5, 8).expect("default config is valid")
    }
}

impl GameConfig {
    /// `positions` pawns per row over the first `colors` letters of
    /// [`DEFAULT_LETTERS`].
    pub fn new(positions: usize, colors: usize) -> Result<Self, GameError> {
        if colors == 0 || colors > MAX_COLORS {
            return Err(GameError::Config(format!(
                "palette size must be between 1 and {MAX_COLORS}, got {colors}"
            )));
        }
        Self::with_palette(positions, DEFAULT_LETTERS.chars().take(colors).collect())
    }

    pub fn with_palette(positions: usize, palette: Vec<char>) -> Result<Self, GameError> {
        if positions == 0 {
            return Err(GameError::Config("a row needs at least one position".into()));
        }
        if palette.is_empty() || palette.len() > MAX_COLORS {
            return Err(GameError::Config(format!(
                "palette size must be between 1 and {MAX_COLORS}, got {}",
                palette.len()
            )));
        }
        for (i, c) in palette.iter().enumerate() {
            if !c.is_ascii_uppercase() {
                return Err(GameError::Config(format!("palette letter {c:?} is not an uppercase letter")));
            }
            if palette[..i].contains(c) {
                return Err(GameError::Config(format!("palette letter {c} appears twice")));
            }
        }
        Ok(GameConfig { positions, palette, max_rows: None })
    }

    pub fn with_max_rows(mut self, max_rows: Option<usize>) -> Self {
        self.max_rows = max_rows;
        self
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn num_colors(&self) -> usize {
        self.palette.len()
    }

    pub fn max_rows(&self) -> Option<usize> {
        self.max_rows
    }

    pub fn palette(&self) -> &[char] {
        &self.palette
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.palette.len()).map(|i| Color(i as u8))
    }

    pub fn letter(&self, color: Color) -> char {
        self.palette[color.index()]
    }

    pub fn color(&self, letter: char) -> Option<Color> {
        self.palette.iter().position(|&c| c == letter).map(|i| Color(i as u8))
    }

    /// Size of the code space, `M^N`, saturating.
    pub fn code_count(&self) -> u64 {
        (self.palette.len() as u64).saturating_pow(self.positions as u32)
    }

    pub fn code(&self, pawns: Vec<Color>) -> Result<Code, GameError> {
        let code = Code(pawns);
        self.check(&code)?;
        Ok(code)
    }

    /// Parses a code written as letters, spaces optional (`"R R G Y G"` or `"RRGYG"`).
    pub fn parse_code(&self, text: &str) -> Result<Code, GameError> {
        let pawns = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.color(c).ok_or(GameError::UnknownColor(c)))
            .collect::<Result<Vec<_>, _>>()?;
        self.code(pawns)
    }

    pub fn check(&self, code: &Code) -> Result<(), GameError> {
        if code.len() != self.positions {
            return Err(GameError::Length { expected: self.positions, found: code.len() });
        }
        if let Some(c) = code.0.iter().find(|c| c.index() >= self.palette.len()) {
            return Err(GameError::Config(format!("color index {} outside the palette", c.0)));
        }
        Ok(())
    }

    /// Pin response for `guess` against `secret`, after checking both codes.
    pub fn score(&self, guess: &Code, secret: &Code) -> Result<Feedback, GameError> {
        self.check(guess)?;
        self.check(secret)?;
        Ok(score(guess, secret))
    }

    /// Whether `f` can occur at all for this configuration.
    pub fn is_legal_feedback(&self, f: Feedback) -> bool {
        let n = self.positions;
        let total = f.whites as usize + f.blacks as usize;
        total <= n && !(f.whites as usize + 1 == n && f.blacks == 1)
    }

    pub fn won(&self) -> Feedback {
        Feedback::new(self.positions as u8, 0)
    }

    pub fn format_code(&self, code: &Code) -> String {
        let mut s = String::with_capacity(code.len() * 2);
        for (i, c) in code.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push(self.letter(*c));
        }
        s
    }
}

/// A row of pawns. Construct through [`GameConfig`] to get palette checks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code(pub(crate) Vec<Color>);

impl Code {
    pub fn pawns(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, color: Color) -> usize {
        self.0.iter().filter(|&&c| c == color).count()
    }

    pub(crate) fn color_counts(&self) -> [u8; MAX_COLORS] {
        let mut counts = [0u8; MAX_COLORS];
        for c in &self.0 {
            counts[c.index()] += 1;
        }
        counts
    }

    /// Distinct colors in order of first appearance.
    pub fn distinct_colors(&self) -> Vec<Color> {
        let mut out: Vec<Color> = Vec::new();
        for &c in &self.0 {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// The code with positions `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Code {
        let mut pawns = self.0.clone();
        pawns.swap(i, j);
        Code(pawns)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Feedback {
    pub whites: u8,
    pub blacks: u8,
}

impl Feedback {
    pub const fn new(whites: u8, blacks: u8) -> Self {
        Feedback { whites, blacks }
    }

    pub fn total(self) -> usize {
        self.whites as usize + self.blacks as usize
    }

    /// Dense index in `0..(n+1)^2`.
    pub fn index(self, positions: usize) -> usize {
        self.whites as usize * (positions + 1) + self.blacks as usize
    }

    /// The pin row as drawn on the board: `o` per white, `●` per black.
    pub fn glyphs(self) -> String {
        let mut s = String::new();
        for i in 0..self.total() {
            if i > 0 {
                s.push(' ');
            }
            s.push(if i < self.whites as usize { 'o' } else { '●' });
        }
        s
    }
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}W {}B", self.whites, self.blacks)
    }
}

impl std::str::FromStr for Feedback {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GameError::Feedback(s.trim().to_string());
        let mut parts = s.split_whitespace();
        let (w, b) = (parts.next().ok_or_else(bad)?, parts.next().ok_or_else(bad)?);
        if parts.next().is_some() {
            return Err(bad());
        }
        let whites = w.strip_suffix(['W', 'w']).and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        let blacks = b.strip_suffix(['B', 'b']).and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        Ok(Feedback { whites, blacks })
    }
}

/// Pin response. Both codes must have the same length and come from the same
/// palette; use [`GameConfig::score`] when that is not already known.
pub fn score(guess: &Code, secret: &Code) -> Feedback {
    debug_assert_eq!(guess.len(), secret.len());
    let mut whites = 0u8;
    let mut g = [0u8; MAX_COLORS];
    let mut s = [0u8; MAX_COLORS];
    for (a, b) in guess.0.iter().zip(&secret.0) {
        if a == b {
            whites += 1;
        } else {
            g[a.index()] += 1;
            s[b.index()] += 1;
        }
    }
    let blacks = g.iter().zip(&s).map(|(x, y)| (*x).min(*y)).sum();
    Feedback { whites, blacks }
}

/// Whether `candidate` could be the secret behind every row of `history`.
pub fn consistent(candidate: &Code, history: &[HistoryEntry]) -> bool {
    history.iter().all(|e| score(&e.guess, candidate) == e.feedback)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HistoryEntry {
    pub guess: Code,
    pub feedback: Feedback,
}

impl HistoryEntry {
    pub fn new(guess: Code, feedback: Feedback) -> Self {
        HistoryEntry { guess, feedback }
    }
}

/// Lexicographic (palette order) odometer over all `M^N` codes.
pub struct CodeIter {
    next: Option<Vec<Color>>,
    colors: u8,
}

impl Iterator for CodeIter {
    type Item = Code;

    fn next(&mut self) -> Option<Code> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        let mut carried = true;
        while carried && i > 0 {
            i -= 1;
            if succ[i].0 + 1 < self.colors {
                succ[i].0 += 1;
                carried = false;
            } else {
                succ[i].0 = 0;
            }
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(Code(current))
    }
}

pub fn enumerate_codes(config: &GameConfig) -> CodeIter {
    CodeIter { next: Some(vec![Color(0); config.positions]), colors: config.num_colors() as u8 }
}

/// The whole code space, materialized once and shared.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    codes: Arc<Vec<Code>>,
}

impl CodeSpace {
    pub fn new(config: &GameConfig) -> Self {
        CodeSpace { codes: Arc::new(enumerate_codes(config).collect()) }
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn consistent_with<'a>(&'a self, history: &'a [HistoryEntry]) -> impl Iterator<Item = &'a Code> + 'a {
        self.codes.iter().filter(move |c| consistent(c, history))
    }
}
