//! Limited-abstraction partial models.
//!
//! A [`ColorModel`] constrains how many pawns of each color the secret holds.
//! Square brackets mark an exhausted count (`[1Y]`: exactly one yellow), a bare
//! count is a lower bound (`1R`: at least one red) and `noR` excludes a color.
//! A [`PlaceModel`] is a partial row, `[- - Y - -]`, whose wildcards must be
//! filled in agreement with an attached color model. Wildcards may carry an
//! exclusion set, written `-{≠B,Y}`, which records positional facts derived by
//! propagation.
//!
//! The denotation of a model is the set of complete codes it admits.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ModelParseError;
use crate::game::{Code, Color, GameConfig, MAX_COLORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountConstraint {
    Exactly(u8),
    AtLeast(u8),
    Unconstrained,
}

impl CountConstraint {
    /// `AtLeast(0)` collapses to `Unconstrained`.
    pub fn at_least(k: u8) -> Self {
        if k == 0 {
            CountConstraint::Unconstrained
        } else {
            CountConstraint::AtLeast(k)
        }
    }

    pub fn lower(self) -> u8 {
        match self {
            CountConstraint::Exactly(k) | CountConstraint::AtLeast(k) => k,
            CountConstraint::Unconstrained => 0,
        }
    }

    pub fn admits(self, count: usize) -> bool {
        match self {
            CountConstraint::Exactly(k) => count == k as usize,
            CountConstraint::AtLeast(k) => count >= k as usize,
            CountConstraint::Unconstrained => true,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, CountConstraint::Exactly(_))
    }

    /// Conjunction of two constraints on the same color; `None` when they clash.
    pub fn intersect(self, other: Self) -> Option<Self> {
        use CountConstraint::*;
        match (self, other) {
            (Unconstrained, c) | (c, Unconstrained) => Some(c),
            (Exactly(j), Exactly(k)) => (j == k).then_some(Exactly(j)),
            (Exactly(j), AtLeast(k)) | (AtLeast(k), Exactly(j)) => (j >= k).then_some(Exactly(j)),
            (AtLeast(j), AtLeast(k)) => Some(AtLeast(j.max(k))),
        }
    }
}

/// Result of combining models whose joint denotation may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Model(T),
    Contradiction,
}

impl<T> Outcome<T> {
    pub fn model(self) -> Option<T> {
        match self {
            Outcome::Model(m) => Some(m),
            Outcome::Contradiction => None,
        }
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self, Outcome::Contradiction)
    }
}

/// Per-color count constraints. Colors without an entry are unconstrained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColorModel {
    constraints: BTreeMap<Color, CountConstraint>,
}

impl ColorModel {
    /// The model admitting every code.
    pub fn any() -> Self {
        ColorModel::default()
    }

    pub fn with(mut self, color: Color, constraint: CountConstraint) -> Self {
        self.set(color, constraint);
        self
    }

    pub fn set(&mut self, color: Color, constraint: CountConstraint) {
        match constraint {
            CountConstraint::Unconstrained | CountConstraint::AtLeast(0) => {
                self.constraints.remove(&color);
            }
            c => {
                self.constraints.insert(color, c);
            }
        }
    }

    pub fn get(&self, color: Color) -> CountConstraint {
        self.constraints.get(&color).copied().unwrap_or(CountConstraint::Unconstrained)
    }

    pub fn constraints(&self) -> impl Iterator<Item = (Color, CountConstraint)> + '_ {
        self.constraints.iter().map(|(c, k)| (*c, *k))
    }

    pub fn is_any(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn lower_sum(&self) -> usize {
        self.constraints.values().map(|c| c.lower() as usize).sum()
    }

    fn exact_sum(&self) -> usize {
        self.constraints.values().filter(|c| c.is_exact()).map(|c| c.lower() as usize).sum()
    }

    fn free_colors(&self, config: &GameConfig) -> Vec<Color> {
        config.colors().filter(|c| !self.get(*c).is_exact()).collect()
    }

    pub fn excludes(&self, color: Color) -> bool {
        self.get(color) == CountConstraint::Exactly(0)
    }

    pub fn satisfied_by(&self, code: &Code) -> bool {
        let counts = code.color_counts();
        self.constraints.iter().all(|(c, k)| k.admits(counts[c.index()] as usize))
    }

    pub fn satisfied_by_counts(&self, counts: &[u8; MAX_COLORS]) -> bool {
        self.constraints.iter().all(|(c, k)| k.admits(counts[c.index()] as usize))
    }

    /// Whether no code of the configured length satisfies the model.
    pub fn is_empty(&self, config: &GameConfig) -> bool {
        let n = config.positions();
        if self.lower_sum() > n {
            return true;
        }
        if self.free_colors(config).is_empty() {
            return self.exact_sum() != n;
        }
        false
    }

    /// Every color exhausted and the counts fill the row.
    pub fn is_full(&self, config: &GameConfig) -> bool {
        self.free_colors(config).is_empty() && self.exact_sum() == config.positions()
    }

    /// Closes the model under the row length without changing its denotation.
    pub fn normalize(&self, config: &GameConfig) -> ColorModel {
        let n = config.positions();
        let mut m = self.clone();
        loop {
            if m.is_empty(config) {
                return m;
            }
            let before = m.clone();
            if m.lower_sum() == n {
                for c in config.colors() {
                    let k = m.get(c).lower();
                    m.set(c, CountConstraint::Exactly(k));
                }
            } else if m.exact_sum() == n {
                for c in m.free_colors(config) {
                    m.set(c, CountConstraint::Exactly(0));
                }
            } else if let [only] = m.free_colors(config)[..] {
                let rest = n - m.exact_sum();
                m.set(only, CountConstraint::Exactly(rest as u8));
            }
            if m == before {
                return m;
            }
        }
    }

    /// Per-color intersection, normalized. Contradiction iff the joint
    /// denotation is empty.
    pub fn merge(&self, other: &ColorModel, config: &GameConfig) -> Outcome<ColorModel> {
        let mut out = self.clone();
        for (c, k) in other.constraints() {
            match out.get(c).intersect(k) {
                Some(joint) => out.set(c, joint),
                None => return Outcome::Contradiction,
            }
        }
        let out = out.normalize(config);
        if out.is_empty(config) {
            Outcome::Contradiction
        } else {
            Outcome::Model(out)
        }
    }

    /// Exact number of codes satisfying the model, by counting placements
    /// color by color: `ways[j]` is the number of ways to fill `j` of the
    /// positions with the colors seen so far.
    pub fn denotation_count(&self, config: &GameConfig) -> u128 {
        let n = config.positions();
        let binom = binomials(n);
        let mut ways = vec![0u128; n + 1];
        ways[0] = 1;
        for c in config.colors() {
            let k = self.get(c);
            let mut next = vec![0u128; n + 1];
            for (used, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for take in 0..=(n - used) {
                    if k.admits(take) {
                        next[used + take] += w * binom[n - used][take];
                    }
                }
            }
            ways = next;
        }
        ways[n]
    }

    pub fn render<'a>(&'a self, config: &'a GameConfig) -> Rendered<'a, ColorModel> {
        Rendered { model: self, config }
    }

    /// Parses the rendered form, e.g. `[1B][1Y] noR` or `[1Y] 1R noB noO`.
    pub fn parse(config: &GameConfig, text: &str) -> Result<ColorModel, ModelParseError> {
        let err = |message: String| ModelParseError { input: text.to_string(), message };
        let mut m = ColorModel::any();
        let trimmed = text.trim();
        if trimmed == "any" {
            return Ok(m);
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            let (token, tail) = if let Some(after) = rest.strip_prefix('[') {
                let end = after.find(']').ok_or_else(|| err("unclosed '['".into()))?;
                (&rest[..end + 2], &after[end + 1..])
            } else {
                let end = rest.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(rest.len());
                (&rest[..end], &rest[end..])
            };
            rest = tail.trim_start();
            let (body, exact) = match token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                Some(inner) => (inner.trim(), true),
                None => (token, false),
            };
            let (color, constraint) = if let Some(letter) = body.strip_prefix("no").filter(|_| !exact) {
                (parse_letter(config, letter).map_err(err)?, CountConstraint::Exactly(0))
            } else {
                let split = body.find(|c: char| !c.is_ascii_digit()).ok_or_else(|| err(format!("token {token:?} has no color")))?;
                let k: u8 = body[..split].parse().map_err(|_| err(format!("token {token:?} has no count")))?;
                let color = parse_letter(config, body[split..].trim()).map_err(err)?;
                (color, if exact { CountConstraint::Exactly(k) } else { CountConstraint::at_least(k) })
            };
            if m.constraints.contains_key(&color) {
                return Err(err(format!("color {} constrained twice", config.letter(color))));
            }
            m.set(color, constraint);
        }
        Ok(m)
    }
}

fn parse_letter(config: &GameConfig, text: &str) -> Result<Color, String> {
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => config.color(c).ok_or_else(|| format!("unknown color {c:?}")),
        _ => Err(format!("expected a single color letter, found {text:?}")),
    }
}

fn binomials(n: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

/// A cell of a partial row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Fixed(Color),
    /// Undetermined color; bit `c` set means color `c` is ruled out here.
    Wildcard { excluded: u32 },
}

impl Cell {
    pub const WILD: Cell = Cell::Wildcard { excluded: 0 };

    pub fn admits(self, color: Color) -> bool {
        match self {
            Cell::Fixed(c) => c == color,
            Cell::Wildcard { excluded } => excluded & (1 << color.0) == 0,
        }
    }

    pub fn fixed(self) -> Option<Color> {
        match self {
            Cell::Fixed(c) => Some(c),
            Cell::Wildcard { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaceModel {
    cells: Vec<Cell>,
    colors: ColorModel,
}

impl PlaceModel {
    pub fn wildcards(positions: usize, colors: ColorModel) -> Self {
        PlaceModel { cells: vec![Cell::WILD; positions], colors }
    }

    pub fn from_cells(cells: Vec<Cell>, colors: ColorModel) -> Self {
        PlaceModel { cells, colors }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn colors(&self) -> &ColorModel {
        &self.colors
    }

    pub fn fix(mut self, position: usize, color: Color) -> Self {
        self.cells[position] = Cell::Fixed(color);
        self
    }

    /// Rules out `color` at a wildcard position. Fixed cells are left alone.
    pub fn exclude(mut self, position: usize, color: Color) -> Self {
        if let Cell::Wildcard { excluded } = &mut self.cells[position] {
            *excluded |= 1 << color.0;
        }
        self
    }

    pub fn with_colors(mut self, colors: ColorModel) -> Self {
        self.colors = colors;
        self
    }

    pub fn admits(&self, code: &Code) -> bool {
        code.len() == self.cells.len()
            && self.cells.iter().zip(code.pawns()).all(|(cell, c)| cell.admits(*c))
            && self.colors.satisfied_by(code)
    }

    /// Codes of the denotation in lexicographic order, generated cell by cell
    /// with color-count pruning.
    pub fn codes(&self, config: &GameConfig) -> Vec<Code> {
        let mut out = Vec::new();
        self.walk(config, &mut |pawns| out.push(Code(pawns.to_vec())));
        out
    }

    pub fn denotation_count(&self, config: &GameConfig) -> u128 {
        let mut n = 0u128;
        self.walk(config, &mut |_| n += 1);
        n
    }

    fn walk(&self, config: &GameConfig, visit: &mut dyn FnMut(&[Color])) {
        if self.colors.is_empty(config) {
            return;
        }
        let caps: Vec<Option<u8>> = config
            .colors()
            .map(|c| match self.colors.get(c) {
                CountConstraint::Exactly(k) => Some(k),
                _ => None,
            })
            .collect();
        let lows: Vec<u8> = config.colors().map(|c| self.colors.get(c).lower()).collect();
        let mut counts = [0u8; MAX_COLORS];
        let mut pawns = Vec::with_capacity(self.cells.len());
        self.descend(config, &caps, &lows, &mut counts, &mut pawns, visit);
    }

    fn descend(
        &self,
        config: &GameConfig,
        caps: &[Option<u8>],
        lows: &[u8],
        counts: &mut [u8; MAX_COLORS],
        pawns: &mut Vec<Color>,
        visit: &mut dyn FnMut(&[Color]),
    ) {
        let pos = pawns.len();
        if pos == self.cells.len() {
            if self.colors.satisfied_by_counts(counts) {
                visit(pawns);
            }
            return;
        }
        // Colors still owed to lower bounds must fit in the remaining cells.
        let owed: usize = lows.iter().zip(counts.iter()).map(|(l, c)| l.saturating_sub(*c) as usize).sum();
        if owed > self.cells.len() - pos {
            return;
        }
        for color in config.colors() {
            if !self.cells[pos].admits(color) {
                continue;
            }
            if caps[color.index()].is_some_and(|cap| counts[color.index()] >= cap) {
                continue;
            }
            counts[color.index()] += 1;
            pawns.push(color);
            self.descend(config, caps, lows, counts, pawns, visit);
            pawns.pop();
            counts[color.index()] -= 1;
        }
    }

    pub fn render<'a>(&'a self, config: &'a GameConfig) -> Rendered<'a, PlaceModel> {
        Rendered { model: self, config }
    }

    /// Parses `[- - Y - -]`, optionally followed by `over <color model>`.
    /// Wildcards may carry exclusions, `-{≠B,Y}`.
    pub fn parse(config: &GameConfig, text: &str) -> Result<PlaceModel, ModelParseError> {
        let err = |message: String| ModelParseError { input: text.to_string(), message };
        let trimmed = text.trim();
        let inner_start = trimmed.strip_prefix('[').ok_or_else(|| err("expected '['".into()))?;
        let close = inner_start.find(']').ok_or_else(|| err("unclosed '['".into()))?;
        let (inner, tail) = (&inner_start[..close], inner_start[close + 1..].trim());
        let mut cells = Vec::new();
        for tok in inner.split_whitespace() {
            let cell = if tok == "-" {
                Cell::WILD
            } else if let Some(ex) = tok.strip_prefix("-{≠").and_then(|t| t.strip_suffix('}')) {
                let mut excluded = 0u32;
                for letter in ex.split(',') {
                    excluded |= 1 << parse_letter(config, letter.trim()).map_err(err)?.0;
                }
                Cell::Wildcard { excluded }
            } else {
                Cell::Fixed(parse_letter(config, tok).map_err(err)?)
            };
            cells.push(cell);
        }
        if cells.len() != config.positions() {
            return Err(err(format!("expected {} cells, found {}", config.positions(), cells.len())));
        }
        let colors = if tail.is_empty() {
            ColorModel::any()
        } else {
            let body = tail.strip_prefix("over").ok_or_else(|| err(format!("unexpected trailing text {tail:?}")))?;
            ColorModel::parse(config, body)?
        };
        Ok(PlaceModel { cells, colors })
    }
}

/// Either kind of partial model, for order and lattice purposes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Color(ColorModel),
    Place(PlaceModel),
}

impl Model {
    pub fn admits(&self, code: &Code) -> bool {
        match self {
            Model::Color(m) => m.satisfied_by(code),
            Model::Place(m) => m.admits(code),
        }
    }

    pub fn denotation_count(&self, config: &GameConfig) -> u128 {
        match self {
            Model::Color(m) => m.denotation_count(config),
            Model::Place(m) => m.denotation_count(config),
        }
    }

    pub fn color_model(&self) -> &ColorModel {
        match self {
            Model::Color(m) => m,
            Model::Place(m) => m.colors(),
        }
    }
}

impl From<ColorModel> for Model {
    fn from(m: ColorModel) -> Self {
        Model::Color(m)
    }
}

impl From<PlaceModel> for Model {
    fn from(m: PlaceModel) -> Self {
        Model::Place(m)
    }
}

pub fn satisfies_color_model(code: &Code, model: &ColorModel) -> bool {
    model.satisfied_by(code)
}

/// `a ≤ b` in the specificity order: every code admitted by `a` is admitted
/// by `b`. Decided by scanning the whole code space.
pub fn specificity_leq(a: &Model, b: &Model, config: &GameConfig) -> bool {
    crate::game::enumerate_codes(config).all(|code| !a.admits(&code) || b.admits(&code))
}

/// A model paired with the configuration it is rendered against.
pub struct Rendered<'a, T> {
    model: &'a T,
    config: &'a GameConfig,
}

impl fmt::Display for Rendered<'_, ColorModel> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.model;
        if m.is_any() {
            return f.write_str("any");
        }
        let mut out = String::new();
        let mut prev_bracket = false;
        for (c, k) in m.constraints() {
            let letter = self.config.letter(c);
            let (token, bracket) = match k {
                CountConstraint::Exactly(0) | CountConstraint::Unconstrained => continue,
                CountConstraint::Exactly(k) => (format!("[{k}{letter}]"), true),
                CountConstraint::AtLeast(k) => (format!("{k}{letter}"), false),
            };
            if !out.is_empty() && !(bracket && prev_bracket) {
                out.push(' ');
            }
            out.push_str(&token);
            prev_bracket = bracket;
        }
        for (c, k) in m.constraints() {
            if k == CountConstraint::Exactly(0) {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str("no");
                out.push(self.config.letter(c));
            }
        }
        f.write_str(&out)
    }
}

/// `{}` renders exclusions and the attached color model; `{:#}` renders only
/// the bare row, e.g. `[- - - Y G]`.
impl fmt::Display for Rendered<'_, PlaceModel> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bare = f.alternate();
        f.write_str("[")?;
        for (i, cell) in self.model.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match *cell {
                Cell::Fixed(c) => write!(f, "{}", self.config.letter(c))?,
                Cell::Wildcard { excluded } if excluded == 0 || bare => f.write_str("-")?,
                Cell::Wildcard { excluded } => {
                    let letters: Vec<String> = self
                        .config
                        .colors()
                        .filter(|c| excluded & (1 << c.0) != 0)
                        .map(|c| self.config.letter(c).to_string())
                        .collect();
                    write!(f, "-{{≠{}}}", letters.join(","))?;
                }
            }
        }
        f.write_str("]")?;
        if !bare && !self.model.colors.is_any() {
            write!(f, " over {}", self.model.colors.render(self.config))?;
        }
        Ok(())
    }
}
