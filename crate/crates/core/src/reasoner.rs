//! The hybrid codebreaker.
//!
//! Play is split into two phases. While the colors are open, every row is
//! read as an ordered list of color models (which pins belong to which
//! colors) and the solver keeps one model per row active, merging them into a
//! single constraint on the secret's multiset. Once the merged model pins down
//! the full multiset, an anchor row is re-read as a list of place models
//! (which of its pawns are the well-placed ones) and the active place model is
//! refined against the whole history. Any contradiction advances the
//! hypothesis lattice chronologically.

use std::cmp::Reverse;
use std::fmt;

use crate::error::SolveError;
use crate::game::{consistent, score, Code, CodeSpace, Color, Feedback, GameConfig, HistoryEntry};
use crate::lars::{Cell, ColorModel, CountConstraint, Model, Outcome, PlaceModel};
use crate::lattice::HypothesisLattice;
use crate::strategy::Codebreaker;

/// How alternatives opened by a row are ranked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Comparator {
    /// Most balanced pin attribution first, then leftmost attributed colors.
    #[default]
    Heuristic,
    /// Most history-consistent codes first, heuristic order on ties.
    CountBased,
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::Heuristic => "heuristic",
            Comparator::CountBased => "count",
        })
    }
}

/// Left-to-right preference key. Compared lexicographically, smaller first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeuristicKey {
    /// Attribution counts sorted descending: `[1, 1, 0]` beats `[2, 0, 0]`.
    balance: Vec<u8>,
    /// First guess position of every color (or fixed cell) the model uses.
    positions: Vec<usize>,
    /// Raw attribution, larger counts on the left preferred.
    attribution: Vec<Reverse<u8>>,
}

/// A model in the lattice, with the row that opened it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub model: Model,
    pub origin: usize,
    pub key: HeuristicKey,
}

impl Hypothesis {
    /// A hypothesis with a neutral key; ties keep input order.
    pub fn unranked(model: impl Into<Model>, origin: usize) -> Self {
        Hypothesis { model: model.into(), origin, key: HeuristicKey::default() }
    }
}

/// The color models a row's pins allow, in heuristic order.
pub fn interpret_colors(guess: &Code, f: Feedback, config: &GameConfig) -> Result<Vec<ColorModel>, SolveError> {
    Ok(color_hypotheses(guess, f, config, 0)?
        .into_iter()
        .map(|h| match h.model {
            Model::Color(m) => m,
            Model::Place(_) => unreachable!("color hypotheses hold color models"),
        })
        .collect())
}

/// One hypothesis per way of attributing `whites + blacks` pins to the colors
/// of `guess`. A color attributed fewer pins than it has pawns is exhausted at
/// that count; a color attributed all its pawns may have more.
pub fn color_hypotheses(
    guess: &Code,
    f: Feedback,
    config: &GameConfig,
    origin: usize,
) -> Result<Vec<Hypothesis>, SolveError> {
    let colors = guess.distinct_colors();
    let caps: Vec<u8> = colors.iter().map(|&c| guess.count(c) as u8).collect();
    let first_pos: Vec<usize> = colors.iter().map(|&c| guess.pawns().iter().position(|&p| p == c).unwrap_or(0)).collect();
    let mut out = Vec::new();
    let mut attribution = vec![0u8; colors.len()];
    attributions(&caps, f.total(), 0, &mut attribution, &mut |attr| {
        let mut model = ColorModel::any();
        for (i, &k) in attr.iter().enumerate() {
            let constraint = if k < caps[i] { CountConstraint::Exactly(k) } else { CountConstraint::at_least(k) };
            model.set(colors[i], constraint);
        }
        let mut balance = attr.to_vec();
        balance.sort_unstable_by(|a, b| b.cmp(a));
        let positions = attr.iter().zip(&first_pos).filter(|(k, _)| **k > 0).map(|(_, p)| *p).collect();
        let key = HeuristicKey { balance, positions, attribution: attr.iter().map(|&k| Reverse(k)).collect() };
        out.push(Hypothesis { model: Model::Color(model), origin, key });
    });
    if out.is_empty() {
        return Err(SolveError::InconsistentHistory(format!(
            "row {} reports {} pins for {} pawns",
            origin + 1,
            f.total(),
            config.positions()
        )));
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

fn attributions(caps: &[u8], remaining: usize, i: usize, current: &mut Vec<u8>, emit: &mut dyn FnMut(&[u8])) {
    if i == caps.len() {
        if remaining == 0 {
            emit(current);
        }
        return;
    }
    let left: usize = caps[i + 1..].iter().map(|&c| c as usize).sum();
    for k in 0..=caps[i].min(remaining as u8) {
        if remaining - k as usize <= left {
            current[i] = k;
            attributions(caps, remaining - k as usize, i + 1, current, emit);
        }
    }
    current[i] = 0;
}

/// Place models for a row once the multiset is known: one per choice of
/// `whites` positions taken as the well-placed pawns, leftmost choices first.
/// Choices that the color model or the row's own pins rule out are dropped.
pub fn interpret_places(colors: &ColorModel, guess: &Code, f: Feedback, config: &GameConfig) -> Vec<PlaceModel> {
    place_hypotheses(colors, guess, f, config, 0)
        .into_iter()
        .map(|h| match h.model {
            Model::Place(m) => m,
            Model::Color(_) => unreachable!("place hypotheses hold place models"),
        })
        .collect()
}

pub fn place_hypotheses(
    colors: &ColorModel,
    guess: &Code,
    f: Feedback,
    config: &GameConfig,
    origin: usize,
) -> Vec<Hypothesis> {
    let n = config.positions();
    let row = [HistoryEntry::new(guess.clone(), f)];
    let mut out = Vec::new();
    for subset in combinations(n, f.whites as usize) {
        let mut pm = PlaceModel::wildcards(n, colors.clone());
        for &i in &subset {
            pm = pm.fix(i, guess.pawns()[i]);
        }
        if pm.codes(config).iter().any(|c| consistent(c, &row)) {
            let key = HeuristicKey { positions: subset, ..HeuristicKey::default() };
            out.push(Hypothesis { model: Model::Place(pm), origin, key });
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Result of refining a place model against a history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    /// The input model with every forced cell fixed and every impossible
    /// color excluded from the remaining wildcards.
    pub refined: PlaceModel,
    /// Number of codes in the model that agree with the whole history.
    pub count: usize,
    pub survivors: Vec<Code>,
}

/// Refines `pm` by the codes it admits that fit `history`.
pub fn propagate(pm: &PlaceModel, history: &[HistoryEntry], config: &GameConfig) -> Outcome<Propagation> {
    let survivors: Vec<Code> = pm.codes(config).into_iter().filter(|c| consistent(c, history)).collect();
    forced_facts(pm, survivors, config)
}

/// Fixes cells shared by all `survivors` and excludes colors none of them
/// use at a position. Shared by the propagator and the brute-force oracle.
pub(crate) fn forced_facts(pm: &PlaceModel, survivors: Vec<Code>, config: &GameConfig) -> Outcome<Propagation> {
    if survivors.is_empty() {
        return Outcome::Contradiction;
    }
    let mut seen = vec![0u32; config.positions()];
    for code in &survivors {
        for (i, c) in code.pawns().iter().enumerate() {
            seen[i] |= 1 << c.0;
        }
    }
    let palette = (1u32 << config.num_colors()) - 1;
    let cells = pm
        .cells()
        .iter()
        .zip(&seen)
        .map(|(cell, &used)| match cell {
            Cell::Fixed(c) => Cell::Fixed(*c),
            Cell::Wildcard { .. } if used.count_ones() == 1 => Cell::Fixed(Color(used.trailing_zeros() as u8)),
            Cell::Wildcard { .. } => Cell::Wildcard { excluded: palette & !used },
        })
        .collect();
    Outcome::Model(Propagation {
        refined: PlaceModel::from_cells(cells, pm.colors().clone()),
        count: survivors.len(),
        survivors,
    })
}

/// Codes one transposition away from `guess`, for a last row of
/// `N-2` whites and 2 blacks. Cells that `pm` fixes to the guessed color stay
/// put. `None` if the last row of `history` is not such a row for `guess`.
pub fn switch_candidates(guess: &Code, pm: &PlaceModel, history: &[HistoryEntry]) -> Option<Vec<Code>> {
    let n = guess.len();
    let last = history.last()?;
    if n < 2 || last.guess != *guess || last.feedback != Feedback::new(n as u8 - 2, 2) {
        return None;
    }
    let pinned = |i: usize| pm.cells()[i].fixed() == Some(guess.pawns()[i]);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if guess.pawns()[i] == guess.pawns()[j] || pinned(i) || pinned(j) {
                continue;
            }
            let code = guess.swapped(i, j);
            if consistent(&code, history) {
                out.push(code);
            }
        }
    }
    Some(out)
}

/// Sorts hypotheses under `comparator`. Count-based ranking counts the codes
/// of `candidates` each model admits.
pub fn order_among(mut models: Vec<Hypothesis>, candidates: &[Code], comparator: Comparator) -> Vec<Hypothesis> {
    match comparator {
        Comparator::Heuristic => models.sort_by(|a, b| a.key.cmp(&b.key)),
        Comparator::CountBased => {
            let counts: Vec<usize> = models.iter().map(|h| candidates.iter().filter(|c| h.model.admits(c)).count()).collect();
            let mut idx: Vec<usize> = (0..models.len()).collect();
            idx.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then_with(|| models[a].key.cmp(&models[b].key)));
            let mut slots: Vec<Option<Hypothesis>> = models.into_iter().map(Some).collect();
            models = idx.into_iter().map(|i| slots[i].take().expect("each index once")).collect();
        }
    }
    models
}

/// [`order_among`] over every code consistent with `history`.
pub fn order_models(models: Vec<Hypothesis>, history: &[HistoryEntry], comparator: Comparator, config: &GameConfig) -> Vec<Hypothesis> {
    let candidates: Vec<Code> = crate::game::enumerate_codes(config).filter(|c| consistent(c, history)).collect();
    order_among(models, &candidates, comparator)
}

/// The opening row: colors in pairs over the palette, `A A B B C` for five
/// positions, reusing the last color when the palette runs short.
pub fn opening_guess(config: &GameConfig) -> Code {
    let last = config.num_colors() - 1;
    let pawns = (0..config.positions()).map(|i| Color((i / 2).min(last) as u8)).collect();
    Code(pawns)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Colors,
    Places,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Interpret,
    Merge,
    PlaceModels,
    Propagate,
    Contradiction,
    Backtrack,
    Switch,
    Guess,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Interpret => "interpret",
            TraceKind::Merge => "merge",
            TraceKind::PlaceModels => "place-models",
            TraceKind::Propagate => "propagate",
            TraceKind::Contradiction => "contradiction",
            TraceKind::Backtrack => "backtrack",
            TraceKind::Switch => "switch",
            TraceKind::Guess => "guess",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub kind: TraceKind,
    pub detail: String,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<13} {}", self.kind, self.detail)
    }
}

/// Solver state for one game.
#[derive(Clone, Debug)]
pub struct SolverState {
    config: GameConfig,
    comparator: Comparator,
    history: Vec<HistoryEntry>,
    phase: Phase,
    lattice: HypothesisLattice<Hypothesis>,
    merged_colors: ColorModel,
    /// Active place model after propagation, with its surviving codes.
    refined: Option<Propagation>,
    /// Codes consistent with the whole history.
    candidates: Vec<Code>,
    trace: Option<Vec<TraceEvent>>,
}

impl SolverState {
    pub fn new(config: &GameConfig, comparator: Comparator) -> Self {
        Self::with_space(config, comparator, &CodeSpace::new(config))
    }

    pub fn with_space(config: &GameConfig, comparator: Comparator, space: &CodeSpace) -> Self {
        SolverState {
            config: config.clone(),
            comparator,
            history: Vec::new(),
            phase: Phase::Colors,
            lattice: HypothesisLattice::new(),
            merged_colors: ColorModel::any(),
            refined: None,
            candidates: space.codes().to_vec(),
            trace: None,
        }
    }

    /// Record reasoning events, readable with [`SolverState::take_trace`].
    pub fn traced(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn merged_colors(&self) -> &ColorModel {
        &self.merged_colors
    }

    pub fn lattice(&self) -> &HypothesisLattice<Hypothesis> {
        &self.lattice
    }

    pub fn candidates(&self) -> &[Code] {
        &self.candidates
    }

    /// The active place model after refinement, in the places phase.
    pub fn active_place(&self) -> Option<&Propagation> {
        self.refined.as_ref()
    }

    fn emit(&mut self, kind: TraceKind, detail: impl FnOnce() -> String) {
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent { kind, detail: detail() });
        }
    }

    /// Adds a row and re-establishes a consistent active branch.
    pub fn observe(&mut self, guess: &Code, feedback: Feedback) -> Result<(), SolveError> {
        self.config.check(guess)?;
        if !self.config.is_legal_feedback(feedback) {
            return Err(SolveError::InconsistentHistory(format!("feedback {feedback} cannot occur")));
        }
        self.history.push(HistoryEntry::new(guess.clone(), feedback));
        self.candidates.retain(|c| score(guess, c) == feedback);
        if self.candidates.is_empty() {
            return Err(SolveError::InconsistentHistory("no code agrees with every row".into()));
        }
        if feedback == self.config.won() {
            return Ok(());
        }
        self.settle()
    }

    fn color_depth(&self) -> usize {
        self.lattice.active().take_while(|h| matches!(h.model, Model::Color(_))).count()
    }

    fn place_level_open(&self) -> bool {
        self.lattice.top().is_some_and(|l| matches!(l.selected().model, Model::Place(_)))
    }

    fn retreat(&mut self, reason: impl FnOnce() -> String) -> Result<(), SolveError> {
        self.emit(TraceKind::Contradiction, reason);
        self.refined = None;
        let level = self.lattice.backtrack().map_err(|_| SolveError::LatticeExhausted)?;
        let config = self.config.clone();
        let lvl = &self.lattice.levels()[level];
        let detail = format!(
            "level {} -> alternative {}/{}: {}",
            level + 1,
            lvl.cursor() + 1,
            lvl.alternatives().len(),
            render_model(&lvl.selected().model, &config)
        );
        self.emit(TraceKind::Backtrack, || detail);
        Ok(())
    }

    /// Walks the lattice until the active branch survives every check.
    fn settle(&mut self) -> Result<(), SolveError> {
        loop {
            let mut merged = ColorModel::any();
            let mut clash = None;
            for h in self.lattice.active() {
                if let Model::Color(m) = &h.model {
                    match merged.merge(m, &self.config) {
                        Outcome::Model(next) => merged = next,
                        Outcome::Contradiction => {
                            clash = Some(h.origin);
                            break;
                        }
                    }
                }
            }
            if let Some(row) = clash {
                let config = self.config.clone();
                self.retreat(|| format!("row {} model clashes with {}", row + 1, merged.render(&config)))?;
                continue;
            }
            if !self.candidates.iter().any(|c| merged.satisfied_by(c)) {
                let config = self.config.clone();
                self.retreat(|| format!("{} admits no code fitting the history", merged.render(&config)))?;
                continue;
            }
            let full = merged.is_full(&self.config);
            let depth = self.color_depth();
            if !full && depth < self.history.len() {
                let row = &self.history[depth];
                let alts = color_hypotheses(&row.guess, row.feedback, &self.config, depth)?;
                let alts = order_among(alts, &self.candidates, self.comparator);
                let config = self.config.clone();
                self.emit(TraceKind::Interpret, || format!("row {}: {}", depth + 1, render_list(&alts, &config)));
                self.lattice.push(alts);
                continue;
            }
            if merged != self.merged_colors {
                let config = self.config.clone();
                self.emit(TraceKind::Merge, || merged.render(&config).to_string());
            }
            self.merged_colors = merged;
            if !full {
                self.phase = Phase::Colors;
                self.refined = None;
                return Ok(());
            }
            if !self.place_level_open() {
                let anchor = self.anchor_row();
                let row = &self.history[anchor];
                let alts = place_hypotheses(&self.merged_colors, &row.guess, row.feedback, &self.config, anchor);
                let alts = order_among(alts, &self.candidates, self.comparator);
                let config = self.config.clone();
                self.emit(TraceKind::PlaceModels, || format!("row {}: {}", anchor + 1, render_bare_list(&alts, &config)));
                if !self.lattice.push(alts) {
                    self.retreat(|| format!("row {} has no place model", anchor + 1))?;
                }
                continue;
            }
            let Model::Place(pm) = &self.lattice.top().expect("place level open").selected().model else {
                unreachable!("top level holds place models")
            };
            let pm = pm.clone();
            match propagate(&pm, &self.history, &self.config) {
                Outcome::Contradiction => {
                    let config = self.config.clone();
                    self.retreat(|| format!("{:#} fits no code of the history", pm.render(&config)))?;
                }
                Outcome::Model(p) => {
                    let config = self.config.clone();
                    self.emit(TraceKind::Propagate, || {
                        format!("{:#} => {:#} ({} codes)", pm.render(&config), p.refined.render(&config), p.count)
                    });
                    let last = self.history.last().expect("settle runs after a row");
                    if let Some(switches) = switch_candidates(&last.guess, &p.refined, &self.history) {
                        if switches.is_empty() {
                            self.retreat(|| "no transposition of the last row fits".into())?;
                            continue;
                        }
                    }
                    self.refined = Some(p);
                    self.phase = Phase::Places;
                    return Ok(());
                }
            }
        }
    }

    /// Earliest row with a well-placed pawn; row one if there is none.
    fn anchor_row(&self) -> usize {
        self.history.iter().position(|e| e.feedback.whites > 0).unwrap_or(0)
    }

    /// Next row to play.
    pub fn choose_guess(&mut self) -> Code {
        let guess = self.pick();
        let (config, row) = (self.config.clone(), self.history.len() + 1);
        self.emit(TraceKind::Guess, || format!("row {row}: {}", config.format_code(&guess)));
        guess
    }

    fn pick(&mut self) -> Code {
        if self.history.is_empty() {
            return opening_guess(&self.config);
        }
        match (self.phase, &self.refined) {
            (Phase::Places, Some(p)) => {
                let last = self.history.last().expect("history is not empty");
                if let Some(switches) = switch_candidates(&last.guess, &p.refined, &self.history) {
                    if let Some(first) = switches.first().cloned() {
                        let config = self.config.clone();
                        let list: Vec<String> = switches.iter().map(|c| config.format_code(c)).collect();
                        self.emit(TraceKind::Switch, || list.join(" | "));
                        return first;
                    }
                }
                p.survivors[0].clone()
            }
            _ => self.explore_colors().unwrap_or_else(|| self.first_fitting()),
        }
    }

    fn first_fitting(&self) -> Code {
        self.candidates
            .iter()
            .find(|c| self.merged_colors.satisfied_by(c))
            .or(self.candidates.first())
            .expect("settled state keeps a fitting candidate")
            .clone()
    }

    /// A colors-phase probe. Exhausted colors move once to a position they
    /// have not occupied; colors with an open count get up to two more copies
    /// than their lower bound in new positions; untested colors fill the rest
    /// two at a time. `None` when no untested color fits or the row was
    /// already played.
    fn explore_colors(&self) -> Option<Code> {
        let n = self.config.positions();
        let mut occupied = vec![0u32; self.config.num_colors()];
        let mut tested = vec![false; self.config.num_colors()];
        for e in &self.history {
            for (i, c) in e.guess.pawns().iter().enumerate() {
                occupied[c.index()] |= 1 << i;
                tested[c.index()] = true;
            }
        }
        let fresh: Vec<Color> = self
            .config
            .colors()
            .filter(|c| !tested[c.index()] && !self.merged_colors.excludes(*c))
            .collect();
        if fresh.is_empty() {
            return None;
        }
        let mut cells: Vec<Option<Color>> = vec![None; n];
        let place = |cells: &mut Vec<Option<Color>>, c: Color, copies: usize| {
            for _ in 0..copies {
                let free = cells.iter().filter(|x| x.is_none()).count();
                if free <= 1 {
                    return;
                }
                match (0..n).find(|&p| cells[p].is_none() && occupied[c.index()] & (1 << p) == 0) {
                    Some(p) => cells[p] = Some(c),
                    None => return,
                }
            }
        };
        for c in self.config.colors() {
            match self.merged_colors.get(c) {
                CountConstraint::Exactly(k) if k > 0 => place(&mut cells, c, 1),
                CountConstraint::AtLeast(k) => place(&mut cells, c, k as usize + 2),
                _ => {}
            }
        }
        let free: Vec<usize> = (0..n).filter(|&p| cells[p].is_none()).collect();
        for (k, &p) in free.iter().enumerate() {
            cells[p] = Some(fresh[(k / 2).min(fresh.len() - 1)]);
        }
        let code = Code(cells.into_iter().map(|c| c.expect("every cell filled")).collect());
        (!self.history.iter().any(|e| e.guess == code)).then_some(code)
    }
}

fn render_model(model: &Model, config: &GameConfig) -> String {
    match model {
        Model::Color(m) => m.render(config).to_string(),
        Model::Place(m) => format!("{:#}", m.render(config)),
    }
}

fn render_list(hyps: &[Hypothesis], config: &GameConfig) -> String {
    hyps.iter().map(|h| render_model(&h.model, config)).collect::<Vec<_>>().join(" < ")
}

fn render_bare_list(hyps: &[Hypothesis], config: &GameConfig) -> String {
    render_list(hyps, config)
}

/// The hybrid strategy as a [`Codebreaker`].
pub struct HybridSolver {
    state: SolverState,
}

impl HybridSolver {
    pub fn new(config: &GameConfig, comparator: Comparator, space: &CodeSpace) -> Self {
        HybridSolver { state: SolverState::with_space(config, comparator, space) }
    }

    pub fn traced(self) -> Self {
        HybridSolver { state: self.state.traced() }
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        self.state.take_trace()
    }
}

impl Codebreaker for HybridSolver {
    fn next_guess(&mut self) -> Result<Code, SolveError> {
        Ok(self.state.choose_guess())
    }

    fn observe(&mut self, guess: &Code, feedback: Feedback) -> Result<(), SolveError> {
        self.state.observe(guess, feedback)
    }

    fn trace(&mut self) -> Vec<TraceEvent> {
        self.state.take_trace()
    }
}
