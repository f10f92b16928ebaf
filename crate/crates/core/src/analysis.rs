//! First-guess informativeness and strategy tournaments.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{feedback_partition, partition_entropy};
use crate::error::BudgetExceeded;
use crate::game::{Code, CodeSpace, Color, Feedback, GameConfig};
use crate::reasoner::{opening_guess, Comparator};
use crate::strategy::{solve_secret, Strategy};

/// Default ceiling on exhaustive tournament size.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// Largest code space a sampled run will materialize.
pub const MAX_SPACE: u64 = 1 << 22;

/// A guess's color-count distribution, parts descending (`2/2/1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn new(mut parts: Vec<u8>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Pattern(parts)
    }

    pub fn of(code: &Code) -> Self {
        Pattern::new(code.distinct_colors().iter().map(|&c| code.count(c) as u8).collect())
    }

    pub fn parts(&self) -> &[u8] {
        &self.0
    }

    /// Every partition of `N` using at most `M` parts, largest parts first.
    pub fn all(config: &GameConfig) -> Vec<Pattern> {
        fn go(remaining: u8, max_part: u8, slots: usize, cur: &mut Vec<u8>, out: &mut Vec<Pattern>) {
            if remaining == 0 {
                out.push(Pattern(cur.clone()));
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=max_part.min(remaining)).rev() {
                cur.push(p);
                go(remaining - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let n = config.positions() as u8;
        let mut out = Vec::new();
        go(n, n, config.num_colors(), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join("/"))
    }
}

/// First palette colors in descending part sizes: `2/2/1` is `A A B B C`.
pub fn pattern_representative(pattern: &Pattern, config: &GameConfig) -> Code {
    let pawns = pattern
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(Color(i as u8), k as usize))
        .collect();
    config.code(pawns).expect("pattern fits the configuration")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternStats {
    pub pattern: Pattern,
    pub representative: Code,
    pub distribution: BTreeMap<Feedback, usize>,
    pub entropy: f64,
    pub expected_remaining: f64,
}

/// Pin distribution of each pattern's representative over all secrets, most
/// informative first.
pub fn pattern_informativeness(config: &GameConfig, space: &CodeSpace) -> Vec<PatternStats> {
    let n = config.positions();
    let mut stats: Vec<PatternStats> = Pattern::all(config)
        .into_iter()
        .map(|pattern| {
            let representative = pattern_representative(&pattern, config);
            let sizes = feedback_partition(&representative, space.codes(), config);
            let mut distribution = BTreeMap::new();
            for (idx, &size) in sizes.iter().enumerate() {
                if size > 0 {
                    distribution.insert(Feedback::new((idx / (n + 1)) as u8, (idx % (n + 1)) as u8), size);
                }
            }
            let total = space.len() as f64;
            let expected_remaining = sizes.iter().map(|&s| (s * s) as f64).sum::<f64>() / total;
            PatternStats { entropy: partition_entropy(&sizes), expected_remaining, pattern, representative, distribution }
        })
        .collect();
    stats.sort_by(|a, b| {
        b.entropy
            .total_cmp(&a.entropy)
            .then(a.expected_remaining.total_cmp(&b.expected_remaining))
            .then(a.pattern.cmp(&b.pattern))
    });
    stats
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TournamentMode {
    Exhaustive,
    Sampled { seed: u64, games: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TournamentStats {
    pub strategy: String,
    pub positions: usize,
    pub colors: usize,
    pub games: usize,
    pub solved: usize,
    /// Games whose last guess was not the secret, or that raised an error.
    pub failures: usize,
    pub mean: f64,
    pub max: usize,
    pub histogram: BTreeMap<usize, usize>,
}

/// Plays `strategy` against every secret, or `games` seeded draws with
/// replacement. Results do not depend on scheduling.
pub fn tournament(
    strategy: Strategy,
    config: &GameConfig,
    mode: TournamentMode,
    budget: u64,
) -> Result<TournamentStats, BudgetExceeded> {
    let total = config.code_count();
    let secrets: Vec<usize> = match mode {
        TournamentMode::Exhaustive => {
            if total > budget {
                return Err(BudgetExceeded { required: total, budget });
            }
            (0..total as usize).collect()
        }
        TournamentMode::Sampled { seed, games } => {
            if total > MAX_SPACE {
                return Err(BudgetExceeded { required: total, budget: MAX_SPACE });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..games).map(|_| rng.gen_range(0..total as usize)).collect()
        }
    };
    let space = CodeSpace::new(config);
    let outcomes: Vec<Option<usize>> = secrets
        .par_iter()
        .map(|&i| {
            let secret = &space.codes()[i];
            match solve_secret(strategy, secret, config, &space) {
                Ok(game) if game.transcript.entries.last().is_some_and(|e| e.guess == *secret) => Some(game.transcript.len()),
                _ => None,
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut sum = 0usize;
    for rows in outcomes.iter().flatten() {
        *histogram.entry(*rows).or_insert(0) += 1;
        sum += rows;
    }
    let solved = outcomes.iter().flatten().count();
    Ok(TournamentStats {
        strategy: strategy.name(),
        positions: config.positions(),
        colors: config.num_colors(),
        games: outcomes.len(),
        solved,
        failures: outcomes.len() - solved,
        mean: if solved == 0 { 0.0 } else { sum as f64 / solved as f64 },
        max: histogram.keys().next_back().copied().unwrap_or(0),
        histogram,
    })
}

#[derive(Clone, Debug)]
pub struct ConfigReport {
    pub config: GameConfig,
    pub patterns: Vec<PatternStats>,
    /// Pattern of the hybrid opening row (`2/2/1` at five positions).
    pub opening: Pattern,
    /// Whether the opening pattern has the highest entropy of all patterns.
    pub opening_entropy_maximal: bool,
    pub opening_rank: usize,
    /// Whether the hybrid mean is at most the filter mean, when both ran.
    pub hybrid_not_worse_than_filter: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub tournaments: Vec<TournamentStats>,
    pub configs: Vec<ConfigReport>,
}

/// Runs every strategy on every configuration and tabulates opening patterns.
/// Exhaustive when the code space fits `budget`, otherwise `fallback` sampling.
pub fn compare_strategies(configs: &[GameConfig], strategies: &[Strategy], budget: u64, fallback: TournamentMode) -> Report {
    let mut tournaments = Vec::new();
    let mut reports = Vec::new();
    for config in configs {
        let mode = if config.code_count() <= budget { TournamentMode::Exhaustive } else { fallback };
        let rows: Vec<TournamentStats> =
            strategies.iter().filter_map(|s| tournament(*s, config, mode, budget.max(config.code_count())).ok()).collect();
        let mean_of = |name: &str| rows.iter().find(|r| r.strategy == name).map(|r| r.mean);
        let hybrid_not_worse_than_filter = match (mean_of(&Strategy::Hybrid(Comparator::Heuristic).name()), mean_of("filter")) {
            (Some(h), Some(f)) => Some(h <= f),
            _ => None,
        };
        let space = CodeSpace::new(config);
        let patterns = pattern_informativeness(config, &space);
        let opening = Pattern::of(&opening_guess(config));
        let opening_rank = patterns.iter().position(|p| p.pattern == opening).map_or(0, |i| i + 1);
        let top = patterns[0].entropy;
        let opening_entropy_maximal = patterns.iter().find(|p| p.pattern == opening).is_some_and(|p| p.entropy >= top);
        tournaments.extend(rows);
        reports.push(ConfigReport {
            config: config.clone(),
            patterns,
            opening,
            opening_entropy_maximal,
            opening_rank,
            hybrid_not_worse_than_filter,
        });
    }
    Report { tournaments, configs: reports }
}

impl Report {
    /// Aligned human-readable tables.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.tournaments.is_empty() {
            let _ = writeln!(s, "{:<14} {:>3} {:>3} {:>7} {:>7} {:>8} {:>5}  histogram", "strategy", "N", "M", "games", "solved", "mean", "max");
            for t in &self.tournaments {
                let _ = writeln!(
                    s,
                    "{:<14} {:>3} {:>3} {:>7} {:>7} {:>8.4} {:>5}  {}",
                    t.strategy,
                    t.positions,
                    t.colors,
                    t.games,
                    t.solved,
                    t.mean,
                    t.max,
                    format_histogram(&t.histogram)
                );
            }
            s.push('\n');
        }
        for c in &self.configs {
            let _ = writeln!(s, "opening patterns, N={} M={}", c.config.positions(), c.config.num_colors());
            let _ = writeln!(s, "{:<4} {:<11} {:<11} {:>12} {:>12} {:>8}", "rank", "pattern", "guess", "entropy", "E[remain]", "replies");
            for (i, p) in c.patterns.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{:<4} {:<11} {:<11} {:>12.8} {:>12.4} {:>8}",
                    i + 1,
                    p.pattern.to_string(),
                    c.config.format_code(&p.representative).replace(' ', ""),
                    p.entropy,
                    p.expected_remaining,
                    p.distribution.len()
                );
            }
            let _ = writeln!(
                s,
                "opening {} ranks {} of {} by entropy (maximal: {})",
                c.opening,
                c.opening_rank,
                c.patterns.len(),
                if c.opening_entropy_maximal { "yes" } else { "no" }
            );
            if let Some(b) = c.hybrid_not_worse_than_filter {
                let _ = writeln!(s, "hybrid mean <= filter mean: {}", if b { "yes" } else { "no" });
            }
            s.push('\n');
        }
        s
    }

    /// One record per strategy row and per pattern row, with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,name,positions,colors,games,solved,mean,max,entropy,expected_remaining,rank\n");
        for t in &self.tournaments {
            let _ = writeln!(s, "strategy,{},{},{},{},{},{:.6},{},,,", t.strategy, t.positions, t.colors, t.games, t.solved, t.mean, t.max);
        }
        for c in &self.configs {
            for (i, p) in c.patterns.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "pattern,{},{},{},,,,,{:.10},{:.6},{}",
                    p.pattern,
                    c.config.positions(),
                    c.config.num_colors(),
                    p.entropy,
                    p.expected_remaining,
                    i + 1
                );
            }
        }
        s
    }
}

fn format_histogram(h: &BTreeMap<usize, usize>) -> String {
    h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
}
