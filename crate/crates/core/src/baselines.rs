//! Brute-force ground truth and baseline guess policies.
//!
//! Everything here scans the full code space without using model structure,
//! so it can serve as an independent check on the reasoner.

use rayon::prelude::*;

use crate::analysis::{pattern_representative, Pattern};
use crate::game::{consistent, enumerate_codes, score, Code, GameConfig, HistoryEntry};
use crate::lars::{Outcome, PlaceModel};
use crate::reasoner::{forced_facts, Propagation};

/// Number of codes agreeing with every row.
pub fn count_consistent(history: &[HistoryEntry], config: &GameConfig) -> usize {
    enumerate_codes(config).filter(|c| consistent(c, history)).count()
}

/// Forced cells and exclusions of `pm` under `history`, by scanning all `M^N`
/// codes. Same contract as [`crate::reasoner::propagate`].
pub fn forced_facts_bruteforce(pm: &PlaceModel, history: &[HistoryEntry], config: &GameConfig) -> Outcome<Propagation> {
    let survivors: Vec<Code> = enumerate_codes(config).filter(|c| pm.admits(c) && consistent(c, history)).collect();
    forced_facts(pm, survivors, config)
}

/// Lexicographically first consistent code.
pub fn filter_strategy(history: &[HistoryEntry], config: &GameConfig) -> Option<Code> {
    enumerate_codes(config).find(|c| consistent(c, history))
}

pub(crate) fn filter_among(candidates: &[Code]) -> Option<&Code> {
    candidates.first()
}

/// Shannon entropy (bits) of a partition given by its block sizes.
/// Sizes are summed in sorted order so equal partitions give equal floats.
pub fn partition_entropy(sizes: &[usize]) -> f64 {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mut sorted: Vec<usize> = sizes.iter().copied().filter(|&s| s > 0).collect();
    sorted.sort_unstable();
    let n = total as f64;
    let weighted: f64 = sorted.iter().map(|&s| s as f64 * (s as f64).log2()).sum();
    n.log2() - weighted / n
}

/// Pin-outcome block sizes of `candidates` under `guess`, indexed by
/// [`crate::game::Feedback::index`].
pub fn feedback_partition(guess: &Code, candidates: &[Code], config: &GameConfig) -> Vec<usize> {
    let n = config.positions();
    let mut sizes = vec![0usize; (n + 1) * (n + 1)];
    for c in candidates {
        sizes[score(guess, c).index(n)] += 1;
    }
    sizes
}

/// Entropy of the pin partition `guess` induces on `candidates`.
pub fn guess_entropy(guess: &Code, candidates: &[Code], config: &GameConfig) -> f64 {
    partition_entropy(&feedback_partition(guess, candidates, config))
}

/// The code maximizing partition entropy over the consistent set, searching
/// every code. Ties prefer consistent codes, then lexicographic order.
pub fn entropy_greedy_strategy(history: &[HistoryEntry], config: &GameConfig) -> Option<Code> {
    let all: Vec<Code> = enumerate_codes(config).collect();
    let candidates: Vec<Code> = all.iter().filter(|c| consistent(c, history)).cloned().collect();
    if candidates.is_empty() {
        return None;
    }
    Some(entropy_greedy_among(config, &all, &candidates))
}

pub(crate) fn entropy_greedy_among(config: &GameConfig, all: &[Code], candidates: &[Code]) -> Code {
    if candidates.len() == 1 {
        return candidates[0].clone();
    }
    let best = all
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let h = guess_entropy(g, candidates, config);
            let is_candidate = candidates.binary_search(g).is_ok();
            (h, is_candidate, i)
        })
        .reduce_with(|a, b| if better(a, b) { a } else { b })
        .expect("code space is not empty");
    all[best.2].clone()
}

fn better(a: (f64, bool, usize), b: (f64, bool, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => (a.1, std::cmp::Reverse(a.2)) > (b.1, std::cmp::Reverse(b.2)),
    }
}

/// Entropy-greedy first guess. With no history, entropy depends only on the
/// guess's color pattern, and the lexicographically first code of a pattern is
/// its canonical representative, so only one code per pattern is scored.
pub fn entropy_opening(config: &GameConfig) -> Code {
    let all: Vec<Code> = enumerate_codes(config).collect();
    let mut best: Option<(f64, Code)> = None;
    for p in Pattern::all(config) {
        let g = pattern_representative(&p, config);
        let h = guess_entropy(&g, &all, config);
        let replace = match &best {
            None => true,
            Some((bh, bg)) => h > *bh || (h == *bh && g < *bg),
        };
        if replace {
            best = Some((h, g));
        }
    }
    best.expect("at least one pattern").1
}
