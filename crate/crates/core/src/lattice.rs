//! Ordered alternatives per decision point, with chronological backtracking.

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no decision point has an untried alternative")]
pub struct Exhausted;

#[derive(Clone, Debug)]
pub struct Level<H> {
    alternatives: Vec<H>,
    cursor: usize,
}

impl<H> Level<H> {
    pub fn alternatives(&self) -> &[H] {
        &self.alternatives
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn selected(&self) -> &H {
        &self.alternatives[self.cursor]
    }

    fn has_next(&self) -> bool {
        self.cursor + 1 < self.alternatives.len()
    }
}

#[derive(Clone, Debug)]
pub struct HypothesisLattice<H> {
    levels: Vec<Level<H>>,
}

impl<H> Default for HypothesisLattice<H> {
    fn default() -> Self {
        HypothesisLattice { levels: Vec::new() }
    }
}

impl<H> HypothesisLattice<H> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Opens a decision point with its alternatives in preference order.
    /// Returns `false`, leaving the lattice untouched, if there are none.
    pub fn push(&mut self, alternatives: Vec<H>) -> bool {
        if alternatives.is_empty() {
            return false;
        }
        self.levels.push(Level { alternatives, cursor: 0 });
        true
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level<H>] {
        &self.levels
    }

    pub fn top(&self) -> Option<&Level<H>> {
        self.levels.last()
    }

    /// The active branch: the selected hypothesis at every level, shallowest first.
    pub fn active(&self) -> impl Iterator<Item = &H> + '_ {
        self.levels.iter().map(Level::selected)
    }

    pub fn cursors(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.cursor).collect()
    }

    /// Moves to the next alternative at the deepest level that still has one,
    /// dropping every level below it. Returns the index of the advanced level.
    pub fn backtrack(&mut self) -> Result<usize, Exhausted> {
        while let Some(level) = self.levels.last_mut() {
            if level.has_next() {
                level.cursor += 1;
                return Ok(self.levels.len() - 1);
            }
            self.levels.pop();
        }
        Err(Exhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advances_deepest_level_first() {
        let mut l = HypothesisLattice::new();
        assert!(l.push(vec!["[1B][1Y] noR", "[1B] 1R noY", "[1Y] 1R noB"]));
        assert!(l.push(vec!["[- - Y - -]", "[- - - Y -]", "[- - - - R]"]));
        assert_eq!(l.backtrack(), Ok(1));
        assert_eq!(l.cursors(), vec![0, 1]);
        assert_eq!(*l.top().unwrap().selected(), "[- - - Y -]");
    }

    #[test]
    fn single_alternative_exhausts() {
        let mut l = HypothesisLattice::new();
        l.push(vec![()]);
        assert_eq!(l.backtrack(), Err(Exhausted));
        assert_eq!(l.depth(), 0);
    }

    #[test]
    fn empty_level_rejected() {
        let mut l: HypothesisLattice<u8> = HypothesisLattice::new();
        assert!(!l.push(vec![]));
        assert_eq!(l.depth(), 0);
    }

    #[test]
    fn two_by_two_visits_four_leaves_in_order() {
        let mut l = HypothesisLattice::new();
        l.push(vec!['a', 'b']);
        let mut leaves = Vec::new();
        loop {
            if l.depth() < 2 {
                l.push(vec!['x', 'y']);
            }
            leaves.push(l.active().copied().collect::<String>());
            if l.backtrack().is_err() {
                break;
            }
        }
        assert_eq!(leaves, ["ax", "ay", "bx", "by"]);
    }
}
