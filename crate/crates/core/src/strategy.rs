use serde::Serialize;

use crate::vertex_set::VertexSet;

/// A cop play `W_1, …, W_l`: the set of occupied vertices at each step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Strategy {
    steps: Vec<VertexSet>,
}

impl Strategy {
    pub fn new(steps: Vec<VertexSet>) -> Self {
        Strategy { steps }
    }

    pub fn empty() -> Self {
        Strategy { steps: Vec::new() }
    }

    /// Convenience constructor from index lists.
    pub fn from_lists<I, S>(universe: usize, steps: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        Strategy {
            steps: steps
                .into_iter()
                .map(|s| VertexSet::from_indices(universe, s))
                .collect(),
        }
    }

    pub fn steps(&self) -> &[VertexSet] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<VertexSet> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `max |W_i|`, zero for the empty strategy.
    pub fn cops_used(&self) -> usize {
        self.steps.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn push(&mut self, step: VertexSet) {
        self.steps.push(step);
    }

    /// `W_l, …, W_1`. Wins on the reverse digraph exactly when the original
    /// wins on the digraph.
    pub fn reversed(&self) -> Strategy {
        Strategy {
            steps: self.steps.iter().rev().cloned().collect(),
        }
    }
}

impl FromIterator<VertexSet> for Strategy {
    fn from_iter<T: IntoIterator<Item = VertexSet>>(iter: T) -> Self {
        Strategy {
            steps: iter.into_iter().collect(),
        }
    }
}

/// Robber territories `R_1, R_2, …` produced by replaying a strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TerritoryTrace {
    pub territories: Vec<VertexSet>,
    pub captured: bool,
}

impl TerritoryTrace {
    /// Step at which the territory first became empty.
    pub fn capture_step(&self) -> Option<usize> {
        if self.captured {
            Some(self.territories.len())
        } else {
            None
        }
    }
}
