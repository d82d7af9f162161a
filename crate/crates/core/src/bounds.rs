//! Lower and upper bounds on the cop number.

use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Bracket `lower <= cn(D) <= upper` with certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub lower: usize,
    /// Induced subgraph whose minimum out- or in-degree equals `lower`.
    pub lower_witness: VertexSet,
    pub upper: usize,
    /// A minimum feedback vertex set.
    pub upper_witness: VertexSet,
    /// Smallest `k` the arc count alone permits.
    pub arc_bound_k: usize,
}

/// `max_S max(δ⁺(D[S]), δ⁻(D[S]))` and a subset attaining it. Ties prefer the
/// out-degree witness.
pub fn lower_bound(d: &Digraph) -> (usize, VertexSet) {
    let forward = d.peel_max_min_outdegree();
    let backward = d.reverse().peel_max_min_outdegree();
    if backward.0 > forward.0 {
        backward
    } else {
        forward
    }
}

/// Lower bound from neighbourhood expansion: if every `p`-subset `S` has
/// `|N⁺(S)| >= p + k` then more than `k` cops are needed. Returns the best
/// such bound over `p = 1..=p_max`.
///
/// Enumerates every subset of each size, so the total count is checked
/// against `budget` first.
pub fn generalized_lower_bound(d: &Digraph, p_max: usize, budget: usize) -> Result<usize> {
    let n = d.n();
    if p_max == 0 || p_max > n {
        return Err(Error::InvalidParams(format!(
            "p_max must lie in 1..={n}, got {p_max}"
        )));
    }
    let mut total: u128 = 0;
    for p in 1..=p_max {
        total += binomial(n as u64, p as u64);
    }
    if total > budget as u128 {
        return Err(Error::Budget { budget });
    }
    let full = d.vertices();
    let mut best = 0usize;
    for p in 1..=p_max {
        let min_reach = full
            .subsets_of_size(p)
            .map(|s| d.out_set(&s).len())
            .min()
            .expect("p <= n");
        best = best.max((min_reach + 1).saturating_sub(p));
    }
    Ok(best)
}

fn binomial(n: u64, r: u64) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A minimum feedback vertex set: vertices with loops are forced, the rest is
/// found by iterative deepening on the solution size, branching over the
/// vertices of a shortest remaining cycle.
///
/// `budget` caps the number of branch nodes.
pub fn feedback_vertex_set(d: &Digraph, budget: usize) -> Result<VertexSet> {
    let n = d.n();
    let forced = VertexSet::from_indices(n, (0..n).filter(|&v| d.has_arc(v, v)));
    let alive = core_of(d, d.vertices().difference(&forced));
    let mut nodes = 0usize;
    let mut chosen = Vec::new();
    for size in 0..=alive.len() {
        if branch(d, &alive, size, &mut chosen, &mut nodes, budget)? {
            let mut fvs = forced;
            for v in chosen {
                fvs.insert(v);
            }
            return Ok(fvs);
        }
    }
    unreachable!("deleting every vertex leaves an acyclic graph")
}

/// Strips vertices that cannot lie on a cycle inside `alive`.
fn core_of(d: &Digraph, mut alive: VertexSet) -> VertexSet {
    loop {
        let dead: Vec<usize> = alive
            .iter()
            .filter(|&v| {
                d.out_neighbors(v).is_disjoint(&alive) || d.in_neighbors(v).is_disjoint(&alive)
            })
            .collect();
        if dead.is_empty() {
            return alive;
        }
        for v in dead {
            alive.remove(v);
        }
    }
}

fn branch(
    d: &Digraph,
    alive: &VertexSet,
    size: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget { budget });
    }
    let Some(mut cycle) = d.shortest_cycle_within(alive) else {
        return Ok(true);
    };
    if size == 0 {
        return Ok(false);
    }
    cycle.sort_unstable();
    for v in cycle {
        let mut rest = alive.clone();
        rest.remove(v);
        let rest = core_of(d, rest);
        chosen.push(v);
        if branch(d, &rest, size - 1, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Smallest `k >= 0` with `m <= nk + (n-k)(n+k-1)/2`: any digraph with `n`
/// vertices and `m` arcs needs at least this many cops.
pub fn arc_bound_min_cops(n: usize, m: usize) -> usize {
    (0..=n)
        .find(|&k| m as u128 <= max_arcs_for_cops(n, k))
        .unwrap_or(n)
}

/// `nk + (n-k)(n+k-1)/2`, the most arcs a k-copwin digraph on `n` vertices
/// can have (`k <= n`).
pub fn max_arcs_for_cops(n: usize, k: usize) -> u128 {
    let (n, k) = (n as u128, k as u128);
    n * k + (n - k) * (n + k).saturating_sub(1) / 2
}

/// Cop number of a round digraph, read off as its minimum out-degree after
/// checking the supplied round ordering.
pub fn round_cop_number(d: &Digraph, order: &[usize]) -> Result<usize> {
    if d.verify_round_ordering(order)? {
        Ok(d.min_out_degree())
    } else {
        Err(Error::NotRound)
    }
}

pub fn bound_report(d: &Digraph, budget: usize) -> Result<BoundReport> {
    let (lower, lower_witness) = lower_bound(d);
    let upper_witness = feedback_vertex_set(d, budget)?;
    Ok(BoundReport {
        lower,
        lower_witness,
        upper: upper_witness.len(),
        upper_witness,
        arc_bound_k: arc_bound_min_cops(d.n(), d.arc_count()),
    })
}
