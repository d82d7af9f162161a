//! Exact decision of k-copwin, cop number and capture time.
//!
//! The game reduces to reachability in the transition digraph `Π_k` whose
//! nodes are robber territories: from territory `R` the cops may remove up to
//! `k` vertices from `N⁺(R)`. The search runs breadth-first over territories
//! reachable from the start, which gives shortest capture times directly.
//!
//! Two facts keep the search small:
//!
//! * Removing fewer than `min(k, |N⁺(R)|)` vertices only yields a superset
//!   territory, so successors use cop sets of exactly that size.
//! * A territory is never harder than any superset of it (if `R ⊆ R'` then
//!   every successor of `R'` contains a successor of `R`). A candidate that
//!   contains an already visited territory is dropped; the visited set is
//!   kept as an antichain of minimal territories.

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::antichain::MinimalAntichain;
use crate::bounds;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::strategy::{Strategy, TerritoryTrace};
use crate::vertex_set::VertexSet;

/// Resource limits for the exact searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of territories retained by one search.
    pub node_budget: usize,
    /// Worker threads used for frontier expansion.
    pub workers: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: 10_000_000,
            workers: 1,
        }
    }
}

impl SolverConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, node_budget: usize) -> Self {
        self.node_budget = node_budget;
        self
    }
}

/// Result of a k-copwin decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KWinCertificate {
    pub k: usize,
    pub winning: bool,
    /// Shortest winning strategy (lexicographically smallest cop set at each
    /// step among shortest continuations).
    pub strategy: Option<Strategy>,
    pub capture_time: Option<usize>,
    /// Smallest reachable territory from which capture is impossible.
    pub losing_core: Option<VertexSet>,
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub cop_number: usize,
    pub capture_time: usize,
    pub strategy: Strategy,
    pub states_explored: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Verdict of the materialised `Π_k` oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveVerdict {
    pub winning: bool,
    pub distance: Option<usize>,
}

/// Replays `strategy`: `R_1 = V \ W_1`, `R_{i+1} = N⁺(R_i) \ W_{i+1}`,
/// stopping at the first empty territory.
pub fn simulate(d: &Digraph, strategy: &Strategy) -> TerritoryTrace {
    let mut territories = Vec::with_capacity(strategy.len());
    let mut current: Option<VertexSet> = None;
    for w in strategy.steps() {
        let next = match &current {
            None => d.vertices().difference(w),
            Some(r) => d.out_set(r).difference(w),
        };
        let done = next.is_empty();
        territories.push(next.clone());
        current = Some(next);
        if done {
            break;
        }
    }
    let captured = match territories.last() {
        Some(r) => r.is_empty(),
        None => d.n() == 0,
    };
    TerritoryTrace {
        territories,
        captured,
    }
}

#[derive(Clone, Debug)]
enum Origin {
    /// Before the first move: `R_1 = V \ W_1`.
    Start,
    Territory(VertexSet),
}

struct SearchOutcome {
    distance: Option<usize>,
    explored: usize,
    visited: MinimalAntichain,
}

struct Search<'a> {
    graph: &'a Digraph,
    k: usize,
    config: SolverConfig,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Digraph, k: usize, config: SolverConfig) -> Self {
        let pool = if config.workers > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.workers)
                .build()
                .ok()
        } else {
            None
        };
        Search {
            graph,
            k,
            config,
            pool,
        }
    }

    /// Successor territories of `r` under cop sets of size `min(k, |N⁺(r)|)`.
    fn successors(&self, r: &VertexSet) -> Vec<VertexSet> {
        let reach = self.graph.out_set(r);
        self.successors_of_reach(&reach)
    }

    fn successors_of_reach(&self, reach: &VertexSet) -> Vec<VertexSet> {
        if reach.len() <= self.k {
            return vec![VertexSet::empty(self.graph.n())];
        }
        reach
            .subsets_of_size(self.k)
            .map(|w| reach.difference(&w))
            .collect()
    }

    fn expand(&self, frontier: &[VertexSet]) -> Vec<VertexSet> {
        match &self.pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .flat_map_iter(|r| self.successors(r))
                    .collect()
            }),
            None => frontier.iter().flat_map(|r| self.successors(r)).collect(),
        }
    }

    /// Breadth-first search for the empty territory, at most `limit` steps.
    fn run(&self, origin: &Origin, limit: Option<usize>) -> Result<SearchOutcome> {
        let n = self.graph.n();
        let mut visited = MinimalAntichain::new();
        let mut explored = 0usize;
        let first: Vec<VertexSet> = match origin {
            Origin::Start if n == 0 => {
                return Ok(SearchOutcome {
                    distance: Some(0),
                    explored,
                    visited,
                })
            }
            Origin::Start => {
                let full = self.graph.vertices();
                if self.k >= n {
                    vec![VertexSet::empty(n)]
                } else {
                    full.subsets_of_size(self.k)
                        .map(|w| full.difference(&w))
                        .collect()
                }
            }
            Origin::Territory(r) if r.is_empty() => {
                return Ok(SearchOutcome {
                    distance: Some(0),
                    explored,
                    visited,
                })
            }
            Origin::Territory(r) => {
                visited.insert(r.clone());
                explored += 1;
                if limit == Some(0) {
                    return Ok(SearchOutcome {
                        distance: None,
                        explored,
                        visited,
                    });
                }
                self.successors(r)
            }
        };

        let mut depth = 1usize;
        let mut candidates = first;
        loop {
            if candidates.iter().any(VertexSet::is_empty) {
                return Ok(SearchOutcome {
                    distance: Some(depth),
                    explored,
                    visited,
                });
            }
            candidates.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            candidates.dedup();
            let mut frontier = Vec::new();
            for c in candidates {
                if visited.insert(c.clone()) {
                    explored += 1;
                    if explored > self.config.node_budget {
                        return Err(Error::Budget {
                            budget: self.config.node_budget,
                        });
                    }
                    frontier.push(c);
                }
            }
            if frontier.is_empty() || limit.is_some_and(|l| depth >= l) {
                return Ok(SearchOutcome {
                    distance: None,
                    explored,
                    visited,
                });
            }
            candidates = self.expand(&frontier);
            depth += 1;
        }
    }
}

/// Memoised "can the cops clear `R` within `t` steps" queries used to pick
/// the lexicographically first move along a shortest strategy.
struct DistanceMemo<'s, 'a> {
    search: &'s Search<'a>,
    exact: HashMap<VertexSet, usize>,
    exceeds: HashMap<VertexSet, usize>,
}

impl<'s, 'a> DistanceMemo<'s, 'a> {
    fn new(search: &'s Search<'a>) -> Self {
        DistanceMemo {
            search,
            exact: HashMap::new(),
            exceeds: HashMap::new(),
        }
    }

    fn within(&mut self, r: &VertexSet, steps: usize) -> Result<bool> {
        if r.is_empty() {
            return Ok(true);
        }
        if let Some(&d) = self.exact.get(r) {
            return Ok(d <= steps);
        }
        if self.exceeds.get(r).is_some_and(|&bound| steps <= bound) {
            return Ok(false);
        }
        let outcome = self
            .search
            .run(&Origin::Territory(r.clone()), Some(steps))?;
        match outcome.distance {
            Some(d) => {
                self.exact.insert(r.clone(), d);
                Ok(true)
            }
            None => {
                let bound = self.exceeds.entry(r.clone()).or_insert(0);
                *bound = (*bound).max(steps);
                Ok(false)
            }
        }
    }
}

fn extract_strategy(search: &Search<'_>, total: usize) -> Result<Strategy> {
    let d = search.graph;
    let n = d.n();
    let k = search.k;
    let mut memo = DistanceMemo::new(search);
    let mut strategy = Strategy::empty();
    if n == 0 {
        return Ok(strategy);
    }
    let full = d.vertices();
    let mut current = None;
    let first_size = k.min(n);
    for w in full.subsets_of_size(first_size) {
        let r = full.difference(&w);
        if memo.within(&r, total - 1)? {
            strategy.push(w);
            current = Some(r);
            break;
        }
    }
    let mut current = current.expect("a shortest first move exists");
    let mut remaining = total - 1;
    while !current.is_empty() {
        let reach = d.out_set(&current);
        if reach.len() <= k {
            strategy.push(reach);
            current = VertexSet::empty(n);
            remaining = remaining.saturating_sub(1);
            continue;
        }
        let mut chosen = None;
        for w in reach.subsets_of_size(k) {
            let next = reach.difference(&w);
            if memo.within(&next, remaining - 1)? {
                chosen = Some((w, next));
                break;
            }
        }
        let (w, next) = chosen.expect("a shortest continuation exists");
        strategy.push(w);
        current = next;
        remaining -= 1;
    }
    debug_assert_eq!(strategy.len(), total);
    Ok(strategy)
}

/// Decides whether `k` cops can always capture the robber on `d`.
pub fn is_k_copwin(d: &Digraph, k: usize, config: &SolverConfig) -> Result<KWinCertificate> {
    let search = Search::new(d, k, *config);
    let outcome = search.run(&Origin::Start, None)?;
    match outcome.distance {
        Some(total) => {
            let strategy = extract_strategy(&search, total)?;
            Ok(KWinCertificate {
                k,
                winning: true,
                strategy: Some(strategy),
                capture_time: Some(total),
                losing_core: None,
                states_explored: outcome.explored,
            })
        }
        None => {
            let core = outcome
                .visited
                .sorted_members()
                .first()
                .map(|s| (*s).clone());
            Ok(KWinCertificate {
                k,
                winning: false,
                strategy: None,
                capture_time: None,
                losing_core: core,
                states_explored: outcome.explored,
            })
        }
    }
}

/// Length of a shortest winning strategy with at most `k` cops.
pub fn capture_time(d: &Digraph, k: usize, config: &SolverConfig) -> Result<usize> {
    let search = Search::new(d, k, *config);
    search
        .run(&Origin::Start, None)?
        .distance
        .ok_or(Error::NotWinnable { k })
}

/// Exact cop number, capture time with that many cops, and a shortest
/// winning strategy, searched upward from the degree lower bound.
pub fn cop_number(d: &Digraph, config: &SolverConfig) -> Result<SolveReport> {
    let started = Instant::now();
    let (lower, _) = bounds::lower_bound(d);
    let upper = match bounds::feedback_vertex_set(d, config.node_budget) {
        Ok(fvs) => fvs.len(),
        Err(Error::Budget { .. }) => d.n(),
        Err(e) => return Err(e),
    };
    let mut explored = 0;
    for k in lower..=upper.max(lower) {
        let cert = is_k_copwin(d, k, config)?;
        explored += cert.states_explored;
        if cert.winning {
            return Ok(SolveReport {
                cop_number: k,
                capture_time: cert.capture_time.expect("winning certificate"),
                strategy: cert.strategy.expect("winning certificate"),
                states_explored: explored,
                wall_time: started.elapsed(),
            });
        }
    }
    unreachable!("a feedback vertex set always wins")
}

/// Cop number alone, as the maximum over weak components.
pub fn cop_number_by_components(d: &Digraph, config: &SolverConfig) -> Result<usize> {
    let mut best = 0;
    for comp in d.weak_components() {
        let (sub, _) = d.induced_subgraph(&comp);
        best = best.max(cop_number(&sub, config)?.cop_number);
    }
    Ok(best)
}

/// Cross-check oracle: materialises every territory of `Π_k` and all of its
/// arcs, then runs a plain BFS from the start node to `∅`.
///
/// Territories are bitmasks; the start is an extra node with arcs to every
/// `V \ W`, `|W| <= k`.
pub fn naive_pi_k(d: &Digraph, k: usize, oracle_cap: usize) -> Result<NaiveVerdict> {
    let n = d.n();
    let cap = oracle_cap.min(24);
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(NaiveVerdict {
            winning: true,
            distance: Some(0),
        });
    }
    let states = 1usize << n;
    let full = (states - 1) as u32;
    let single: Vec<u32> = (0..n)
        .map(|v| d.out_neighbors(v).iter().fold(0u32, |m, x| m | (1 << x)))
        .collect();
    let mut reach = vec![0u32; states];
    for mask in 1..states {
        let low = mask.trailing_zeros() as usize;
        reach[mask] = reach[mask & (mask - 1)] | single[low];
    }

    // CSR adjacency; node `states` is the start.
    let bounded_removals = |from: u32| -> Vec<u32> {
        let mut out = Vec::new();
        let mut sub = from;
        loop {
            if sub.count_ones() as usize <= k {
                out.push(from & !sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & from;
        }
        out
    };
    let mut offsets = Vec::with_capacity(states + 2);
    let mut targets: Vec<u32> = Vec::new();
    offsets.push(0usize);
    for &r in &reach {
        targets.extend(bounded_removals(r));
        offsets.push(targets.len());
    }
    targets.extend(bounded_removals(full));
    offsets.push(targets.len());

    let start = states;
    let mut dist = vec![usize::MAX; states + 1];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == 0 && u != start {
            break;
        }
        for &t in &targets[offsets[u]..offsets[u + 1]] {
            let t = t as usize;
            if dist[t] == usize::MAX {
                dist[t] = dist[u] + 1;
                queue.push_back(t);
            }
        }
    }
    let distance = (dist[0] != usize::MAX).then_some(dist[0]);
    Ok(NaiveVerdict {
        winning: distance.is_some(),
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4loops() -> Digraph {
        Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0), (1, 1), (2, 2)])
    }

    fn triangle_loops() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 0), (1, 1), (2, 2)])
    }

    fn path(n: usize) -> Digraph {
        Digraph::from_arcs(n, (1..n).map(|i| (i - 1, i)))
    }

    fn complete_with_loops(k: usize) -> Digraph {
        Digraph::from_arcs(k, (0..k).flat_map(|u| (0..k).map(move |v| (u, v))))
    }

    fn sets(n: usize, v: &[&[usize]]) -> Vec<VertexSet> {
        v.iter()
            .map(|s| VertexSet::from_indices(n, s.iter().copied()))
            .collect()
    }

    #[test]
    fn table_one_trace() {
        let s = Strategy::from_lists(4, [[2], [0], [1], [2], [0], [1], [2], [0]]);
        let trace = simulate(&cycle4loops(), &s);
        let expected = sets(
            4,
            &[&[0, 1, 3], &[1, 2], &[2, 3], &[0, 3], &[1], &[2], &[3], &[]],
        );
        assert_eq!(trace.territories, expected);
        assert!(trace.captured);
    }

    #[test]
    fn simulate_trivial_strategies() {
        let d = cycle4loops();
        let all = Strategy::new(vec![d.vertices()]);
        let t = simulate(&d, &all);
        assert_eq!(t.territories.len(), 1);
        assert!(t.captured);

        let s = Strategy::from_lists(3, [vec![0, 1], vec![0, 2]]);
        let t = simulate(&triangle_loops(), &s);
        assert_eq!(t.territories, sets(3, &[&[2], &[]]));
        assert!(t.captured);
    }

    #[test]
    fn cycle4loops_values() {
        let cfg = SolverConfig::default();
        let d = cycle4loops();
        let cert = is_k_copwin(&d, 1, &cfg).unwrap();
        assert!(cert.winning);
        assert_eq!(cert.capture_time, Some(8));
        let report = cop_number(&d, &cfg).unwrap();
        assert_eq!((report.cop_number, report.capture_time), (1, 8));
        assert_eq!(
            report.strategy,
            Strategy::from_lists(4, [[2], [0], [1], [2], [0], [1], [2], [0]])
        );
        assert_eq!(capture_time(&d, 4, &cfg).unwrap(), 1);
        assert_eq!(capture_time(&d, 0, &cfg), Err(Error::NotWinnable { k: 0 }));
        assert_eq!(
            naive_pi_k(&d, 1, 12).unwrap(),
            NaiveVerdict {
                winning: true,
                distance: Some(8)
            }
        );
    }

    #[test]
    fn paths_and_degenerate_graphs() {
        let cfg = SolverConfig::default();
        for n in 1..=6 {
            let r = cop_number(&path(n), &cfg).unwrap();
            assert_eq!((r.cop_number, r.capture_time), (0, n + 1));
        }
        let r = cop_number(&Digraph::new(0), &cfg).unwrap();
        assert_eq!((r.cop_number, r.capture_time), (0, 0));
        assert!(r.strategy.is_empty());
        let r = cop_number(&Digraph::new(3), &cfg).unwrap();
        assert_eq!((r.cop_number, r.capture_time), (0, 2));
        assert_eq!(
            naive_pi_k(&Digraph::new(0), 0, 12).unwrap(),
            NaiveVerdict {
                winning: true,
                distance: Some(0)
            }
        );
    }

    #[test]
    fn losing_instances_carry_a_core() {
        let cfg = SolverConfig::default();
        let cert = is_k_copwin(&complete_with_loops(3), 2, &cfg).unwrap();
        assert!(!cert.winning);
        assert!(cert.strategy.is_none());
        assert!(!cert.losing_core.unwrap().is_empty());
        assert!(!naive_pi_k(&complete_with_loops(3), 2, 12).unwrap().winning);
    }

    #[test]
    fn triangle_capture_time() {
        let cfg = SolverConfig::default();
        assert_eq!(capture_time(&triangle_loops(), 2, &cfg).unwrap(), 2);
        assert_eq!(
            naive_pi_k(&triangle_loops(), 2, 12).unwrap().distance,
            Some(2)
        );
    }

    #[test]
    fn oracle_cap() {
        assert_eq!(
            naive_pi_k(&Digraph::new(13), 0, 12),
            Err(Error::TooLarge { n: 13, cap: 12 })
        );
    }

    #[test]
    fn budget_is_reported() {
        let cfg = SolverConfig::default().with_budget(2);
        assert_eq!(
            is_k_copwin(&complete_with_loops(4), 1, &cfg),
            Err(Error::Budget { budget: 2 })
        );
    }
}
