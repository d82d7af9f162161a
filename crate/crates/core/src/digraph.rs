//! The game arena: a directed graph on dense vertex indices, loops allowed.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Directed graph on vertices `0..n`, loops allowed, no parallel arcs.
///
/// Out- and in-neighbourhoods are stored as bitsets so that `N⁺(S)` and
/// `N⁻(S)` are word-wise unions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
    arc_count: usize,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Digraph(n={}, arcs={:?})",
            self.n,
            self.arcs().collect::<Vec<_>>()
        )
    }
}

impl Digraph {
    /// A graph with `n` vertices and no arcs.
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![VertexSet::empty(n); n],
            inn: vec![VertexSet::empty(n); n],
            arc_count: 0,
        }
    }

    /// Builds a graph from an arc list; duplicates are ignored.
    ///
    /// Panics on an endpoint `>= n`.
    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Self {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            d.add_arc(u, v);
        }
        d
    }

    /// Adds `u → v`, returning `false` if the arc was already present.
    pub fn add_arc(&mut self, u: usize, v: usize) -> bool {
        assert!(
            u < self.n && v < self.n,
            "arc ({u},{v}) outside 0..{}",
            self.n
        );
        if self.out[u].insert(v) {
            self.inn[v].insert(u);
            self.arc_count += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &VertexSet {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// `V` as a set.
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    /// `N⁺(S)`: every vertex with an in-arc from `S`.
    pub fn out_set(&self, s: &VertexSet) -> VertexSet {
        let mut acc = VertexSet::empty(self.n);
        for v in s {
            acc.union_with(&self.out[v]);
        }
        acc
    }

    /// `N⁻(S)`: every vertex with an out-arc into `S`.
    pub fn in_set(&self, s: &VertexSet) -> VertexSet {
        let mut acc = VertexSet::empty(self.n);
        for v in s {
            acc.union_with(&self.inn[v]);
        }
        acc
    }

    /// The reverse digraph; its adjacency matrix is the transpose.
    pub fn reverse(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
            arc_count: self.arc_count,
        }
    }

    /// Minimum out-degree `δ⁺`; zero for the empty graph.
    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn min_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    /// Induced subgraph on `keep`, relabelled densely in ascending order.
    /// Returns the subgraph and the new → old vertex map.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Digraph, Vec<usize>) {
        let old_of_new: Vec<usize> = keep.to_vec();
        let mut new_of_old = vec![None; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = Some(new);
        }
        let mut sub = Digraph::new(old_of_new.len());
        for (new_u, &old_u) in old_of_new.iter().enumerate() {
            for old_v in self.out[old_u].intersection(keep).iter() {
                sub.add_arc(new_u, new_of_old[old_v].expect("kept vertex"));
            }
        }
        (sub, old_of_new)
    }

    /// Weakly connected components, each listed once, ordered by their
    /// smallest vertex.
    pub fn weak_components(&self) -> Vec<VertexSet> {
        self.weak_components_within(&self.vertices())
    }

    /// Weak components of the subgraph induced by `alive`.
    pub fn weak_components_within(&self, alive: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut comps = Vec::new();
        for start in alive {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                let nbrs = self.out[u].union(&self.inn[u]).intersection(alive);
                for v in &nbrs {
                    if seen.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Strongly connected components in a topological order of the
    /// condensation (sources first).
    pub fn strong_components(&self) -> Vec<VertexSet> {
        // Iterative Tarjan; components pop out sinks first.
        const UNVISITED: usize = usize::MAX;
        let n = self.n;
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        let succ: Vec<Vec<usize>> = self.out.iter().map(|s| s.to_vec()).collect();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = succ[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = VertexSet::empty(n);
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.insert(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                }
            }
        }
        comps.reverse();
        comps
    }

    /// A topological order (smallest available vertex first), or
    /// [`Error::Cyclic`] carrying a directed cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        self.topological_order_within(&self.vertices())
    }

    /// Topological order of the subgraph induced by `alive`.
    pub fn topological_order_within(&self, alive: &VertexSet) -> Result<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for v in alive {
            indeg[v] = self.inn[v].intersection(alive).len();
        }
        let mut ready: BinaryHeap<Reverse<usize>> = alive
            .iter()
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(alive.len());
        let mut remaining = alive.clone();
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            remaining.remove(u);
            for v in self.out[u].intersection(alive).iter() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if remaining.is_empty() {
            return Ok(order);
        }
        // Every leftover vertex keeps an in-neighbour among the leftovers, so
        // walking backwards must revisit a vertex.
        let mut walk = Vec::new();
        let mut pos = vec![usize::MAX; self.n];
        let mut v = remaining.first().expect("nonempty");
        while pos[v] == usize::MAX {
            pos[v] = walk.len();
            walk.push(v);
            v = self.inn[v]
                .intersection(&remaining)
                .first()
                .expect("leftover vertex has a leftover in-neighbour");
        }
        let mut cycle: Vec<usize> = walk[pos[v]..].to_vec();
        cycle.reverse();
        let start = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, &x)| x)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(start);
        Err(Error::Cyclic { witness: cycle })
    }

    pub fn is_acyclic_within(&self, alive: &VertexSet) -> bool {
        self.topological_order_within(alive).is_ok()
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_within(&self.vertices())
    }

    /// A shortest directed cycle of the subgraph induced by `alive`, as a
    /// vertex sequence; ties go to the cycle through the smallest start vertex.
    pub fn shortest_cycle_within(&self, alive: &VertexSet) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for s in alive {
            if self.out[s].contains(s) {
                return Some(vec![s]);
            }
        }
        let mut parent = vec![usize::MAX; self.n];
        for s in alive {
            // BFS from s for the closest in-neighbour of s.
            let bound = best.as_ref().map_or(usize::MAX, |c| c.len());
            let mut dist = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut closing = None;
            'bfs: while let Some(u) = queue.pop_front() {
                if dist[u] + 1 >= bound {
                    break;
                }
                for v in self.out[u].intersection(alive).iter() {
                    if v == s {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if let Some(mut u) = closing {
                let mut cycle = vec![u];
                while u != s {
                    u = parent[u];
                    cycle.push(u);
                }
                cycle.reverse();
                if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                    best = Some(cycle);
                }
            }
        }
        best
    }

    /// Repeatedly deletes vertices of out-degree 0 or in-degree 0 until none
    /// remain. Returns the trimmed graph and the old → new index map.
    ///
    /// Such deletions never change the cop number.
    pub fn trim_degree_zero(&self) -> (Digraph, Vec<Option<usize>>) {
        let mut alive = self.vertices();
        let mut outd: Vec<usize> = (0..self.n).map(|v| self.out_degree(v)).collect();
        let mut ind: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..self.n)
            .filter(|&v| outd[v] == 0 || ind[v] == 0)
            .collect();
        while let Some(v) = queue.pop_front() {
            if !alive.remove(v) {
                continue;
            }
            for u in self.inn[v].intersection(&alive).iter() {
                outd[u] -= 1;
                if outd[u] == 0 {
                    queue.push_back(u);
                }
            }
            for u in self.out[v].intersection(&alive).iter() {
                ind[u] -= 1;
                if ind[u] == 0 {
                    queue.push_back(u);
                }
            }
        }
        let (sub, old_of_new) = self.induced_subgraph(&alive);
        let mut map = vec![None; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            map[old] = Some(new);
        }
        (sub, map)
    }

    /// Checks that `order` is a round ordering: with `p` the position of a
    /// vertex, its out-neighbours occupy exactly positions `p+1, …, p+d⁺`
    /// and its in-neighbours exactly `p-d⁻, …, p-1` (cyclically).
    pub fn verify_round_ordering(&self, order: &[usize]) -> Result<bool> {
        let n = self.n;
        if order.len() != n {
            return Err(Error::LengthMismatch { expected: n });
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::LengthMismatch { expected: n });
            }
            pos[v] = i;
        }
        for (i, &v) in order.iter().enumerate() {
            let d_out = self.out_degree(v);
            let expected_out = VertexSet::from_indices(n, (1..=d_out).map(|j| order[(i + j) % n]));
            if &expected_out != self.out_neighbors(v) {
                return Ok(false);
            }
            let d_in = self.in_degree(v);
            let expected_in =
                VertexSet::from_indices(n, (1..=d_in).map(|j| order[(i + n * 2 - j) % n]));
            if &expected_in != self.in_neighbors(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `max_{S ⊆ V} δ⁺(D[S])` with a witness `S`, by greedy peeling: delete a
    /// vertex of currently minimum out-degree (lowest index on ties) and keep
    /// the best minimum seen.
    pub fn peel_max_min_outdegree(&self) -> (usize, VertexSet) {
        let mut alive = self.vertices();
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.out_degree(v)).collect();
        let mut best = (0, VertexSet::empty(self.n));
        while !alive.is_empty() {
            let (v, d) = alive
                .iter()
                .map(|v| (v, deg[v]))
                .min_by_key(|&(v, d)| (d, v))
                .expect("nonempty");
            if d > best.0 || (best.1.is_empty() && d >= best.0) {
                best = (d, alive.clone());
            }
            alive.remove(v);
            for u in self.inn[v].intersection(&alive).iter() {
                deg[u] -= 1;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle4loops() -> Digraph {
        Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0), (1, 1), (2, 2)])
    }

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, v.iter().copied())
    }

    #[test]
    fn out_and_in_sets() {
        let d = cycle4loops();
        assert_eq!(d.out_set(&set(4, &[3])), set(4, &[0]));
        assert!(d.out_set(&VertexSet::empty(4)).is_empty());
        assert_eq!(d.out_set(&d.vertices()), d.vertices());
        assert_eq!(d.in_set(&set(4, &[0])), set(4, &[0, 3]));
        assert!(d.in_set(&VertexSet::empty(4)).is_empty());
    }

    #[test]
    fn reverse_flips_arcs() {
        let d = Digraph::from_arcs(1, [(0, 0)]);
        assert_eq!(d.reverse(), d);
        let r = cycle4loops().reverse();
        let arcs: Vec<_> = r.arcs().collect();
        assert_eq!(
            arcs,
            vec![(0, 0), (0, 3), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)]
        );
        assert_eq!(r.reverse(), cycle4loops());
    }

    #[test]
    fn components() {
        let two = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]);
        let weak = two.weak_components();
        assert_eq!(weak, vec![set(4, &[0, 1]), set(4, &[2, 3])]);
        assert_eq!(cycle4loops().strong_components().len(), 1);
        let path = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        let strong = path.strong_components();
        assert_eq!(strong.len(), 4);
        assert_eq!(strong[0], set(4, &[0]));
        assert_eq!(strong[3], set(4, &[3]));
        // reversed labels: still source first
        let back = Digraph::from_arcs(4, [(3, 2), (2, 1), (1, 0)]);
        assert_eq!(back.strong_components()[0], set(4, &[3]));
    }

    #[test]
    fn topological_orders() {
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]);
        assert_eq!(path.topological_order().unwrap(), vec![0, 1, 2]);
        let looped = Digraph::from_arcs(1, [(0, 0)]);
        assert_eq!(
            looped.topological_order(),
            Err(Error::Cyclic { witness: vec![0] })
        );
        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        match tri.topological_order() {
            Err(Error::Cyclic { witness }) => assert_eq!(witness, vec![0, 1, 2]),
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn trim() {
        let path = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.trim_degree_zero().0.n(), 0);
        let (t, map) = cycle4loops().trim_degree_zero();
        assert_eq!(t, cycle4loops());
        assert_eq!(map, vec![Some(0), Some(1), Some(2), Some(3)]);
        // tail into a cycle and a pendant sink
        let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 1), (2, 3), (4, 4)]);
        let (t, map) = d.trim_degree_zero();
        assert_eq!(t.n(), 3);
        assert_eq!(map, vec![None, Some(0), Some(1), None, Some(2)]);
    }

    #[test]
    fn round_orderings() {
        let cyc = Digraph::from_arcs(5, (0..5).map(|i| (i, (i + 1) % 5)));
        assert!(cyc.verify_round_ordering(&[0, 1, 2, 3, 4]).unwrap());
        assert!(!cycle4loops().verify_round_ordering(&[0, 1, 2, 3]).unwrap());
        let k3 = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]);
        for order in [[0, 1, 2], [2, 1, 0], [1, 0, 2]] {
            assert!(k3.verify_round_ordering(&order).unwrap());
        }
        assert_eq!(
            cyc.verify_round_ordering(&[0, 1, 2, 3]),
            Err(Error::LengthMismatch { expected: 5 })
        );
        assert_eq!(
            cyc.verify_round_ordering(&[0, 1, 2, 3, 3]),
            Err(Error::LengthMismatch { expected: 5 })
        );
    }

    #[test]
    fn peeling() {
        for k in 1..6 {
            let full = Digraph::from_arcs(k, (0..k).flat_map(|u| (0..k).map(move |v| (u, v))));
            assert_eq!(full.peel_max_min_outdegree().0, k);
        }
        assert_eq!(cycle4loops().peel_max_min_outdegree().0, 1);
        let (v, w) = Digraph::new(0).peel_max_min_outdegree();
        assert_eq!(v, 0);
        assert!(w.is_empty());
    }

    #[test]
    fn shortest_cycles() {
        let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 2)]);
        assert_eq!(d.shortest_cycle_within(&d.vertices()).unwrap().len(), 2);
        let acyclic = Digraph::from_arcs(3, [(0, 1), (1, 2)]);
        assert!(acyclic.shortest_cycle_within(&acyclic.vertices()).is_none());
    }
}
