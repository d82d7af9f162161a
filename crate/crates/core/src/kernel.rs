//! Kernelization parameterized by the w-separator size.
//!
//! A greedy separator `X` leaves components of at most `w` vertices. Components
//! that look the same from `X` are interchangeable, so only `kw + 1` of each
//! kind are kept.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use itertools::Itertools;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::solver::{is_k_copwin, SolverConfig};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    /// `w + 1` weakly connected vertices found by the breadth-first phase.
    Connected,
    /// A directed cycle inside a small component.
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub kind: GroupKind,
    pub vertices: VertexSet,
}

/// Disjoint groups whose union is the separator. Any valid w-separator meets
/// every group, which gives the `w + 1` approximation factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupLedger {
    pub groups: Vec<Group>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatorResult {
    pub x: VertexSet,
    pub w: usize,
    /// Weak components of `D − X`, ordered by smallest vertex.
    pub components: Vec<VertexSet>,
}

/// Greedy separator: `D − X` is acyclic with weak components of at most `w`
/// vertices.
///
/// Breadth-first search over the underlying undirected graph, starting from
/// the lowest unsettled vertex and scanning neighbours in ascending order,
/// deletes the first `w + 1` vertices it reaches. Then depth-first search from
/// the lowest vertex of each small component deletes directed cycles until the
/// component is acyclic.
pub fn approx_w_separator(d: &Digraph, w: usize) -> Result<(SeparatorResult, GroupLedger)> {
    if w == 0 {
        return Err(Error::InvalidParams("w must be at least 1".into()));
    }
    let n = d.n();
    let mut alive = d.vertices();
    let mut settled = VertexSet::empty(n);
    let mut ledger = GroupLedger::default();

    while let Some(start) = alive.difference(&settled).first() {
        let mut seen = VertexSet::singleton(n, start);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        'bfs: while let Some(u) = queue.pop_front() {
            let nbrs = d
                .out_neighbors(u)
                .union(d.in_neighbors(u))
                .intersection(&alive);
            for v in &nbrs {
                if order.len() > w {
                    break 'bfs;
                }
                if seen.insert(v) {
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        if order.len() > w {
            let group = VertexSet::from_indices(n, order.into_iter().take(w + 1));
            alive.difference_with(&group);
            ledger.groups.push(Group {
                kind: GroupKind::Connected,
                vertices: group,
            });
        } else {
            settled.union_with(&seen);
        }
    }

    for comp in d.weak_components_within(&alive) {
        let mut rest = comp;
        while let Some(cycle) = dfs_cycle(d, &rest) {
            let group = VertexSet::from_indices(n, cycle);
            rest.difference_with(&group);
            alive.difference_with(&group);
            ledger.groups.push(Group {
                kind: GroupKind::Cycle,
                vertices: group,
            });
        }
    }

    let x = d.vertices().difference(&alive);
    let components = d.weak_components_within(&alive);
    Ok((SeparatorResult { x, w, components }, ledger))
}

/// First directed cycle met by a depth-first search inside `alive`, roots and
/// successors taken in ascending order.
fn dfs_cycle(d: &Digraph, alive: &VertexSet) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; d.n()];
    for root in alive {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        mark[root] = Mark::Open;
        stack.push((root, d.out_neighbors(root).intersection(alive).to_vec(), 0));
        while let Some((u, succ, pos)) = stack.last_mut() {
            if *pos == succ.len() {
                mark[*u] = Mark::Done;
                stack.pop();
                continue;
            }
            let v = succ[*pos];
            *pos += 1;
            match mark[v] {
                Mark::Open => {
                    let at = stack
                        .iter()
                        .position(|(x, _, _)| *x == v)
                        .expect("open on stack");
                    return Some(stack[at..].iter().map(|(x, _, _)| *x).collect());
                }
                Mark::New => {
                    mark[v] = Mark::Open;
                    let next = d.out_neighbors(v).intersection(alive).to_vec();
                    stack.push((v, next, 0));
                }
                Mark::Done => {}
            }
        }
    }
    None
}

/// Components of `D − X` that are isomorphic through a bijection preserving
/// each vertex's in- and out-neighbours in `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    /// Canonical form shared by all members.
    pub signature: Vec<usize>,
    /// Indices into the component list, ascending.
    pub members: Vec<usize>,
}

/// Lexicographically least encoding over all vertex orderings of the
/// component: its size, then per vertex the sorted out- and in-neighbours in
/// `X`, then the adjacency matrix.
fn signature(d: &Digraph, x: &VertexSet, comp: &VertexSet) -> Vec<usize> {
    let verts = comp.to_vec();
    let s = verts.len();
    let profile = |v: usize| {
        let mut p = d.out_neighbors(v).intersection(x).to_vec();
        p.push(usize::MAX);
        p.extend(d.in_neighbors(v).intersection(x).iter());
        p.push(usize::MAX);
        p
    };
    verts
        .iter()
        .copied()
        .permutations(s)
        .map(|perm| {
            let mut code = vec![s];
            for &v in &perm {
                code.extend(profile(v));
            }
            for &u in &perm {
                for &v in &perm {
                    code.push(d.has_arc(u, v) as usize);
                }
            }
            code
        })
        .min()
        .unwrap_or_else(|| vec![0])
}

/// Partitions `components` into equivalence classes, ordered by their first
/// member.
pub fn component_classes(
    d: &Digraph,
    x: &VertexSet,
    components: &[VertexSet],
) -> Vec<ComponentClass> {
    let mut by_sig: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, comp) in components.iter().enumerate() {
        by_sig.entry(signature(d, x, comp)).or_default().push(i);
    }
    let mut classes: Vec<ComponentClass> = by_sig
        .into_iter()
        .map(|(signature, members)| ComponentClass { signature, members })
        .collect();
    classes.sort_by_key(|c| c.members[0]);
    classes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum KernelOutcome {
    /// `|X| <= k`. `X` is a feedback vertex set, so `k` cops win.
    YesShortcut {
        x: VertexSet,
    },
    Kernel(Kernel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kernel {
    #[serde(skip)]
    pub graph: Digraph,
    /// Original label of each kernel vertex.
    pub vertex_map: Vec<usize>,
    pub k: usize,
    pub kept_per_class: usize,
    pub separator: VertexSet,
    pub class_sizes: Vec<usize>,
    pub ledger: GroupLedger,
}

/// Reduces `(D, k)` to an equivalent instance: `X` plus the lowest-indexed
/// `kw + 1` components of each class.
pub fn kernelize(d: &Digraph, k: usize, w: usize) -> Result<KernelOutcome> {
    let (sep, ledger) = approx_w_separator(d, w)?;
    if sep.x.len() <= k {
        return Ok(KernelOutcome::YesShortcut { x: sep.x });
    }
    let kept_per_class = k * w + 1;
    let classes = component_classes(d, &sep.x, &sep.components);
    let mut keep = sep.x.clone();
    for class in &classes {
        for &i in class.members.iter().take(kept_per_class) {
            keep.union_with(&sep.components[i]);
        }
    }
    let (graph, vertex_map) = d.induced_subgraph(&keep);
    Ok(KernelOutcome::Kernel(Kernel {
        graph,
        vertex_map,
        k,
        kept_per_class,
        separator: sep.x,
        class_sizes: classes.iter().map(|c| c.members.len()).collect(),
        ledger,
    }))
}

/// Decides `cn(D) <= k` through the kernel.
pub fn solve_via_kernel(d: &Digraph, k: usize, w: usize, config: &SolverConfig) -> Result<bool> {
    match kernelize(d, k, w)? {
        KernelOutcome::YesShortcut { .. } => Ok(true),
        KernelOutcome::Kernel(kernel) => Ok(is_k_copwin(&kernel.graph, k, config)?.winning),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_separator(d: &Digraph, w: usize) -> (SeparatorResult, GroupLedger) {
        let (sep, ledger) = approx_w_separator(d, w).unwrap();
        let rest = d.vertices().difference(&sep.x);
        assert!(d.is_acyclic_within(&rest));
        assert!(sep.components.iter().all(|c| c.len() <= w));
        let mut union = VertexSet::empty(d.n());
        for g in &ledger.groups {
            assert!(g.vertices.is_disjoint(&union));
            union.union_with(&g.vertices);
            match g.kind {
                GroupKind::Connected => {
                    assert_eq!(g.vertices.len(), w + 1);
                    assert_eq!(d.weak_components_within(&g.vertices).len(), 1);
                }
                GroupKind::Cycle => {
                    assert!(g.vertices.len() <= w);
                    assert!(!d.is_acyclic_within(&g.vertices));
                }
            }
        }
        assert_eq!(union, sep.x);
        (sep, ledger)
    }

    #[test]
    fn separator_examples() {
        let path = Digraph::from_arcs(6, [(0, 1), (2, 3), (4, 5)]);
        assert!(check_separator(&path, 2).0.x.is_empty());
        let cyc = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let (sep, ledger) = check_separator(&cyc, 3);
        assert_eq!(sep.x.len(), 3);
        assert_eq!(ledger.groups[0].kind, GroupKind::Cycle);
        let long = Digraph::from_arcs(7, (0..7).map(|i| (i, (i + 1) % 7)));
        let (sep, _) = check_separator(&long, 2);
        assert_eq!(sep.x.len(), 6);
        assert!(approx_w_separator(&long, 0).is_err());
    }

    fn hub_with_leaves(leaves: usize) -> Digraph {
        let n = 3 + leaves;
        let mut arcs = vec![(0, 1), (1, 2), (2, 0)];
        arcs.extend((3..n).map(|v| (0, v)));
        Digraph::from_arcs(n, arcs)
    }

    #[test]
    fn classes() {
        let d = hub_with_leaves(10);
        let x = VertexSet::from_indices(13, 0..3);
        let comps = d.weak_components_within(&x.complement());
        let classes = component_classes(&d, &x, &comps);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members.len(), 10);

        let d = Digraph::from_arcs(3, [(0, 1), (2, 1)]);
        let x = VertexSet::singleton(3, 1);
        let d2 = Digraph::from_arcs(3, [(0, 1), (1, 2)]);
        let comps = d.weak_components_within(&x.complement());
        assert_eq!(component_classes(&d, &x, &comps).len(), 1);
        assert_eq!(component_classes(&d2, &x, &comps).len(), 2);
    }

    #[test]
    fn replicated_components_are_trimmed() {
        let d = hub_with_leaves(10);
        let config = SolverConfig::default();
        match kernelize(&d, 1, 1).unwrap() {
            KernelOutcome::Kernel(kernel) => {
                assert_eq!(kernel.kept_per_class, 2);
                // X = {0, 1}; vertex 2 is alone in its class, the leaves share one.
                assert_eq!(kernel.separator.to_vec(), vec![0, 1]);
                assert_eq!(kernel.class_sizes, vec![1, 10]);
                assert_eq!(kernel.graph.n(), 2 + 1 + 2);
            }
            other => panic!("expected a kernel, got {other:?}"),
        }
        let direct = is_k_copwin(&d, 1, &config).unwrap().winning;
        assert_eq!(solve_via_kernel(&d, 1, 1, &config).unwrap(), direct);
    }

    #[test]
    fn shortcut() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(matches!(
            kernelize(&d, 0, 4).unwrap(),
            KernelOutcome::YesShortcut { .. }
        ));
        assert!(solve_via_kernel(&d, 0, 4, &SolverConfig::default()).unwrap());
    }
}
