//! Algorithms specific to tournaments: the one-cop test and the quotient of
//! the territory game, whose size is bounded through a feedback vertex set.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::bounds::feedback_vertex_set;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Exactly one arc between every pair of distinct vertices and no loops.
pub fn is_tournament(d: &Digraph) -> bool {
    let n = d.n();
    (0..n).all(|u| !d.has_arc(u, u) && (u + 1..n).all(|v| d.has_arc(u, v) != d.has_arc(v, u)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OneCopVerdict {
    /// No cycle at all: zero cops suffice.
    Acyclic,
    OneCopwin,
    NotOneCopwin,
}

/// Decides `cn(T) = 1`: every non-trivial strong component must become
/// acyclic after deleting a single vertex.
pub fn one_copwin(t: &Digraph) -> Result<OneCopVerdict> {
    if !is_tournament(t) {
        return Err(Error::NotTournament);
    }
    let mut cyclic = false;
    for comp in t.strong_components() {
        if comp.len() < 3 {
            continue;
        }
        cyclic = true;
        let hit = comp.iter().any(|v| {
            let mut rest = comp.clone();
            rest.remove(v);
            t.is_acyclic_within(&rest)
        });
        if !hit {
            return Ok(OneCopVerdict::NotOneCopwin);
        }
    }
    Ok(if cyclic {
        OneCopVerdict::OneCopwin
    } else {
        OneCopVerdict::Acyclic
    })
}

/// One class of territories with a common out-neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientVertex {
    pub representative: VertexSet,
    /// `N⁺(R)`, the class key.
    pub out: VertexSet,
    /// `(N⁺(R) ∩ F, R ∩ F, first vertex of R ∖ F)` of the triple that first
    /// produced this class.
    pub signature: (VertexSet, VertexSet, Option<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    pub vertices: Vec<QuotientVertex>,
    pub arcs: Vec<(usize, usize)>,
    pub class_of_v: usize,
    pub class_of_empty: usize,
}

impl QuotientGraph {
    /// Breadth-first reachability from the class of `V` to the class of `∅`.
    pub fn reaches_empty(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.arcs {
            adj[a].push(b);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([self.class_of_v]);
        seen[self.class_of_v] = true;
        while let Some(a) = queue.pop_front() {
            if a == self.class_of_empty {
                return true;
            }
            for &b in &adj[a] {
                if !std::mem::replace(&mut seen[b], true) {
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

/// Builds the quotient of the territory game under `R ~ R'` iff
/// `N⁺(R) = N⁺(R')`.
///
/// Candidates come from triples `(F', F'', v)` taken in subset-mask order for
/// `F'` and `F''` and topological order for `v` (blank last). The candidate
/// starts from `N⁻(F') ∪ F'' ∪ {v}`, drops vertices with an out-neighbour in
/// `F ∖ F'`, drops vertices of `V ∖ F` ranked before `v` (all of them when
/// blank) and drops `F ∖ F''`; it is kept when `N⁺(R) ∩ F = F'` and
/// `R ∩ F = F''`. An arc `[R] → [R']` exists when removing at most `k`
/// vertices from `N⁺(R)` leaves a set with out-neighbourhood `N⁺(R')`.
pub fn quotient_digraph(t: &Digraph, f: &VertexSet, k: usize) -> Result<QuotientGraph> {
    let n = t.n();
    let outside = f.complement();
    let topo = t
        .topological_order_within(&outside)
        .map_err(|_| Error::NotFvs)?;
    let fs = f.to_vec();
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in topo.iter().enumerate() {
        rank[v] = i;
    }
    let subset = |mask: usize| {
        VertexSet::from_indices(
            n,
            fs.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        )
    };

    let mut vertices: Vec<QuotientVertex> = Vec::new();
    let mut index: HashMap<VertexSet, usize> = HashMap::new();
    let mut add = |r: VertexSet, sig: (VertexSet, VertexSet, Option<usize>)| {
        let out = t.out_set(&r);
        *index.entry(out.clone()).or_insert_with(|| {
            vertices.push(QuotientVertex {
                representative: r,
                out,
                signature: sig,
            });
            vertices.len() - 1
        })
    };

    let firsts: Vec<Option<usize>> = topo.iter().copied().map(Some).chain([None]).collect();
    for m1 in 0..1usize << fs.len() {
        let f1 = subset(m1);
        let banned = f.difference(&f1);
        for m2 in 0..1usize << fs.len() {
            let f2 = subset(m2);
            for &first in &firsts {
                let mut r = t.in_set(&f1).union(&f2);
                if let Some(v) = first {
                    r.insert(v);
                }
                let mut cand = VertexSet::empty(n);
                for u in &r {
                    if !t.out_neighbors(u).is_disjoint(&banned) {
                        continue;
                    }
                    if outside.contains(u) && first.is_none_or(|v| rank[u] < rank[v]) {
                        continue;
                    }
                    if f.contains(u) && !f2.contains(u) {
                        continue;
                    }
                    cand.insert(u);
                }
                if t.out_set(&cand).intersection(f) == f1 && cand.intersection(f) == f2 {
                    add(cand, (f1.clone(), f2.clone(), first));
                }
            }
        }
    }
    let class_of_v = add(
        t.vertices(),
        (
            t.out_set(&t.vertices()).intersection(f),
            f.clone(),
            topo.first().copied(),
        ),
    );
    let class_of_empty = add(
        VertexSet::empty(n),
        (VertexSet::empty(n), VertexSet::empty(n), None),
    );

    let mut arcs = Vec::new();
    for (a, qa) in vertices.iter().enumerate() {
        let s1 = t.out_set(&qa.out);
        for (b, qb) in vertices.iter().enumerate() {
            let s2 = t.in_set(&s1.difference(&qb.out)).intersection(&qa.out);
            if s2.len() > k {
                continue;
            }
            let r2 = qa.out.difference(&s2);
            if t.out_set(&r2) == qb.out {
                arcs.push((a, b));
            }
        }
    }
    Ok(QuotientGraph {
        vertices,
        arcs,
        class_of_v,
        class_of_empty,
    })
}

/// Decides `cn(T) <= k` on the quotient built from a minimum feedback vertex
/// set, or from `fvs` when supplied.
pub fn quotient_is_k_copwin(
    t: &Digraph,
    k: usize,
    fvs: Option<&VertexSet>,
    budget: usize,
) -> Result<bool> {
    if !is_tournament(t) {
        return Err(Error::NotTournament);
    }
    let f = match fvs {
        Some(f) => f.clone(),
        None => feedback_vertex_set(t, budget)?,
    };
    Ok(quotient_digraph(t, &f, k)?.reaches_empty())
}
