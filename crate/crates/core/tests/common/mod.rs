//! Brute-force oracles over `u32` masks. They share no code with the library
//! beyond reading arcs out of a `Digraph`.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use copwin::{Digraph, VertexSet};

pub fn out_masks(d: &Digraph) -> Vec<u32> {
    let mut out = vec![0u32; d.n()];
    for (u, v) in d.arcs() {
        out[u] |= 1 << v;
    }
    out
}

pub fn succ(out: &[u32], r: u32) -> u32 {
    (0..out.len())
        .filter(|&v| r >> v & 1 == 1)
        .fold(0, |acc, v| acc | out[v])
}

fn cop_sets(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n)
        .filter(|w| w.count_ones() as usize <= k)
        .collect()
}

/// Shortest capture time with `k` cops, by plain BFS over every territory.
pub fn game_distance(d: &Digraph, k: usize) -> Option<usize> {
    let n = d.n();
    assert!(n <= 16);
    if n == 0 {
        return Some(0);
    }
    let out = out_masks(d);
    let full = (1u32 << n) - 1;
    let ws = cop_sets(n, k);
    let mut dist: HashMap<u32, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &w in &ws {
        let r = full & !w;
        if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(r) {
            e.insert(1);
            queue.push_back(r);
        }
    }
    while let Some(r) = queue.pop_front() {
        let t = dist[&r];
        if r == 0 {
            return Some(t);
        }
        let nr = succ(&out, r);
        for &w in &ws {
            let s = nr & !w;
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(s) {
                e.insert(t + 1);
                queue.push_back(s);
            }
        }
    }
    None
}

/// Steps needed from territory `r` (0 for the empty territory).
pub fn territory_distance(d: &Digraph, k: usize, r: u32) -> Option<usize> {
    let out = out_masks(d);
    let ws = cop_sets(d.n(), k);
    let mut dist: HashMap<u32, usize> = HashMap::from([(r, 0)]);
    let mut queue = VecDeque::from([r]);
    while let Some(r) = queue.pop_front() {
        let t = dist[&r];
        if r == 0 {
            return Some(t);
        }
        let nr = succ(&out, r);
        for &w in &ws {
            let s = nr & !w;
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(s) {
                e.insert(t + 1);
                queue.push_back(s);
            }
        }
    }
    None
}

pub fn cop_number(d: &Digraph) -> (usize, usize) {
    (0..=d.n())
        .find_map(|k| game_distance(d, k).map(|t| (k, t)))
        .expect("n cops always win")
}

/// Acyclicity of the subgraph induced by `alive`, by repeated sink removal.
pub fn acyclic_mask(out: &[u32], mut alive: u32) -> bool {
    loop {
        let sink = (0..out.len()).find(|&v| alive >> v & 1 == 1 && out[v] & alive == 0);
        match sink {
            Some(v) => alive &= !(1 << v),
            None => return alive == 0,
        }
    }
}

pub fn min_fvs_size(d: &Digraph) -> usize {
    let out = out_masks(d);
    let full = (1u32 << d.n()) - 1;
    (0u32..1 << d.n())
        .filter(|&x| acyclic_mask(&out, full & !x))
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap()
}

fn weak_component_sizes(d: &Digraph, alive: u32) -> Vec<usize> {
    let out = out_masks(d);
    let n = d.n();
    let mut und = vec![0u32; n];
    for u in 0..n {
        for v in 0..n {
            if out[u] >> v & 1 == 1 {
                und[u] |= 1 << v;
                und[v] |= 1 << u;
            }
        }
    }
    let mut left = alive;
    let mut sizes = Vec::new();
    while left != 0 {
        let s = left.trailing_zeros() as usize;
        let mut comp = 1u32 << s;
        loop {
            let grown = comp
                | (0..n)
                    .filter(|&v| comp >> v & 1 == 1)
                    .fold(0, |a, v| a | und[v])
                    & alive;
            if grown == comp {
                break;
            }
            comp = grown;
        }
        sizes.push(comp.count_ones() as usize);
        left &= !comp;
    }
    sizes
}

/// Size of a smallest `X` with `D − X` acyclic and weak components of at
/// most `w` vertices.
pub fn min_w_separator_size(d: &Digraph, w: usize) -> usize {
    let out = out_masks(d);
    let full = (1u32 << d.n()) - 1;
    (0u32..1 << d.n())
        .filter(|&x| {
            let alive = full & !x;
            acyclic_mask(&out, alive) && weak_component_sizes(d, alive).iter().all(|&s| s <= w)
        })
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap()
}

/// `max_S max(δ⁺(D[S]), δ⁻(D[S]))` over all nonempty `S`.
pub fn max_min_degree(d: &Digraph) -> usize {
    let out = out_masks(d);
    let n = d.n();
    let mut inn = vec![0u32; n];
    for (u, v) in d.arcs() {
        inn[v] |= 1 << u;
    }
    (1u32..1 << n)
        .map(|s| {
            let members = (0..n).filter(|&v| s >> v & 1 == 1);
            let dout = members
                .clone()
                .map(|v| (out[v] & s).count_ones())
                .min()
                .unwrap();
            let din = members.map(|v| (inn[v] & s).count_ones()).min().unwrap();
            dout.max(din) as usize
        })
        .max()
        .unwrap_or(0)
}

pub fn mask_of(s: &VertexSet) -> u32 {
    s.iter().fold(0, |a, v| a | 1 << v)
}

pub fn set_of(n: usize, m: u32) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|&v| m >> v & 1 == 1))
}

pub fn cycle4loops() -> Digraph {
    Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0), (1, 1), (2, 2)])
}

pub fn triangle_loops() -> Digraph {
    Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 0), (1, 1), (2, 2)])
}

pub fn path(n: usize) -> Digraph {
    Digraph::from_arcs(n, (1..n).map(|i| (i - 1, i)))
}
