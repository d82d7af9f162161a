//! Graph constructions with their canonical certificates, plus seeded random
//! generators used by the tests and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::solver::simulate;
use crate::strategy::Strategy;
use crate::vertex_set::VertexSet;

/// Items `a_1..a_n` with `n = 3m` and `β = Σa_i / m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreePartitionInstance {
    items: Vec<usize>,
    m: usize,
    beta: usize,
    notes: Vec<String>,
}

impl ThreePartitionInstance {
    /// Validates the instance. If some item is at most 2, every item is
    /// multiplied by 3 so each biorientation has at least 3 vertices; a note
    /// records the rescaling.
    pub fn new(items: Vec<usize>) -> Result<Self> {
        if items.is_empty() || !items.len().is_multiple_of(3) {
            return Err(Error::InvalidInstance(format!(
                "item count {} is not a positive multiple of 3",
                items.len()
            )));
        }
        if items.contains(&0) {
            return Err(Error::InvalidInstance("items must be positive".into()));
        }
        let m = items.len() / 3;
        let sum: usize = items.iter().sum();
        if !sum.is_multiple_of(m) {
            return Err(Error::InvalidInstance(format!(
                "item sum {sum} is not divisible by m = {m}"
            )));
        }
        let mut notes = Vec::new();
        let mut items = items;
        let mut beta = sum / m;
        if items.iter().any(|&a| a <= 2) {
            items.iter_mut().for_each(|a| *a *= 3);
            beta *= 3;
            notes.push("items multiplied by 3 so that every item exceeds 2".to_string());
        }
        if items.iter().any(|&a| 4 * a <= beta || 2 * a >= beta) {
            notes.push(format!("some item lies outside ({}/4, {}/2)", beta, beta));
        }
        Ok(ThreePartitionInstance {
            items,
            m,
            beta,
            notes,
        })
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Checks that `partition` (0-based item indices) splits the items into
    /// `m` triples each summing to `β`.
    pub fn check_partition(&self, partition: &[Vec<usize>]) -> Result<()> {
        if partition.len() != self.m {
            return Err(Error::NotAPartition(format!(
                "expected {} groups, found {}",
                self.m,
                partition.len()
            )));
        }
        let mut seen = vec![false; self.items.len()];
        for (g, group) in partition.iter().enumerate() {
            if group.len() != 3 {
                return Err(Error::NotAPartition(format!(
                    "group {g} does not have 3 items"
                )));
            }
            let mut sum = 0;
            for &i in group {
                if i >= self.items.len() || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::NotAPartition(format!(
                        "item {i} is out of range or used twice"
                    )));
                }
                sum += self.items[i];
            }
            if sum != self.beta {
                return Err(Error::NotAPartition(format!(
                    "group {g} sums to {sum}, expected {}",
                    self.beta
                )));
            }
        }
        Ok(())
    }
}

/// A constructed digraph, a labelled partition of its vertices and an
/// optional winning strategy.
#[derive(Clone, Debug, Serialize)]
pub struct GadgetOutput {
    #[serde(skip)]
    pub graph: Digraph,
    pub named_parts: Vec<(String, VertexSet)>,
    pub certificate: Option<Strategy>,
    pub notes: Vec<String>,
}

impl GadgetOutput {
    pub fn part(&self, name: &str) -> Option<&VertexSet> {
        self.named_parts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

fn biorient_complete(d: &mut Digraph, part: &VertexSet, loops: bool) {
    for u in part {
        for v in part {
            if u != v || loops {
                d.add_arc(u, v);
            }
        }
    }
}

/// Consecutive blocks `V_1..V_n` of sizes `a_i` starting at 0.
fn item_blocks(inst: &ThreePartitionInstance, universe: usize) -> Vec<VertexSet> {
    let mut start = 0;
    inst.items
        .iter()
        .map(|&a| {
            let block = VertexSet::from_indices(universe, start..start + a);
            start += a;
            block
        })
        .collect()
}

fn union_of_items(blocks: &[VertexSet], group: &[usize], universe: usize) -> VertexSet {
    group
        .iter()
        .fold(VertexSet::empty(universe), |acc, &i| acc.union(&blocks[i]))
}

/// Complete biorientations `V_1..V_n` followed by independent sets
/// `I_1..I_{m+1}` of size `β`, with arcs `V → I_1`, `I_j → I_{j+1}` and
/// `I_{m+1} → V`. With a partition the 3m-step certificate is attached.
pub fn gadget_3partition(
    inst: &ThreePartitionInstance,
    partition: Option<&[Vec<usize>]>,
) -> Result<GadgetOutput> {
    let total: usize = inst.items.iter().sum();
    let (m, beta) = (inst.m, inst.beta);
    let n = total + (m + 1) * beta;
    let mut d = Digraph::new(n);
    let blocks = item_blocks(inst, n);
    for b in &blocks {
        biorient_complete(&mut d, b, false);
    }
    let layers: Vec<VertexSet> = (0..=m)
        .map(|j| VertexSet::from_indices(n, total + j * beta..total + (j + 1) * beta))
        .collect();
    for j in 0..m {
        for u in &layers[j] {
            for v in &layers[j + 1] {
                d.add_arc(u, v);
            }
        }
    }
    for v in 0..total {
        for i in &layers[0] {
            d.add_arc(v, i);
        }
        for i in &layers[m] {
            d.add_arc(i, v);
        }
    }
    let mut named_parts: Vec<(String, VertexSet)> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("V{}", i + 1), b.clone()))
        .collect();
    named_parts.extend(
        layers
            .iter()
            .enumerate()
            .map(|(j, l)| (format!("I{}", j + 1), l.clone())),
    );
    let certificate = match partition {
        Some(p) => Some(gadget_3partition_strategy(inst, p)?),
        None => None,
    };
    Ok(GadgetOutput {
        graph: d,
        named_parts,
        certificate,
        notes: inst.notes.clone(),
    })
}

/// `I_1` for m steps, the unions `⋃_{h∈S_i} V_h` for the next m, then
/// `I_{m+1}` for m steps. Every step uses exactly `β` cops.
pub fn gadget_3partition_strategy(
    inst: &ThreePartitionInstance,
    partition: &[Vec<usize>],
) -> Result<Strategy> {
    inst.check_partition(partition)?;
    let total: usize = inst.items.iter().sum();
    let (m, beta) = (inst.m, inst.beta);
    let n = total + (m + 1) * beta;
    let blocks = item_blocks(inst, n);
    let first = VertexSet::from_indices(n, total..total + beta);
    let last = VertexSet::from_indices(n, total + m * beta..total + (m + 1) * beta);
    let mut steps = vec![first; m];
    steps.extend(partition.iter().map(|g| union_of_items(&blocks, g, n)));
    steps.extend(std::iter::repeat_n(last, m));
    Ok(Strategy::new(steps))
}

/// Complete biorientations `V_1..V_n` and `Z` (size `β`), loops on every
/// vertex and no other arcs. With a partition, the (m+1)-step certificate
/// (the V-unions, then `Z`) is attached.
pub fn gadget_capture_deadline(
    inst: &ThreePartitionInstance,
    partition: Option<&[Vec<usize>]>,
) -> Result<GadgetOutput> {
    let total: usize = inst.items.iter().sum();
    let n = total + inst.beta;
    let mut d = Digraph::new(n);
    let blocks = item_blocks(inst, n);
    let z = VertexSet::from_indices(n, total..n);
    for b in blocks.iter().chain(std::iter::once(&z)) {
        biorient_complete(&mut d, b, true);
    }
    let mut named_parts: Vec<(String, VertexSet)> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("V{}", i + 1), b.clone()))
        .collect();
    named_parts.push(("Z".into(), z.clone()));
    let certificate = match partition {
        Some(p) => {
            inst.check_partition(p)?;
            let mut steps: Vec<VertexSet> =
                p.iter().map(|g| union_of_items(&blocks, g, n)).collect();
            steps.push(z);
            Some(Strategy::new(steps))
        }
        None => None,
    };
    Ok(GadgetOutput {
        graph: d,
        named_parts,
        certificate,
        notes: inst.notes.clone(),
    })
}

/// Index of the copy `v^i` (`i` in `1..=k`) in the subdivided digraph.
pub fn subdivided_index(v: usize, i: usize, k: usize) -> usize {
    v * k + (i - 1)
}

/// Replaces each vertex `v` by a path `v^1 → … → v^k` and each arc `(u, v)`
/// by `(u^k, v^1)`.
pub fn subdivide(d: &Digraph, k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if let Some(vertex) = (0..d.n()).find(|&v| d.out_degree(v) == 0) {
        return Err(Error::HasSink { vertex });
    }
    let mut t = Digraph::new(d.n() * k);
    for v in 0..d.n() {
        for i in 1..k {
            t.add_arc(subdivided_index(v, i, k), subdivided_index(v, i + 1, k));
        }
    }
    for (u, v) in d.arcs() {
        t.add_arc(subdivided_index(u, k, k), subdivided_index(v, 1, k));
    }
    Ok(t)
}

/// Simulates a winning k-cop strategy of length Ω with one cop on
/// `subdivide(d, k)`: k rounds of the diagonal batches `v_{i_1}^1 … v_{i_k}^k`
/// separated by single empty pauses, `k²Ω + k − 1` steps in total. Steps with
/// fewer than k cops are padded with their lowest vertex (vertex 0 if empty).
pub fn lift_strategy(d: &Digraph, k: usize, strategy: &Strategy) -> Result<Strategy> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if strategy.cops_used() > k || !simulate(d, strategy).captured {
        return Err(Error::NotWinning);
    }
    let big = d.n() * k;
    let batches: Vec<Vec<usize>> = strategy
        .steps()
        .iter()
        .map(|w| {
            let mut cops = w.to_vec();
            let pad = w.first().unwrap_or(0);
            cops.resize(k, pad);
            cops
        })
        .collect();
    let mut steps = Vec::with_capacity(k * k * batches.len() + k - 1);
    for round in 0..k {
        if round > 0 {
            steps.push(VertexSet::empty(big));
        }
        for batch in &batches {
            for (j, &v) in batch.iter().enumerate() {
                steps.push(VertexSet::singleton(big, subdivided_index(v, j + 1, k)));
            }
        }
    }
    Ok(Strategy::new(steps))
}

/// Groups a one-cop strategy on the subdivided digraph into batches of `k`
/// steps and projects each copy `v^i` back to `v`. A trailing partial batch
/// becomes a final step.
pub fn project_strategy(d: &Digraph, k: usize, tilde: &Strategy) -> Strategy {
    let k = k.max(1);
    tilde
        .steps()
        .chunks(k)
        .map(|chunk| {
            VertexSet::from_indices(d.n(), chunk.iter().flat_map(|s| s.iter().map(|x| x / k)))
        })
        .collect()
}

/// Tournament on `3n − 2` vertices: triangles `C_1..C_{n−1}` (vertices
/// `3(i−1), 3(i−1)+1, 3(i−1)+2`), all arcs `C_i → C_j` for `i < j`, and a
/// vertex `v = 3n − 3` with `v → C_i` for `i ≤ n − 2` and `C_{n−1} → v`.
/// The certificate keeps one cop on `v` and parks the other on the first
/// vertex of each triangle for three steps.
pub fn family_tn(n: usize) -> Result<GadgetOutput> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("T_n needs n >= 3, got {n}")));
    }
    let size = 3 * n - 2;
    let v = 3 * n - 3;
    let mut d = Digraph::new(size);
    let tri = |i: usize| [3 * i, 3 * i + 1, 3 * i + 2];
    for i in 0..n - 1 {
        let [a, b, c] = tri(i);
        d.add_arc(a, b);
        d.add_arc(b, c);
        d.add_arc(c, a);
        for j in i + 1..n - 1 {
            for x in tri(i) {
                for y in tri(j) {
                    d.add_arc(x, y);
                }
            }
        }
        for x in tri(i) {
            if i + 1 < n - 1 {
                d.add_arc(v, x);
            } else {
                d.add_arc(x, v);
            }
        }
    }
    let mut named_parts: Vec<(String, VertexSet)> = (0..n - 1)
        .map(|i| (format!("C{}", i + 1), VertexSet::from_indices(size, tri(i))))
        .collect();
    named_parts.push(("v".into(), VertexSet::singleton(size, v)));
    let certificate = (0..n - 1)
        .flat_map(|i| std::iter::repeat_n(VertexSet::from_indices(size, [v, 3 * i]), 3))
        .collect();
    Ok(GadgetOutput {
        graph: d,
        named_parts,
        certificate: Some(certificate),
        notes: Vec::new(),
    })
}

/// `S = {0..k}` complete with loops, `T` the remaining vertices as a
/// transitive tournament oriented by ascending index, and every arc between
/// `S` and `T` in both directions. This meets the arc bound for `k` cops with
/// equality. The certificate keeps cops on `S` until `T` drains.
pub fn tight_arc_family(n: usize, k: usize) -> Result<GadgetOutput> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut d = Digraph::new(n);
    let s = VertexSet::from_indices(n, 0..k);
    let t = VertexSet::from_indices(n, k..n);
    biorient_complete(&mut d, &s, true);
    for u in k..n {
        for v in u + 1..n {
            d.add_arc(u, v);
        }
        for x in 0..k {
            d.add_arc(u, x);
            d.add_arc(x, u);
        }
    }
    let certificate = std::iter::repeat_n(s.clone(), n - k + 1).collect();
    Ok(GadgetOutput {
        graph: d,
        named_parts: vec![("S".into(), s), ("T".into(), t)],
        certificate: Some(certificate),
        notes: Vec::new(),
    })
}

/// A random round digraph and a round ordering of it.
///
/// Out-degrees follow a ±1 random walk in `1..=n−1` whose wrap-around step
/// also respects the ±1 rule, so the blocks `N⁺(v_i) = {v_{i+1}, …,
/// v_{i+d_i}}` produce consecutive in-neighbourhoods too. Labels are then
/// shuffled. Identical seeds give identical output.
pub fn random_round_digraph(n: usize, seed: u64) -> Result<(Digraph, Vec<usize>)> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "round digraphs need n >= 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cycle = vec![1; n];
    let mut degrees = cycle.clone();
    for _ in 0..1000 {
        let mut ds = Vec::with_capacity(n);
        let mut d = rng.gen_range(1..n);
        for _ in 0..n {
            ds.push(d);
            let step: i64 = rng.gen_range(-1..=1);
            d = (d as i64 + step).clamp(1, n as i64 - 1) as usize;
        }
        if ds[0] + 1 >= ds[n - 1] {
            degrees = ds;
            break;
        }
    }
    let build = |degrees: &[usize]| {
        Digraph::from_arcs(
            n,
            (0..n).flat_map(|i| (1..=degrees[i]).map(move |j| (i, (i + j) % n))),
        )
    };
    let identity: Vec<usize> = (0..n).collect();
    let mut base = build(&degrees);
    if !base.verify_round_ordering(&identity)? {
        base = build(&cycle);
    }
    let mut labels = identity;
    labels.shuffle(&mut rng);
    let d = Digraph::from_arcs(n, base.arcs().map(|(u, v)| (labels[u], labels[v])));
    Ok((d, labels))
}

/// Each ordered pair `(u, v)`, loops included, is an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                d.add_arc(u, v);
            }
        }
    }
    d
}

/// Uniformly random labelled tournament.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                d.add_arc(u, v);
            } else {
                d.add_arc(v, u);
            }
        }
    }
    d
}

/// The tournament whose arcs between `i < j` are read from successive bits
/// of `code` (bit set means `j → i`). Enumerates all labelled tournaments as
/// `code` ranges over `0..2^(n(n−1)/2)`.
pub fn tournament_from_code(n: usize, code: u64) -> Digraph {
    let mut d = Digraph::new(n);
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit & 1 == 1 {
                d.add_arc(j, i);
            } else {
                d.add_arc(i, j);
            }
            bit += 1;
        }
    }
    d
}
