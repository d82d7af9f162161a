//! Strategies as products of boolean matrices.
//!
//! With `B` the adjacency matrix and `Ī_W` the identity with the diagonal
//! zeroed on `W`, a cop play `W_1, …, W_l` wins exactly when
//! `Ī_{W_1} B Ī_{W_2} ⋯ B Ī_{W_l}` is the zero matrix. Deciding k-copwin is
//! then a mortality question for the family `{B Ī_W : |W| = k}`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::strategy::Strategy;
use crate::vertex_set::VertexSet;

/// Square 0/1 matrix over the boolean semiring, stored as bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: Vec<VertexSet>,
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix({})", self.dim())?;
        for row in &self.rows {
            let line: String = (0..self.dim())
                .map(|j| if row.contains(j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BoolMatrix {
    pub fn zero(n: usize) -> Self {
        BoolMatrix {
            rows: vec![VertexSet::empty(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        BoolMatrix {
            rows: (0..n).map(|i| VertexSet::singleton(n, i)).collect(),
        }
    }

    /// `B[u][v] = 1` iff `(u, v)` is an arc.
    pub fn adjacency(d: &Digraph) -> Self {
        BoolMatrix {
            rows: (0..d.n()).map(|v| d.out_neighbors(v).clone()).collect(),
        }
    }

    /// Builds from explicit rows; every row must be over universe `rows.len()`.
    pub fn from_rows(rows: Vec<VertexSet>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.universe() == n), "non-square matrix");
        BoolMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn row(&self, i: usize) -> &VertexSet {
        &self.rows[i]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(VertexSet::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut rows = vec![VertexSet::empty(n); n];
        for (i, row) in self.rows.iter().enumerate() {
            for j in row {
                rows[j].insert(i);
            }
        }
        BoolMatrix { rows }
    }

    /// `(A·B)[i][j] = OR_k A[i][k] AND B[k][j]`, as a row-wise OR of the rows
    /// of `B` selected by each row of `A`.
    pub fn mul(&self, rhs: &BoolMatrix) -> Result<BoolMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        let n = self.dim();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = VertexSet::empty(n);
                for k in row {
                    acc.union_with(&rhs.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BoolMatrix { rows })
    }

    /// Right-multiplication by `Ī_W`: zeroes the columns in `W`.
    pub fn mask_columns(&self, w: &VertexSet) -> BoolMatrix {
        BoolMatrix {
            rows: self.rows.iter().map(|r| r.difference(w)).collect(),
        }
    }

    /// Canonical byte encoding: dimension then the packed row words, little
    /// endian. Equal matrices and only equal matrices share a key.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.dim() * 8);
        out.extend_from_slice(&(self.dim() as u64).to_le_bytes());
        for row in &self.rows {
            for w in row.words() {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }
}

/// `Ī_W`: the identity with the diagonal zeroed on `W`.
pub fn restrictor(n: usize, w: &VertexSet) -> BoolMatrix {
    BoolMatrix::identity(n).mask_columns(w)
}

pub fn bool_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    a.mul(b)
}

/// Whether `Ī_{W_1} B Ī_{W_2} ⋯ B Ī_{W_l}` vanishes, i.e. the strategy wins.
pub fn strategy_matrix_check(d: &Digraph, strategy: &Strategy) -> bool {
    let n = d.n();
    let b = BoolMatrix::adjacency(d);
    let mut steps = strategy.steps().iter();
    let Some(first) = steps.next() else {
        return n == 0;
    };
    let mut product = restrictor(n, first);
    for w in steps {
        if product.is_zero() {
            break;
        }
        product = product.mul(&b).expect("square").mask_columns(w);
    }
    product.is_zero()
}

/// `W_l, …, W_1`.
pub fn reverse_strategy(strategy: &Strategy) -> Strategy {
    strategy.reversed()
}

/// Indices into the generating family whose product is the zero matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MortalWord {
    pub indices: Vec<usize>,
}

impl MortalWord {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Evaluates the word over `mats`.
    pub fn product(&self, mats: &[BoolMatrix]) -> Result<BoolMatrix> {
        let mut it = self.indices.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidParams("empty word".into()))?;
        let mut p = mats[*first].clone();
        for &i in it {
            p = p.mul(&mats[i])?;
        }
        Ok(p)
    }
}

/// Breadth-first search over distinct products `M_{i_1} ⋯ M_{i_t}` for a
/// shortest word evaluating to zero, up to `max_len` factors.
///
/// Layers are processed in key order and factors in index order, so the
/// returned word does not depend on `workers`. `cap` bounds the number of
/// distinct products kept.
pub fn shortest_mortal_product(
    mats: &[BoolMatrix],
    max_len: usize,
    cap: usize,
    workers: usize,
) -> Result<Option<MortalWord>> {
    if max_len == 0 {
        return Err(Error::InvalidParams("max_len must be at least 1".into()));
    }
    let Some(first) = mats.first() else {
        return Ok(None);
    };
    let n = first.dim();
    if let Some(bad) = mats.iter().find(|m| m.dim() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: bad.dim(),
        });
    }
    let pool = if workers > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .ok()
    } else {
        None
    };

    // key -> (parent key, factor index); roots have no parent.
    let mut parents: HashMap<Vec<u8>, (Option<Vec<u8>>, usize)> = HashMap::new();
    let mut layer: Vec<(Vec<u8>, BoolMatrix)> = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let key = m.key();
        if m.is_zero() {
            return Ok(Some(MortalWord { indices: vec![i] }));
        }
        if !parents.contains_key(&key) {
            parents.insert(key.clone(), (None, i));
            layer.push((key, m.clone()));
        }
    }

    let rebuild =
        |parents: &HashMap<Vec<u8>, (Option<Vec<u8>>, usize)>, tail: usize, from: &[u8]| {
            let mut indices = vec![tail];
            let mut key = from.to_vec();
            loop {
                let (parent, idx) = &parents[&key];
                indices.push(*idx);
                match parent {
                    Some(p) => key = p.clone(),
                    None => break,
                }
            }
            indices.reverse();
            MortalWord { indices }
        };

    for _ in 1..max_len {
        layer.sort_by(|a, b| a.0.cmp(&b.0));
        let expand = |(key, m): &(Vec<u8>, BoolMatrix)| -> Vec<(Vec<u8>, usize, BoolMatrix)> {
            mats.iter()
                .enumerate()
                .map(|(i, f)| {
                    let p = m.mul(f).expect("equal dimensions");
                    (key.clone(), i, p)
                })
                .collect()
        };
        let produced: Vec<Vec<(Vec<u8>, usize, BoolMatrix)>> = match &pool {
            Some(pool) => pool.install(|| layer.par_iter().map(expand).collect()),
            None => layer.iter().map(expand).collect(),
        };
        let mut next = Vec::new();
        for (parent_key, i, p) in produced.into_iter().flatten() {
            if p.is_zero() {
                return Ok(Some(rebuild(&parents, i, &parent_key)));
            }
            let key = p.key();
            if parents.contains_key(&key) {
                continue;
            }
            parents.insert(key.clone(), (Some(parent_key), i));
            if parents.len() > cap {
                return Err(Error::Budget { budget: cap });
            }
            next.push((key, p));
        }
        if next.is_empty() {
            return Ok(None);
        }
        layer = next;
    }
    Ok(None)
}

/// Outcome of deciding k-copwin through matrix mortality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MortalityVerdict {
    pub winning: bool,
    /// Cop sets `W_1, …, W_l` of a shortest zero product
    /// `B Ī_{W_1} ⋯ B Ī_{W_l}`, labelled in the original graph. They form a
    /// winning strategy on the graph left after degree-zero trimming.
    pub cop_sets: Option<Strategy>,
}

/// Decides k-copwin as mortality of `{B Ī_W : |W| = min(k, n')}` on the graph
/// trimmed of out- and in-degree-zero vertices (`n'` its order).
pub fn copwin_via_mortality(
    d: &Digraph,
    k: usize,
    max_len: usize,
    cap: usize,
    workers: usize,
) -> Result<MortalityVerdict> {
    let (trimmed, map) = d.trim_degree_zero();
    let n = trimmed.n();
    if n == 0 {
        return Ok(MortalityVerdict {
            winning: true,
            cop_sets: Some(Strategy::empty()),
        });
    }
    let mut old_of_new = vec![0; n];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = new {
            old_of_new[*new] = old;
        }
    }
    let b = BoolMatrix::adjacency(&trimmed);
    let cop_sets: Vec<VertexSet> = trimmed.vertices().subsets_of_size(k.min(n)).collect();
    let mats: Vec<BoolMatrix> = cop_sets.iter().map(|w| b.mask_columns(w)).collect();
    let word = shortest_mortal_product(&mats, max_len, cap, workers)?;
    Ok(match word {
        Some(word) => MortalityVerdict {
            winning: true,
            cop_sets: Some(
                word.indices
                    .iter()
                    .map(|&i| {
                        VertexSet::from_indices(d.n(), cop_sets[i].iter().map(|v| old_of_new[v]))
                    })
                    .collect(),
            ),
        },
        None => MortalityVerdict {
            winning: false,
            cop_sets: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4loops() -> Digraph {
        Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0), (1, 1), (2, 2)])
    }

    fn table_one() -> Strategy {
        Strategy::from_lists(4, [[2], [0], [1], [2], [0], [1], [2], [0]])
    }

    #[test]
    fn products() {
        let b = BoolMatrix::adjacency(&cycle4loops());
        assert_eq!(b.mul(&BoolMatrix::identity(4)).unwrap(), b);
        assert!(b.mul(&BoolMatrix::zero(4)).unwrap().is_zero());
        let b2 = bool_product(&b, &b).unwrap();
        assert!(b2.get(3, 1));
        assert!(!b2.get(3, 2));
        assert_eq!(
            b.mul(&BoolMatrix::identity(3)),
            Err(Error::DimensionMismatch { left: 4, right: 3 })
        );
    }

    #[test]
    fn restrictors() {
        assert_eq!(restrictor(4, &VertexSet::empty(4)), BoolMatrix::identity(4));
        assert!(restrictor(4, &VertexSet::full(4)).is_zero());
        let b = BoolMatrix::adjacency(&cycle4loops());
        let w = VertexSet::from_indices(4, [0, 2]);
        let masked = b.mul(&restrictor(4, &w)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(masked.get(i, j), b.get(i, j) && !w.contains(j));
            }
        }
    }

    #[test]
    fn strategy_checks() {
        let d = cycle4loops();
        assert!(strategy_matrix_check(&d, &table_one()));
        let idle = Strategy::new(vec![VertexSet::empty(4); 12]);
        assert!(!strategy_matrix_check(&d, &idle));
        assert!(strategy_matrix_check(
            &d.reverse(),
            &reverse_strategy(&table_one())
        ));
        assert_eq!(
            reverse_strategy(&reverse_strategy(&table_one())),
            table_one()
        );
        let single = Strategy::from_lists(4, [[1, 2]]);
        assert_eq!(reverse_strategy(&single), single);
    }

    #[test]
    fn mortal_words() {
        let id = BoolMatrix::identity(3);
        assert_eq!(
            shortest_mortal_product(std::slice::from_ref(&id), 10, 100, 1).unwrap(),
            None
        );
        let word = shortest_mortal_product(&[id, BoolMatrix::zero(3)], 10, 100, 1).unwrap();
        assert_eq!(word.unwrap().indices, vec![1]);

        let d = cycle4loops();
        let b = BoolMatrix::adjacency(&d);
        let mats: Vec<_> = (0..4)
            .map(|v| b.mask_columns(&VertexSet::singleton(4, v)))
            .collect();
        let word = shortest_mortal_product(&mats, 16, 10_000, 1)
            .unwrap()
            .unwrap();
        assert_eq!(word.len(), 8);
        assert!(word.product(&mats).unwrap().is_zero());
    }

    #[test]
    fn mortality_decisions() {
        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 0), (1, 1), (2, 2)]);
        let v = copwin_via_mortality(&tri, 2, 8, 10_000, 1).unwrap();
        assert!(v.winning);
        assert_eq!(v.cop_sets.unwrap().len(), 2);
        assert!(!copwin_via_mortality(&tri, 1, 8, 10_000, 1).unwrap().winning);
        let path = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(copwin_via_mortality(&path, 0, 1, 10, 1).unwrap().winning);
    }
}
