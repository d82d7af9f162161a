mod common;

use copwin::bounds::{feedback_vertex_set, lower_bound};
use copwin::gadgets::{random_digraph, random_tournament, subdivide, tournament_from_code};
use copwin::kernel::approx_w_separator;
use copwin::solver::{capture_time, cop_number, is_k_copwin, naive_pi_k, simulate};
use copwin::tournament::quotient_digraph;
use copwin::{Digraph, SolverConfig, Strategy, VertexSet};

use common::*;

const BUDGET: usize = 1_000_000;

fn corpus(count: u64, max_n: usize) -> impl Iterator<Item = Digraph> {
    (0..count).map(move |seed| {
        let n = 1 + (seed as usize % max_n);
        let p = [0.15, 0.3, 0.45][(seed / 7 % 3) as usize];
        random_digraph(n, p, seed)
    })
}

#[test]
fn table_one() {
    let d = cycle4loops();
    let report = cop_number(&d, &SolverConfig::default()).unwrap();
    assert_eq!((report.cop_number, report.capture_time), (1, 8));
    assert_eq!(cop_number_oracle(&d), (1, 8));
    let trace = simulate(&d, &report.strategy);
    let expected: Vec<Vec<usize>> = vec![
        vec![0, 1, 3],
        vec![1, 2],
        vec![2, 3],
        vec![0, 3],
        vec![1],
        vec![2],
        vec![3],
        vec![],
    ];
    let got: Vec<Vec<usize>> = trace.territories.iter().map(VertexSet::to_vec).collect();
    assert_eq!(got, expected);
}

fn cop_number_oracle(d: &Digraph) -> (usize, usize) {
    common::cop_number(d)
}

#[test]
fn table_two_trace() {
    // a, b, c = 0, 1, 2; copy v^i has index 2v + i - 1.
    let t = subdivide(&triangle_loops(), 2).unwrap();
    let s = Strategy::from_lists(
        6,
        [
            vec![0],
            vec![3],
            vec![0],
            vec![5],
            vec![],
            vec![0],
            vec![3],
            vec![0],
            vec![5],
        ],
    );
    let trace = simulate(&t, &s);
    let expected: Vec<Vec<usize>> = vec![
        vec![1, 2, 3, 4, 5],
        vec![0, 2, 4, 5],
        vec![1, 3, 4, 5],
        vec![0, 2, 4],
        vec![1, 3, 5],
        vec![2, 4],
        vec![5],
        vec![4],
        vec![],
    ];
    let got: Vec<Vec<usize>> = trace.territories.iter().map(VertexSet::to_vec).collect();
    assert_eq!(got, expected);
}

#[test]
fn solver_matches_brute_force() {
    let config = SolverConfig::default();
    for d in corpus(300, 8) {
        for k in 0..=3 {
            let cert = is_k_copwin(&d, k, &config).unwrap();
            let oracle = game_distance(&d, k);
            assert_eq!(
                cert.capture_time,
                oracle,
                "k={k} arcs={:?}",
                d.arcs().collect::<Vec<_>>()
            );
            let naive = naive_pi_k(&d, k, 12).unwrap();
            assert_eq!(naive.distance, oracle);
            if let Some(s) = &cert.strategy {
                assert!(s.cops_used() <= k);
                assert_eq!(simulate(&d, s).capture_step(), oracle);
            }
        }
    }
}

#[test]
fn paths() {
    for n in 1..=10 {
        let d = path(n);
        let r = cop_number(&d, &SolverConfig::default()).unwrap();
        assert_eq!((r.cop_number, r.capture_time), (0, n + 1));
        if n <= 8 {
            assert_eq!(game_distance(&d, 0), Some(n + 1));
        }
    }
}

#[test]
fn lower_bound_matches_brute_force() {
    for d in corpus(200, 10) {
        let (lb, witness) = lower_bound(&d);
        assert_eq!(lb, max_min_degree(&d));
        let (sub, _) = d.induced_subgraph(&witness);
        if sub.n() > 0 {
            assert_eq!(lb, sub.min_out_degree().max(sub.min_in_degree()));
        }
    }
}

#[test]
fn fvs_matches_brute_force() {
    for d in corpus(200, 10) {
        let f = feedback_vertex_set(&d, BUDGET).unwrap();
        assert!(d.is_acyclic_within(&f.complement()));
        assert_eq!(f.len(), min_fvs_size(&d));
    }
}

#[test]
fn separator_within_factor() {
    for (i, d) in corpus(150, 9).enumerate() {
        let w = 1 + i % 3;
        let (sep, _) = approx_w_separator(&d, w).unwrap();
        let best = min_w_separator_size(&d, w);
        assert!(
            sep.x.len() <= (w + 1) * best,
            "|X|={} best={best} w={w}",
            sep.x.len()
        );
    }
}

#[test]
fn dominance_of_subterritories() {
    for (i, d) in corpus(60, 7).enumerate() {
        let n = d.n() as u32;
        let k = i % 3;
        for r in 0u32..1 << n {
            let big = r | (1 << (i as u32 % n));
            let (a, b) = (territory_distance(&d, k, r), territory_distance(&d, k, big));
            if let Some(b) = b {
                assert!(a.is_some_and(|a| a <= b));
            }
        }
    }
}

#[test]
fn capture_time_on_winning_instances() {
    let config = SolverConfig::default();
    for d in corpus(100, 7) {
        let (cn, ct) = cop_number_oracle(&d);
        assert_eq!(capture_time(&d, cn, &config).unwrap(), ct);
        if cn > 0 {
            assert!(capture_time(&d, cn - 1, &config).is_err());
        }
    }
}

/// Every arc of the quotient is realised by some `R'' ⊆ N⁺(R)` with at most
/// `k` vertices removed and `N⁺(R'') = N⁺(R')`; every realisable pair of
/// classes gets an arc; and the classes are exactly the distinct
/// out-neighbourhoods of all subsets.
#[test]
fn quotient_against_brute_force() {
    for seed in 0..40u64 {
        let n = 3 + (seed as usize % 5);
        let t = random_tournament(n, seed);
        let f = feedback_vertex_set(&t, BUDGET).unwrap();
        let k = (seed % 3) as usize;
        let q = quotient_digraph(&t, &f, k).unwrap();
        let out = out_masks(&t);
        let mut all_classes: Vec<u32> = (0u32..1 << n).map(|r| succ(&out, r)).collect();
        all_classes.sort_unstable();
        all_classes.dedup();
        let mut got: Vec<u32> = q.vertices.iter().map(|v| mask_of(&v.out)).collect();
        got.sort_unstable();
        assert_eq!(got, all_classes, "seed {seed}");
        let bound = 4usize.pow(f.len() as u32) * (n - f.len() + 1);
        assert!(q.vertices.len() <= bound);
        for (a, qa) in q.vertices.iter().enumerate() {
            let na = mask_of(&qa.out);
            for (b, qb) in q.vertices.iter().enumerate() {
                let nb = mask_of(&qb.out);
                let realisable = (0u32..1 << n).any(|r2| {
                    r2 & !na == 0 && (na & !r2).count_ones() as usize <= k && succ(&out, r2) == nb
                });
                assert_eq!(
                    q.arcs.contains(&(a, b)),
                    realisable,
                    "seed {seed} arc {a}->{b}"
                );
            }
        }
    }
}

#[test]
fn small_tournaments_exhaustive() {
    let config = SolverConfig::default();
    for n in 1..=4 {
        for code in 0..1u64 << (n * (n - 1) / 2) {
            let t = tournament_from_code(n, code);
            let (cn, _) = cop_number_oracle(&t);
            assert_eq!(cop_number(&t, &config).unwrap().cop_number, cn);
        }
    }
}
