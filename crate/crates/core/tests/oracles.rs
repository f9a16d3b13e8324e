//! Library results against the brute-force oracles in `common`, plus the
//! fixture values those oracles produced, frozen.

mod common;

use std::collections::BTreeSet;

use common::*;
use masckit::graph::{enumerate_simple_cycles, girth, masc_contains_graph, nsc_graph, DirectedSimpleGraph};
use masckit::linalg::{nullspace_basis, RealMatrix};
use masckit::masc::{enumerate_extreme_points_with, masc_contains, nullspace_constant, ScanOptions};
use masckit::SupportSet;
use num_rational::BigRational;

fn matrix(rows: &[Vec<i64>], n: usize) -> RealMatrix {
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    RealMatrix::from_integers(rows.len(), n, &flat).unwrap()
}

fn library_points(rows: &[Vec<i64>], n: usize) -> BTreeSet<Vec<BigRational>> {
    let b = nullspace_basis(&matrix(rows, n)).unwrap();
    let opts = ScanOptions { include_antipodes: true, ..ScanOptions::default() };
    enumerate_extreme_points_with(&b, opts).unwrap().into_iter().map(|p| p.vector().to_vec()).collect()
}

fn random_rows(rng: &mut SplitMix, m: usize, n: usize) -> Vec<Vec<i64>> {
    (0..m).map(|_| (0..n).map(|_| rng.below(5) as i64 - 2).collect()).collect()
}

#[test]
fn ones_row_has_six_extreme_points() {
    let rows = vec![vec![1, 1, 1]];
    let oracle = extreme_points_by_signs(&rows, 3);
    // frozen from the sign-vector oracle
    assert_eq!(oracle.len(), 6);
    for z in &oracle {
        assert_eq!(z.iter().filter(|v| **v != q(0)).count(), 2);
        assert!(z.iter().all(|v| *v == q(0) || *v == half() || *v == -half()));
    }
    assert_eq!(library_points(&rows, 3), oracle);
}

#[test]
fn alternating_row_points_and_masc() {
    let rows = vec![vec![1, -1, 1]];
    let oracle = extreme_points_by_signs(&rows, 3);
    assert_eq!(oracle.len(), 6);
    assert_eq!(library_points(&rows, 3), oracle);
    let b = nullspace_basis(&matrix(&rows, 3)).unwrap();
    for i in 0..3 {
        let s = SupportSet::new(3, [i]).unwrap();
        assert!(!in_masc_by_points(&oracle, &[i]));
        assert!(!masc_contains(&b, &s, None).unwrap().in_masc);
    }
}

#[test]
fn random_matrices_match_sign_oracle() {
    let mut rng = SplitMix(0x5eed);
    for case in 0..40 {
        let n = 3 + case % 4;
        let m = 1 + rng.below((n - 1) as u64) as usize;
        let rows = random_rows(&mut rng, m, n);
        let oracle = extreme_points_by_signs(&rows, n);
        assert_eq!(library_points(&rows, n), oracle, "case {case}: {rows:?}");
        let b = nullspace_basis(&matrix(&rows, n)).unwrap();
        for s in 1..=n {
            assert_eq!(nullspace_constant(s, &b).unwrap(), nsc_from_points(&oracle, s), "case {case} s {s}");
        }
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let s = SupportSet::new(n, idx.clone()).unwrap();
            let v = masc_contains(&b, &s, None).unwrap();
            assert!(v.decided);
            assert_eq!(v.in_masc, in_masc_by_points(&oracle, &idx), "case {case} S {idx:?}");
        }
    }
}

#[test]
fn trivial_nullspace_has_no_points() {
    let rows = vec![vec![1, 0], vec![0, 1]];
    assert!(extreme_points_by_signs(&rows, 2).is_empty());
    assert!(library_points(&rows, 2).is_empty());
    let b = nullspace_basis(&matrix(&rows, 2)).unwrap();
    assert_eq!(nullspace_constant(1, &b).unwrap(), q(0));
}

#[test]
fn two_loop_graph_cycles_match_subset_oracle() {
    let edges = vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 1)];
    let oracle = cycles_by_subsets(6, &edges);
    // frozen from the subset oracle: {a,b,c}, {b,d,e,f,g}, {a,c,d,e,f,g}
    let want: BTreeSet<Vec<usize>> = [vec![0, 1, 2], vec![1, 3, 4, 5, 6], vec![0, 2, 3, 4, 5, 6]].into_iter().collect();
    assert_eq!(oracle, want);
    let g = DirectedSimpleGraph::new(6, edges).unwrap();
    let lib: BTreeSet<Vec<usize>> = enumerate_simple_cycles(&g).unwrap().into_iter().map(|c| c.edges).collect();
    assert_eq!(lib, oracle);
}

#[test]
fn random_graphs_match_subset_oracle() {
    let mut rng = SplitMix(77);
    for case in 0..60 {
        let v = 3 + rng.below(5) as usize;
        let edges = random_connected_graph(&mut rng, v, 12.min(v * (v - 1) / 2));
        let oracle = cycles_by_subsets(v, &edges);
        let g = DirectedSimpleGraph::new(v, edges.clone()).unwrap();
        let lib: BTreeSet<Vec<usize>> = enumerate_simple_cycles(&g).unwrap().into_iter().map(|c| c.edges).collect();
        assert_eq!(lib, oracle, "case {case}: {edges:?}");
        assert_eq!(girth(&g), oracle.iter().map(Vec::len).min(), "case {case}");
    }
}

#[test]
fn graph_oracle_agrees_with_incidence_points() {
    let mut rng = SplitMix(4242);
    for case in 0..25 {
        let v = 3 + rng.below(3) as usize;
        let edges = random_connected_graph(&mut rng, v, 7.min(v * (v - 1) / 2));
        let n = edges.len();
        let mut rows = vec![vec![0i64; n]; v];
        for (j, &(t, h)) in edges.iter().enumerate() {
            rows[t][j] = -1;
            rows[h][j] = 1;
        }
        let points = extreme_points_by_signs(&rows, n);
        let g = DirectedSimpleGraph::new(v, edges).unwrap();
        for s in 1..=n {
            assert_eq!(nsc_graph(s, &g).unwrap(), nsc_from_points(&points, s), "case {case} s {s}");
        }
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let got = masc_contains_graph(&g, &SupportSet::new(n, idx.clone()).unwrap()).unwrap();
            assert_eq!(got.in_masc, in_masc_by_points(&points, &idx), "case {case} S {idx:?}");
        }
    }
}
