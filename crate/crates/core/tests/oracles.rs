//! Enumeration counts checked against independent computations.

use orientalis_core::enumeration::{enumerate_by_closure, enumerate_o};
use orientalis_core::{check_membership, Chain, Operator};
use std::collections::BTreeSet;

// Every coefficient vector in the box, with the last coefficient fixed by the
// sum condition, filtered by the membership test.
fn naive(m: usize, n: usize, bound: i64) -> BTreeSet<Chain> {
    let ops = Operator::enumerate(m, n, false);
    let lo: Vec<i64> = ops.iter().map(|a| if a.is_injective() { 0 } else { -bound }).collect();
    let mut coef = lo.clone();
    let mut out = BTreeSet::new();
    let last = ops.len() - 1;
    loop {
        let rest: i64 = coef[..last].iter().sum();
        let c = 1 - rest;
        if c >= lo[last] && c <= bound {
            coef[last] = c;
            let x = Chain::new(m, n, coef.iter().copied().zip(ops.iter().copied())).unwrap();
            if check_membership(&x).is_ok() {
                out.insert(x);
            }
        }
        let mut i = 0;
        loop {
            if i == last {
                return out;
            }
            if coef[i] < bound {
                coef[i] += 1;
                break;
            }
            coef[i] = lo[i];
            i += 1;
        }
    }
}

#[test]
fn search_matches_naive_scan() {
    for (m, n) in [(0, 3), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)] {
        let oracle = enumerate_o(m, n, 2).unwrap();
        let found: BTreeSet<Chain> = oracle.members(m).iter().map(|x| x.chain().clone()).collect();
        assert_eq!(found, naive(m, n, 2), "m = {m}, n = {n}");
    }
}

#[test]
fn vertices_and_edges() {
    for n in 0..=4 {
        let oracle = enumerate_o(1, n, 3).unwrap();
        assert_eq!(oracle.members(0).len(), n + 1);
        // Nondegenerate 1-simplices are the nonempty paths i -> j in the
        // graph of edges of Δ[n]: one per subset of the vertices strictly
        // between i and j.
        let paths: usize = (1..=n).map(|d| (n + 1 - d) << (d - 1)).sum();
        assert_eq!(oracle.nondegenerate_counts()[1], paths, "n = {n}");
    }
}

#[test]
fn triangle_counts() {
    // The nerve of the 2-category O_2 has 2^(m+2) - 1 simplices in
    // dimension m.
    let oracle = enumerate_o(5, 2, 3).unwrap();
    for m in 0..=5 {
        assert_eq!(oracle.members(m).len(), (1 << (m + 2)) - 1);
    }
    assert_eq!(oracle.nondegenerate_counts(), vec![3, 4, 4, 4, 4, 4]);
    assert!(oracle.certified());
}

#[test]
fn nerve_of_an_arrow() {
    let oracle = enumerate_o(5, 1, 3).unwrap();
    assert_eq!(oracle.counts(), vec![2, 3, 4, 5, 6, 7]);
    assert_eq!(oracle.nondegenerate_counts(), vec![2, 1, 0, 0, 0, 0]);
    let point = enumerate_o(5, 0, 3).unwrap();
    assert_eq!(point.nondegenerate_counts().iter().sum::<usize>(), 1);
}

#[test]
fn frozen_counts() {
    let three = enumerate_o(5, 3, 3).unwrap();
    assert!(three.certified());
    assert_eq!(three.counts(), vec![4, 15, 60, 265, 1316, 7461]);
    assert_eq!(three.nondegenerate_counts(), vec![4, 11, 34, 126, 560, 3002]);
    let four = enumerate_o(3, 4, 3).unwrap();
    assert!(four.certified());
    assert_eq!(four.counts(), vec![5, 31, 255, 2889]);
    assert_eq!(four.nondegenerate_counts(), vec![5, 26, 198, 2212]);
}

#[test]
fn bound_stability() {
    for n in 0..=3 {
        let a = enumerate_o(4, n, 3).unwrap();
        let b = enumerate_o(4, n, 4).unwrap();
        assert!(a.certified() && b.certified());
        for m in 0..=4 {
            assert_eq!(a.members(m), b.members(m));
        }
    }
    assert!(!enumerate_o(3, 3, 2).unwrap().certified());
}

#[test]
fn closure_agrees_with_search() {
    for n in 0..=3 {
        let closure = enumerate_by_closure(n, 4).unwrap();
        let search = enumerate_o(4, n, 3).unwrap();
        for m in 0..=4 {
            let s: BTreeSet<Chain> = search.members(m).iter().map(|x| x.chain().clone()).collect();
            assert_eq!(closure.levels[m], s, "n = {n}, m = {m}");
        }
    }
}
