//! The oracles against values worked out by hand.

use refnet_oracle::*;

const BRIDGE: [(usize, usize); 7] = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)];

fn unit(pairs: &[(usize, usize)]) -> Vec<WEdge> {
    pairs.iter().map(|&(a, b)| (a, b, 1)).collect()
}

#[test]
fn bell_numbers() {
    let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in expected.iter().enumerate() {
        assert_eq!(bell(n), b);
        assert_eq!(set_partitions(n).len(), b, "n = {n}");
    }
}

#[test]
fn bridge_modularity() {
    let q = dense_modularity(6, false, &unit(&BRIDGE), &[0, 0, 0, 1, 1, 1]);
    assert!((q - 5.0 / 14.0).abs() < 1e-12);
    let (best, arg) = max_modularity(6, false, &unit(&BRIDGE));
    assert!((best - 5.0 / 14.0).abs() < 1e-12);
    assert_eq!(arg, [0, 0, 0, 1, 1, 1]);
}

#[test]
fn two_cycle_modularity() {
    let e = [(0, 1, 1), (1, 0, 1)];
    assert!((dense_modularity(2, true, &e, &[0, 1]) + 0.5).abs() < 1e-12);
    assert!(dense_modularity(2, true, &e, &[0, 0]).abs() < 1e-12);
}

#[test]
fn loop_lands_twice_on_undirected_diagonal() {
    let a = adjacency(2, false, &[(0, 0, 3), (0, 1, 1)]);
    assert_eq!(a[0][0], 6.0);
    assert_eq!(a[0][1], 1.0);
    assert_eq!(a[1][0], 1.0);
}

#[test]
fn bridge_betweenness() {
    let eb = all_paths_betweenness(6, false, &BRIDGE);
    assert_eq!(eb[&(2, 3)], 9.0);
    assert_eq!(eb[&(0, 1)], 1.0);
    assert_eq!(eb[&(0, 2)], 4.0);
    assert_eq!(distance_sum(6, false, &BRIDGE), eb.values().sum::<f64>() as usize);
}

#[test]
fn square_splits_paths() {
    // 0-1-2-3-0: opposite corners have two shortest paths.
    let eb = all_paths_betweenness(4, false, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    for v in eb.values() {
        assert!((v - 2.0).abs() < 1e-12);
    }
}

#[test]
fn random_graphs_touch_every_node() {
    for seed in 0..50 {
        let (n, edges) = random_graph(seed, 9, true, 3);
        let mut seen = vec![false; n];
        let mut next = 0;
        for &(a, b, w) in &edges {
            assert!(w >= 1);
            for v in [a, b] {
                if !seen[v] {
                    assert_eq!(v, next, "first appearance order");
                    seen[v] = true;
                    next += 1;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
