mod common;

use refnet::centrality::edge_betweenness;
use refnet::fixtures;
use refnet_oracle::{all_paths_betweenness, distance_sum};

const TOL: f64 = 1e-9;

fn pairs(edges: &[refnet_oracle::WEdge]) -> Vec<(usize, usize)> {
    edges.iter().map(|&(a, b, _)| (a, b)).collect()
}

fn index(label: &refnet::NodeLabel) -> usize {
    label.as_str()[1..].parse().unwrap()
}

#[test]
fn matches_all_paths_oracle() {
    for seed in 0..200 {
        let directed = seed % 2 == 0;
        let (n, edges, g) = common::random(seed, 10, directed);
        let oracle = all_paths_betweenness(n, directed, &pairs(&edges));
        let ours = edge_betweenness(&g);
        let mut seen = 0;
        for e in ours.entries() {
            let (a, b) = (index(&e.from), index(&e.to));
            if a == b {
                assert_eq!(e.score, 0.0);
                continue;
            }
            let key = if directed { (a, b) } else { (a.min(b), a.max(b)) };
            let want = oracle[&key];
            assert!((e.score - want).abs() <= TOL, "seed {seed} edge {key:?}: {} vs {want}", e.score);
            seen += 1;
        }
        assert_eq!(seen, oracle.len(), "seed {seed}");
    }
}

#[test]
fn total_equals_sum_of_pair_distances() {
    for seed in 0..100 {
        let directed = seed % 2 == 1;
        let (n, edges, g) = common::random(seed, 10, directed);
        let total: f64 = edge_betweenness(&g).entries().iter().map(|e| e.score).sum();
        let want = distance_sum(n, directed, &pairs(&edges)) as f64;
        assert!((total - want).abs() <= TOL, "seed {seed}: {total} vs {want}");
    }
}

#[test]
fn total_equals_connected_pairs_on_cliques() {
    // Every connected pair is adjacent, so each spreads exactly one unit.
    for n in 2..8 {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b, 1))).collect();
        let g = common::to_graph(n, false, &edges);
        let total: f64 = edge_betweenness(&g).entries().iter().map(|e| e.score).sum();
        assert!((total - (n * (n - 1) / 2) as f64).abs() <= TOL);
    }
}

#[test]
fn removing_top_bridge_edge_disconnects() {
    let g = fixtures::bridge_of_triangles(false);
    let scores = edge_betweenness(&g);
    let top = scores.max().unwrap();
    let rest: Vec<_> = g.edges().filter(|e| !(e.from == top.from && e.to == top.to)).collect();
    let cut = refnet::Graph::with_nodes(g.nodes().to_vec(), rest, false).unwrap();
    assert_eq!(cut.connected_components().num_communities(), 2);
}
