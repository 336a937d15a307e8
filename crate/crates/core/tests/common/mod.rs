#![allow(dead_code)]

use refnet::{Edge, Graph, NodeLabel};
use refnet_oracle::WEdge;

/// Graph with nodes `n0..n{n-1}` in index order, so oracle indices and
/// graph indices coincide.
pub fn to_graph(n: usize, directed: bool, edges: &[WEdge]) -> Graph {
    let nodes = (0..n).map(|i| NodeLabel::new(format!("n{i}")).unwrap()).collect();
    let edges = edges.iter().map(|&(a, b, w)| Edge::new(format!("n{a}"), format!("n{b}"), w).unwrap()).collect();
    Graph::with_nodes(nodes, edges, directed).unwrap()
}

pub fn random(seed: u64, max_nodes: usize, directed: bool) -> (usize, Vec<WEdge>, Graph) {
    let (n, edges) = refnet_oracle::random_graph(seed, max_nodes, true, 5);
    let g = to_graph(n, directed, &edges);
    (n, edges, g)
}
