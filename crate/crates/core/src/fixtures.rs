//! Small named graphs with known community structure.

use crate::graph::{Edge, Graph};

/// Triangles `{1,2,3}` and `{4,5,6}` joined by the bridge `3–4`.
///
/// The directed variant orients every edge both ways.
pub fn bridge_of_triangles(directed: bool) -> Graph {
    let pairs = [("1", "2"), ("1", "3"), ("2", "3"), ("3", "4"), ("4", "5"), ("4", "6"), ("5", "6")];
    let mut edges: Vec<Edge> = pairs.iter().map(|&(a, b)| Edge::unit(a, b)).collect();
    if directed {
        edges.extend(pairs.iter().map(|&(a, b)| Edge::unit(b, a)));
    }
    Graph::build(edges, directed).expect("fixture is valid")
}

/// Two 4-cliques `{a1..a4}` and `{b1..b4}` joined by the unit edge `a4–b1`.
pub fn two_cliques() -> Graph {
    let mut edges = Vec::new();
    for side in ["a", "b"] {
        for i in 1..=4 {
            for j in i + 1..=4 {
                edges.push(Edge::unit(&format!("{side}{i}"), &format!("{side}{j}")));
            }
        }
    }
    edges.push(Edge::unit("a4", "b1"));
    Graph::build(edges, false).expect("fixture is valid")
}

/// Undirected triangle `a, b, c`.
pub fn triangle() -> Graph {
    Graph::build(vec![Edge::unit("a", "b"), Edge::unit("b", "c"), Edge::unit("c", "a")], false)
        .expect("fixture is valid")
}
