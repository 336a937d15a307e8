//! Edge-betweenness and degree centrality.
//!
//! Betweenness of an edge `e` is `Σ g_iej / g_ij` over node pairs, with
//! `g_ij` the number of shortest `i → j` paths and `g_iej` the number of
//! those through `e`. Paths are counted on the simplified graph with unit
//! edge lengths; movement counts do not change distances. Directed graphs sum
//! over ordered pairs, undirected graphs over unordered pairs. Loops lie on no
//! shortest path and always score 0.
//!
//! The sum is accumulated per source over its shortest-path DAG (Brandes'
//! dependency recursion, applied to edges). Sources are visited in node order
//! so results are bit-for-bit reproducible.

use crate::graph::{DegreeMode, Graph, NodeLabel};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScore {
    pub from: NodeLabel,
    pub to: NodeLabel,
    pub score: f64,
}

/// Betweenness for every edge of the simplified graph, in its edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeBetweennessScores {
    directed: bool,
    entries: Vec<EdgeScore>,
}

impl EdgeBetweennessScores {
    pub fn entries(&self) -> &[EdgeScore] {
        &self.entries
    }

    /// Score of the edge `from → to` (either orientation when undirected).
    pub fn get(&self, from: &str, to: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| {
                (e.from.as_str() == from && e.to.as_str() == to)
                    || (!self.directed && e.from.as_str() == to && e.to.as_str() == from)
            })
            .map(|e| e.score)
    }

    pub fn max(&self) -> Option<&EdgeScore> {
        self.entries.iter().fold(None, |best: Option<&EdgeScore>, e| match best {
            Some(b) if b.score >= e.score => Some(b),
            _ => Some(e),
        })
    }
}

pub fn edge_betweenness(g: &Graph) -> EdgeBetweennessScores {
    let s = g.simplify();
    let pairs: Vec<(usize, usize)> = s.links().iter().map(|l| (l.source, l.target)).collect();
    let scores = betweenness(s.node_count(), s.is_directed(), &pairs);
    let entries = s
        .links()
        .iter()
        .zip(scores)
        .map(|(l, score)| EdgeScore { from: s.label(l.source).clone(), to: s.label(l.target).clone(), score })
        .collect();
    EdgeBetweennessScores { directed: g.is_directed(), entries }
}

/// Edge betweenness over `0..n` for the given links, aligned with `links`.
///
/// Links are expected to be distinct (no parallel copies); loops are allowed
/// and score 0.
pub(crate) fn betweenness(n: usize, directed: bool, links: &[(usize, usize)]) -> Vec<f64> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in links.iter().enumerate() {
        if a == b {
            continue;
        }
        adj[a].push((b, e));
        if !directed {
            adj[b].push((a, e));
        }
    }

    let mut score = vec![0.0f64; links.len()];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        for v in 0..n {
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
            preds[v].clear();
        }
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, e) in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push((v, e));
                }
            }
        }
        for &w in order.iter().rev() {
            for &(v, e) in &preds[w] {
                let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                score[e] += c;
                delta[v] += c;
            }
        }
    }

    if !directed {
        // every unordered pair was walked from both ends
        for x in &mut score {
            *x /= 2.0;
        }
    }
    score
}

/// Weighted total degree per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeScores(pub Vec<(NodeLabel, u64)>);

impl DegreeScores {
    pub fn get(&self, node: &str) -> Option<u64> {
        self.0.iter().find(|(l, _)| l.as_str() == node).map(|(_, d)| *d)
    }
}

pub fn degree_centrality(g: &Graph) -> DegreeScores {
    DegreeScores(g.nodes().iter().cloned().zip(g.degrees(DegreeMode::Total)).collect())
}
