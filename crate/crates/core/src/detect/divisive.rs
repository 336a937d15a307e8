//! Divisive edge removal shared by Girvan-Newman and Smith-Pittman.
//!
//! Both algorithms work on the simplified graph: each step recomputes edge
//! betweenness over the remaining edges, removes one edge, and records a new
//! dendrogram level whenever the weak components change. They differ only in
//! which edges are eligible for removal. Loops are never removed.

use super::{Dendrogram, Level, Removal};
use crate::centrality::betweenness;
use crate::error::{Error, Result};
use crate::graph::{components, Edge, Graph, Link};
use crate::modularity::{beats, modularity};

/// Relative tolerance for treating two betweenness scores as tied.
const SCORE_TIE_TOLERANCE: f64 = 1e-9;

/// Which edges Smith-Pittman may remove at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpScope {
    /// Only edges incident to the current highest-degree node.
    #[default]
    Ego,
    /// Any edge; Smith-Pittman then coincides with Girvan-Newman.
    Global,
}

pub(super) enum Rule {
    GirvanNewman,
    SmithPittman(SpScope),
}

pub(super) fn divide(g: &Graph, rule: Rule) -> Result<Dendrogram> {
    if g.total_weight() == 0 {
        return Err(Error::EmptyGraph);
    }
    let s = g.simplify();
    let n = s.node_count();
    let directed = s.is_directed();
    let links: Vec<Link> = s.links().to_vec();
    let loop_degree: Vec<u64> = {
        let mut d = vec![0; n];
        for l in links.iter().filter(|l| l.is_loop()) {
            d[l.source] += 2 * l.weight;
        }
        d
    };
    let mut active: Vec<usize> = (0..links.len()).filter(|&i| !links[i].is_loop()).collect();

    let first = s.connected_components();
    let q0 = modularity(g, &first)?;
    let mut levels = vec![Level { removed: None, partition: first.with_q(q0), q: q0 }];
    let mut removals = Vec::new();

    while !active.is_empty() {
        let pairs: Vec<(usize, usize)> = active.iter().map(|&i| (links[i].source, links[i].target)).collect();
        let scores = betweenness(n, directed, &pairs);

        let (candidates, focal): (Vec<usize>, Option<usize>) = match rule {
            Rule::GirvanNewman | Rule::SmithPittman(SpScope::Global) => ((0..active.len()).collect(), None),
            Rule::SmithPittman(SpScope::Ego) => {
                let mut degree = loop_degree.clone();
                let mut removable = vec![false; n];
                for &i in &active {
                    let l = links[i];
                    degree[l.source] += l.weight;
                    degree[l.target] += l.weight;
                    removable[l.source] = true;
                    removable[l.target] = true;
                }
                // Nodes with only loops left cannot be split further.
                let hub = (0..n)
                    .filter(|&v| removable[v])
                    .fold(None, |best: Option<usize>, v| match best {
                        Some(b) if degree[b] >= degree[v] => Some(b),
                        _ => Some(v),
                    })
                    .expect("an active edge has endpoints");
                let ego = (0..active.len())
                    .filter(|&k| links[active[k]].source == hub || links[active[k]].target == hub)
                    .collect();
                (ego, Some(hub))
            }
        };

        let pick = pick_max(&candidates, &scores, |k| links[active[k]].key(directed));
        let link = links[active[pick]];
        debug_assert!(focal.is_none_or(|h| link.source == h || link.target == h));
        active.remove(pick);
        let removed = edge_of(&s, link);
        removals.push(Removal {
            edge: removed.clone(),
            betweenness: scores[pick],
            focal: focal.map(|v| s.label(v).clone()),
        });

        let partition = components(n, active.iter().map(|&i| (links[i].source, links[i].target)));
        if partition.num_communities() > levels.last().unwrap().partition.num_communities() {
            let q = modularity(g, &partition)?;
            levels.push(Level { removed: Some(removed), partition: partition.with_q(q), q });
        }
    }

    let mut best_index = 0;
    for (i, level) in levels.iter().enumerate().skip(1) {
        let best = &levels[best_index];
        if beats(level.q, level.partition.num_communities(), best.q, best.partition.num_communities()) {
            best_index = i;
        }
    }
    Ok(Dendrogram { levels, best_index, removals })
}

fn edge_of(g: &Graph, l: Link) -> Edge {
    Edge { from: g.label(l.source).clone(), to: g.label(l.target).clone(), weight: l.weight }
}

/// Position (into `scores`) of the highest-scoring candidate. Scores within
/// [`SCORE_TIE_TOLERANCE`] of each other tie, and ties go to the smallest
/// node-index key.
fn pick_max(candidates: &[usize], scores: &[f64], key: impl Fn(usize) -> (usize, usize)) -> usize {
    let mut best = candidates[0];
    for &k in &candidates[1..] {
        let tol = SCORE_TIE_TOLERANCE * scores[best].abs().max(1.0);
        if scores[k] > scores[best] + tol || ((scores[k] - scores[best]).abs() <= tol && key(k) < key(best)) {
            best = k;
        }
    }
    best
}
