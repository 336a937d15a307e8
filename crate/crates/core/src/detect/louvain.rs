//! Louvain modularity optimisation for undirected weighted graphs.
//!
//! Each pass runs local moving (phase 1) to convergence and then folds every
//! community into a super-node (phase 2). Edges inside a community become a
//! loop on its super-node, so degrees and `m` are unchanged by aggregation.
//! Passes repeat until one makes no move.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modularity::{modularity, Partition};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A move must raise Q by more than this to be taken.
pub const MIN_GAIN: f64 = 1e-12;

/// Flat memberships observed while Louvain runs, for checking monotonicity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LouvainTrace {
    pub passes: Vec<PassTrace>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PassTrace {
    /// Membership of the original nodes after each accepted move.
    pub moves: Vec<Vec<usize>>,
    /// Membership of the original nodes when the pass ends.
    pub result: Vec<usize>,
}

pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    run(g, seed, None)
}

/// [`louvain`], also recording every intermediate membership.
pub fn louvain_traced(g: &Graph, seed: u64) -> Result<(Partition, LouvainTrace)> {
    let mut trace = LouvainTrace::default();
    let p = run(g, seed, Some(&mut trace))?;
    Ok((p, trace))
}

/// Weighted undirected graph in the form the local-moving phase needs.
struct Level {
    /// Neighbour weights, loops excluded; parallel edges already summed.
    adj: Vec<Vec<(usize, f64)>>,
    /// Raw loop weight per node (each contributes twice to degree).
    loops: Vec<f64>,
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let s = g.simplify();
        let n = s.node_count();
        let mut adj = vec![Vec::new(); n];
        let mut loops = vec![0.0; n];
        for l in s.links() {
            let w = l.weight as f64;
            if l.is_loop() {
                loops[l.source] += w;
            } else {
                adj[l.source].push((l.target, w));
                adj[l.target].push((l.source, w));
            }
        }
        Level::finish(adj, loops)
    }

    fn finish(adj: Vec<Vec<(usize, f64)>>, loops: Vec<f64>) -> Self {
        let degree =
            adj.iter().zip(&loops).map(|(nbrs, l)| nbrs.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l).collect();
        Level { adj, loops, degree }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community of `comm` (canonical ids `0..k`) to a node.
    fn aggregate(&self, comm: &[usize], k: usize) -> Level {
        let mut loops = vec![0.0; k];
        let mut weights: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        for v in 0..self.len() {
            let cv = comm[v];
            loops[cv] += self.loops[v];
            for &(u, w) in &self.adj[v] {
                let cu = comm[u];
                if cu == cv {
                    // seen from both endpoints
                    loops[cv] += w / 2.0;
                } else {
                    match weights[cv].iter_mut().find(|(c, _)| *c == cu) {
                        Some(entry) => entry.1 += w,
                        None => weights[cv].push((cu, w)),
                    }
                }
            }
        }
        Level::finish(weights, loops)
    }
}

fn run(g: &Graph, seed: u64, mut trace: Option<&mut LouvainTrace>) -> Result<Partition> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    let m = g.total_weight() as f64;
    if m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level::from_graph(g);
    // flat[i] = super-node holding original node i
    let mut flat: Vec<usize> = (0..g.node_count()).collect();

    loop {
        let mut pass = PassTrace::default();
        let (comm, moved) = local_moving(&level, m, &mut rng, |comm| {
            if trace.is_some() {
                pass.moves.push(flat.iter().map(|&s| comm[s]).collect());
            }
        });
        if !moved {
            break;
        }
        let canonical = Partition::from_membership(&comm);
        for s in flat.iter_mut() {
            *s = canonical.community_of(*s);
        }
        if let Some(t) = trace.as_deref_mut() {
            pass.result = flat.clone();
            t.passes.push(pass);
        }
        level = level.aggregate(canonical.membership(), canonical.num_communities());
    }

    let p = Partition::from_membership(&flat);
    let q = modularity(g, &p)?;
    Ok(p.with_q(q))
}

/// Phase 1. Returns the community of every node of `level` and whether any
/// node moved. `on_move` sees the membership after each accepted move.
fn local_moving(level: &Level, m: f64, rng: &mut ChaCha8Rng, mut on_move: impl FnMut(&[usize])) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<f64> = level.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    // weight from the current node into each community, plus touched list
    let mut link_weight = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &v in &order {
            let own = comm[v];
            let k = level.degree[v];
            for &(u, w) in &level.adj[v] {
                let c = comm[u];
                if link_weight[c] == 0.0 && !touched.contains(&c) {
                    touched.push(c);
                }
                link_weight[c] += w;
            }
            tot[own] -= k;
            let gain = |c: usize| link_weight[c] / m - tot[c] * k / (2.0 * m * m);
            let stay = gain(own);
            let mut best = own;
            let mut best_gain = 0.0;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let delta = gain(c) - stay;
                if delta > best_gain {
                    best = c;
                    best_gain = delta;
                }
            }
            if best != own && best_gain > MIN_GAIN {
                comm[v] = best;
                moved = true;
            }
            tot[comm[v]] += k;
            for &c in &touched {
                link_weight[c] = 0.0;
            }
            touched.clear();
            if comm[v] != own {
                on_move(&comm);
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (comm, moved_any)
}
