//! Slow, obviously-correct reference implementations.
//!
//! Nothing here depends on `refnet`; graphs are plain `(n, edge list)` pairs
//! over node indices `0..n`. Every routine favours transparency over speed:
//! modularity is a dense double loop over node pairs, betweenness enumerates
//! every shortest path explicitly, and the global modularity optimum is found
//! by walking all set partitions.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, VecDeque};

/// A weighted edge `(from, to, weight)`.
pub type WEdge = (usize, usize, u64);

/// Dense adjacency matrix. Directed graphs put `w` at `[i][j]`; undirected
/// graphs put it at both `[i][j]` and `[j][i]`, so a loop lands twice on the
/// diagonal.
pub fn adjacency(n: usize, directed: bool, edges: &[WEdge]) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j, w) in edges {
        a[i][j] += w as f64;
        if !directed {
            a[j][i] += w as f64;
        }
    }
    a
}

/// Modularity by explicit double loop over all ordered node pairs.
pub fn dense_modularity(n: usize, directed: bool, edges: &[WEdge], membership: &[usize]) -> f64 {
    let a = adjacency(n, directed, edges);
    let m: f64 = edges.iter().map(|e| e.2 as f64).sum();
    let out: Vec<f64> = (0..n).map(|i| a[i].iter().sum()).collect();
    let inn: Vec<f64> = (0..n).map(|j| (0..n).map(|i| a[i][j]).sum()).collect();
    let norm = if directed { m } else { 2.0 * m };
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if membership[i] == membership[j] {
                q += a[i][j] - out[i] * inn[j] / norm;
            }
        }
    }
    q / norm
}

/// All set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            if i == 0 && c > 0 {
                break;
            }
            cur.push(c);
            let next_max = if i == 0 { 0 } else { max.max(c) };
            rec(i + 1, n, cur, next_max, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// Bell numbers, for sanity-checking [`set_partitions`].
pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Maximum modularity over every set partition, with the first maximiser.
pub fn max_modularity(n: usize, directed: bool, edges: &[WEdge]) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for p in set_partitions(n) {
        let q = dense_modularity(n, directed, edges, &p);
        if q > best.0 {
            best = (q, p);
        }
    }
    best
}

/// Distinct non-loop node pairs; undirected pairs are stored as `(min, max)`.
fn distinct_links(directed: bool, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut seen = Vec::new();
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        let key = if directed { (a, b) } else { (a.min(b), a.max(b)) };
        if !seen.contains(&key) {
            seen.push(key);
        }
    }
    seen
}

fn bfs_dist(n: usize, adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

/// Edge betweenness by enumerating every shortest path between every pair.
///
/// Parallel edges are merged and loops ignored (they score 0 and are absent
/// from the result). Keys are `(from, to)` for directed graphs and
/// `(min, max)` for undirected ones. Directed graphs sum over ordered pairs,
/// undirected graphs over unordered pairs.
pub fn all_paths_betweenness(n: usize, directed: bool, edges: &[(usize, usize)]) -> BTreeMap<(usize, usize), f64> {
    let links = distinct_links(directed, edges);
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &links {
        adj[a].push(b);
        if !directed {
            adj[b].push(a);
        }
    }
    let mut score: BTreeMap<(usize, usize), f64> = links.iter().map(|&k| (k, 0.0)).collect();
    let key = |a: usize, b: usize| if directed { (a, b) } else { (a.min(b), a.max(b)) };

    for s in 0..n {
        let dist = bfs_dist(n, &adj, s);
        for (t, &reach) in dist.iter().enumerate() {
            if t == s || (!directed && t < s) {
                continue;
            }
            let Some(d) = reach else { continue };
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let v = *path.last().unwrap();
                if path.len() - 1 == d {
                    if v == t {
                        paths.push(path);
                    }
                    continue;
                }
                for &w in &adj[v] {
                    if !path.contains(&w) {
                        let mut p = path.clone();
                        p.push(w);
                        stack.push(p);
                    }
                }
            }
            let total = paths.len() as f64;
            for p in &paths {
                for step in p.windows(2) {
                    *score.get_mut(&key(step[0], step[1])).unwrap() += 1.0 / total;
                }
            }
        }
    }
    score
}

/// Sum of shortest-path lengths over node pairs joined by a path: ordered
/// pairs when directed, unordered otherwise.
pub fn distance_sum(n: usize, directed: bool, edges: &[(usize, usize)]) -> usize {
    let links = distinct_links(directed, edges);
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &links {
        adj[a].push(b);
        if !directed {
            adj[b].push(a);
        }
    }
    let mut total = 0;
    for s in 0..n {
        total += bfs_dist(n, &adj, s).iter().flatten().sum::<usize>();
    }
    if directed {
        total
    } else {
        total / 2
    }
}

/// Random multigraph with `2..=max_nodes` nodes. Every node touches at
/// least one edge, and nodes are relabelled so that first appearance in the
/// edge list is exactly `0..n`.
pub fn random_graph(seed: u64, max_nodes: usize, loops: bool, max_weight: u64) -> (usize, Vec<WEdge>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_nodes);
    let density: f64 = rng.gen_range(0.15..0.8);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j && !loops {
                continue;
            }
            let p = if i == j { density / 3.0 } else { density };
            if rng.gen_bool(p) {
                edges.push((i, j, rng.gen_range(1..=max_weight)));
            }
        }
    }
    for i in 0..n {
        if !edges.iter().any(|&(a, b, _)| (a == i || b == i) && a != b) {
            let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
            edges.push((j, i, 1));
        }
    }
    if rng.gen_bool(0.3) {
        let e = edges[rng.gen_range(0..edges.len())];
        edges.push(e);
    }
    // Shuffled so the first-appearance order is not just 0..n.
    edges.shuffle(&mut rng);
    let mut relabel = vec![usize::MAX; n];
    let mut next = 0;
    for &(a, b, _) in &edges {
        for v in [a, b] {
            if relabel[v] == usize::MAX {
                relabel[v] = next;
                next += 1;
            }
        }
    }
    let edges = edges.into_iter().map(|(a, b, w)| (relabel[a], relabel[b], w)).collect();
    (n, edges)
}
