//! Partitions and the modularity score they are judged by.
//!
//! Directed graphs use
//! `Q = (1/m) Σ_ij (A_ij − k_i^out k_j^in / m) [c_i = c_j]`,
//! undirected graphs the symmetric form
//! `Q = (1/2m) Σ_ij (A_ij − k_i k_j / 2m) [c_i = c_j]`
//! where a loop of weight `w` puts `2w` on the diagonal of `A`. `A_ij` is
//! the summed weight of all edges between the two nodes. Both reduce to a
//! per-community sum, which is what [`modularity`] evaluates.

use crate::error::{Error, Result};
use crate::graph::{DegreeMode, Graph, NodeLabel};
use std::collections::HashMap;

/// Two Q values closer than this are treated as equal when ranking partitions.
pub const Q_TIE_TOLERANCE: f64 = 1e-12;

/// A node → community assignment indexed by node position in the graph.
///
/// Community ids are always contiguous `0..k` and numbered by first
/// appearance, so two partitions grouping nodes the same way compare equal
/// whatever ids they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    membership: Vec<usize>,
    num_communities: usize,
    q: Option<f64>,
}

impl Partition {
    pub fn from_membership(raw: &[usize]) -> Self {
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let membership: Vec<usize> = raw
            .iter()
            .map(|c| {
                let next = relabel.len();
                *relabel.entry(*c).or_insert(next)
            })
            .collect();
        Partition { membership, num_communities: relabel.len(), q: None }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { membership: (0..n).collect(), num_communities: n, q: None }
    }

    pub fn whole(n: usize) -> Self {
        Partition { membership: vec![0; n], num_communities: usize::from(n > 0), q: None }
    }

    /// Builds a partition of `g` from groups of labels. Every node must appear
    /// in exactly one group.
    pub fn from_groups<S: AsRef<str>>(g: &Graph, groups: &[Vec<S>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; g.node_count()];
        for (c, group) in groups.iter().enumerate() {
            for label in group {
                let label = label.as_ref();
                let i = g.index_of(label).ok_or_else(|| Error::PartitionMismatch(format!("unknown node {label:?}")))?;
                if raw[i] != usize::MAX {
                    return Err(Error::PartitionMismatch(format!("node {label:?} listed twice")));
                }
                raw[i] = c;
            }
        }
        if let Some(i) = raw.iter().position(|&c| c == usize::MAX) {
            return Err(Error::PartitionMismatch(format!("node {:?} not assigned", g.label(i).as_str())));
        }
        Ok(Partition::from_membership(&raw))
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.membership[node]
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    /// Node indices per community, each list in node order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_communities];
        for (node, &c) in self.membership.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// Labels per community, each list in node order.
    pub fn labeled<'g>(&self, g: &'g Graph) -> Vec<Vec<&'g NodeLabel>> {
        self.communities().into_iter().map(|c| c.into_iter().map(|i| g.label(i)).collect()).collect()
    }

    /// Same grouping, ignoring any stored Q.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.membership == other.membership
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<()> {
        if self.membership.len() != g.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes but the graph has {}",
                self.membership.len(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Modularity of `p` on `g`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    p.check(g)?;
    let m = g.total_weight() as f64;
    if m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let k = p.num_communities();
    let mut internal = vec![0.0f64; k];
    for l in g.links() {
        if p.community_of(l.source) == p.community_of(l.target) {
            internal[p.community_of(l.source)] += l.weight as f64;
        }
    }
    let q = if g.is_directed() {
        let mut out_sum = vec![0.0f64; k];
        let mut in_sum = vec![0.0f64; k];
        for (i, (o, n)) in g.degrees(DegreeMode::Out).into_iter().zip(g.degrees(DegreeMode::In)).enumerate() {
            out_sum[p.community_of(i)] += o as f64;
            in_sum[p.community_of(i)] += n as f64;
        }
        (0..k).map(|c| internal[c] / m - out_sum[c] * in_sum[c] / (m * m)).sum()
    } else {
        let mut tot = vec![0.0f64; k];
        for (i, d) in g.degrees(DegreeMode::Total).into_iter().enumerate() {
            tot[p.community_of(i)] += d as f64;
        }
        (0..k)
            .map(|c| {
                let share = tot[c] / (2.0 * m);
                internal[c] / m - share * share
            })
            .sum()
    };
    Ok(q)
}

/// True when `a` beats `b`: higher Q, or Q tied within [`Q_TIE_TOLERANCE`]
/// and fewer communities. Equal on both counts keeps `b`.
pub(crate) fn beats(a_q: f64, a_k: usize, b_q: f64, b_k: usize) -> bool {
    if a_q > b_q + Q_TIE_TOLERANCE {
        return true;
    }
    (a_q - b_q).abs() <= Q_TIE_TOLERANCE && a_k < b_k
}

/// Picks the highest-Q candidate; ties go to fewer communities, then to the
/// earliest candidate. The winner comes back with its Q filled in.
pub fn best_partition_over(g: &Graph, candidates: &[Partition]) -> Result<Partition> {
    let mut best: Option<(f64, &Partition)> = None;
    for p in candidates {
        let q = modularity(g, p)?;
        match best {
            Some((bq, bp)) if !beats(q, p.num_communities(), bq, bp.num_communities()) => {}
            _ => best = Some((q, p)),
        }
    }
    let (q, p) = best.ok_or(Error::NoCandidates)?;
    Ok(p.clone().with_q(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Edge;

    #[test]
    fn canonical_ids() {
        let p = Partition::from_membership(&[7, 3, 7, 9]);
        assert_eq!(p.membership(), &[0, 1, 0, 2]);
        assert_eq!(p.num_communities(), 3);
        assert_eq!(p, Partition::from_membership(&[1, 0, 1, 5]));
    }

    #[test]
    fn single_loop_is_zero() {
        let g = Graph::build(vec![Edge::unit("a", "a")], true).unwrap();
        assert_eq!(modularity(&g, &Partition::whole(1)).unwrap(), 0.0);
    }

    #[test]
    fn two_cycle() {
        let g = Graph::build(vec![Edge::unit("a", "b"), Edge::unit("b", "a")], true).unwrap();
        assert_eq!(modularity(&g, &Partition::singletons(2)).unwrap(), -0.5);
        assert_eq!(modularity(&g, &Partition::whole(2)).unwrap(), 0.0);
    }

    #[test]
    fn bridge_of_triangles() {
        let g = fixtures::bridge_of_triangles(false);
        let q = modularity(&g, &Partition::from_membership(&[0, 0, 0, 1, 1, 1])).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12, "{q}");
    }

    #[test]
    fn mismatch_errors() {
        let g = Graph::build(vec![Edge::unit("a", "b")], true).unwrap();
        assert!(matches!(modularity(&g, &Partition::whole(3)), Err(Error::PartitionMismatch(_))));
        assert!(matches!(Partition::from_groups(&g, &[vec!["a"]]), Err(Error::PartitionMismatch(_))));
        assert!(matches!(Partition::from_groups(&g, &[vec!["a", "b"], vec!["a"]]), Err(Error::PartitionMismatch(_))));
    }

    #[test]
    fn best_over_candidates() {
        let g = Graph::build(vec![Edge::unit("a", "b"), Edge::unit("b", "a")], true).unwrap();
        let best = best_partition_over(&g, &[Partition::singletons(2), Partition::whole(2)]).unwrap();
        assert!(best.same_grouping(&Partition::whole(2)));
        assert_eq!(best.q(), Some(0.0));

        let only = best_partition_over(&g, &[Partition::singletons(2)]).unwrap();
        assert_eq!(only.q(), Some(-0.5));

        assert_eq!(best_partition_over(&g, &[]), Err(Error::NoCandidates));
    }

    #[test]
    fn ties_prefer_fewer_communities() {
        // c and d are isolated, so splitting or joining them leaves Q at 0.
        let g = Graph::with_nodes(
            ["a", "b", "c", "d"].iter().map(|s| NodeLabel::new(s).unwrap()).collect(),
            vec![Edge::unit("a", "b"), Edge::unit("b", "a")],
            true,
        )
        .unwrap();
        let three = Partition::from_membership(&[0, 0, 1, 2]);
        let two = Partition::from_membership(&[0, 0, 1, 1]);
        assert_eq!(modularity(&g, &three).unwrap(), modularity(&g, &two).unwrap());
        let best = best_partition_over(&g, &[three.clone(), two.clone()]).unwrap();
        assert!(best.same_grouping(&two));
        // equal Q and equal size: earliest wins
        let other_two = Partition::from_membership(&[0, 0, 0, 1]);
        let best = best_partition_over(&g, &[two.clone(), other_two]).unwrap();
        assert!(best.same_grouping(&two));
    }
}
