//! Labeled weighted multigraphs with self-loops.
//!
//! A [`Graph`] is immutable once built. Nodes are kept in first-appearance
//! order and edges in input order, so every algorithm downstream can break
//! ties by insertion index and stay reproducible.
//!
//! Degree convention: a directed loop of weight `w` adds `w` to in-degree,
//! `w` to out-degree and `2w` to total degree; an undirected loop adds `2w`
//! to the (single) degree. With that convention the in-degrees and the
//! out-degrees of a directed graph each sum to `m`, and undirected degrees
//! sum to `2m`.

use crate::error::{Error, Result};
use crate::modularity::Partition;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Node identity: the full, whitespace-trimmed label text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeLabel(String);

impl NodeLabel {
    pub fn new(label: impl AsRef<str>) -> Result<Self> {
        let trimmed = label.as_ref().trim();
        if trimmed.is_empty() {
            return Err(Error::BadLabel(label.as_ref().to_string()));
        }
        Ok(NodeLabel(trimmed.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for NodeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodeLabel::new(s)
    }
}

impl TryFrom<String> for NodeLabel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        NodeLabel::new(s)
    }
}

impl From<NodeLabel> for String {
    fn from(label: NodeLabel) -> String {
        label.0
    }
}

impl std::borrow::Borrow<str> for NodeLabel {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for NodeLabel {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A labeled edge carrying a patient-movement count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeLabel,
    pub to: NodeLabel,
    pub weight: u64,
}

impl Edge {
    pub fn new(from: impl AsRef<str>, to: impl AsRef<str>, weight: u64) -> Result<Self> {
        let from = NodeLabel::new(from)?;
        let to = NodeLabel::new(to)?;
        if weight == 0 {
            return Err(Error::BadWeight { from: from.0, to: to.0 });
        }
        Ok(Edge { from, to, weight })
    }

    /// Unit-weight edge; panics on an empty label. Meant for tests and fixtures.
    pub fn unit(from: &str, to: &str) -> Self {
        Edge::new(from, to, 1).expect("valid edge")
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// An edge by node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Link {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
}

impl Link {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    /// Orientation-free key: `(source, target)` when directed, `(min, max)`
    /// otherwise.
    pub fn key(&self, directed: bool) -> (usize, usize) {
        if directed {
            (self.source, self.target)
        } else {
            (self.source.min(self.target), self.source.max(self.target))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<NodeLabel>,
    index: HashMap<NodeLabel, usize>,
    links: Vec<Link>,
    directed: bool,
}

impl Graph {
    /// Builds a multigraph from an edge list. Nodes are the union of edge
    /// endpoints in first-appearance order; parallel edges are kept.
    pub fn build(edges: Vec<Edge>, directed: bool) -> Result<Self> {
        Graph::with_nodes(Vec::new(), edges, directed)
    }

    /// Like [`Graph::build`], but registers `nodes` first so that isolated
    /// nodes can exist and the node order is fixed by the caller.
    pub fn with_nodes(nodes: Vec<NodeLabel>, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut g = Graph { nodes: Vec::new(), index: HashMap::new(), links: Vec::new(), directed };
        for n in nodes {
            g.intern(n);
        }
        for e in edges {
            if e.weight == 0 {
                return Err(Error::BadWeight { from: e.from.0, to: e.to.0 });
            }
            let source = g.intern(e.from);
            let target = g.intern(e.to);
            g.links.push(Link { source, target, weight: e.weight });
        }
        Ok(g)
    }

    pub(crate) fn from_links(nodes: Vec<NodeLabel>, links: Vec<Link>, directed: bool) -> Self {
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Graph { nodes, index, links, directed }
    }

    fn intern(&mut self, label: NodeLabel) -> usize {
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(label.clone(), i);
        self.nodes.push(label);
        i
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn label(&self, index: usize) -> &NodeLabel {
        &self.nodes[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label.trim()).copied()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.links.iter().map(|l| Edge {
            from: self.nodes[l.source].clone(),
            to: self.nodes[l.target].clone(),
            weight: l.weight,
        })
    }

    /// Total edge weight `m`.
    pub fn total_weight(&self) -> u64 {
        self.links.iter().map(|l| l.weight).sum()
    }

    /// Merges parallel edges (same direction when directed, same unordered
    /// pair otherwise), summing weights. Loops are kept; the node set and
    /// order are unchanged. Each merged edge sits where its first copy was.
    pub fn simplify(&self) -> Graph {
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        let mut links: Vec<Link> = Vec::new();
        for l in &self.links {
            match slot.get(&l.key(self.directed)) {
                Some(&i) => links[i].weight += l.weight,
                None => {
                    slot.insert(l.key(self.directed), links.len());
                    links.push(*l);
                }
            }
        }
        Graph::from_links(self.nodes.clone(), links, self.directed)
    }

    /// Collapses `a -> b` and `b -> a` into one undirected edge with the
    /// summed weight. The result is simplified.
    pub fn to_undirected(&self) -> Result<Graph> {
        if !self.directed {
            return Err(Error::NoOp);
        }
        let as_undirected = Graph::from_links(self.nodes.clone(), self.links.clone(), false);
        Ok(as_undirected.simplify())
    }

    /// Weighted degree of a node. Undirected graphs report the same value for
    /// every mode.
    pub fn degree(&self, node: &str, mode: DegreeMode) -> Result<u64> {
        let i = self.index_of(node).ok_or_else(|| Error::NodeNotFound(node.to_string()))?;
        Ok(self.degrees(mode)[i])
    }

    /// Weighted degree of every node, by node index.
    pub fn degrees(&self, mode: DegreeMode) -> Vec<u64> {
        let mut deg = vec![0u64; self.nodes.len()];
        for l in &self.links {
            if !self.directed {
                deg[l.source] += l.weight;
                deg[l.target] += l.weight;
                continue;
            }
            match mode {
                DegreeMode::Out => deg[l.source] += l.weight,
                DegreeMode::In => deg[l.target] += l.weight,
                DegreeMode::Total => {
                    deg[l.source] += l.weight;
                    deg[l.target] += l.weight;
                }
            }
        }
        deg
    }

    /// Weakly connected components, numbered by the smallest node index they
    /// contain.
    pub fn connected_components(&self) -> Partition {
        components(self.nodes.len(), self.links.iter().map(|l| (l.source, l.target)))
    }
}

/// Weak components of `0..n` under the given links, canonically numbered.
pub(crate) fn components(n: usize, links: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in links {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Partition::from_membership(&roots)
}

/// Reads the `from,to,weight` edge-list CSV.
pub fn parse_edge_list(bytes: &[u8], directed: bool) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes);
    let mut edges = Vec::new();
    let mut saw_header = false;
    for row in reader.records() {
        let row =
            row.map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = row.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = row.iter().map(str::trim).collect();
        if !saw_header {
            if fields != ["from", "to", "weight"] {
                return Err(Error::Parse {
                    line,
                    message: format!("expected header `from,to,weight`, found `{}`", fields.join(",")),
                });
            }
            saw_header = true;
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::Parse { line, message: format!("expected 3 fields, found {}", fields.len()) });
        }
        let weight: u64 = fields[2]
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("weight {:?} is not a positive integer", fields[2]) })?;
        let edge =
            Edge::new(fields[0], fields[1], weight).map_err(|e| Error::Parse { line, message: e.to_string() })?;
        edges.push(edge);
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, message: "missing header `from,to,weight`".into() });
    }
    Graph::build(edges, directed)
}

/// Writes the simplified graph as `from,to,weight` CSV.
pub fn write_edge_list(g: &Graph) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(["from", "to", "weight"]).expect("in-memory write");
    for e in g.simplify().edges() {
        writer.write_record([e.from.as_str(), e.to.as_str(), &e.weight.to_string()]).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("labels are UTF-8")
}
