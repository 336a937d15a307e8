//! Community detection: Girvan-Newman, Louvain and Smith-Pittman.
//!
//! Girvan-Newman repeatedly deletes the edge of highest betweenness.
//! Smith-Pittman does the same but only considers edges touching the node of
//! highest weighted degree at that step, so hubs are peeled off first.
//! Both return a [`Dendrogram`] whose levels are scored on the input graph;
//! the reported communities are the level of maximum modularity. Louvain is a
//! greedy agglomerative optimiser and needs an undirected graph.

mod divisive;
mod louvain;

pub use divisive::SpScope;
pub use louvain::{louvain, louvain_traced, LouvainTrace, PassTrace, MIN_GAIN};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeLabel};
use crate::modularity::Partition;
use divisive::{divide, Rule};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    GirvanNewman,
    Louvain,
    SmithPittman,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::GirvanNewman, Algorithm::Louvain, Algorithm::SmithPittman];

    /// Short name used on the command line and in output files.
    pub fn code(self) -> &'static str {
        match self {
            Algorithm::GirvanNewman => "gn",
            Algorithm::Louvain => "louvain",
            Algorithm::SmithPittman => "sp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::GirvanNewman => "Girvan-Newman",
            Algorithm::Louvain => "Louvain",
            Algorithm::SmithPittman => "Smith-Pittman",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gn" | "girvan-newman" => Ok(Algorithm::GirvanNewman),
            "louvain" => Ok(Algorithm::Louvain),
            "sp" | "smith-pittman" => Ok(Algorithm::SmithPittman),
            other => Err(Error::Format(other.to_string())),
        }
    }
}

/// One dendrogram level: the partition after `removed` split a component.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub removed: Option<Edge>,
    pub partition: Partition,
    pub q: f64,
}

/// One edge deletion, in removal order.
#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub edge: Edge,
    pub betweenness: f64,
    /// Smith-Pittman only: the highest-degree node the edge was taken from.
    pub focal: Option<NodeLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub levels: Vec<Level>,
    pub best_index: usize,
    pub removals: Vec<Removal>,
}

impl Dendrogram {
    /// The maximum-modularity partition, with Q set.
    pub fn best(&self) -> &Partition {
        &self.levels[self.best_index].partition
    }
}

pub fn girvan_newman(g: &Graph) -> Result<Dendrogram> {
    divide(g, Rule::GirvanNewman)
}

pub fn smith_pittman(g: &Graph) -> Result<Dendrogram> {
    divide(g, Rule::SmithPittman(SpScope::Ego))
}

pub fn smith_pittman_with(g: &Graph, scope: SpScope) -> Result<Dendrogram> {
    divide(g, Rule::SmithPittman(scope))
}

/// The outcome of one algorithm on one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub algorithm: Algorithm,
    /// Best partition; its Q is measured on the graph the algorithm ran on
    /// (the undirected collapse, for Louvain on directed input).
    pub partition: Partition,
    /// Q of the same partition on the input graph as given.
    pub q_input: f64,
    pub dendrogram: Option<Dendrogram>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectOptions {
    pub seed: u64,
    pub sp_scope: SpScope,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { seed: 0, sp_scope: SpScope::Ego }
    }
}

/// Runs one algorithm. Louvain is given the undirected collapse of a
/// directed graph.
pub fn detect(g: &Graph, algorithm: Algorithm, options: DetectOptions) -> Result<Detection> {
    let (partition, dendrogram) = match algorithm {
        Algorithm::GirvanNewman => {
            let d = girvan_newman(g)?;
            (d.best().clone(), Some(d))
        }
        Algorithm::SmithPittman => {
            let d = smith_pittman_with(g, options.sp_scope)?;
            (d.best().clone(), Some(d))
        }
        Algorithm::Louvain => {
            let p =
                if g.is_directed() { louvain(&g.to_undirected()?, options.seed)? } else { louvain(g, options.seed)? };
            (p, None)
        }
    };
    let q_input = crate::modularity::modularity(g, &partition)?;
    Ok(Detection { algorithm, partition, q_input, dendrogram })
}

/// All three algorithms on one graph, in [`Algorithm::ALL`] order.
pub fn run_all(g: &Graph, seed: u64) -> Result<Vec<Detection>> {
    let options = DetectOptions { seed, ..DetectOptions::default() };
    Algorithm::ALL.iter().map(|&a| detect(g, a, options)).collect()
}
