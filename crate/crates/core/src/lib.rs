//! Referral networks and community detection.
//!
//! Builds directed, weighted, self-loop-bearing referral graphs from
//! longitudinal trial-enrollment records and partitions them with
//! Girvan-Newman, Louvain or Smith-Pittman, all judged by modularity.
//!
//! ```
//! use refnet::{detect, fixtures, modularity};
//!
//! let g = fixtures::bridge_of_triangles(false);
//! let d = detect::girvan_newman(&g).unwrap();
//! assert_eq!(d.best().num_communities(), 2);
//! let q = modularity::modularity(&g, d.best()).unwrap();
//! assert!((q - 5.0 / 14.0).abs() < 1e-12);
//! ```

pub mod centrality;
pub mod detect;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ingest;
pub mod modularity;
pub mod report;

pub use error::{Error, Result};
pub use graph::{DegreeMode, Edge, Graph, NodeLabel};
pub use modularity::Partition;
