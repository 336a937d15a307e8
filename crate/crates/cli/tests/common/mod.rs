#![allow(dead_code)]

use refnet::{Edge, Graph, NodeLabel};
use refnet_oracle::WEdge;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Set to regenerate the golden files instead of comparing against them.
pub const BLESS_VAR: &str = "REFNET_BLESS";

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn fixture(name: &str) -> PathBuf {
    tests_dir().join("fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    tests_dir().join("golden").join(name)
}

/// Runs the `refnet` binary.
pub fn refnet<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_refnet")).args(args).output().expect("refnet binary runs")
}

/// Runs `refnet` and returns stdout, panicking with stderr on failure.
pub fn refnet_ok<I, S>(args: I) -> Vec<u8>
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = refnet(args);
    assert!(out.status.success(), "refnet failed ({}): {}", out.status, String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Compares `actual` with the golden file `name`, or rewrites it when
/// blessing.
pub fn check_golden(name: &str, actual: &[u8]) {
    let path = golden(name);
    if std::env::var_os(BLESS_VAR).is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path)
        .unwrap_or_else(|e| panic!("missing golden file {} ({e}); rerun with {BLESS_VAR}=1", path.display()));
    if expected != actual {
        let first = expected.iter().zip(actual).position(|(a, b)| a != b).unwrap_or(expected.len().min(actual.len()));
        panic!(
            "{name} differs from golden file at byte {first} (expected {} bytes, got {})\n--- got ---\n{}",
            expected.len(),
            actual.len(),
            String::from_utf8_lossy(actual)
        );
    }
}

/// Graph with nodes `n0..n{n-1}` in index order.
pub fn to_graph(n: usize, directed: bool, edges: &[WEdge]) -> Graph {
    let nodes = (0..n).map(|i| NodeLabel::new(format!("n{i}")).unwrap()).collect();
    let edges = edges.iter().map(|&(a, b, w)| Edge::new(format!("n{a}"), format!("n{b}"), w).unwrap()).collect();
    Graph::with_nodes(nodes, edges, directed).unwrap()
}

/// Index of a node named by [`to_graph`].
pub fn index(label: &NodeLabel) -> usize {
    label.as_str()[1..].parse().unwrap()
}

/// The edges of `g` as oracle triples over its node indices.
pub fn oracle_edges(g: &Graph) -> Vec<WEdge> {
    g.links().iter().map(|l| (l.source, l.target, l.weight)).collect()
}
