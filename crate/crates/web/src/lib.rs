//! Browser bindings for the refnet demo page.
//!
//! The page keeps an edge list as CSV text. `synth` fills it from a
//! synthetic cohort; `detect` runs one algorithm on it and returns a JSON
//! view with per-node degrees, community ids and, for the divisive
//! algorithms, the modularity of every dendrogram level.

use refnet::detect::{detect, Algorithm, DetectOptions};
use refnet::graph::{parse_edge_list, write_edge_list};
use refnet::ingest::{build_referral_edges, generate_synthetic_enrollments, SynthConfig};
use refnet::{DegreeMode, Graph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct NodeView {
    pub id: String,
    pub community: usize,
    pub referrals_in: u64,
    pub referrals_out: u64,
    pub total: u64,
}

#[derive(Debug, Serialize)]
pub struct EdgeView {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
}

#[derive(Debug, Serialize)]
pub struct LevelView {
    pub num_communities: usize,
    pub q: f64,
}

#[derive(Debug, Serialize)]
pub struct DetectionView {
    pub algorithm: String,
    pub q: f64,
    pub num_communities: usize,
    pub nodes: Vec<NodeView>,
    pub edges: Vec<EdgeView>,
    pub levels: Vec<LevelView>,
    pub best_level: Option<usize>,
}

/// Edge list CSV for a synthetic cohort drawn from the reference
/// configuration with the given referral probabilities.
pub fn synth_edge_list(seed: u64, n_subjects: usize, repeat: f64, group: f64) -> Result<String, String> {
    let config =
        SynthConfig { n_subjects, repeat_probability: repeat, group_probability: group, ..SynthConfig::reference() };
    let records = generate_synthetic_enrollments(seed, &config).map_err(|e| e.to_string())?;
    let g = Graph::build(build_referral_edges(&records), true).map_err(|e| e.to_string())?;
    Ok(write_edge_list(&g))
}

/// Runs `algorithm` (`gn`, `louvain` or `sp`) on a directed edge list.
pub fn detect_view(edges_csv: &str, algorithm: &str, seed: u64) -> Result<DetectionView, String> {
    let g = parse_edge_list(edges_csv.as_bytes(), true).map_err(|e| e.to_string())?;
    let algorithm: Algorithm = algorithm.parse().map_err(|e: refnet::Error| e.to_string())?;
    let d = detect(&g, algorithm, DetectOptions { seed, ..DetectOptions::default() }).map_err(|e| e.to_string())?;
    let (ins, outs) = (g.degrees(DegreeMode::In), g.degrees(DegreeMode::Out));
    let nodes = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, label)| NodeView {
            id: label.to_string(),
            community: d.partition.community_of(i) + 1,
            referrals_in: ins[i],
            referrals_out: outs[i],
            total: ins[i] + outs[i],
        })
        .collect();
    let s = g.simplify();
    let edges = s.links().iter().map(|l| EdgeView { from: l.source, to: l.target, weight: l.weight }).collect();
    let levels = d
        .dendrogram
        .as_ref()
        .map(|den| {
            den.levels.iter().map(|l| LevelView { num_communities: l.partition.num_communities(), q: l.q }).collect()
        })
        .unwrap_or_default();
    Ok(DetectionView {
        algorithm: algorithm.to_string(),
        q: d.q_input,
        num_communities: d.partition.num_communities(),
        nodes,
        edges,
        levels,
        best_level: d.dendrogram.as_ref().map(|den| den.best_index),
    })
}

fn js_error(message: String) -> JsError {
    JsError::new(&message)
}

/// Edge list CSV for a synthetic cohort.
#[wasm_bindgen]
pub fn synth(seed: u32, n_subjects: u32, repeat: f64, group: f64) -> Result<String, JsError> {
    synth_edge_list(seed.into(), n_subjects as usize, repeat, group).map_err(js_error)
}

/// Detection result as a JSON string.
#[wasm_bindgen(js_name = detect)]
pub fn detect_json(edges_csv: &str, algorithm: &str, seed: u32) -> Result<String, JsError> {
    let view = detect_view(edges_csv, algorithm, seed.into()).map_err(js_error)?;
    serde_json::to_string(&view).map_err(|e| js_error(e.to_string()))
}
