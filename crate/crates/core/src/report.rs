//! Community tables, degree distributions and graph exports.
//!
//! Community ids are 1-based in everything written out; internally they are
//! 0-based. Q is always written with six decimals.

use crate::centrality::edge_betweenness;
use crate::detect::{Algorithm, Detection};
use crate::error::{Error, Result};
use crate::graph::{DegreeMode, Edge, Graph, NodeLabel};
use crate::modularity::Partition;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt::Write as _;
use std::str::FromStr;

/// Serializes an `f64` as a JSON number with exactly six decimals.
pub fn six_decimals<S: Serializer>(value: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(format!("{value:.6}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn six_decimals_opt<S: Serializer>(value: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => six_decimals(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommunityTableRow {
    pub community_id: usize,
    pub intervention: NodeLabel,
    pub referrals_in: u64,
    pub referrals_out: u64,
    pub total: u64,
}

/// One row per node, grouped by community and alphabetical within a group.
/// Needs the directed graph: in and out are weighted in/out-degrees.
pub fn community_table(g: &Graph, p: &Partition) -> Result<Vec<CommunityTableRow>> {
    if !g.is_directed() {
        return Err(Error::UndirectedInput);
    }
    p.check(g)?;
    let ins = g.degrees(DegreeMode::In);
    let outs = g.degrees(DegreeMode::Out);
    let mut rows: Vec<CommunityTableRow> = (0..g.node_count())
        .map(|i| CommunityTableRow {
            community_id: p.community_of(i) + 1,
            intervention: g.label(i).clone(),
            referrals_in: ins[i],
            referrals_out: outs[i],
            total: ins[i] + outs[i],
        })
        .collect();
    rows.sort_by(|a, b| (a.community_id, &a.intervention).cmp(&(b.community_id, &b.intervention)));
    Ok(rows)
}

pub fn render_community_table(title: &str, q: f64, rows: &[CommunityTableRow]) -> String {
    let width = rows.iter().map(|r| r.intervention.as_str().chars().count()).max().unwrap_or(0).max(12);
    let mut out = String::new();
    let _ = writeln!(out, "{title} (Q = {q:.6})");
    let _ =
        writeln!(out, "{:<width$}  {:>12}  {:>13}  {:>5}", "Intervention", "Referrals In", "Referrals Out", "Total");
    let mut current = None;
    for r in rows {
        if current != Some(r.community_id) {
            current = Some(r.community_id);
            let _ = writeln!(out, "Community: {}", r.community_id);
        }
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>13}  {:>5}",
            r.intervention.as_str(),
            r.referrals_in,
            r.referrals_out,
            r.total
        );
    }
    out
}

pub fn community_table_csv(rows: &[CommunityTableRow]) -> String {
    csv_string(
        ["community", "intervention", "referrals_in", "referrals_out", "total"],
        rows.iter().map(|r| {
            [
                r.community_id.to_string(),
                r.intervention.to_string(),
                r.referrals_in.to_string(),
                r.referrals_out.to_string(),
                r.total.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDistributionRow {
    pub rank: usize,
    pub intervention: NodeLabel,
    pub referrals_in: u64,
    pub referrals_out: u64,
    pub total: u64,
    /// Whether the node is alone in its community (false without a partition).
    pub singleton: bool,
}

/// Nodes ranked by ascending total referrals, ties alphabetical. With a
/// partition, rows whose node is alone in its community are flagged.
pub fn degree_distribution(g: &Graph, p: Option<&Partition>) -> Result<Vec<DegreeDistributionRow>> {
    if let Some(p) = p {
        p.check(g)?;
    }
    let sizes = p.map(|p| p.communities().into_iter().map(|c| c.len()).collect::<Vec<_>>());
    let ins = g.degrees(DegreeMode::In);
    let outs = g.degrees(DegreeMode::Out);
    let totals = g.degrees(DegreeMode::Total);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| (totals[a], g.label(a)).cmp(&(totals[b], g.label(b))));
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(rank, i)| DegreeDistributionRow {
            rank: rank + 1,
            intervention: g.label(i).clone(),
            referrals_in: ins[i],
            referrals_out: outs[i],
            total: totals[i],
            singleton: match (p, &sizes) {
                (Some(p), Some(sizes)) => sizes[p.community_of(i)] == 1,
                _ => false,
            },
        })
        .collect())
}

pub fn degree_distribution_csv(rows: &[DegreeDistributionRow]) -> String {
    csv_string(
        ["rank", "intervention", "referrals_in", "referrals_out", "total", "singleton"],
        rows.iter().map(|r| {
            [
                r.rank.to_string(),
                r.intervention.to_string(),
                r.referrals_in.to_string(),
                r.referrals_out.to_string(),
                r.total.to_string(),
                r.singleton.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub intervention: NodeLabel,
    pub rank: usize,
    pub series: &'static str,
    /// Referrals in are negated so the two series diverge from zero.
    pub value: i64,
    pub singleton: bool,
}

/// Plot-ready diverging-bar series: one "in" point (negative) and one "out"
/// point per node, in rank order.
pub fn degree_series(rows: &[DegreeDistributionRow]) -> Vec<SeriesPoint> {
    rows.iter()
        .flat_map(|r| {
            [("in", -(r.referrals_in as i64)), ("out", r.referrals_out as i64)].map(|(series, value)| SeriesPoint {
                intervention: r.intervention.clone(),
                rank: r.rank,
                series,
                value,
                singleton: r.singleton,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCentralityRow {
    pub from: NodeLabel,
    pub to: NodeLabel,
    pub weight: u64,
    pub betweenness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeDegreeRow {
    pub node: NodeLabel,
    pub in_degree: u64,
    pub out_degree: u64,
    pub total: u64,
}

/// Per-edge betweenness and per-node degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityReport {
    pub edges: Vec<EdgeCentralityRow>,
    pub nodes: Vec<NodeDegreeRow>,
}

pub fn centrality_report(g: &Graph) -> CentralityReport {
    let s = g.simplify();
    let scores = edge_betweenness(&s);
    let edges = s
        .edges()
        .zip(scores.entries())
        .map(|(e, sc)| EdgeCentralityRow { from: e.from, to: e.to, weight: e.weight, betweenness: sc.score })
        .collect();
    let (ins, outs, totals) = (g.degrees(DegreeMode::In), g.degrees(DegreeMode::Out), g.degrees(DegreeMode::Total));
    let nodes = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| NodeDegreeRow { node: n.clone(), in_degree: ins[i], out_degree: outs[i], total: totals[i] })
        .collect();
    CentralityReport { edges, nodes }
}

pub fn centrality_csv(report: &CentralityReport) -> String {
    let mut out = csv_string(
        ["from", "to", "weight", "betweenness"],
        report
            .edges
            .iter()
            .map(|e| [e.from.to_string(), e.to.to_string(), e.weight.to_string(), format!("{:.6}", e.betweenness)]),
    );
    out.push('\n');
    out.push_str(&csv_string(
        ["node", "in", "out", "total"],
        report
            .nodes
            .iter()
            .map(|n| [n.node.to_string(), n.in_degree.to_string(), n.out_degree.to_string(), n.total.to_string()]),
    ));
    out
}

fn csv_string<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

// ---------------------------------------------------------------------------
// Detection output

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityEntry {
    pub id: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    pub removed: Option<[String; 2]>,
    pub num_communities: usize,
    #[serde(serialize_with = "six_decimals")]
    pub q: f64,
}

/// The `detect` output document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionDocument {
    pub algorithm: String,
    #[serde(serialize_with = "six_decimals")]
    pub q: f64,
    /// Louvain on directed input: Q of the same partition on the directed graph.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "six_decimals_opt")]
    pub q_directed: Option<f64>,
    pub num_communities: usize,
    pub communities: Vec<CommunityEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_level: Option<usize>,
}

/// Reads the `communities` list back from a detection document.
#[derive(Debug, Clone, Deserialize)]
pub struct CommunitiesFile {
    pub communities: Vec<CommunityEntry>,
}

impl DetectionDocument {
    pub fn new(g: &Graph, d: &Detection) -> Self {
        let communities = d
            .partition
            .labeled(g)
            .into_iter()
            .enumerate()
            .map(|(i, members)| CommunityEntry {
                id: i + 1,
                members: members.into_iter().map(|m| m.to_string()).collect(),
            })
            .collect();
        let q = d.partition.q().unwrap_or(d.q_input);
        let q_directed = (d.algorithm == Algorithm::Louvain && g.is_directed()).then_some(d.q_input);
        let levels = d.dendrogram.as_ref().map(|den| {
            den.levels
                .iter()
                .enumerate()
                .map(|(i, l)| LevelEntry {
                    level: i,
                    removed: l.removed.as_ref().map(|e| [e.from.to_string(), e.to.to_string()]),
                    num_communities: l.partition.num_communities(),
                    q: l.q,
                })
                .collect()
        });
        DetectionDocument {
            algorithm: d.algorithm.code().to_string(),
            q,
            q_directed,
            num_communities: d.partition.num_communities(),
            communities,
            levels,
            best_level: d.dendrogram.as_ref().map(|den| den.best_index),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Partition from the `communities` of a detection document.
pub fn partition_from_json(g: &Graph, bytes: &[u8]) -> Result<Partition> {
    let doc: CommunitiesFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse { line: e.line() as u64, message: e.to_string() })?;
    let groups: Vec<Vec<String>> = doc.communities.into_iter().map(|c| c.members).collect();
    Partition::from_groups(g, &groups)
}

// ---------------------------------------------------------------------------
// Graph export

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::Format(other.to_string())),
        }
    }
}

pub fn export_graph(g: &Graph, p: Option<&Partition>, format: ExportFormat) -> Result<Vec<u8>> {
    if let Some(p) = p {
        p.check(g)?;
    }
    let community = |i: usize| p.map(|p| p.community_of(i) + 1);
    let text = match format {
        ExportFormat::Dot => to_dot(g, community),
        ExportFormat::GraphMl => to_graphml(g, community),
        ExportFormat::Json => to_json(g, community),
    };
    Ok(text.into_bytes())
}

fn dot_id(s: &str) -> String {
    let bare = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if bare {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
    }
}

fn to_dot(g: &Graph, community: impl Fn(usize) -> Option<usize>) -> String {
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} refnet {{\n");
    for (i, n) in g.nodes().iter().enumerate() {
        match community(i) {
            Some(c) => {
                let _ = writeln!(out, "  {} [community={c}];", dot_id(n.as_str()));
            }
            None => {
                let _ = writeln!(out, "  {};", dot_id(n.as_str()));
            }
        }
    }
    for e in g.simplify().edges() {
        let _ =
            writeln!(out, "  {} {arrow} {} [label=\"{}\"];", dot_id(e.from.as_str()), dot_id(e.to.as_str()), e.weight);
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn to_graphml(g: &Graph, community: impl Fn(usize) -> Option<usize>) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         \x20 <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n\
         \x20 <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n",
    );
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "  <graph id=\"refnet\" edgedefault=\"{kind}\">");
    for (i, n) in g.nodes().iter().enumerate() {
        match community(i) {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "    <node id=\"{}\"><data key=\"community\">{c}</data></node>",
                    xml_escape(n.as_str())
                );
            }
            None => {
                let _ = writeln!(out, "    <node id=\"{}\"/>", xml_escape(n.as_str()));
            }
        }
    }
    for e in g.simplify().edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>",
            xml_escape(e.from.as_str()),
            xml_escape(e.to.as_str()),
            e.weight
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonNode {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    community: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEdge {
    from: String,
    to: String,
    weight: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    directed: bool,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

fn to_json(g: &Graph, community: impl Fn(usize) -> Option<usize>) -> String {
    let doc = JsonGraph {
        directed: g.is_directed(),
        nodes: g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| JsonNode { id: n.to_string(), community: community(i) })
            .collect(),
        edges: g
            .simplify()
            .edges()
            .map(|e| JsonEdge { from: e.from.to_string(), to: e.to.to_string(), weight: e.weight })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Reads a graph written by the JSON exporter, with its partition when every
/// node carries a community.
pub fn import_json_graph(bytes: &[u8]) -> Result<(Graph, Option<Partition>)> {
    let doc: JsonGraph =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse { line: e.line() as u64, message: e.to_string() })?;
    let nodes = doc.nodes.iter().map(|n| NodeLabel::new(&n.id)).collect::<Result<Vec<_>>>()?;
    let edges = doc.edges.iter().map(|e| Edge::new(&e.from, &e.to, e.weight)).collect::<Result<Vec<_>>>()?;
    let g = Graph::with_nodes(nodes, edges, doc.directed)?;
    let ids: Option<Vec<usize>> = doc.nodes.iter().map(|n| n.community).collect();
    let p = ids.map(|ids| Partition::from_membership(&ids));
    Ok((g, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{detect, DetectOptions};
    use crate::fixtures;

    fn directed(edges: &[(&str, &str, u64)]) -> Graph {
        Graph::build(edges.iter().map(|&(a, b, w)| Edge::new(a, b, w).unwrap()).collect(), true).unwrap()
    }

    #[test]
    fn table_row_arithmetic() {
        // 174 in, 188 out for the hub, spread over two partners and a loop
        let g = directed(&[
            ("T: Small Molecule", "T: Small Molecule", 100),
            ("T: Small Molecule", "Chemotherapy", 88),
            ("I: Other", "T: Small Molecule", 74),
        ]);
        let rows = community_table(&g, &Partition::whole(3)).unwrap();
        let hub = rows.iter().find(|r| r.intervention.as_str() == "T: Small Molecule").unwrap();
        assert_eq!((hub.referrals_in, hub.referrals_out, hub.total), (174, 188, 362));
        let m = g.total_weight();
        assert_eq!(rows.iter().map(|r| r.referrals_in).sum::<u64>(), m);
        assert_eq!(rows.iter().map(|r| r.referrals_out).sum::<u64>(), m);
    }

    #[test]
    fn table_single_loop() {
        let g = directed(&[("a", "a", 1)]);
        let rows = community_table(&g, &Partition::whole(1)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].referrals_in, rows[0].referrals_out, rows[0].total), (1, 1, 2));
    }

    #[test]
    fn table_groups_and_sorts() {
        let g = fixtures::bridge_of_triangles(true);
        let sp = detect(&g, Algorithm::SmithPittman, DetectOptions::default()).unwrap();
        let rows = community_table(&g, &sp.partition).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows.iter().map(|r| r.community_id).collect::<Vec<_>>(), vec![1, 1, 1, 2, 2, 2]);
        let text = render_community_table("Smith-Pittman", sp.partition.q().unwrap(), &rows);
        assert!(text.starts_with("Smith-Pittman (Q = 0.357143)\n"));
        assert_eq!(text.matches("Community: ").count(), 2);
        assert!(matches!(community_table(&g, &Partition::whole(2)), Err(Error::PartitionMismatch(_))));
    }

    #[test]
    fn distribution_ranks() {
        // totals: a=1, b=1, c=14, d=362 (weights chosen to hit those)
        let g = Graph::with_nodes(
            ["d", "c", "b", "a"].iter().map(|s| NodeLabel::new(s).unwrap()).collect(),
            vec![Edge::new("d", "d", 181).unwrap(), Edge::new("c", "c", 7).unwrap(), Edge::new("b", "a", 1).unwrap()],
            true,
        )
        .unwrap();
        let rows = degree_distribution(&g, None).unwrap();
        let order: Vec<_> = rows.iter().map(|r| (r.rank, r.intervention.as_str(), r.total)).collect();
        assert_eq!(order, vec![(1, "a", 1), (2, "b", 1), (3, "c", 14), (4, "d", 362)]);
        let series = degree_series(&rows);
        assert_eq!(series.len(), 8);
        assert_eq!(series[0].value, -1);
        assert_eq!(series[1].value, 0);

        let one = degree_distribution(&directed(&[("x", "x", 1)]), None).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn distribution_marks_singletons() {
        let g = directed(&[("a", "b", 1), ("b", "c", 1)]);
        let p = Partition::from_membership(&[0, 0, 1]);
        let rows = degree_distribution(&g, Some(&p)).unwrap();
        let c = rows.iter().find(|r| r.intervention.as_str() == "c").unwrap();
        assert!(c.singleton);
        assert_eq!(rows.iter().filter(|r| r.singleton).count(), 1);
    }

    #[test]
    fn dot_export() {
        let g = directed(&[("a", "b", 1)]);
        let dot = String::from_utf8(export_graph(&g, None, ExportFormat::Dot).unwrap()).unwrap();
        assert!(dot.contains("a -> b [label=\"1\"]"), "{dot}");
        let g = directed(&[("T: Small Molecule", "Chemo \"x\"", 2)]);
        let dot =
            String::from_utf8(export_graph(&g, Some(&Partition::singletons(2)), ExportFormat::Dot).unwrap()).unwrap();
        assert!(dot.contains("\"T: Small Molecule\" -> \"Chemo \\\"x\\\"\" [label=\"2\"]"), "{dot}");
        assert!(dot.contains("[community=2]"));
    }

    #[test]
    fn graphml_export() {
        let g = directed(&[("a", "b", 1), ("b", "<c>", 3)]);
        let xml = String::from_utf8(
            export_graph(&g, Some(&Partition::from_membership(&[0, 0, 1])), ExportFormat::GraphMl).unwrap(),
        )
        .unwrap();
        assert!(xml.contains("attr.name=\"community\""));
        assert!(xml.contains("<node id=\"&lt;c&gt;\"><data key=\"community\">2</data></node>"));
        assert!(xml.contains("<data key=\"weight\">3</data>"));
        assert_eq!(export_graph(&g, None, ExportFormat::GraphMl), export_graph(&g, None, ExportFormat::GraphMl));
    }

    #[test]
    fn json_round_trip() {
        let g = fixtures::bridge_of_triangles(true);
        let p = Partition::from_membership(&[0, 0, 0, 1, 1, 1]);
        let bytes = export_graph(&g, Some(&p), ExportFormat::Json).unwrap();
        let (back, back_p) = import_json_graph(&bytes).unwrap();
        assert_eq!(back, g.simplify());
        assert_eq!(back_p, Some(p));
        assert_eq!("svg".parse::<ExportFormat>(), Err(Error::Format("svg".into())));
    }

    #[test]
    fn detection_document() {
        let g = fixtures::bridge_of_triangles(true);
        let d = detect(&g, Algorithm::Louvain, DetectOptions::default()).unwrap();
        let doc = DetectionDocument::new(&g, &d);
        let json = doc.to_json();
        assert!(json.contains("\"algorithm\": \"louvain\""));
        assert!(json.contains("\"q\": 0.357143"), "{json}");
        assert!(json.contains("\"q_directed\": 0.357143"));
        assert!(!json.contains("levels"));
        let p = partition_from_json(&g, json.as_bytes()).unwrap();
        assert!(p.same_grouping(&d.partition));

        let gn = detect(&g, Algorithm::GirvanNewman, DetectOptions::default()).unwrap();
        let json = DetectionDocument::new(&g, &gn).to_json();
        assert!(json.contains("\"levels\""));
        assert!(json.contains("\"best_level\": 1"));
    }
}
