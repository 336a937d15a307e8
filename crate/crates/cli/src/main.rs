//! `refnet`: build referral networks from enrollment records, detect
//! communities and report them.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input (files,
//! flags, configs), 3 when well-formed input violates an algorithm contract.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use refnet::detect::{detect, Algorithm, DetectOptions, Detection, SpScope};
use refnet::graph::{parse_edge_list, write_edge_list};
use refnet::ingest::{
    build_referral_edges_with, generate_synthetic_enrollments, parse_enrollments, summarize_cohort, write_enrollments,
    Pairing, SynthConfig,
};
use refnet::modularity::modularity;
use refnet::report::{
    centrality_csv, centrality_report, community_table, community_table_csv, degree_distribution,
    degree_distribution_csv, degree_series, export_graph, partition_from_json, render_community_table, six_decimals,
    CommunityTableRow, DetectionDocument, ExportFormat,
};
use refnet::{Graph, Partition};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "refnet", version, about = "Referral-network community detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn enrollment records into a weighted referral edge list.
    Ingest(IngestArgs),
    /// Generate a synthetic enrollment cohort.
    Synth(SynthArgs),
    /// Run one community detection algorithm and write the result as JSON.
    Detect(DetectArgs),
    /// Community, degree-distribution or centrality tables.
    Report(ReportArgs),
    /// Write the graph (optionally with communities) as DOT, GraphML or JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Enrollment CSV: subject_id,study_id,intervention,enrolled_at.
    #[arg(long)]
    input: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Which enrollment pairs become referrals.
    #[arg(long, value_enum, default_value_t = PairingArg::Consecutive)]
    pairing: PairingArg,
    /// Also write cohort counts as JSON to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Seed for the random generator; equal seeds give identical cohorts.
    #[arg(long)]
    seed: u64,
    /// JSON generator configuration (the built-in reference cohort when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GraphInput {
    /// Edge list CSV: from,to,weight.
    #[arg(long)]
    input: PathBuf,
    /// Treat the edge list as undirected.
    #[arg(long)]
    undirected: bool,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Girvan-Newman, Louvain or Smith-Pittman.
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Seed for Louvain's node order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smith-Pittman candidate edges: the top hub's edges, or all edges.
    #[arg(long, value_enum, default_value_t = ScopeArg::Ego)]
    sp_scope: ScopeArg,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Which table to produce.
    #[arg(long, value_enum)]
    table: Table,
    /// Detection JSON whose communities to use.
    #[arg(long, conflicts_with = "algorithm")]
    communities: Option<PathBuf>,
    /// Run this algorithm to obtain communities.
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    /// Seed for Louvain's node order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to text for the community table and csv otherwise.
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Output format.
    #[arg(long, value_enum)]
    format: ExportArg,
    /// Detection JSON whose communities to attach to nodes.
    #[arg(long)]
    communities: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    /// Each trial to the next one in time.
    Consecutive,
    /// Each trial to every later one.
    AllOrdered,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Gn,
    Louvain,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Ego,
    Global,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Communities,
    Degrees,
    Centrality,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportArg {
    Dot,
    Graphml,
    Json,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Gn => Algorithm::GirvanNewman,
            AlgorithmArg::Louvain => Algorithm::Louvain,
            AlgorithmArg::Sp => Algorithm::SmithPittman,
        }
    }
}

/// A failed command and the exit code it maps to.
enum Failure {
    Input(anyhow::Error),
    Contract(anyhow::Error),
}

impl From<refnet::Error> for Failure {
    fn from(e: refnet::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.into())
        } else {
            Failure::Contract(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Synth(a) => synth(a),
        Command::Detect(a) => run_detect(a),
        Command::Report(a) => report(a),
        Command::Export(a) => export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Contract(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().lock().write_all(bytes).context("writing to stdout"),
    }
}

/// Attaches the offending path to a core error without changing its class.
fn in_file<T>(path: &Path, r: refnet::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(e) => Failure::Input(e.context(path.display().to_string())),
        Failure::Contract(e) => Failure::Contract(e.context(path.display().to_string())),
    })
}

fn load_graph(input: &GraphInput) -> Result<Graph, Failure> {
    let bytes = read(&input.input)?;
    in_file(&input.input, parse_edge_list(&bytes, !input.undirected))
}

fn ingest(a: IngestArgs) -> Outcome {
    let records = in_file(&a.input, parse_enrollments(&read(&a.input)?))?;
    let pairing = match a.pairing {
        PairingArg::Consecutive => Pairing::Consecutive,
        PairingArg::AllOrdered => Pairing::AllOrdered,
    };
    let edges = build_referral_edges_with(&records, pairing);
    if edges.is_empty() {
        return Err(Failure::Input(anyhow::anyhow!(
            "{}: no subject is enrolled in two or more studies",
            a.input.display()
        )));
    }
    let g = Graph::build(edges, true)?;
    emit(a.output.as_deref(), write_edge_list(&g).as_bytes())?;
    if let Some(path) = &a.summary {
        let mut json = serde_json::to_string_pretty(&summarize_cohort(&records)).context("encoding summary")?;
        json.push('\n');
        emit(Some(path), json.as_bytes())?;
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Outcome {
    let config = match &a.config {
        Some(path) => serde_json::from_slice::<SynthConfig>(&read(path)?)
            .with_context(|| format!("parsing {}", path.display()))?,
        None => SynthConfig::reference(),
    };
    let records = generate_synthetic_enrollments(a.seed, &config)?;
    emit(a.output.as_deref(), write_enrollments(&records).as_bytes())?;
    Ok(())
}

fn options(seed: u64, scope: ScopeArg) -> DetectOptions {
    let sp_scope = match scope {
        ScopeArg::Ego => SpScope::Ego,
        ScopeArg::Global => SpScope::Global,
    };
    DetectOptions { seed, sp_scope }
}

fn run_detect(a: DetectArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let d = detect(&g, a.algorithm.into(), options(a.seed, a.sp_scope))?;
    emit(a.output.as_deref(), DetectionDocument::new(&g, &d).to_json().as_bytes())?;
    Ok(())
}

/// Communities from a detection file or a fresh run, with a display title.
fn communities(g: &Graph, a: &ReportArgs) -> Result<Option<(String, Partition)>, Failure> {
    if let Some(path) = &a.communities {
        let bytes = read(path)?;
        let p = in_file(path, partition_from_json(g, &bytes))?;
        let source: Source = serde_json::from_slice(&bytes).unwrap_or_default();
        let title = match source.algorithm.and_then(|a| a.parse::<Algorithm>().ok()) {
            Some(algorithm) => format!("{algorithm} communities"),
            None => "Communities".to_string(),
        };
        return Ok(Some((title, p)));
    }
    match a.algorithm {
        Some(alg) => {
            let Detection { algorithm, partition, .. } = detect(g, alg.into(), options(a.seed, ScopeArg::Ego))?;
            Ok(Some((format!("{algorithm} communities"), partition)))
        }
        None => Ok(None),
    }
}

/// The optional `algorithm` field of a detection document.
#[derive(Default, Deserialize)]
struct Source {
    algorithm: Option<String>,
}

#[derive(Serialize)]
struct CommunityTableJson<'a> {
    title: &'a str,
    #[serde(serialize_with = "six_decimals")]
    q: f64,
    rows: &'a [CommunityTableRow],
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("encoding JSON")?;
    s.push('\n');
    Ok(s)
}

fn report(a: ReportArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let found = communities(&g, &a)?;
    let format = a.format.unwrap_or(if a.table == Table::Communities { ReportFormat::Text } else { ReportFormat::Csv });
    if format == ReportFormat::Text && a.table != Table::Communities {
        return Err(Failure::Input(anyhow::anyhow!("text output is only available for the communities table")));
    }
    let text = match a.table {
        Table::Communities => {
            let Some((title, p)) = found else {
                return Err(Failure::Input(anyhow::anyhow!(
                    "the communities table needs --communities or --algorithm"
                )));
            };
            let rows = community_table(&g, &p)?;
            // Q of this partition on the graph the table describes.
            let q = modularity(&g, &p)?;
            match format {
                ReportFormat::Text => render_community_table(&title, q, &rows),
                ReportFormat::Csv => community_table_csv(&rows),
                ReportFormat::Json => to_json(&CommunityTableJson { title: &title, q, rows: &rows })?,
            }
        }
        Table::Degrees => {
            let rows = degree_distribution(&g, found.as_ref().map(|(_, p)| p))?;
            match format {
                ReportFormat::Json => to_json(&degree_series(&rows))?,
                _ => degree_distribution_csv(&rows),
            }
        }
        Table::Centrality => {
            let report = centrality_report(&g);
            match format {
                ReportFormat::Json => to_json(&report)?,
                _ => centrality_csv(&report),
            }
        }
    };
    emit(a.output.as_deref(), text.as_bytes())?;
    Ok(())
}

fn export(a: ExportArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let p = match &a.communities {
        Some(path) => Some(in_file(path, partition_from_json(&g, &read(path)?))?),
        None => None,
    };
    let format = match a.format {
        ExportArg::Dot => ExportFormat::Dot,
        ExportArg::Graphml => ExportFormat::GraphMl,
        ExportArg::Json => ExportFormat::Json,
    };
    emit(a.output.as_deref(), &export_graph(&g, p.as_ref(), format)?)?;
    Ok(())
}
