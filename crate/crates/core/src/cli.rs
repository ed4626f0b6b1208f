//! Staged command-line pipeline: `fetch` → `build` → `analyze` → `stats` /
//! `quadrants` / `cycles`.
//!
//! Each stage reads the artifacts of the previous one from the output
//! directory, so a published GEXF file can enter directly at `analyze`.
//! Every output is sorted and formatted deterministically; rerunning a command
//! on the same inputs produces byte-identical files.
//!
//! Exit codes: 0 success, 2 input error, 3 empty or degenerate input,
//! 4 numerical non-convergence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::centrality::{run_selected_variants, CentralityConfig, CentralityError, CentralityResult};
use crate::graph::{build_graph, read_gexf, write_gexf, BuildConfig, DependencyGraph, GraphError, GraphVariant, NodeClass, NodeId};
use crate::ingest::fetch::{crawl, ClientConfig, CrawlSeed, RegistryClient};
use crate::ingest::{
    load_registry_snapshot, parse_citations, parse_mentions, write_registry_snapshot, CitationMap, Ecosystem,
    IngestError, MentionRecord, Parsed, RegistrySnapshot,
};
use crate::metrics::{package_metrics, summarize_ecosystem, top_k_reports, MetricsError, PackageMetricsRow};
use crate::structure::{assert_mention_components_acyclic, strongly_connected_components};

pub const GRAPH_FILE: &str = "graph.gexf";
pub const EDGE_LIST_FILE: &str = "edges.csv";
pub const BUILD_REPORT_FILE: &str = "build_report.txt";
pub const PACKAGE_METRICS_FILE: &str = "package_metrics.csv";
pub const MENTION_STATS_FILE: &str = "mention_stats.csv";
pub const CENTRALITY_STATS_FILE: &str = "centrality_stats.csv";
pub const CYCLES_FILE: &str = "cycles.csv";
pub const CYCLES_SUMMARY_FILE: &str = "cycles_summary.txt";
pub const REGISTRY_FILE: &str = "registry.jsonl";
pub const FETCH_REPORT_FILE: &str = "fetch_report.txt";

pub fn centrality_file(variant: GraphVariant) -> String {
    format!("centrality_{variant}.csv")
}

pub fn quadrants_file(variant: GraphVariant) -> String {
    format!("quadrants_{variant}.csv")
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
}

impl From<CentralityError> for CliError {
    fn from(e: CentralityError) -> Self {
        match e {
            CentralityError::InvalidConfig(_) => CliError::Input(e.to_string()),
            _ => CliError::NonConvergence(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "depnet", version, about = "Dependency networks of research software and their criticality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Crawl the registry API for mentioned packages and their dependencies.
    Fetch,
    /// Build the paper/package network and write it as GEXF.
    Build,
    /// Katz centrality for each variant plus per-package metrics.
    Analyze,
    /// Mention and centrality summaries per ecosystem.
    Stats,
    /// Pasteur / popular / nebraska listings per variant.
    Quadrants,
    /// Dependency loops and the acyclicity verdict for mentioned components.
    Cycles,
}

/// Flags shared by all subcommands. Every flag can also be set in the
/// `--config` TOML file under the same name; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub mentions: Option<PathBuf>,
    #[arg(long, global = true)]
    pub citations: Option<PathBuf>,
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub variants: Option<Vec<String>>,
    #[arg(long = "top-k", global = true)]
    pub top_k: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub include: Option<Vec<String>>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub ecosystems: Option<Vec<String>>,
    #[arg(long = "api-url", global = true)]
    pub api_url: Option<String>,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub concurrency: Option<usize>,
}

impl Options {
    /// Fills every unset field from `base`.
    fn or(self, base: Options) -> Options {
        Options {
            config: self.config.or(base.config),
            mentions: self.mentions.or(base.mentions),
            citations: self.citations.or(base.citations),
            registry: self.registry.or(base.registry),
            graph: self.graph.or(base.graph),
            out: self.out.or(base.out),
            beta: self.beta.or(base.beta),
            tolerance: self.tolerance.or(base.tolerance),
            variants: self.variants.or(base.variants),
            top_k: self.top_k.or(base.top_k),
            include: self.include.or(base.include),
            ecosystems: self.ecosystems.or(base.ecosystems),
            api_url: self.api_url.or(base.api_url),
            cache_dir: self.cache_dir.or(base.cache_dir),
            concurrency: self.concurrency.or(base.concurrency),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mentions: Option<PathBuf>,
    pub citations: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub api_url: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub concurrency: usize,
    pub graph: Option<PathBuf>,
    pub out: PathBuf,
    pub ecosystems: BTreeSet<Ecosystem>,
    pub beta: f64,
    pub tolerance: f64,
    pub top_k: usize,
    pub variants: Vec<GraphVariant>,
    pub include: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mentions: None,
            citations: None,
            registry: None,
            api_url: None,
            cache_dir: None,
            concurrency: 4,
            graph: None,
            out: PathBuf::from("out"),
            ecosystems: Ecosystem::ALL.into_iter().collect(),
            beta: 1.0,
            tolerance: 1e-10,
            top_k: 12,
            variants: GraphVariant::ALL.to_vec(),
            include: Vec::new(),
        }
    }
}

impl RunConfig {
    /// Merges flags over the optional config file and validates the result.
    pub fn resolve(flags: Options) -> Result<RunConfig, CliError> {
        let merged = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| input_err(path, e))?;
                let file: Options = toml::from_str(&text).map_err(|e| input_err(path, e))?;
                flags.or(file)
            }
            None => flags,
        };
        let mut cfg = RunConfig {
            mentions: merged.mentions,
            citations: merged.citations,
            registry: merged.registry,
            api_url: merged.api_url,
            cache_dir: merged.cache_dir,
            graph: merged.graph,
            ..Default::default()
        };
        if let Some(v) = merged.out {
            cfg.out = v;
        }
        if let Some(v) = merged.concurrency {
            cfg.concurrency = v.max(1);
        }
        if let Some(v) = merged.beta {
            cfg.beta = v;
        }
        if let Some(v) = merged.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = merged.top_k {
            cfg.top_k = v;
        }
        if let Some(v) = merged.include {
            cfg.include = v;
        }
        if let Some(list) = merged.ecosystems {
            cfg.ecosystems = list
                .iter()
                .map(|s| s.parse::<Ecosystem>().map_err(|e| CliError::Input(e.to_string())))
                .collect::<Result<_, _>>()?;
        }
        if let Some(list) = merged.variants {
            let mut variants = Vec::new();
            for s in &list {
                let v = s.parse::<GraphVariant>().map_err(CliError::Input)?;
                if !variants.contains(&v) {
                    variants.push(v);
                }
            }
            variants.sort();
            cfg.variants = variants;
        }
        if cfg.ecosystems.is_empty() {
            return Err(CliError::Input("at least one ecosystem must be selected".into()));
        }
        if cfg.variants.is_empty() {
            return Err(CliError::Input("at least one variant must be selected".into()));
        }
        if !(cfg.beta.is_finite() && cfg.beta > 0.0) {
            return Err(CliError::Input(format!("--beta must be positive, got {}", cfg.beta)));
        }
        Ok(cfg)
    }

    pub fn graph_path(&self) -> PathBuf {
        self.graph.clone().unwrap_or_else(|| self.out.join(GRAPH_FILE))
    }

    fn centrality_config(&self) -> CentralityConfig {
        CentralityConfig { beta: self.beta, tolerance: self.tolerance, ..Default::default() }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::resolve(cli.options).and_then(|cfg| execute(cli.command, &cfg));
    match result {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command, returning the text it prints on success.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<String, CliError> {
    match command {
        Command::Fetch => cmd_fetch(cfg),
        Command::Build => cmd_build(cfg),
        Command::Analyze => cmd_analyze(cfg),
        Command::Stats => cmd_stats(cfg),
        Command::Quadrants => cmd_quadrants(cfg),
        Command::Cycles => cmd_cycles(cfg),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| input_err(path, e))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref().ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

fn create_out_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| input_err(out, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| input_err(path, e))
}

fn csv_bytes<F>(header: &[&str], fill: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).and_then(|_| fill(&mut w)).map_err(|e| CliError::Input(e.to_string()))?;
        w.flush().map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(buf)
}

fn ingest_err(path: &Path, e: IngestError) -> CliError {
    input_err(path, e)
}

fn load_mentions(path: &Path) -> Result<Parsed<Vec<MentionRecord>>, CliError> {
    let parsed = parse_mentions(open(path)?).map_err(|e| ingest_err(path, e))?;
    for r in &parsed.rejects {
        log::warn!("{}:{}: {}", path.display(), r.line, r.reason);
    }
    Ok(parsed)
}

fn load_citations(path: Option<&Path>) -> Result<Parsed<CitationMap>, CliError> {
    let Some(path) = path else {
        return Ok(Parsed { value: CitationMap::new(), rejects: Vec::new(), total_rows: 0 });
    };
    let parsed = parse_citations(open(path)?).map_err(|e| ingest_err(path, e))?;
    for r in &parsed.rejects {
        log::warn!("{}:{}: {}", path.display(), r.line, r.reason);
    }
    Ok(parsed)
}

fn load_registry(path: &Path) -> Result<Parsed<RegistrySnapshot>, CliError> {
    let parsed = load_registry_snapshot(open(path)?).map_err(|e| ingest_err(path, e))?;
    for r in &parsed.rejects {
        log::warn!("{}:{}: {}", path.display(), r.line, r.reason);
    }
    Ok(parsed)
}

fn load_graph(cfg: &RunConfig) -> Result<DependencyGraph, CliError> {
    let path = cfg.graph_path();
    read_gexf(open(&path)?).map_err(|e| input_err(&path, e))
}

pub fn cmd_fetch(cfg: &RunConfig) -> Result<String, CliError> {
    let mentions_path = required(&cfg.mentions, "mentions")?;
    let base = cfg.api_url.clone().ok_or_else(|| CliError::Input("--api-url is required".into()))?;
    let mentions = load_mentions(mentions_path)?.value;
    let seeds: BTreeSet<CrawlSeed> = mentions
        .iter()
        .filter(|m| cfg.ecosystems.contains(&m.ecosystem))
        .map(|m| CrawlSeed {
            ecosystem: m.ecosystem,
            name: m.package_name.clone(),
            package_id: Some(m.package_id.clone()),
        })
        .collect();
    if seeds.is_empty() {
        return Err(CliError::Degenerate("no seed mentions in the selected ecosystems".into()));
    }
    let mut client_cfg = ClientConfig::new(base);
    client_cfg.concurrency = cfg.concurrency;
    if let Some(dir) = &cfg.cache_dir {
        client_cfg.cache_dir = dir.clone();
    }
    let client = RegistryClient::new(client_cfg);
    let seeds: Vec<CrawlSeed> = seeds.into_iter().collect();
    let outcome = crawl(&client, &seeds);

    create_out_dir(&cfg.out)?;
    let mut registry = Vec::new();
    write_registry_snapshot(&mut registry, &outcome.records).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(&cfg.out.join(REGISTRY_FILE), &registry)?;

    let mut report = String::new();
    let _ = writeln!(report, "records: {}", outcome.records.len());
    let _ = writeln!(report, "unknown ({}):", outcome.unknown.len());
    for (eco, name) in &outcome.unknown {
        let _ = writeln!(report, "  {eco} {name}");
    }
    let _ = writeln!(report, "failed ({}):", outcome.failed.len());
    for (eco, name, why) in &outcome.failed {
        let _ = writeln!(report, "  {eco} {name}: {why}");
    }
    write_file(&cfg.out.join(FETCH_REPORT_FILE), report.as_bytes())?;
    Ok(report)
}

pub fn cmd_build(cfg: &RunConfig) -> Result<String, CliError> {
    let mentions_path = required(&cfg.mentions, "mentions")?;
    let registry_path = required(&cfg.registry, "registry")?;
    let mentions = load_mentions(mentions_path)?;
    let citations = load_citations(cfg.citations.as_deref())?;
    let snapshot = load_registry(registry_path)?;

    let build_cfg = BuildConfig { ecosystems: cfg.ecosystems.clone() };
    let graph = match build_graph(&mentions.value, &citations.value, &snapshot.value.index, &build_cfg) {
        Ok(g) => g,
        Err(GraphError::NoSeedMentions) => {
            return Err(CliError::Degenerate(format!(
                "{}: no seed mentions in the selected ecosystems",
                mentions_path.display()
            )))
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };

    create_out_dir(&cfg.out)?;
    let mut gexf = Vec::new();
    write_gexf(&graph, &mut gexf).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(&cfg.out.join(GRAPH_FILE), &gexf)?;
    let mut edges = Vec::new();
    graph.write_edge_list(&mut edges).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(&cfg.out.join(EDGE_LIST_FILE), &edges)?;

    let report = build_report(&graph, &mentions, &citations, &snapshot);
    write_file(&cfg.out.join(BUILD_REPORT_FILE), report.as_bytes())?;
    Ok(report)
}

fn build_report(
    graph: &DependencyGraph,
    mentions: &Parsed<Vec<MentionRecord>>,
    citations: &Parsed<CitationMap>,
    snapshot: &Parsed<RegistrySnapshot>,
) -> String {
    let mut r = String::new();
    let _ = writeln!(r, "nodes: {}", graph.node_count());
    let _ = writeln!(r, "edges: {}", graph.edge_count());
    let _ = writeln!(r, "nodes by class:");
    for (class, n) in graph.count_by_class() {
        let _ = writeln!(r, "  {class}: {n}");
    }
    let mention_edges = graph.edges().filter(|&(u, _, _)| graph.node(u).id.class == NodeClass::Paper).count();
    let _ = writeln!(r, "edges by kind:");
    let _ = writeln!(r, "  mention: {mention_edges}");
    let _ = writeln!(r, "  dependency: {}", graph.edge_count() - mention_edges);
    let _ = writeln!(r, "rejected rows:");
    let _ = writeln!(r, "  mentions: {} of {}", mentions.rejects.len(), mentions.total_rows);
    let _ = writeln!(r, "  citations: {} of {}", citations.rejects.len(), citations.total_rows);
    let _ = writeln!(r, "  registry: {} of {}", snapshot.rejects.len(), snapshot.total_rows);

    let missing: Vec<&NodeId> =
        graph.nodes().iter().filter(|n| n.metadata_missing).map(|n| &n.id).collect();
    let _ = writeln!(r, "missing metadata ({}):", missing.len());
    for id in missing {
        let _ = writeln!(r, "  {} {}", id.class, id.key);
    }
    let uncited: Vec<&NodeId> =
        graph.nodes().iter().filter(|n| n.citations_unknown).map(|n| &n.id).collect();
    let _ = writeln!(r, "papers without citation data ({}):", uncited.len());
    for id in uncited {
        let _ = writeln!(r, "  {}", id.key);
    }
    r
}

const CENTRALITY_HEADER: [&str; 6] =
    ["node_class", "node_key", "variant", "raw_score", "normalized_score", "converged"];

pub fn cmd_analyze(cfg: &RunConfig) -> Result<String, CliError> {
    let graph = load_graph(cfg)?;
    let results = run_selected_variants(&graph, &cfg.centrality_config(), &cfg.variants)?;

    create_out_dir(&cfg.out)?;
    let mut summary = String::new();
    let mut metric_rows = Vec::new();
    for (variant, result) in &results {
        let bytes = csv_bytes(&CENTRALITY_HEADER, |w| {
            for (id, raw) in &result.raw {
                w.write_record([
                    id.class.as_str(),
                    &id.key,
                    variant.as_str(),
                    &raw.to_string(),
                    &result.scores[id].to_string(),
                    if result.converged { "true" } else { "false" },
                ])?;
            }
            Ok(())
        })?;
        write_file(&cfg.out.join(centrality_file(*variant)), &bytes)?;
        let _ = writeln!(
            summary,
            "{variant}: {} nodes, converged={}, iterations={}",
            result.raw.len(),
            result.converged,
            result.iterations_used
        );
        metric_rows.push((*variant, package_metrics(&graph, result)?));
    }

    let bytes = csv_bytes(
        &[
            "variant", "node_class", "node_key", "name", "mentions", "mention_pct", "centrality",
            "centrality_pct", "quadrant", "pasteur_score",
        ],
        |w| {
            for (variant, rows) in &metric_rows {
                for r in rows {
                    w.write_record([
                        variant.as_str(),
                        r.node.class.as_str(),
                        &r.node.key,
                        &r.name,
                        &r.mentions.to_string(),
                        &r.mention_pct.to_string(),
                        &r.centrality.to_string(),
                        &r.centrality_pct.to_string(),
                        r.quadrant.as_str(),
                        &r.pasteur_score.to_string(),
                    ])?;
                }
            }
            Ok(())
        },
    )?;
    write_file(&cfg.out.join(PACKAGE_METRICS_FILE), &bytes)?;
    Ok(summary)
}

#[derive(Debug, Deserialize)]
struct CentralityRow {
    node_class: String,
    node_key: String,
    raw_score: f64,
    normalized_score: f64,
    converged: bool,
}

/// Reads a centrality CSV written by `analyze` back into a result.
pub fn read_centrality_csv(path: &Path, variant: GraphVariant) -> Result<CentralityResult, CliError> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let mut raw = BTreeMap::new();
    let mut scores = BTreeMap::new();
    let mut converged = true;
    for row in rdr.deserialize::<CentralityRow>() {
        let row = row.map_err(|e| input_err(path, e))?;
        let class = row.node_class.parse::<NodeClass>().map_err(|e| input_err(path, e))?;
        let id = NodeId::new(class, row.node_key);
        converged &= row.converged;
        raw.insert(id.clone(), row.raw_score);
        scores.insert(id, row.normalized_score);
    }
    let normalized = raw.iter().any(|(k, v)| scores[k] != *v);
    Ok(CentralityResult { raw, scores, variant, converged, iterations_used: 0, normalized })
}

fn load_results(cfg: &RunConfig) -> Result<BTreeMap<GraphVariant, CentralityResult>, CliError> {
    cfg.variants
        .iter()
        .map(|&v| {
            let path = cfg.out.join(centrality_file(v));
            if !path.exists() {
                return Err(CliError::Input(format!("{} not found; run `analyze` first", path.display())));
            }
            read_centrality_csv(&path, v).map(|r| (v, r))
        })
        .collect()
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<String, CliError> {
    let graph = load_graph(cfg)?;
    let results = load_results(cfg)?;
    let summaries: Vec<_> = cfg
        .ecosystems
        .iter()
        .filter(|&&e| graph.package_indices(e).next().is_some())
        .map(|&e| summarize_ecosystem(&graph, &results, e))
        .collect::<Result<_, _>>()?;
    if summaries.is_empty() {
        return Err(CliError::Degenerate("no packages in the selected ecosystems".into()));
    }

    let mentions = csv_bytes(&["ecosystem", "count", "dependency_only", "median", "iqr", "max", "gini"], |w| {
        for s in &summaries {
            let m = &s.mention_stats;
            w.write_record([
                s.ecosystem.as_str(),
                &s.package_count.to_string(),
                &s.dependency_only_fraction.to_string(),
                &m.median.to_string(),
                &m.iqr.to_string(),
                &m.max.to_string(),
                &m.gini.to_string(),
            ])?;
        }
        Ok(())
    })?;
    let centrality = csv_bytes(&["variant", "ecosystem", "count", "median", "iqr", "max", "gini"], |w| {
        for &variant in &cfg.variants {
            for s in &summaries {
                if let Some(c) = s.centrality_stats.get(&variant) {
                    w.write_record([
                        variant.as_str(),
                        s.ecosystem.as_str(),
                        &c.count.to_string(),
                        &c.median.to_string(),
                        &c.iqr.to_string(),
                        &c.max.to_string(),
                        &c.gini.to_string(),
                    ])?;
                }
            }
        }
        Ok(())
    })?;
    write_file(&cfg.out.join(MENTION_STATS_FILE), &mentions)?;
    write_file(&cfg.out.join(CENTRALITY_STATS_FILE), &centrality)?;
    Ok(String::from_utf8_lossy(&mentions).into_owned())
}

pub fn cmd_quadrants(cfg: &RunConfig) -> Result<String, CliError> {
    let graph = load_graph(cfg)?;
    let results = load_results(cfg)?;
    let mut summary = String::new();
    for (variant, result) in &results {
        let rows: Vec<PackageMetricsRow> = package_metrics(&graph, result)?
            .into_iter()
            .filter(|r| r.node.class.ecosystem().is_some_and(|e| cfg.ecosystems.contains(&e)))
            .collect();
        let report = top_k_reports(&rows, cfg.top_k, &cfg.include);
        let sections = [
            ("pasteur", &report.pasteur),
            ("sanity", &report.sanity),
            ("popular", &report.popular),
            ("nebraska", &report.nebraska),
        ];
        let bytes = csv_bytes(
            &["section", "software", "ecosystem", "mentions", "mention_pct", "centrality", "centrality_pct", "quadrant"],
            |w| {
                for (section, list) in sections {
                    for r in list.iter() {
                        w.write_record([
                            section,
                            &r.name,
                            r.node.class.as_str(),
                            &r.mentions.to_string(),
                            &r.mention_pct.to_string(),
                            &r.centrality.to_string(),
                            &r.centrality_pct.to_string(),
                            r.quadrant.as_str(),
                        ])?;
                    }
                }
                Ok(())
            },
        )?;
        write_file(&cfg.out.join(quadrants_file(*variant)), &bytes)?;
        let _ = writeln!(
            summary,
            "{variant}: pasteur={} popular={} nebraska={}",
            report.pasteur.len(),
            report.popular.len(),
            report.nebraska.len()
        );
    }
    Ok(summary)
}

pub fn cmd_cycles(cfg: &RunConfig) -> Result<String, CliError> {
    let graph = load_graph(cfg)?;
    let scc = strongly_connected_components(&graph);
    let verdict = assert_mention_components_acyclic(&graph);

    create_out_dir(&cfg.out)?;
    let bytes = csv_bytes(&["component_id", "size", "package_keys"], |w| {
        for (i, component) in scc.loops().enumerate() {
            let keys: Vec<&str> = component.iter().map(|id| id.key.as_str()).collect();
            w.write_record([&i.to_string(), &component.len().to_string(), &keys.join(";")])?;
        }
        Ok(())
    })?;
    write_file(&cfg.out.join(CYCLES_FILE), &bytes)?;

    let mut summary = String::new();
    for &eco in &cfg.ecosystems {
        let _ = writeln!(summary, "{eco} loop_fraction={}", scc.loop_fraction_for(&graph, eco));
    }
    let _ = writeln!(summary, "all loop_fraction={}", scc.loop_fraction);
    let _ = writeln!(summary, "acyclic: {}", verdict.acyclic);
    if let Some(cycle) = &verdict.witness_cycle {
        let walk: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        let _ = writeln!(summary, "witness: {}", walk.join(" -> "));
    }
    write_file(&cfg.out.join(CYCLES_SUMMARY_FILE), summary.as_bytes())?;
    Ok(summary)
}

/// Writes a [`DependencyGraph`] to `path` as GEXF.
pub fn save_graph(graph: &DependencyGraph, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| input_err(path, e))?;
    write_gexf(graph, BufWriter::new(file)).map_err(|e| input_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "beta = 0.5\ntop-k = 3\necosystems = [\"cran\"]\nout = \"from-file\"\n").unwrap();
        let flags = Options { config: Some(path), beta: Some(0.25), ..Default::default() };
        let cfg = RunConfig::resolve(flags).unwrap();
        assert_eq!(cfg.beta, 0.25);
        assert_eq!(cfg.top_k, 3);
        assert_eq!(cfg.out, PathBuf::from("from-file"));
        assert_eq!(cfg.ecosystems, [Ecosystem::Cran].into());
    }

    #[test]
    fn invalid_settings_are_input_errors() {
        let bad = [
            Options { beta: Some(0.0), ..Default::default() },
            Options { ecosystems: Some(vec!["conda".into()]), ..Default::default() },
            Options { ecosystems: Some(vec![]), ..Default::default() },
            Options { variants: Some(vec!["pagerank".into()]), ..Default::default() },
        ];
        for flags in bad {
            assert_eq!(RunConfig::resolve(flags).unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn variants_are_deduplicated_and_ordered() {
        let flags = Options { variants: Some(vec!["weighted_lcc".into(), "unweighted".into(), "lcc".into()]), ..Default::default() };
        let cfg = RunConfig::resolve(flags).unwrap();
        assert_eq!(cfg.variants, vec![GraphVariant::Unweighted, GraphVariant::WeightedLcc]);
    }
}
