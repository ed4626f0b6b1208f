//! The two-mode paper/package network.
//!
//! Papers point at the packages they mention, weighted by the paper's
//! citation count. Packages point at the packages they require, with weight 1.
//! Nothing points at a paper, and dependency edges never leave their
//! ecosystem.

mod gexf;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{CitationMap, Ecosystem, MentionRecord, PackageIndex};

pub use gexf::{read_gexf, read_gexf_with_warnings, write_gexf};

/// Node classes. Declaration order is alphabetical so that sorting by class
/// sorts by the class name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClass {
    Bioconductor,
    Cran,
    Paper,
    Pypi,
}

impl NodeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeClass::Bioconductor => "bioconductor",
            NodeClass::Cran => "cran",
            NodeClass::Paper => "paper",
            NodeClass::Pypi => "pypi",
        }
    }

    pub fn ecosystem(self) -> Option<Ecosystem> {
        match self {
            NodeClass::Bioconductor => Some(Ecosystem::Bioconductor),
            NodeClass::Cran => Some(Ecosystem::Cran),
            NodeClass::Pypi => Some(Ecosystem::Pypi),
            NodeClass::Paper => None,
        }
    }

    pub fn is_package(self) -> bool {
        self != NodeClass::Paper
    }
}

impl From<Ecosystem> for NodeClass {
    fn from(e: Ecosystem) -> Self {
        match e {
            Ecosystem::Bioconductor => NodeClass::Bioconductor,
            Ecosystem::Cran => NodeClass::Cran,
            Ecosystem::Pypi => NodeClass::Pypi,
        }
    }
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "paper" => Ok(NodeClass::Paper),
            other => other
                .parse::<Ecosystem>()
                .map(NodeClass::from)
                .map_err(|_| format!("unknown node class `{other}`")),
        }
    }
}

/// Which edge weights and node set a centrality computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphVariant {
    /// Every edge weight replaced by 1.
    Unweighted,
    /// Citation counts on mention edges, full graph.
    Weighted,
    /// Citation counts, restricted to each ecosystem's largest connected component.
    WeightedLcc,
}

impl GraphVariant {
    pub const ALL: [GraphVariant; 3] =
        [GraphVariant::Unweighted, GraphVariant::Weighted, GraphVariant::WeightedLcc];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphVariant::Unweighted => "unweighted",
            GraphVariant::Weighted => "weighted",
            GraphVariant::WeightedLcc => "weighted_lcc",
        }
    }
}

impl fmt::Display for GraphVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "unweighted" => Ok(GraphVariant::Unweighted),
            "weighted" => Ok(GraphVariant::Weighted),
            "weighted_lcc" | "lcc" => Ok(GraphVariant::WeightedLcc),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// Identity of a node: DOI for papers, package id for packages.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub class: NodeClass,
    pub key: String,
}

impl NodeId {
    pub fn new(class: NodeClass, key: impl Into<String>) -> Self {
        Self { class, key: key.into() }
    }

    pub fn paper(doi: impl Into<String>) -> Self {
        Self::new(NodeClass::Paper, doi)
    }

    pub fn package(ecosystem: Ecosystem, key: impl Into<String>) -> Self {
        Self::new(ecosystem.into(), key)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.class, self.key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub name: String,
    /// Number of distinct papers mentioning this node.
    pub mention_count: usize,
    /// Package reached only by name with no registry record behind it.
    pub metadata_missing: bool,
    /// Paper without citation data; its mention edges carry weight 0.
    pub citations_unknown: bool,
    /// Attributes carried through from a GEXF file that this crate does not
    /// interpret, keyed by attribute title.
    pub extra: BTreeMap<String, String>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("no seed mentions in the selected ecosystems")]
    NoSeedMentions,
    #[error("edge {from} -> {to}: {reason}")]
    InvalidEdge { from: NodeId, to: NodeId, reason: &'static str },
    #[error("edge references unknown node {0}")]
    UnknownNode(String),
    #[error("GEXF: {0}")]
    Format(String),
    #[error("GEXF XML: {0}")]
    Xml(#[from] quick_xml::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Directed weighted graph over papers and packages, immutable once built.
///
/// Nodes are stored sorted by [`NodeId`]; adjacency lists are sorted by the
/// neighbour's position.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    nodes: Vec<Node>,
    index: HashMap<NodeId, usize>,
    out: Vec<Vec<(usize, f64)>>,
    inc: Vec<Vec<(usize, f64)>>,
}

impl PartialEq for DependencyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.out == other.out
    }
}

impl DependencyGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &NodeId) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    /// `(target, weight)` pairs for edges leaving node `i`.
    pub fn out_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.out[i]
    }

    /// `(source, weight)` pairs for edges entering node `i`.
    pub fn in_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.inc[i]
    }

    /// All edges as `(source, target, weight)` in source-then-target order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, w)| (u, v, w)))
    }

    pub fn weight(&self, from: &NodeId, to: &NodeId) -> Option<f64> {
        let (u, v) = (self.index_of(from)?, self.index_of(to)?);
        self.out[u].iter().find(|&&(t, _)| t == v).map(|&(_, w)| w)
    }

    /// Positions of the package nodes of one ecosystem.
    pub fn package_indices(&self, ecosystem: Ecosystem) -> impl Iterator<Item = usize> + '_ {
        let class = NodeClass::from(ecosystem);
        self.nodes.iter().enumerate().filter(move |(_, n)| n.id.class == class).map(|(i, _)| i)
    }

    pub fn count_by_class(&self) -> BTreeMap<NodeClass, usize> {
        let mut counts = BTreeMap::new();
        for n in &self.nodes {
            *counts.entry(n.id.class).or_default() += 1;
        }
        counts
    }

    /// Same nodes and edges with every weight replaced by 1.
    pub fn unweighted(&self) -> DependencyGraph {
        let mut g = self.clone();
        for list in g.out.iter_mut().chain(g.inc.iter_mut()) {
            for e in list.iter_mut() {
                e.1 = 1.0;
            }
        }
        g
    }

    /// `csv` edge list with columns `from_class,from_key,to_class,to_key,weight`.
    pub fn write_edge_list<W: Write>(&self, writer: W) -> Result<(), GraphError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["from_class", "from_key", "to_class", "to_key", "weight"])?;
        for (u, v, weight) in self.edges() {
            let (a, b) = (&self.nodes[u].id, &self.nodes[v].id);
            w.write_record([a.class.as_str(), &a.key, b.class.as_str(), &b.key, &weight.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Attributes a builder accepts for a node before the graph is frozen.
#[derive(Debug, Clone, Default)]
pub struct NodeAttrs {
    pub name: String,
    pub metadata_missing: bool,
    pub citations_unknown: bool,
    pub extra: BTreeMap<String, String>,
}

/// Accumulates nodes and edges while checking the direction rules.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: BTreeMap<NodeId, NodeAttrs>,
    edges: BTreeMap<(NodeId, NodeId), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a node if absent and returns its attributes for editing.
    pub fn node(&mut self, id: NodeId, name: &str) -> &mut NodeAttrs {
        self.nodes.entry(id).or_insert_with(|| NodeAttrs { name: name.to_string(), ..Default::default() })
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// Adds an edge between existing nodes. Self-loops are dropped with a
    /// warning and a repeated `(from, to)` pair keeps its first weight; both
    /// return `Ok(false)`.
    pub fn edge(&mut self, from: &NodeId, to: &NodeId, weight: f64) -> Result<bool, GraphError> {
        for id in [from, to] {
            if !self.nodes.contains_key(id) {
                return Err(GraphError::UnknownNode(id.to_string()));
            }
        }
        let invalid = |reason| GraphError::InvalidEdge { from: from.clone(), to: to.clone(), reason };
        if to.class == NodeClass::Paper {
            return Err(invalid("papers cannot be edge targets"));
        }
        if from.class.is_package() && from.class != to.class {
            return Err(invalid("dependency edges must stay within one ecosystem"));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(invalid("weight must be finite and non-negative"));
        }
        if from == to {
            log::warn!("dropping self-dependency of {from}");
            return Ok(false);
        }
        match self.edges.entry((from.clone(), to.clone())) {
            std::collections::btree_map::Entry::Occupied(_) => Ok(false),
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(weight);
                Ok(true)
            }
        }
    }

    pub fn build(self) -> DependencyGraph {
        let n = self.nodes.len();
        let mut index = HashMap::with_capacity(n);
        let mut nodes = Vec::with_capacity(n);
        for (i, (id, attrs)) in self.nodes.into_iter().enumerate() {
            index.insert(id.clone(), i);
            nodes.push(Node {
                id,
                name: attrs.name,
                mention_count: 0,
                metadata_missing: attrs.metadata_missing,
                citations_unknown: attrs.citations_unknown,
                extra: attrs.extra,
            });
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for ((from, to), w) in self.edges {
            let (u, v) = (index[&from], index[&to]);
            out[u].push((v, w));
            inc[v].push((u, w));
        }
        for v in 0..n {
            nodes[v].mention_count =
                inc[v].iter().filter(|&&(u, _)| nodes[u].id.class == NodeClass::Paper).count();
        }
        DependencyGraph { nodes, index, out, inc }
    }
}

/// Which ecosystems a build keeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub ecosystems: BTreeSet<Ecosystem>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self { ecosystems: Ecosystem::ALL.into_iter().collect() }
    }
}

/// A dependency named by a package, resolved to a node identity.
struct ResolvedDep {
    id: NodeId,
    name: String,
    missing: bool,
}

fn resolve_name(index: &PackageIndex, ecosystem: Ecosystem, name: &str) -> ResolvedDep {
    match index.get_by_name(ecosystem, name) {
        Some(r) => ResolvedDep {
            id: NodeId::package(ecosystem, &r.package_id),
            name: r.name.clone(),
            missing: false,
        },
        None => ResolvedDep {
            id: NodeId::package(ecosystem, ecosystem.fold_name(name)),
            name: name.to_string(),
            missing: true,
        },
    }
}

fn direct_dependencies(index: &PackageIndex, node: &NodeId) -> Vec<ResolvedDep> {
    let Some(eco) = node.class.ecosystem() else { return Vec::new() };
    index
        .get_by_id(eco, &node.key)
        .map(|r| r.dependencies.iter().map(|d| resolve_name(index, eco, d)).collect())
        .unwrap_or_default()
}

/// Every package reachable from `roots` through one or more dependency edges.
/// A root is included only when some path leads back to it.
pub fn resolve_transitive_dependencies(
    index: &PackageIndex,
    roots: &BTreeSet<NodeId>,
) -> BTreeSet<NodeId> {
    let mut reached = BTreeSet::new();
    let mut queue: VecDeque<NodeId> = roots.iter().cloned().collect();
    while let Some(node) = queue.pop_front() {
        for dep in direct_dependencies(index, &node) {
            if dep.id != node && reached.insert(dep.id.clone()) {
                queue.push_back(dep.id);
            }
        }
    }
    reached
}

/// Builds the network from mention, citation and registry data.
pub fn build_graph(
    mentions: &[MentionRecord],
    citations: &CitationMap,
    index: &PackageIndex,
    config: &BuildConfig,
) -> Result<DependencyGraph, GraphError> {
    let mentions: Vec<&MentionRecord> =
        mentions.iter().filter(|m| config.ecosystems.contains(&m.ecosystem)).collect();
    if mentions.is_empty() {
        return Err(GraphError::NoSeedMentions);
    }

    let mut builder = GraphBuilder::new();
    let mut roots = BTreeSet::new();
    let mut mention_edges = Vec::with_capacity(mentions.len());
    for m in mentions {
        let record = index
            .get_by_id(m.ecosystem, &m.package_id)
            .or_else(|| index.get_by_name(m.ecosystem, &m.package_name));
        let package = match record {
            Some(r) => {
                let id = NodeId::package(m.ecosystem, &r.package_id);
                builder.node(id.clone(), &r.name);
                id
            }
            None => {
                let id = NodeId::package(m.ecosystem, &m.package_id);
                builder.node(id.clone(), &m.package_name).metadata_missing = true;
                id
            }
        };
        let paper = NodeId::paper(&m.paper_doi);
        let weight = match citations.get(&m.paper_doi) {
            Some(c) => c as f64,
            None => {
                builder.node(paper.clone(), &m.paper_doi).citations_unknown = true;
                0.0
            }
        };
        builder.node(paper.clone(), &m.paper_doi);
        roots.insert(package.clone());
        mention_edges.push((paper, package, weight));
    }
    for (paper, package, weight) in &mention_edges {
        builder.edge(paper, package, *weight)?;
    }

    let closure = resolve_transitive_dependencies(index, &roots);
    for package in roots.iter().chain(closure.iter()) {
        for dep in direct_dependencies(index, package) {
            if !builder.contains(&dep.id) {
                builder.node(dep.id.clone(), &dep.name).metadata_missing = dep.missing;
            }
            builder.edge(package, &dep.id, 1.0)?;
        }
    }
    Ok(builder.build())
}

/// Nodes satisfying `keep` and every edge between two kept nodes.
pub fn induced_subgraph<F>(graph: &DependencyGraph, keep: F) -> DependencyGraph
where
    F: Fn(&Node) -> bool,
{
    let mut builder = GraphBuilder::new();
    let kept: Vec<bool> = graph.nodes.iter().map(&keep).collect();
    for (node, _) in graph.nodes.iter().zip(&kept).filter(|(_, &k)| k) {
        let attrs = builder.node(node.id.clone(), &node.name);
        attrs.metadata_missing = node.metadata_missing;
        attrs.citations_unknown = node.citations_unknown;
        attrs.extra = node.extra.clone();
    }
    for (u, v, w) in graph.edges() {
        if kept[u] && kept[v] {
            builder
                .edge(&graph.nodes[u].id, &graph.nodes[v].id, w)
                .expect("edges of a valid graph stay valid in a subgraph");
        }
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PackageRecord;

    fn record(eco: Ecosystem, name: &str, deps: &[&str]) -> PackageRecord {
        PackageRecord {
            ecosystem: eco,
            package_id: name.to_string(),
            name: name.to_string(),
            latest_version: "1".into(),
            dependencies: deps.iter().map(|d| d.to_string()).collect(),
        }
    }

    fn index(records: Vec<PackageRecord>) -> PackageIndex {
        records.into_iter().collect::<Result<_, _>>().unwrap()
    }

    fn cran(key: &str) -> NodeId {
        NodeId::package(Ecosystem::Cran, key)
    }

    fn mention(doi: &str, pkg: &str) -> MentionRecord {
        MentionRecord {
            paper_doi: doi.into(),
            ecosystem: Ecosystem::Cran,
            package_id: pkg.into(),
            package_name: pkg.into(),
        }
    }

    fn closure(idx: &PackageIndex, roots: &[&str]) -> BTreeSet<NodeId> {
        resolve_transitive_dependencies(idx, &roots.iter().map(|r| cran(r)).collect())
    }

    #[test]
    fn transitive_chain() {
        let idx = index(vec![
            record(Ecosystem::Cran, "A", &["B"]),
            record(Ecosystem::Cran, "B", &["C"]),
            record(Ecosystem::Cran, "C", &[]),
        ]);
        assert_eq!(closure(&idx, &["A"]), [cran("B"), cran("C")].into());
    }

    #[test]
    fn transitive_diamond() {
        let idx = index(vec![
            record(Ecosystem::Cran, "A", &["B", "C"]),
            record(Ecosystem::Cran, "B", &["D"]),
            record(Ecosystem::Cran, "C", &["D"]),
            record(Ecosystem::Cran, "D", &[]),
        ]);
        assert_eq!(closure(&idx, &["A"]), [cran("B"), cran("C"), cran("D")].into());
    }

    #[test]
    fn transitive_cycle_returns_to_root() {
        let idx = index(vec![
            record(Ecosystem::Cran, "A", &["B"]),
            record(Ecosystem::Cran, "B", &["A"]),
        ]);
        assert_eq!(closure(&idx, &["A"]), [cran("A"), cran("B")].into());
    }

    fn minimal(citations: &CitationMap) -> DependencyGraph {
        let idx = index(vec![record(Ecosystem::Cran, "A", &["B"]), record(Ecosystem::Cran, "B", &[])]);
        build_graph(&[mention("10.1/p", "A")], citations, &idx, &BuildConfig::default()).unwrap()
    }

    #[test]
    fn minimal_network() {
        let cites: CitationMap = [("10.1/p".to_string(), 5)].into_iter().collect();
        let g = minimal(&cites);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(&NodeId::paper("10.1/p"), &cran("A")), Some(5.0));
        assert_eq!(g.weight(&cran("A"), &cran("B")), Some(1.0));
        assert_eq!(g.get(&cran("A")).unwrap().mention_count, 1);
        assert_eq!(g.get(&cran("B")).unwrap().mention_count, 0);
        assert!(!g.get(&NodeId::paper("10.1/p")).unwrap().citations_unknown);
    }

    #[test]
    fn missing_citations_give_zero_weight_and_flag() {
        let g = minimal(&CitationMap::new());
        assert_eq!(g.weight(&NodeId::paper("10.1/p"), &cran("A")), Some(0.0));
        assert!(g.get(&NodeId::paper("10.1/p")).unwrap().citations_unknown);
    }

    #[test]
    fn no_mentions_is_an_error() {
        let err = build_graph(&[], &CitationMap::new(), &PackageIndex::new(), &BuildConfig::default());
        assert!(matches!(err, Err(GraphError::NoSeedMentions)));
    }

    #[test]
    fn ecosystem_filter_can_empty_the_seed_set() {
        let cfg = BuildConfig { ecosystems: [Ecosystem::Pypi].into() };
        let err = build_graph(&[mention("10.1/p", "A")], &CitationMap::new(), &PackageIndex::new(), &cfg);
        assert!(matches!(err, Err(GraphError::NoSeedMentions)));
    }

    #[test]
    fn dangling_dependencies_become_flagged_stubs() {
        let idx = index(vec![record(Ecosystem::Cran, "A", &["Ghost", "A"])]);
        let g = build_graph(&[mention("10.1/p", "A")], &CitationMap::new(), &idx, &BuildConfig::default())
            .unwrap();
        let ghost = g.get(&cran("Ghost")).unwrap();
        assert!(ghost.metadata_missing);
        assert!(!g.get(&cran("A")).unwrap().metadata_missing);
        // self-dependency dropped
        assert_eq!(g.weight(&cran("A"), &cran("A")), None);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn unknown_mentioned_package_is_a_stub() {
        let g = build_graph(
            &[mention("10.1/p", "Nowhere")],
            &CitationMap::new(),
            &PackageIndex::new(),
            &BuildConfig::default(),
        )
        .unwrap();
        assert!(g.get(&cran("Nowhere")).unwrap().metadata_missing);
    }

    #[test]
    fn repeated_mentions_collapse() {
        let idx = index(vec![record(Ecosystem::Cran, "A", &[])]);
        let mut m2 = mention("10.1/p", "X");
        m2.package_name = "A".into();
        let g = build_graph(
            &[mention("10.1/p", "A"), m2],
            &CitationMap::new(),
            &idx,
            &BuildConfig::default(),
        )
        .unwrap();
        assert_eq!(g.get(&cran("A")).unwrap().mention_count, 1);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn builder_rejects_direction_violations() {
        let mut b = GraphBuilder::new();
        let p = NodeId::paper("d");
        let a = cran("A");
        let x = NodeId::package(Ecosystem::Pypi, "x");
        b.node(p.clone(), "d");
        b.node(a.clone(), "A");
        b.node(x.clone(), "x");
        assert!(b.edge(&a, &p, 1.0).is_err());
        assert!(b.edge(&a, &x, 1.0).is_err());
        assert!(b.edge(&p, &a, -1.0).is_err());
        assert!(b.edge(&p, &cran("nope"), 1.0).is_err());
        assert!(b.edge(&p, &x, 2.0).unwrap());
        assert!(!b.edge(&p, &x, 3.0).unwrap());
        assert_eq!(b.build().weight(&p, &x), Some(2.0));
    }

    #[test]
    fn induced_subgraphs() {
        let cites: CitationMap = [("10.1/p".to_string(), 5)].into_iter().collect();
        let g = minimal(&cites);
        let pkgs = induced_subgraph(&g, |n| n.id.class != NodeClass::Paper);
        assert_eq!((pkgs.node_count(), pkgs.edge_count()), (2, 1));
        assert_eq!(pkgs.get(&cran("A")).unwrap().mention_count, 0);
        assert_eq!(induced_subgraph(&g, |_| true), g);
    }

    #[test]
    fn induced_subgraph_by_class_keeps_only_intra_class_edges() {
        let mut b = GraphBuilder::new();
        let p = NodeId::paper("d");
        let ids = [cran("A"), cran("B"), NodeId::package(Ecosystem::Pypi, "x"), NodeId::package(Ecosystem::Pypi, "y")];
        b.node(p.clone(), "d");
        for id in &ids {
            b.node(id.clone(), &id.key);
            b.edge(&p, id, 1.0).unwrap();
        }
        b.edge(&ids[0], &ids[1], 1.0).unwrap();
        b.edge(&ids[2], &ids[3], 1.0).unwrap();
        let g = b.build();
        let sub = induced_subgraph(&g, |n| n.id.class == NodeClass::Cran);
        assert_eq!(sub.node_count(), 2);
        let edges: Vec<_> = sub.edges().map(|(u, v, _)| (sub.node(u).id.clone(), sub.node(v).id.clone())).collect();
        assert_eq!(edges, vec![(cran("A"), cran("B"))]);
    }

    #[test]
    fn edge_list_export() {
        let cites: CitationMap = [("10.1/p".to_string(), 5)].into_iter().collect();
        let mut buf = Vec::new();
        minimal(&cites).write_edge_list(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "from_class,from_key,to_class,to_key,weight\ncran,A,cran,B,1\npaper,10.1/p,cran,A,5\n"
        );
    }
}
