//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use depnet::graph::{DependencyGraph, GraphBuilder, NodeClass, NodeId};
use depnet::ingest::Ecosystem;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph given as explicit node ids and weighted edges over their indices.
#[derive(Debug, Clone)]
pub struct EdgeListGraph {
    pub ids: Vec<NodeId>,
    pub edges: Vec<(usize, usize, f64)>,
}

impl EdgeListGraph {
    pub fn build(&self) -> DependencyGraph {
        let mut b = GraphBuilder::new();
        for id in &self.ids {
            b.node(id.clone(), &id.key);
        }
        for &(u, v, w) in &self.edges {
            b.edge(&self.ids[u], &self.ids[v], w).expect("generated edge is valid");
        }
        b.build()
    }

    /// Katz scores by enumerating every walk, keyed by node id.
    pub fn oracle(&self, beta: f64, baseline: f64) -> BTreeMap<NodeId, f64> {
        let x = brute_force_katz(self.ids.len(), &self.edges, &vec![baseline; self.ids.len()], beta);
        self.ids.iter().cloned().zip(x).collect()
    }
}

/// `x[v] = sum over walks u -> ... -> v of length k >= 1 of
/// beta^k * product of weights * b[u]`, by depth-first enumeration from every
/// start node. Only terminates on acyclic inputs.
pub fn brute_force_katz(n: usize, edges: &[(usize, usize, f64)], b: &[f64], beta: f64) -> Vec<f64> {
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        out[u].push((v, w));
    }
    let mut x = vec![0.0; n];
    fn walk(out: &[Vec<(usize, f64)>], at: usize, factor: f64, beta: f64, x: &mut [f64]) {
        for &(v, w) in &out[at] {
            let f = factor * beta * w;
            x[v] += f;
            walk(out, v, f, beta, x);
        }
    }
    for (u, &bu) in b.iter().enumerate() {
        walk(&out, u, bu, beta, &mut x);
    }
    x
}

/// Random DAG over at most `max_nodes` nodes and `max_edges` edges with
/// integer weights in `0..=max_weight`. Nodes without in-edges may become
/// papers; all other nodes are CRAN packages so any edge is admissible.
pub fn random_weighted_dag(rng: &mut impl Rng, max_nodes: usize, max_edges: usize, max_weight: u32) -> EdgeListGraph {
    let n = rng.random_range(1..=max_nodes);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let m = rng.random_range(0..=max_edges.min(pairs.len()));
    let mut edges: Vec<(usize, usize, f64)> =
        pairs[..m].iter().map(|&(u, v)| (u, v, rng.random_range(0..=max_weight) as f64)).collect();
    edges.sort_by_key(|&(u, v, _)| (u, v));

    let mut has_in = vec![false; n];
    for &(_, v, _) in &edges {
        has_in[v] = true;
    }
    // Shuffle labels so index order is not the topological order.
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let ids = (0..n)
        .map(|i| {
            let key = format!("n{:02}", labels[i]);
            if !has_in[i] && rng.random_bool(0.3) {
                NodeId::paper(key)
            } else {
                NodeId::package(Ecosystem::Cran, key)
            }
        })
        .collect();
    EdgeListGraph { ids, edges }
}

/// Random two-mode network: papers mention packages with integer citation
/// weights, dependency edges (weight 1) stay within an ecosystem and may form
/// cycles. Names and extra attributes include XML-significant characters.
pub fn random_network(rng: &mut impl Rng) -> DependencyGraph {
    const NAMES: [&str; 6] = ["ggplot2", "a&b", "<tag>", "q\"uote", "ümlaut", "x y.z"];
    let mut b = GraphBuilder::new();
    let papers: Vec<NodeId> =
        (0..rng.random_range(0..6)).map(|i| NodeId::paper(format!("10.1000/p{i}<&>"))).collect();
    for p in &papers {
        let attrs = b.node(p.clone(), &p.key);
        attrs.citations_unknown = rng.random_bool(0.2);
    }
    let mut packages = Vec::new();
    for i in 0..rng.random_range(1..12) {
        let eco = Ecosystem::ALL[rng.random_range(0..3)];
        let id = NodeId::package(eco, format!("pkg{i}"));
        let name = format!("{}{i}", NAMES[rng.random_range(0..NAMES.len())]);
        let attrs = b.node(id.clone(), &name);
        attrs.metadata_missing = rng.random_bool(0.2);
        if rng.random_bool(0.3) {
            attrs.extra.insert("license".into(), "MIT & <others>".into());
        }
        packages.push(id);
    }
    for p in &papers {
        for q in &packages {
            if rng.random_bool(0.3) {
                b.edge(p, q, rng.random_range(0..50) as f64).unwrap();
            }
        }
    }
    for u in &packages {
        for v in &packages {
            if u != v && u.class == v.class && rng.random_bool(0.2) {
                b.edge(u, v, 1.0).unwrap();
            }
        }
    }
    b.build()
}

/// Synthetic stand-in for the published network: 40 packages and 100 papers.
///
/// Packages split into a mention side, where papers mention packages and
/// dependencies form a DAG, and an island that no paper reaches, where the
/// dependency loops live.
#[derive(Debug, Clone)]
pub struct MirrorFixture {
    pub graph: EdgeListGraph,
    pub package_count: usize,
    /// Number of packages placed on an injected loop.
    pub injected_loop_packages: usize,
    /// A dependency edge `u -> v` inside a mention component; adding `v -> u`
    /// creates an in-component 2-cycle.
    pub mention_side_edge: (usize, usize),
}

pub const MIRROR_SEED: u64 = 20_230_611;

pub fn mirror_fixture(seed: u64) -> MirrorFixture {
    const PACKAGES: usize = 40;
    const PAPERS: usize = 100;
    let mut rng = rng(seed);
    let island = rng.random_range(8..=12);
    let mention_side = PACKAGES - island;

    let mut ids = Vec::new();
    for i in 0..mention_side {
        let eco = if i % 3 == 0 { Ecosystem::Pypi } else { Ecosystem::Cran };
        ids.push(NodeId::package(eco, format!("m{i:02}")));
    }
    for i in 0..island {
        ids.push(NodeId::package(Ecosystem::Cran, format!("z{i:02}")));
    }
    let paper_base = ids.len();
    for i in 0..PAPERS {
        ids.push(NodeId::paper(format!("10.5555/{i:03}")));
    }

    let mut edges = Vec::new();
    for u in 0..mention_side {
        for v in u + 1..mention_side {
            if ids[u].class == ids[v].class && rng.random_bool(0.15) {
                edges.push((u, v, 1.0));
            }
        }
    }
    // Make sure at least one mention-side dependency exists.
    if edges.is_empty() {
        edges.push((1, 2, 1.0));
    }
    let mention_side_edge = (edges[0].0, edges[0].1);

    for p in 0..PAPERS {
        let citations = rng.random_range(0..200) as f64;
        let k = rng.random_range(1..=3);
        let mut targets: Vec<usize> = (0..mention_side).collect();
        targets.shuffle(&mut rng);
        for &t in &targets[..k] {
            edges.push((paper_base + p, t, citations));
        }
    }

    // Island: disjoint cycles of random length, then acyclic hangers-on that
    // depend on cycle members.
    let z = |i: usize| mention_side + i;
    let mut placed = 0;
    while island - placed >= 2 + 2 && placed < island / 2 {
        let len = rng.random_range(2..=3).min(island - placed);
        for k in 0..len {
            edges.push((z(placed + k), z(placed + (k + 1) % len), 1.0));
        }
        placed += len;
    }
    for i in placed..island {
        let target = rng.random_range(0..placed);
        edges.push((z(i), z(target), 1.0));
    }

    MirrorFixture {
        graph: EdgeListGraph { ids, edges },
        package_count: PACKAGES,
        injected_loop_packages: placed,
        mention_side_edge,
    }
}

impl MirrorFixture {
    pub fn build(&self) -> DependencyGraph {
        self.graph.build()
    }

    pub fn with_mention_cycle(&self) -> DependencyGraph {
        let mut g = self.graph.clone();
        let (u, v) = self.mention_side_edge;
        g.edges.push((v, u, 1.0));
        g.build()
    }

    pub fn injected_loop_fraction(&self) -> f64 {
        self.injected_loop_packages as f64 / self.package_count as f64
    }
}

/// The three-node network: one paper with 3 citations mentions A, A depends on B.
pub fn minimal_network() -> DependencyGraph {
    let (p, a, b) = minimal_ids();
    let mut g = GraphBuilder::new();
    g.node(p.clone(), "paper");
    g.node(a.clone(), "A");
    g.node(b.clone(), "B");
    g.edge(&p, &a, 3.0).unwrap();
    g.edge(&a, &b, 1.0).unwrap();
    g.build()
}

pub fn minimal_ids() -> (NodeId, NodeId, NodeId) {
    (NodeId::paper("10.1/minimal"), NodeId::package(Ecosystem::Cran, "A"), NodeId::package(Ecosystem::Cran, "B"))
}

/// A two-package dependency cycle `A <-> B`.
pub fn two_cycle() -> DependencyGraph {
    let a = NodeId::package(Ecosystem::Cran, "A");
    let b = NodeId::package(Ecosystem::Cran, "B");
    let mut g = GraphBuilder::new();
    g.node(a.clone(), "A");
    g.node(b.clone(), "B");
    g.edge(&a, &b, 1.0).unwrap();
    g.edge(&b, &a, 1.0).unwrap();
    g.build()
}

/// Minimal raw inputs for the command-line pipeline.
pub struct PipelineInputs {
    pub dir: tempfile::TempDir,
    pub mentions: std::path::PathBuf,
    pub citations: std::path::PathBuf,
    pub registry: std::path::PathBuf,
}

pub fn write_minimal_inputs() -> PipelineInputs {
    let dir = tempfile::tempdir().unwrap();
    let mentions = dir.path().join("mentions.csv");
    let citations = dir.path().join("citations.csv");
    let registry = dir.path().join("registry.jsonl");
    std::fs::write(&mentions, "paper_doi,ecosystem,package_id,package_name\n10.1/minimal,cran,A,A\n").unwrap();
    std::fs::write(&citations, "paper_doi,citation_count\n10.1/minimal,3\n").unwrap();
    std::fs::write(
        &registry,
        concat!(
            r#"{"ecosystem":"cran","package_id":"A","name":"A","latest_version":"1.0","dependencies":["B"]}"#,
            "\n",
            r#"{"ecosystem":"cran","package_id":"B","name":"B","latest_version":"2.0","dependencies":[]}"#,
            "\n"
        ),
    )
    .unwrap();
    PipelineInputs { dir, mentions, citations, registry }
}

pub fn is_package(id: &NodeId) -> bool {
    id.class != NodeClass::Paper
}
