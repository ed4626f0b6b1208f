//! Builds the three-node network (a paper with 3 citations mentions A, A
//! depends on B) from raw inputs and prints its Katz scores.
//!
//!     cargo run --example minimal_network

use depnet::centrality::{katz, CentralityConfig};
use depnet::graph::{build_graph, BuildConfig, GraphVariant};
use depnet::ingest::{CitationMap, Ecosystem, MentionRecord, PackageIndex, PackageRecord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mentions = vec![MentionRecord {
        paper_doi: "10.1/minimal".into(),
        ecosystem: Ecosystem::Cran,
        package_id: "A".into(),
        package_name: "A".into(),
    }];
    let citations: CitationMap = [("10.1/minimal".to_string(), 3)].into_iter().collect();
    let record = |name: &str, deps: &[&str]| PackageRecord {
        ecosystem: Ecosystem::Cran,
        package_id: name.into(),
        name: name.into(),
        latest_version: "1.0".into(),
        dependencies: deps.iter().map(|d| d.to_string()).collect(),
    };
    let index: PackageIndex = [record("A", &["B"]), record("B", &[])].into_iter().collect::<Result<_, _>>()?;

    let graph = build_graph(&mentions, &citations, &index, &BuildConfig::default())?;
    println!("{} nodes, {} edges", graph.node_count(), graph.edge_count());
    for (u, v, w) in graph.edges() {
        println!("  {} -> {} (weight {w})", graph.node(u).id, graph.node(v).id);
    }

    for variant in [GraphVariant::Weighted, GraphVariant::Unweighted] {
        let result = katz(&graph, &CentralityConfig::default().with_variant(variant))?;
        println!("{variant}:");
        for (id, raw) in &result.raw {
            println!("  {id:<18} raw {raw:<4} normalized {:.6}", result.scores[id]);
        }
    }
    Ok(())
}
