//! Percentiles, quadrant classification and the ranked Pasteur / popular /
//! Nebraska listings for a synthetic network.
//!
//!     cargo run --example quadrants

use depnet::centrality::{katz, CentralityConfig};
use depnet::graph::{GraphBuilder, NodeId};
use depnet::ingest::Ecosystem;
use depnet::metrics::{classify_quadrant, package_metrics, top_k_reports};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cran = |k: &str| NodeId::package(Ecosystem::Cran, k);
    let mut b = GraphBuilder::new();
    let names = ["app", "plots", "stats", "core", "utils", "tool", "niche"];
    for k in names {
        b.node(cran(k), k);
    }
    // Mention counts: app is popular, core is infrastructure, plots is both.
    let mentions = [("app", 9), ("plots", 6), ("tool", 3), ("stats", 2), ("niche", 1)];
    let mut doi = 0;
    for (pkg, n) in mentions {
        for _ in 0..n {
            doi += 1;
            let paper = NodeId::paper(format!("10.1/{doi}"));
            b.node(paper.clone(), &paper.key.clone());
            b.edge(&paper, &cran(pkg), 1.0)?;
        }
    }
    for (from, to) in [("plots", "core"), ("stats", "core"), ("core", "utils"), ("plots", "utils"), ("tool", "plots")] {
        b.edge(&cran(from), &cran(to), 1.0)?;
    }
    let graph = b.build();

    let result = katz(&graph, &CentralityConfig::default())?;
    let rows = package_metrics(&graph, &result)?;
    println!("{:<8}{:>9}{:>10}{:>12}{:>10}  quadrant", "package", "mentions", "m_pct", "centrality", "c_pct");
    for r in &rows {
        println!(
            "{:<8}{:>9}{:>10.3}{:>12.4}{:>10.3}  {}",
            r.name, r.mentions, r.mention_pct, r.centrality, r.centrality_pct, r.quadrant
        );
    }

    let report = top_k_reports(&rows, 3, &["niche".to_string()]);
    for (title, list) in [("pasteur", &report.pasteur), ("popular", &report.popular), ("nebraska", &report.nebraska), ("sanity", &report.sanity)] {
        let names: Vec<&str> = list.iter().map(|r| r.name.as_str()).collect();
        println!("{title}: {names:?}");
    }

    // Published percentiles classify directly.
    println!("PRISMA (0.9997, 1) -> {}", classify_quadrant(0.9997, 1.0)?);
    println!("GSVA (0.9969, 0.361) -> {}", classify_quadrant(0.9969, 0.361)?);
    println!("vctrs (0.2516, 0.9928) -> {}", classify_quadrant(0.2516, 0.9928)?);
    Ok(())
}
