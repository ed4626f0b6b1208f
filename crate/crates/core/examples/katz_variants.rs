//! Katz centrality on a small two-ecosystem network: the three variants,
//! the exact and iterative solvers, and the divergence error on a loop.
//!
//!     cargo run --example katz_variants

use depnet::centrality::{katz_exact_dag, katz_iterative, run_variants, CentralityConfig, CentralityResult};
use depnet::graph::{GraphBuilder, GraphVariant, NodeId};
use depnet::ingest::Ecosystem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cran = |k: &str| NodeId::package(Ecosystem::Cran, k);
    let pypi = |k: &str| NodeId::package(Ecosystem::Pypi, k);
    let mut b = GraphBuilder::new();
    for id in [cran("ggplot2"), cran("rlang"), cran("vctrs"), cran("lonely"), pypi("scanpy"), pypi("numpy")] {
        b.node(id.clone(), &id.key.clone());
    }
    for (doi, cites, target) in [("10.1/a", 40.0, cran("ggplot2")), ("10.1/b", 2.0, pypi("scanpy")), ("10.1/c", 5.0, cran("lonely"))] {
        let paper = NodeId::paper(doi);
        b.node(paper.clone(), doi);
        b.edge(&paper, &target, cites)?;
    }
    b.edge(&cran("ggplot2"), &cran("rlang"), 1.0)?;
    b.edge(&cran("ggplot2"), &cran("vctrs"), 1.0)?;
    b.edge(&cran("vctrs"), &cran("rlang"), 1.0)?;
    b.edge(&pypi("scanpy"), &pypi("numpy"), 1.0)?;
    let graph = b.build();

    let results = run_variants(&graph, &CentralityConfig::default())?;
    println!("{:<22}{:>12}{:>12}{:>14}", "node", "unweighted", "weighted", "weighted_lcc");
    for node in graph.nodes().iter().filter(|n| n.id.class.is_package()) {
        let cell = |v: GraphVariant| {
            let r: &CentralityResult = &results[&v];
            r.scores.get(&node.id).map(|s| format!("{s:.4}")).unwrap_or_else(|| "-".into())
        };
        println!(
            "{:<22}{:>12}{:>12}{:>14}",
            node.id.to_string(),
            cell(GraphVariant::Unweighted),
            cell(GraphVariant::Weighted),
            cell(GraphVariant::WeightedLcc)
        );
    }

    let cfg = CentralityConfig::default().with_beta(0.5);
    let exact = katz_exact_dag(&graph, &cfg)?;
    let iterative = katz_iterative(&graph, &cfg)?;
    println!("beta=0.5: exact and iterative agree: {}", exact.raw == iterative.raw);
    println!("iterations used: {}", iterative.iterations_used);

    let mut looped = GraphBuilder::new();
    looped.node(cran("a"), "a");
    looped.node(cran("b"), "b");
    looped.edge(&cran("a"), &cran("b"), 1.0)?;
    looped.edge(&cran("b"), &cran("a"), 1.0)?;
    let looped = looped.build();
    let converged = katz_iterative(&looped, &CentralityConfig::default().with_beta(0.25))?;
    println!("2-cycle, beta=0.25: {:?}", converged.raw.values().collect::<Vec<_>>());
    match katz_iterative(&looped, &CentralityConfig::default()) {
        Err(e) => println!("2-cycle, beta=1: {e}"),
        Ok(_) => println!("2-cycle, beta=1: unexpectedly converged"),
    }
    Ok(())
}
