//! Dependency loops, loop fractions and the acyclicity check for components
//! that contain papers.
//!
//!     cargo run --example cycles

use depnet::graph::{GraphBuilder, NodeId};

fn show<'a>(ids: impl IntoIterator<Item = &'a NodeId>) -> String {
    ids.into_iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
use depnet::ingest::Ecosystem;
use depnet::structure::{assert_mention_components_acyclic, largest_connected_component, strongly_connected_components};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cran = |k: &str| NodeId::package(Ecosystem::Cran, k);
    let mut b = GraphBuilder::new();
    for k in ["used", "helper", "x", "y", "z"] {
        b.node(cran(k), k);
    }
    let paper = NodeId::paper("10.1/p");
    b.node(paper.clone(), "p");
    b.edge(&paper, &cran("used"), 10.0)?;
    b.edge(&cran("used"), &cran("helper"), 1.0)?;
    // A loop that no paper reaches.
    b.edge(&cran("x"), &cran("y"), 1.0)?;
    b.edge(&cran("y"), &cran("z"), 1.0)?;
    b.edge(&cran("z"), &cran("x"), 1.0)?;
    let graph = b.build();

    let scc = strongly_connected_components(&graph);
    for component in scc.loops() {
        println!("loop: {}", show(component));
    }
    println!("cran loop_fraction={}", scc.loop_fraction_for(&graph, Ecosystem::Cran));
    println!("mention components acyclic: {}", assert_mention_components_acyclic(&graph).acyclic);
    let lcc = largest_connected_component(&graph, Ecosystem::Cran);
    println!("cran component sizes {:?}, LCC: {}", lcc.component_sizes, show(&lcc.lcc_nodes));

    // Closing a loop next to the mentioned package flips the verdict.
    let mut b = GraphBuilder::new();
    for node in graph.nodes() {
        b.node(node.id.clone(), &node.name);
    }
    for (u, v, w) in graph.edges() {
        b.edge(&graph.node(u).id, &graph.node(v).id, w)?;
    }
    b.edge(&cran("helper"), &cran("used"), 1.0)?;
    let report = assert_mention_components_acyclic(&b.build());
    let witness = report.witness_cycle.unwrap_or_default();
    println!("after injecting helper -> used: acyclic={} witness: {}", report.acyclic, show(&witness));
    Ok(())
}
