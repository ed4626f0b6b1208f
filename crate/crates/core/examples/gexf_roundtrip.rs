//! Writes a network as GEXF, reads it back and shows the normalizations the
//! reader applies to foreign files.
//!
//!     cargo run --example gexf_roundtrip

use depnet::graph::{read_gexf, read_gexf_with_warnings, write_gexf, GraphBuilder, NodeId};
use depnet::ingest::Ecosystem;

const FOREIGN: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<gexf xmlns="http://gexf.net/1.3" version="1.3">
  <graph defaultedgetype="directed">
    <attributes class="node">
      <attribute id="0" title="type" type="string"/>
      <attribute id="1" title="license" type="string"/>
    </attributes>
    <nodes>
      <node id="n1" label="10.1/x"><attvalues><attvalue for="0" value="paper"/></attvalues></node>
      <node id="n2" label="ggplot2"><attvalues><attvalue for="0" value="cran"/><attvalue for="1" value="MIT"/></attvalues></node>
      <node id="n3" label="rlang"><attvalues><attvalue for="0" value="cran"/></attvalues></node>
    </nodes>
    <edges>
      <edge source="n1" target="n2" weight="12"/>
      <edge source="n2" target="n3" weight="4"/>
    </edges>
  </graph>
</gexf>"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paper = NodeId::paper("10.1/a&b");
    let pkg = NodeId::package(Ecosystem::Pypi, "scikit-learn");
    let dep = NodeId::package(Ecosystem::Pypi, "numpy");
    let mut b = GraphBuilder::new();
    b.node(paper.clone(), "A <paper>");
    b.node(pkg.clone(), "scikit-learn").extra.insert("license".into(), "BSD-3-Clause".into());
    b.node(dep.clone(), "numpy").metadata_missing = true;
    b.edge(&paper, &pkg, 17.0)?;
    b.edge(&pkg, &dep, 1.0)?;
    let graph = b.build();

    let mut buf = Vec::new();
    write_gexf(&graph, &mut buf)?;
    println!("{}", String::from_utf8(buf.clone())?);
    let back = read_gexf(buf.as_slice())?;
    println!("round trip identical: {}", back == graph);

    let (foreign, warnings) = read_gexf_with_warnings(FOREIGN.as_bytes())?;
    println!("foreign file: {} nodes, {} edges", foreign.node_count(), foreign.edge_count());
    for w in warnings {
        println!("  warning: {w}");
    }
    for (u, v, w) in foreign.edges() {
        println!("  {} -> {} weight {w}", foreign.node(u).id, foreign.node(v).id);
    }
    Ok(())
}
