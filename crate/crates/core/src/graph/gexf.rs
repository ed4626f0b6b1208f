//! GEXF 1.2-draft reading and writing.
//!
//! Only the subset needed for the network is understood: directed edges with
//! a float `weight`, and node attributes `type` (node class), `key`,
//! `metadata_missing` and `citations_unknown`. Other node attributes are kept
//! verbatim in [`Node::extra`](super::Node) and written back out.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{DependencyGraph, GraphBuilder, GraphError, NodeClass, NodeId};

/// Writes the graph as a GEXF document. Node ids are `class:key`.
pub fn write_gexf<W: Write>(graph: &DependencyGraph, mut w: W) -> Result<(), GraphError> {
    let extra_titles: BTreeSet<&str> =
        graph.nodes().iter().flat_map(|n| n.extra.keys().map(String::as_str)).collect();
    let extra_ids: BTreeMap<&str, String> =
        extra_titles.iter().enumerate().map(|(i, t)| (*t, format!("x{i}"))).collect();

    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, r#"<gexf xmlns="http://gexf.net/1.2draft" version="1.2">"#)?;
    writeln!(w, r#"  <graph mode="static" defaultedgetype="directed">"#)?;
    writeln!(w, r#"    <attributes class="node">"#)?;
    for (id, ty) in [
        ("type", "string"),
        ("key", "string"),
        ("metadata_missing", "boolean"),
        ("citations_unknown", "boolean"),
        ("mentions", "integer"),
    ] {
        writeln!(w, r#"      <attribute id="{id}" title="{id}" type="{ty}"/>"#)?;
    }
    for (title, id) in &extra_ids {
        writeln!(w, r#"      <attribute id="{id}" title="{}" type="string"/>"#, escape(*title))?;
    }
    writeln!(w, "    </attributes>")?;

    writeln!(w, "    <nodes>")?;
    for node in graph.nodes() {
        writeln!(
            w,
            r#"      <node id="{}" label="{}">"#,
            escape(node.id.to_string().as_str()),
            escape(node.name.as_str())
        )?;
        writeln!(w, "        <attvalues>")?;
        let mut attvalue = |id: &str, value: &str| {
            writeln!(w, r#"          <attvalue for="{id}" value="{}"/>"#, escape(value))
        };
        attvalue("type", node.id.class.as_str())?;
        attvalue("key", &node.id.key)?;
        attvalue("metadata_missing", if node.metadata_missing { "true" } else { "false" })?;
        attvalue("citations_unknown", if node.citations_unknown { "true" } else { "false" })?;
        attvalue("mentions", &node.mention_count.to_string())?;
        for (title, value) in &node.extra {
            attvalue(&extra_ids[title.as_str()], value)?;
        }
        writeln!(w, "        </attvalues>")?;
        writeln!(w, "      </node>")?;
    }
    writeln!(w, "    </nodes>")?;

    writeln!(w, "    <edges>")?;
    for (i, (u, v, weight)) in graph.edges().enumerate() {
        writeln!(
            w,
            r#"      <edge id="{i}" source="{}" target="{}" weight="{weight}"/>"#,
            escape(graph.node(u).id.to_string().as_str()),
            escape(graph.node(v).id.to_string().as_str()),
        )?;
    }
    writeln!(w, "    </edges>")?;
    writeln!(w, "  </graph>")?;
    writeln!(w, "</gexf>")?;
    w.flush()?;
    Ok(())
}

#[derive(Default)]
struct RawNode {
    gexf_id: String,
    label: Option<String>,
    values: Vec<(String, String)>,
}

#[derive(Default)]
struct RawEdge {
    source: String,
    target: String,
    weight: Option<String>,
    values: Vec<(String, String)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum AttrClass {
    Node,
    Edge,
}

fn attrs(e: &BytesStart<'_>) -> Result<HashMap<String, String>, GraphError> {
    let mut map = HashMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| GraphError::Format(err.to_string()))?;
        let key = String::from_utf8_lossy(a.key.local_name().as_ref()).into_owned();
        let value = a.unescape_value()?.into_owned();
        map.insert(key, value);
    }
    Ok(map)
}

/// Reads a GEXF document, logging recoverable problems as warnings.
pub fn read_gexf<R: BufRead>(source: R) -> Result<DependencyGraph, GraphError> {
    let (graph, warnings) = read_gexf_with_warnings(source)?;
    for w in warnings {
        log::warn!("{w}");
    }
    Ok(graph)
}

/// Like [`read_gexf`] but hands the warnings back to the caller.
pub fn read_gexf_with_warnings<R: BufRead>(
    source: R,
) -> Result<(DependencyGraph, Vec<String>), GraphError> {
    let mut reader = Reader::from_reader(source);
    reader.config_mut().trim_text(true);

    let mut warnings = Vec::new();
    let mut titles: HashMap<(AttrClass, String), String> = HashMap::new();
    let mut attr_class = AttrClass::Node;
    let mut nodes: Vec<RawNode> = Vec::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut in_node = false;
    let mut in_edge = false;
    let mut saw_graph = false;

    let mut buf = Vec::new();
    loop {
        let event = reader.read_event_into(&mut buf)?;
        let (element, is_empty) = match &event {
            Event::Start(e) => (Some(e), false),
            Event::Empty(e) => (Some(e), true),
            Event::End(e) => {
                match e.local_name().as_ref() {
                    b"node" => in_node = false,
                    b"edge" => in_edge = false,
                    _ => {}
                }
                (None, false)
            }
            Event::Eof => break,
            _ => (None, false),
        };
        if let Some(e) = element {
            let a = attrs(e)?;
            match e.local_name().as_ref() {
                b"graph" => {
                    saw_graph = true;
                    if let Some(t) = a.get("defaultedgetype") {
                        if t != "directed" {
                            return Err(GraphError::Format(format!(
                                "defaultedgetype `{t}` is not supported, edges must be directed"
                            )));
                        }
                    }
                }
                b"attributes" => {
                    attr_class = match a.get("class").map(String::as_str) {
                        Some("edge") => AttrClass::Edge,
                        _ => AttrClass::Node,
                    };
                }
                b"attribute" => {
                    let id = a.get("id").cloned().unwrap_or_default();
                    let title = a.get("title").cloned().unwrap_or_else(|| id.clone());
                    titles.insert((attr_class, id), title);
                }
                b"node" => {
                    let gexf_id = a
                        .get("id")
                        .cloned()
                        .ok_or_else(|| GraphError::Format("node without id".into()))?;
                    nodes.push(RawNode { gexf_id, label: a.get("label").cloned(), values: Vec::new() });
                    in_node = !is_empty;
                }
                b"edge" => {
                    if let Some(t) = a.get("type") {
                        if t != "directed" {
                            return Err(GraphError::Format(format!(
                                "edge {} -> {} declared `{t}`, edges must be directed",
                                a.get("source").map(String::as_str).unwrap_or("?"),
                                a.get("target").map(String::as_str).unwrap_or("?"),
                            )));
                        }
                    }
                    let endpoint = |k: &str| {
                        a.get(k).cloned().ok_or_else(|| GraphError::Format(format!("edge without {k}")))
                    };
                    edges.push(RawEdge {
                        source: endpoint("source")?,
                        target: endpoint("target")?,
                        weight: a.get("weight").cloned(),
                        values: Vec::new(),
                    });
                    in_edge = !is_empty;
                }
                b"attvalue" => {
                    let pair = (
                        a.get("for").or_else(|| a.get("id")).cloned().unwrap_or_default(),
                        a.get("value").cloned().unwrap_or_default(),
                    );
                    if in_node {
                        if let Some(n) = nodes.last_mut() {
                            n.values.push(pair);
                        }
                    } else if in_edge {
                        if let Some(ed) = edges.last_mut() {
                            ed.values.push(pair);
                        }
                    }
                }
                _ => {}
            }
        }
        buf.clear();
    }
    if !saw_graph {
        return Err(GraphError::Format("no <graph> element".into()));
    }

    let title_of = |class: AttrClass, id: &str| -> String {
        titles.get(&(class, id.to_string())).cloned().unwrap_or_else(|| id.to_string())
    };

    let mut builder = GraphBuilder::new();
    let mut ids: HashMap<String, NodeId> = HashMap::with_capacity(nodes.len());
    let mut ignored_attrs = BTreeSet::new();
    for raw in nodes {
        let mut class = None;
        let mut key = None;
        let mut flags = (false, false);
        let mut extra = BTreeMap::new();
        for (for_id, value) in raw.values {
            let title = title_of(AttrClass::Node, &for_id);
            match title.as_str() {
                "type" => {
                    class = Some(value.parse::<NodeClass>().map_err(|_| {
                        GraphError::Format(format!("node `{}` has unknown type `{value}`", raw.gexf_id))
                    })?)
                }
                "key" => key = Some(value),
                "metadata_missing" => flags.0 = value == "true",
                "citations_unknown" => flags.1 = value == "true",
                "mentions" => {}
                _ => {
                    extra.insert(title, value);
                }
            }
        }
        let class = class.ok_or_else(|| {
            GraphError::Format(format!("node `{}` has no `type` attribute", raw.gexf_id))
        })?;
        let id = NodeId::new(class, key.unwrap_or_else(|| raw.gexf_id.clone()));
        if builder.contains(&id) {
            return Err(GraphError::Format(format!("duplicate node {id}")));
        }
        let name = raw.label.unwrap_or_else(|| id.key.clone());
        let slot = builder.node(id.clone(), &name);
        slot.metadata_missing = flags.0;
        slot.citations_unknown = flags.1;
        slot.extra = extra;
        if ids.insert(raw.gexf_id.clone(), id).is_some() {
            return Err(GraphError::Format(format!("duplicate node id `{}`", raw.gexf_id)));
        }
    }

    for raw in edges {
        let lookup = |gid: &str| ids.get(gid).cloned().ok_or_else(|| GraphError::UnknownNode(gid.to_string()));
        let (from, to) = (lookup(&raw.source)?, lookup(&raw.target)?);
        let mut weight_text = raw.weight;
        for (for_id, value) in raw.values {
            let title = title_of(AttrClass::Edge, &for_id);
            if title == "weight" && weight_text.is_none() {
                weight_text = Some(value);
            } else {
                ignored_attrs.insert(title);
            }
        }
        let mut weight = match weight_text {
            Some(t) => t.trim().parse::<f64>().map_err(|_| {
                GraphError::Format(format!("edge {from} -> {to}: weight `{t}` is not a number"))
            })?,
            None => {
                warnings.push(format!("edge {from} -> {to} has no weight, using 1.0"));
                1.0
            }
        };
        if from.class.is_package() && weight != 1.0 {
            warnings.push(format!("dependency edge {from} -> {to} has weight {weight}, using 1.0"));
            weight = 1.0;
        }
        if from == to {
            warnings.push(format!("dropping self-loop on {from}"));
            continue;
        }
        if !builder.edge(&from, &to, weight)? {
            warnings.push(format!("ignoring parallel edge {from} -> {to}"));
        }
    }
    if !ignored_attrs.is_empty() {
        let list: Vec<_> = ignored_attrs.into_iter().collect();
        warnings.push(format!("ignored edge attributes: {}", list.join(", ")));
    }
    Ok((builder.build(), warnings))
}
