//! Cycles and connectivity: strongly connected components, dependency-loop
//! participation, acyclicity of the mention-connected part of the network and
//! per-ecosystem largest weakly connected components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{induced_subgraph, DependencyGraph, NodeClass, NodeId};
use crate::ingest::Ecosystem;

#[derive(Debug, Clone, PartialEq)]
pub struct SccReport {
    /// Partition of all nodes. Members are sorted, and components are sorted
    /// by their first member.
    pub components: Vec<Vec<NodeId>>,
    /// Packages in a component of two or more nodes.
    pub loop_packages: BTreeSet<NodeId>,
    /// `|loop_packages| / |package nodes|`, 0 when there are no packages.
    pub loop_fraction: f64,
}

impl SccReport {
    /// Components with at least two members.
    pub fn loops(&self) -> impl Iterator<Item = &[NodeId]> {
        self.components.iter().filter(|c| c.len() >= 2).map(Vec::as_slice)
    }

    /// Loop fraction restricted to one ecosystem's packages.
    pub fn loop_fraction_for(&self, graph: &DependencyGraph, ecosystem: Ecosystem) -> f64 {
        let class = NodeClass::from(ecosystem);
        let total = graph.package_indices(ecosystem).count();
        if total == 0 {
            return 0.0;
        }
        let looped = self.loop_packages.iter().filter(|id| id.class == class).count();
        looped as f64 / total as f64
    }
}

/// Tarjan's algorithm with an explicit stack. Returns components as lists of
/// node positions in completion order.
pub(crate) fn scc_indices(graph: &DependencyGraph) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = graph.node_count();
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if order[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut next_edge)) = calls.last_mut() {
            if *next_edge == 0 && order[v] == UNSEEN {
                order[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let edges = graph.out_edges(v);
            if let Some(&(w, _)) = edges.get(*next_edge) {
                *next_edge += 1;
                if order[w] == UNSEEN {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == order[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }
    components
}

pub fn strongly_connected_components(graph: &DependencyGraph) -> SccReport {
    let mut components: Vec<Vec<NodeId>> = scc_indices(graph)
        .into_iter()
        .map(|c| {
            let mut ids: Vec<NodeId> = c.into_iter().map(|i| graph.node(i).id.clone()).collect();
            ids.sort();
            ids
        })
        .collect();
    components.sort();

    let loop_packages: BTreeSet<NodeId> = components
        .iter()
        .filter(|c| c.len() >= 2)
        .flatten()
        .filter(|id| id.class.is_package())
        .cloned()
        .collect();
    let packages = graph.nodes().iter().filter(|n| n.id.class.is_package()).count();
    let loop_fraction = if packages == 0 { 0.0 } else { loop_packages.len() as f64 / packages as f64 };
    SccReport { components, loop_packages, loop_fraction }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Weak component label for every node, considering only nodes in `member`.
fn weak_components(graph: &DependencyGraph, member: &[bool]) -> Vec<usize> {
    let mut sets = DisjointSets::new(graph.node_count());
    for (u, v, _) in graph.edges() {
        if member[u] && member[v] {
            sets.union(u, v);
        }
    }
    (0..graph.node_count()).map(|i| sets.find(i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    /// A closed walk `[a, b, ..., a]` when `acyclic` is false.
    pub witness_cycle: Option<Vec<NodeId>>,
}

/// Checks that no dependency cycle lies in a weakly connected component that
/// contains a paper.
pub fn assert_mention_components_acyclic(graph: &DependencyGraph) -> AcyclicityReport {
    let n = graph.node_count();
    let labels = weak_components(graph, &vec![true; n]);
    let mut mentioned = vec![false; n];
    for (i, node) in graph.nodes().iter().enumerate() {
        if node.id.class == NodeClass::Paper {
            mentioned[labels[i]] = true;
        }
    }

    let offending = scc_indices(graph)
        .into_iter()
        .filter(|c| c.len() >= 2 && mentioned[labels[c[0]]])
        .min_by_key(|c| c.iter().copied().min());
    match offending {
        None => AcyclicityReport { acyclic: true, witness_cycle: None },
        Some(component) => {
            let cycle = shortest_cycle_through(graph, &component);
            AcyclicityReport {
                acyclic: false,
                witness_cycle: Some(cycle.into_iter().map(|i| graph.node(i).id.clone()).collect()),
            }
        }
    }
}

/// Shortest closed walk from the smallest member of a strongly connected
/// component back to itself, staying inside the component.
fn shortest_cycle_through(graph: &DependencyGraph, component: &[usize]) -> Vec<usize> {
    let inside: BTreeSet<usize> = component.iter().copied().collect();
    let start = *inside.first().expect("non-empty component");
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in graph.out_edges(u) {
            if !inside.contains(&v) {
                continue;
            }
            if v == start {
                let mut path = vec![u];
                while let Some(&p) = parent.get(path.last().unwrap()) {
                    path.push(p);
                }
                if *path.last().unwrap() != start {
                    path.push(start);
                }
                path.reverse();
                path.push(start);
                return path;
            }
            if v != start && !parent.contains_key(&v) {
                parent.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    unreachable!("a strongly connected component of size >= 2 has a cycle through every member")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub ecosystem: Ecosystem,
    /// Sizes of all weak components of the ecosystem slice, descending.
    pub component_sizes: Vec<usize>,
    pub lcc_nodes: BTreeSet<NodeId>,
}

impl ComponentReport {
    pub fn is_empty(&self) -> bool {
        self.lcc_nodes.is_empty()
    }
}

/// Largest weakly connected component of one ecosystem's packages together
/// with the papers mentioning them. Equal sizes are resolved in favour of the
/// component holding the lexicographically smallest node key.
pub fn largest_connected_component(graph: &DependencyGraph, ecosystem: Ecosystem) -> ComponentReport {
    let class = NodeClass::from(ecosystem);
    let member: Vec<bool> = graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| match node.id.class {
            NodeClass::Paper => graph.out_edges(i).iter().any(|&(v, _)| graph.node(v).id.class == class),
            c => c == class,
        })
        .collect();
    let labels = weak_components(graph, &member);

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (0..graph.node_count()).filter(|&i| member[i]) {
        groups.entry(labels[i]).or_default().push(i);
    }
    let mut component_sizes: Vec<usize> = groups.values().map(Vec::len).collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));

    let smallest_key =
        |g: &Vec<usize>| g.iter().map(|&i| graph.node(i).id.key.as_str()).min().unwrap_or("");
    let lcc_nodes = groups
        .values()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| smallest_key(b).cmp(smallest_key(a))))
        .map(|g| g.iter().map(|&i| graph.node(i).id.clone()).collect())
        .unwrap_or_default();
    ComponentReport { ecosystem, component_sizes, lcc_nodes }
}

/// Subgraph induced by an ecosystem's largest connected component.
pub fn lcc_subgraph(graph: &DependencyGraph, ecosystem: Ecosystem) -> DependencyGraph {
    let report = largest_connected_component(graph, ecosystem);
    induced_subgraph(graph, |n| report.lcc_nodes.contains(&n.id))
}

/// Whether the package part of the graph admits a topological order.
pub fn is_acyclic(graph: &DependencyGraph) -> bool {
    topological_order(graph).is_some()
}

/// Kahn's algorithm; ties are taken in node order. `None` if there is a cycle.
pub(crate) fn topological_order(graph: &DependencyGraph) -> Option<Vec<usize>> {
    let n = graph.node_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| graph.in_edges(v).len()).collect();
    let mut ready: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = ready.pop_front() {
        order.push(u);
        for &(v, _) in graph.out_edges(u) {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push_back(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}
