//! Katz centrality on the two-mode network.
//!
//! Raw scores solve
//!
//! ```text
//! x[v] = beta * sum over edges u -> v of  w(u, v) * (x[u] + b[u])
//! ```
//!
//! which expands to `x = sum_{k>=1} beta^k (W^T)^k b`: every directed path
//! ending at `v` contributes the product of its edge weights times the
//! baseline of its first node, attenuated by `beta` per hop. Papers have no
//! incoming edges and therefore score 0, while a paper with citation weight
//! `c` adds `beta * c * b[paper]` to each package it mentions.
//!
//! On acyclic graphs the sum is finite for any `beta` and is accumulated
//! exactly in one pass over a topological order. Graphs with dependency loops
//! need `beta` below the reciprocal spectral radius and go through the
//! iterative solver, which fails loudly rather than returning a wrong answer.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{induced_subgraph, DependencyGraph, GraphVariant, NodeId};
use crate::ingest::Ecosystem;
use crate::structure::{largest_connected_component, topological_order};

/// Consecutive non-shrinking iterations that count as divergence.
const DIVERGENCE_WINDOW: usize = 50;
const DIVERGENCE_NORM: f64 = 1e12;

#[derive(Debug, Error, PartialEq)]
pub enum CentralityError {
    #[error("invalid centrality configuration: {0}")]
    InvalidConfig(String),
    #[error("graph contains a dependency cycle; exact accumulation needs a DAG, use katz_iterative with beta below 1/spectral radius")]
    Cyclic,
    #[error(
        "Katz iteration diverges for beta = {beta} after {iterations} iterations: estimated \
         spectral radius of W is {spectral_radius:.6}, so beta must stay below {limit:.6}"
    )]
    Divergence { beta: f64, spectral_radius: f64, limit: f64, iterations: usize },
}

/// Per-node baseline `b`: a default value with optional per-node overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Baseline {
    pub default: f64,
    pub overrides: BTreeMap<NodeId, f64>,
}

impl Baseline {
    pub fn uniform(value: f64) -> Self {
        Self { default: value, overrides: BTreeMap::new() }
    }

    pub fn value_for(&self, id: &NodeId) -> f64 {
        self.overrides.get(id).copied().unwrap_or(self.default)
    }
}

impl Default for Baseline {
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityConfig {
    /// Attenuation per hop.
    pub beta: f64,
    pub baseline: Baseline,
    pub variant: GraphVariant,
    /// Iterative solver stops once the largest per-node change drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Scale scores to unit Euclidean norm.
    pub normalize: bool,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            baseline: Baseline::default(),
            variant: GraphVariant::Weighted,
            tolerance: 1e-10,
            max_iterations: 10_000,
            normalize: true,
        }
    }
}

impl CentralityConfig {
    pub fn with_variant(mut self, variant: GraphVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<(), CentralityError> {
        let bad = |m: &str| Err(CentralityError::InvalidConfig(m.to_string()));
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        let baselines = std::iter::once(&self.baseline.default).chain(self.baseline.overrides.values());
        for &b in baselines {
            if !(b.is_finite() && b >= 0.0) {
                return bad("baseline values must be non-negative");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult {
    /// Unnormalized scores.
    pub raw: BTreeMap<NodeId, f64>,
    /// Normalized scores when `normalized`, otherwise equal to `raw`.
    pub scores: BTreeMap<NodeId, f64>,
    pub variant: GraphVariant,
    pub converged: bool,
    pub iterations_used: usize,
    pub normalized: bool,
}

impl CentralityResult {
    fn from_raw(
        graph: &DependencyGraph,
        x: Vec<f64>,
        config: &CentralityConfig,
        converged: bool,
        iterations_used: usize,
    ) -> Self {
        let raw: BTreeMap<NodeId, f64> =
            graph.nodes().iter().zip(&x).map(|(n, &v)| (n.id.clone(), v)).collect();
        let norm = raw.values().map(|v| v * v).sum::<f64>().sqrt();
        let normalized = config.normalize && norm > 0.0;
        let scores = if normalized {
            raw.iter().map(|(k, v)| (k.clone(), v / norm)).collect()
        } else {
            raw.clone()
        };
        CentralityResult { raw, scores, variant: config.variant, converged, iterations_used, normalized }
    }
}

/// The graph a variant is evaluated on.
fn variant_view(graph: &DependencyGraph, variant: GraphVariant) -> Cow<'_, DependencyGraph> {
    match variant {
        GraphVariant::Unweighted => Cow::Owned(graph.unweighted()),
        GraphVariant::Weighted => Cow::Borrowed(graph),
        GraphVariant::WeightedLcc => {
            // Dependency edges never cross ecosystems and papers only act as
            // sources, so the union of the per-ecosystem components yields the
            // same package scores as evaluating each component on its own.
            let members: BTreeSet<NodeId> = Ecosystem::ALL
                .iter()
                .flat_map(|&e| largest_connected_component(graph, e).lcc_nodes)
                .collect();
            Cow::Owned(induced_subgraph(graph, |n| members.contains(&n.id)))
        }
    }
}

fn baselines(graph: &DependencyGraph, baseline: &Baseline) -> Vec<f64> {
    graph.nodes().iter().map(|n| baseline.value_for(&n.id)).collect()
}

/// `beta * sum_u w(u,v) * (x[u] + b[u])`, summed in source order.
fn propagate(graph: &DependencyGraph, v: usize, x: &[f64], b: &[f64], beta: f64) -> f64 {
    beta * graph.in_edges(v).iter().fold(0.0, |acc, &(u, w)| acc + w * (x[u] + b[u]))
}

fn accumulate_in_order(graph: &DependencyGraph, order: &[usize], config: &CentralityConfig) -> Vec<f64> {
    let b = baselines(graph, &config.baseline);
    let mut x = vec![0.0; graph.node_count()];
    for &v in order {
        x[v] = propagate(graph, v, &x, &b, config.beta);
    }
    x
}

/// Exact scores by a single pass in topological order. Fails with
/// [`CentralityError::Cyclic`] if the variant's graph has a cycle.
pub fn katz_exact_dag(
    graph: &DependencyGraph,
    config: &CentralityConfig,
) -> Result<CentralityResult, CentralityError> {
    config.validate()?;
    let view = variant_view(graph, config.variant);
    let order = topological_order(&view).ok_or(CentralityError::Cyclic)?;
    let x = accumulate_in_order(&view, &order, config);
    Ok(CentralityResult::from_raw(&view, x, config, true, 1))
}

/// Fixed-point iteration `x <- beta W^T (x + b)` from `x = 0`.
///
/// Stops when the largest per-node change is below `tolerance`
/// (`converged = true`) or after `max_iterations` (`converged = false`).
/// Because all weights are non-negative the iterates grow monotonically; if
/// the step size stops shrinking for a sustained stretch the series diverges
/// and a [`CentralityError::Divergence`] is returned.
pub fn katz_iterative(
    graph: &DependencyGraph,
    config: &CentralityConfig,
) -> Result<CentralityResult, CentralityError> {
    config.validate()?;
    let view = variant_view(graph, config.variant);
    let n = view.node_count();
    let b = baselines(&view, &config.baseline);
    let mut x = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut prev_step = f64::INFINITY;
    let mut prev_norm = 0.0;
    let mut non_shrinking = 0;
    let mut growing = 0;

    for iteration in 1..=config.max_iterations {
        for (v, slot) in next.iter_mut().enumerate() {
            *slot = propagate(&view, v, &x, &b, config.beta);
        }
        let mut max_change: f64 = 0.0;
        let mut step_sq = 0.0;
        let mut norm_sq = 0.0;
        for (new, old) in next.iter().zip(&x) {
            let d = new - old;
            max_change = max_change.max(d.abs());
            step_sq += d * d;
            norm_sq += new * new;
        }
        std::mem::swap(&mut x, &mut next);
        if max_change < config.tolerance {
            return Ok(CentralityResult::from_raw(&view, x, config, true, iteration));
        }

        let (step, norm) = (step_sq.sqrt(), norm_sq.sqrt());
        // The ratio of successive steps is a power-iteration estimate of the
        // spectral radius of beta * W.
        let ratio = if prev_step.is_finite() && prev_step > 0.0 { step / prev_step } else { 0.0 };
        non_shrinking = if step >= prev_step * (1.0 - 1e-9) { non_shrinking + 1 } else { 0 };
        growing = if norm > prev_norm { growing + 1 } else { 0 };
        if non_shrinking >= DIVERGENCE_WINDOW
            || (norm > DIVERGENCE_NORM && growing >= DIVERGENCE_WINDOW)
            || !norm.is_finite()
        {
            let spectral_radius = ratio.max(1.0) / config.beta;
            return Err(CentralityError::Divergence {
                beta: config.beta,
                spectral_radius,
                limit: 1.0 / spectral_radius,
                iterations: iteration,
            });
        }
        prev_step = step;
        prev_norm = norm;
    }
    Ok(CentralityResult::from_raw(&view, x, config, false, config.max_iterations))
}

/// Exact accumulation when the variant's graph is acyclic, the iterative
/// solver otherwise.
pub fn katz(graph: &DependencyGraph, config: &CentralityConfig) -> Result<CentralityResult, CentralityError> {
    config.validate()?;
    let view = variant_view(graph, config.variant);
    match topological_order(&view) {
        Some(order) => {
            let x = accumulate_in_order(&view, &order, config);
            Ok(CentralityResult::from_raw(&view, x, config, true, 1))
        }
        None => katz_iterative(&view, &CentralityConfig { variant: GraphVariant::Weighted, ..config.clone() })
            .map(|r| CentralityResult { variant: config.variant, ..r }),
    }
}

/// All three variants, each normalized on its own.
pub fn run_variants(
    graph: &DependencyGraph,
    base: &CentralityConfig,
) -> Result<BTreeMap<GraphVariant, CentralityResult>, CentralityError> {
    run_selected_variants(graph, base, &GraphVariant::ALL)
}

/// Like [`run_variants`] for a chosen subset. Variants are computed in
/// parallel; results do not depend on scheduling.
pub fn run_selected_variants(
    graph: &DependencyGraph,
    base: &CentralityConfig,
    variants: &[GraphVariant],
) -> Result<BTreeMap<GraphVariant, CentralityResult>, CentralityError> {
    let results: Vec<(GraphVariant, Result<CentralityResult, CentralityError>)> = std::thread::scope(|s| {
        let handles: Vec<_> = variants
            .iter()
            .map(|&v| (v, s.spawn(move || katz(graph, &base.clone().with_variant(v)))))
            .collect();
        handles
            .into_iter()
            .map(|(v, h)| (v, h.join().expect("centrality worker panicked")))
            .collect()
    });
    results.into_iter().map(|(v, r)| r.map(|r| (v, r))).collect()
}
