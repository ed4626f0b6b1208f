//! Descriptive statistics and the mention/centrality quadrant taxonomy.
//!
//! All populations are package nodes; papers never enter a statistic.
//! Percentiles are pooled over every package a result covers, across
//! ecosystems.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::centrality::CentralityResult;
use crate::graph::{DependencyGraph, GraphVariant, NodeClass, NodeId};
use crate::ingest::Ecosystem;

/// Percentile at or above which a package counts as "high".
pub const QUADRANT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("statistic of an empty list")]
    Empty,
    #[error("value {0} is negative or not a number")]
    InvalidValue(f64),
    #[error("percentile ranks need at least two values, got {0}")]
    TooFewValues(usize),
    #[error("percentile {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("no {0} packages in the graph")]
    EmptyEcosystem(Ecosystem),
}

/// Gini coefficient of non-negative values; 0 when they sum to 0.
///
/// Uses the sorted-weights form `sum_i (2i - n - 1) x_(i) / (n * sum x)` with
/// `x_(1) <= ... <= x_(n)`.
pub fn gini(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(MetricsError::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    // Summed as symmetric pairs `(n - 1 - 2i) * (x_(n-i) - x_(i+1))` so every
    // term is non-negative and equal values cancel exactly.
    let len = sorted.len();
    let weighted: f64 = (0..len / 2)
        .map(|i| (n - 1.0 - 2.0 * i as f64) * (sorted[len - 1 - i] - sorted[i]))
        .sum();
    Ok((weighted / (n * total)).clamp(0.0, 1.0))
}

/// Fraction of the other values that are strictly smaller:
/// `|{u : u < v}| / (n - 1)`. Ties share a rank.
pub fn percentile_ranks(values: &[f64]) -> Result<Vec<f64>, MetricsError> {
    if values.len() < 2 {
        return Err(MetricsError::TooFewValues(values.len()));
    }
    if let Some(&bad) = values.iter().find(|v| v.is_nan()) {
        return Err(MetricsError::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let denom = (values.len() - 1) as f64;
    Ok(values
        .iter()
        .map(|v| sorted.partition_point(|u| u < v) as f64 / denom)
        .collect())
}

/// Linear interpolation between order statistics (R type 7, NumPy default)
/// on an ascending slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub median: f64,
    pub iqr: f64,
    pub max: f64,
    pub gini: f64,
}

impl SummaryStats {
    pub fn from_values(values: &[f64]) -> Result<Self, MetricsError> {
        let gini = gini(values)?;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(SummaryStats {
            count: sorted.len(),
            median: quantile_sorted(&sorted, 0.5),
            iqr: quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25),
            max: *sorted.last().expect("non-empty"),
            gini,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    /// Many mentions and high centrality.
    Pasteur,
    /// Many mentions, low centrality.
    Popular,
    /// Few mentions, high centrality.
    Nebraska,
    /// Low on both axes.
    Majority,
}

impl Quadrant {
    pub fn as_str(self) -> &'static str {
        match self {
            Quadrant::Pasteur => "pasteur",
            Quadrant::Popular => "popular",
            Quadrant::Nebraska => "nebraska",
            Quadrant::Majority => "majority",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quadrant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pasteur" => Ok(Quadrant::Pasteur),
            "popular" => Ok(Quadrant::Popular),
            "nebraska" => Ok(Quadrant::Nebraska),
            "majority" => Ok(Quadrant::Majority),
            other => Err(format!("unknown quadrant `{other}`")),
        }
    }
}

pub fn classify_quadrant(mention_pct: f64, centrality_pct: f64) -> Result<Quadrant, MetricsError> {
    for p in [mention_pct, centrality_pct] {
        if !(0.0..=1.0).contains(&p) {
            return Err(MetricsError::OutOfRange(p));
        }
    }
    let high_mentions = mention_pct >= QUADRANT_THRESHOLD;
    let high_centrality = centrality_pct >= QUADRANT_THRESHOLD;
    Ok(match (high_mentions, high_centrality) {
        (true, true) => Quadrant::Pasteur,
        (true, false) => Quadrant::Popular,
        (false, true) => Quadrant::Nebraska,
        (false, false) => Quadrant::Majority,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackageMetricsRow {
    pub node: NodeId,
    pub name: String,
    pub mentions: usize,
    pub mention_pct: f64,
    pub centrality: f64,
    pub centrality_pct: f64,
    pub quadrant: Quadrant,
    /// `mention_pct + centrality_pct`.
    pub pasteur_score: f64,
}

impl PackageMetricsRow {
    /// Builds a row from precomputed percentiles.
    pub fn new(
        node: NodeId,
        name: impl Into<String>,
        mentions: usize,
        mention_pct: f64,
        centrality: f64,
        centrality_pct: f64,
    ) -> Result<Self, MetricsError> {
        Ok(PackageMetricsRow {
            quadrant: classify_quadrant(mention_pct, centrality_pct)?,
            node,
            name: name.into(),
            mentions,
            mention_pct,
            centrality,
            centrality_pct,
            pasteur_score: mention_pct + centrality_pct,
        })
    }
}

/// One row per package scored in `result`, sorted by node id. Mention and
/// centrality percentiles are pooled over those packages.
pub fn package_metrics(
    graph: &DependencyGraph,
    result: &CentralityResult,
) -> Result<Vec<PackageMetricsRow>, MetricsError> {
    let packages: Vec<(&NodeId, f64)> = result
        .scores
        .iter()
        .filter(|(id, _)| id.class.is_package())
        .map(|(id, &s)| (id, s))
        .collect();
    let mentions: Vec<usize> = packages
        .iter()
        .map(|(id, _)| graph.get(id).map(|n| n.mention_count).unwrap_or(0))
        .collect();
    let mention_values: Vec<f64> = mentions.iter().map(|&m| m as f64).collect();
    let centrality_values: Vec<f64> = packages.iter().map(|&(_, s)| s).collect();
    let mention_pct = percentile_ranks(&mention_values)?;
    let centrality_pct = percentile_ranks(&centrality_values)?;

    packages
        .iter()
        .enumerate()
        .map(|(i, &(id, score))| {
            let name = graph.get(id).map(|n| n.name.clone()).unwrap_or_else(|| id.key.clone());
            PackageMetricsRow::new(id.clone(), name, mentions[i], mention_pct[i], score, centrality_pct[i])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcosystemSummary {
    pub ecosystem: Ecosystem,
    pub package_count: usize,
    /// Share of packages that no paper mentions.
    pub dependency_only_fraction: f64,
    pub mention_stats: SummaryStats,
    pub centrality_stats: BTreeMap<GraphVariant, SummaryStats>,
}

/// Mention statistics over an ecosystem's packages, and centrality statistics
/// for every supplied variant over the packages that variant scored.
pub fn summarize_ecosystem(
    graph: &DependencyGraph,
    results: &BTreeMap<GraphVariant, CentralityResult>,
    ecosystem: Ecosystem,
) -> Result<EcosystemSummary, MetricsError> {
    let class = NodeClass::from(ecosystem);
    let packages: Vec<usize> = graph.package_indices(ecosystem).collect();
    if packages.is_empty() {
        return Err(MetricsError::EmptyEcosystem(ecosystem));
    }
    let mentions: Vec<f64> = packages.iter().map(|&i| graph.node(i).mention_count as f64).collect();
    let dependency_only = mentions.iter().filter(|&&m| m == 0.0).count();

    let mut centrality_stats = BTreeMap::new();
    for (variant, result) in results {
        let values: Vec<f64> =
            result.scores.iter().filter(|(id, _)| id.class == class).map(|(_, &s)| s).collect();
        if !values.is_empty() {
            centrality_stats.insert(*variant, SummaryStats::from_values(&values)?);
        }
    }
    Ok(EcosystemSummary {
        ecosystem,
        package_count: packages.len(),
        dependency_only_fraction: dependency_only as f64 / packages.len() as f64,
        mention_stats: SummaryStats::from_values(&mentions)?,
        centrality_stats,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopKReport {
    pub pasteur: Vec<PackageMetricsRow>,
    pub popular: Vec<PackageMetricsRow>,
    pub nebraska: Vec<PackageMetricsRow>,
    /// Rows for explicitly requested packages, in request order.
    pub sanity: Vec<PackageMetricsRow>,
}

fn top_by<F, P>(rows: &[PackageMetricsRow], k: usize, keep: P, score: F) -> Vec<PackageMetricsRow>
where
    F: Fn(&PackageMetricsRow) -> f64,
    P: Fn(&PackageMetricsRow) -> bool,
{
    let mut picked: Vec<&PackageMetricsRow> = rows.iter().filter(|r| keep(r)).collect();
    picked.sort_by(|a, b| {
        score(b).partial_cmp(&score(a)).unwrap_or(Ordering::Equal).then_with(|| a.node.key.cmp(&b.node.key))
    });
    picked.into_iter().take(k).cloned().collect()
}

/// The three ranked listings:
///
/// * pasteur: highest `mention_pct + centrality_pct`;
/// * popular: highest `mention_pct` among rows with `centrality_pct < 0.5`;
/// * nebraska: highest `centrality_pct` among rows with `mention_pct < 0.5`.
///
/// Ties go to the smaller node key. Packages named in `include` (matched on
/// display name or key) are returned as sanity-check rows.
pub fn top_k_reports(rows: &[PackageMetricsRow], k: usize, include: &[String]) -> TopKReport {
    let sanity = include
        .iter()
        .filter_map(|name| rows.iter().find(|r| &r.name == name || &r.node.key == name).cloned())
        .collect();
    TopKReport {
        pasteur: top_by(rows, k, |_| true, |r| r.pasteur_score),
        popular: top_by(rows, k, |r| r.centrality_pct < QUADRANT_THRESHOLD, |r| r.mention_pct),
        nebraska: top_by(rows, k, |r| r.mention_pct < QUADRANT_THRESHOLD, |r| r.centrality_pct),
        sanity,
    }
}
