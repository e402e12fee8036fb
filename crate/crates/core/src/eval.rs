//! Ranking metrics, benchmark datasets, evaluation runs and weight sweeps.
//!
//! Metrics use binary relevance over agent ids:
//!
//! - Recall@K: `|top_k ∩ R| / |R|`
//! - AP@K: `Σ_{i ≤ k, hit at i} precision@i / min(|R|, k)`
//! - nDCG@K: `DCG@k / IDCG@k` with `DCG@k = Σ rel_i / log2(i + 1)`
//!
//! A run retrieves every question (or every step) once per distinct cutoff
//! `N`, then scores each requested `K`. Step-wise runs report two
//! granularities: per step against step-level ground truth, and the
//! cross-step union against question-level ground truth.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::baselines::{provenance_counts, Bm25Corpus, Strategy};
use crate::catalog::KnowledgeGraph;
use crate::embedding::{EmbeddingVector, TextOptions};
use crate::error::Result;
use crate::fusion::FusionConfig;
use crate::retrieval::{default_cutoff, union_steps, AgentRouter, QueryMode, RoutedAgent};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("relevant set is empty")]
    EmptyRelevant,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("query `{query_id}`: no relevant agents")]
    EmptyRelevant { query_id: String },
    #[error("query `{query_id}`: unknown agent `{reference}`")]
    UnknownAgent { query_id: String, reference: String },
    #[error("query `{query_id}`: step-wise evaluation needs at least one step")]
    MissingSteps { query_id: String },
    #[error("query `{query_id}`: {steps} steps but {labels} step-level label sets")]
    StepLabelMismatch {
        query_id: String,
        steps: usize,
        labels: usize,
    },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("weight grid is empty")]
    EmptyGrid,
    #[error("no cutoffs requested")]
    NoCutoffs,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}, record {record}: {message}")]
    Parse {
        source_name: String,
        record: usize,
        message: String,
    },
}

fn check(relevant_len: usize, k: usize) -> Result<(), MetricError> {
    if k == 0 {
        return Err(MetricError::ZeroK);
    }
    if relevant_len == 0 {
        return Err(MetricError::EmptyRelevant);
    }
    Ok(())
}

/// Positions (0-based, within the top `k`) of first occurrences of relevant
/// items.
fn hit_positions<A: AsRef<str>, B: AsRef<str>>(retrieved: &[A], relevant: &[B], k: usize) -> (Vec<usize>, usize) {
    let rel: HashSet<&str> = relevant.iter().map(AsRef::as_ref).collect();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut hits = Vec::new();
    for (i, r) in retrieved.iter().take(k).enumerate() {
        let r = r.as_ref();
        if rel.contains(r) && seen.insert(r) {
            hits.push(i);
        }
    }
    (hits, rel.len())
}

/// Fraction of relevant items found in the top `k`.
pub fn recall_at_k<A: AsRef<str>, B: AsRef<str>>(
    retrieved: &[A],
    relevant: &[B],
    k: usize,
) -> Result<f64, MetricError> {
    check(relevant.len(), k)?;
    let (hits, n_rel) = hit_positions(retrieved, relevant, k);
    Ok(hits.len() as f64 / n_rel as f64)
}

/// Average precision at `k`, normalized by `min(|relevant|, k)`.
pub fn map_at_k<A: AsRef<str>, B: AsRef<str>>(retrieved: &[A], relevant: &[B], k: usize) -> Result<f64, MetricError> {
    check(relevant.len(), k)?;
    let (hits, n_rel) = hit_positions(retrieved, relevant, k);
    let sum: f64 = hits
        .iter()
        .enumerate()
        .map(|(found, &pos)| (found + 1) as f64 / (pos + 1) as f64)
        .sum();
    Ok(sum / n_rel.min(k) as f64)
}

/// Normalized DCG at `k` with binary gains.
pub fn ndcg_at_k<A: AsRef<str>, B: AsRef<str>>(retrieved: &[A], relevant: &[B], k: usize) -> Result<f64, MetricError> {
    check(relevant.len(), k)?;
    let (hits, n_rel) = hit_positions(retrieved, relevant, k);
    let discount = |pos: usize| 1.0 / ((pos + 2) as f64).log2();
    let dcg: f64 = hits.iter().map(|&p| discount(p)).sum();
    let idcg: f64 = (0..n_rel.min(k)).map(discount).sum();
    Ok(dcg / idcg)
}

/// Recall, AP and nDCG at one cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtK {
    pub k: usize,
    pub recall: f64,
    pub map: f64,
    pub ndcg: f64,
}

impl AtK {
    pub fn compute<A: AsRef<str>, B: AsRef<str>>(
        retrieved: &[A],
        relevant: &[B],
        k: usize,
    ) -> Result<Self, MetricError> {
        Ok(Self {
            k,
            recall: recall_at_k(retrieved, relevant, k)?,
            map: map_at_k(retrieved, relevant, k)?,
            ndcg: ndcg_at_k(retrieved, relevant, k)?,
        })
    }

    fn mean(k: usize, items: &[AtK]) -> Self {
        let n = items.len().max(1) as f64;
        Self {
            k,
            recall: items.iter().map(|m| m.recall).sum::<f64>() / n,
            map: items.iter().map(|m| m.map).sum::<f64>() / n,
            ndcg: items.iter().map(|m| m.ndcg).sum::<f64>() / n,
        }
    }
}

/// One benchmark question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalQuery {
    pub id: String,
    #[serde(alias = "question_text")]
    pub question: String,
    #[serde(default)]
    pub steps: Vec<String>,
    /// Question-level ground truth.
    #[serde(alias = "relevant_agents_query")]
    pub relevant_agents: Vec<String>,
    /// Step-level ground truth, parallel to `steps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relevant_agents_per_step: Option<Vec<Vec<String>>>,
}

impl EvalQuery {
    /// Ground truth for step `i`, falling back to the question level when
    /// step labels are absent or empty.
    pub fn step_relevant(&self, i: usize) -> &[String] {
        match self.relevant_agents_per_step.as_ref().and_then(|p| p.get(i)) {
            Some(labels) if !labels.is_empty() => labels,
            _ => &self.relevant_agents,
        }
    }
}

/// Parses a dataset given as a JSON array or as JSON lines.
pub fn parse_dataset(source_name: &str, content: &str) -> Result<Vec<EvalQuery>, EvalError> {
    let parse_err = |record: usize, e: serde_json::Error| EvalError::Parse {
        source_name: source_name.to_string(),
        record,
        message: e.to_string(),
    };
    let trimmed = content.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(trimmed).map_err(|e| parse_err(0, e))?;
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| serde_json::from_value(v).map_err(|e| parse_err(i + 1, e)))
            .collect()
    } else {
        content
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| parse_err(i + 1, e)))
            .collect()
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<EvalQuery>, EvalError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&path.display().to_string(), &content)
}

/// Rewrites agent references (ids or unique names) to catalog ids and
/// checks dataset invariants.
pub fn resolve_dataset(graph: &KnowledgeGraph, dataset: &[EvalQuery]) -> Result<Vec<EvalQuery>, EvalError> {
    let resolve_all = |query_id: &str, refs: &[String]| -> Result<Vec<String>, EvalError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in refs {
            let agent = graph.resolve_agent(r).ok_or_else(|| EvalError::UnknownAgent {
                query_id: query_id.to_string(),
                reference: r.clone(),
            })?;
            if seen.insert(agent.id.as_str()) {
                out.push(agent.id.clone());
            }
        }
        Ok(out)
    };
    dataset
        .iter()
        .map(|q| {
            if q.relevant_agents.is_empty() {
                return Err(EvalError::EmptyRelevant { query_id: q.id.clone() });
            }
            let per_step = match &q.relevant_agents_per_step {
                Some(p) if p.len() != q.steps.len() => {
                    return Err(EvalError::StepLabelMismatch {
                        query_id: q.id.clone(),
                        steps: q.steps.len(),
                        labels: p.len(),
                    })
                }
                Some(p) => Some(p.iter().map(|s| resolve_all(&q.id, s)).collect::<Result<Vec<_>, _>>()?),
                None => None,
            };
            Ok(EvalQuery {
                relevant_agents: resolve_all(&q.id, &q.relevant_agents)?,
                relevant_agents_per_step: per_step,
                ..q.clone()
            })
        })
        .collect()
}

/// How step-wise results are scored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    /// Each step against its own ground truth; mean over steps, then queries.
    #[default]
    PerStep,
    /// Cross-step union truncated to `K` against question-level truth.
    PerQueryUnion,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::PerStep => "per_step",
            Granularity::PerQueryUnion => "per_query_union",
        })
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per_step" | "per-step" => Ok(Granularity::PerStep),
            "per_query_union" | "per-query-union" => Ok(Granularity::PerQueryUnion),
            other => Err(format!(
                "unknown granularity `{other}` (expected per_step or per_query_union)"
            )),
        }
    }
}

fn default_ks() -> Vec<usize> {
    vec![1, 3, 5]
}

fn default_mode() -> QueryMode {
    QueryMode::Stepwise
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub fusion: FusionConfig,
    /// Per-corpus cutoff; `max(50, 10K)` per K when absent.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default = "default_mode")]
    pub mode: QueryMode,
    #[serde(default)]
    pub granularity: Granularity,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Graph,
            fusion: FusionConfig::default(),
            n: None,
            ks: default_ks(),
            mode: QueryMode::Stepwise,
            granularity: Granularity::PerStep,
        }
    }
}

impl EvalConfig {
    pub fn cutoff(&self, k: usize) -> usize {
        self.n.unwrap_or_else(|| default_cutoff(k))
    }
}

/// Everything needed to interpret a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_note: Option<String>,
    pub fusion: FusionConfig,
    pub model_id: String,
    pub dim: usize,
    /// Cutoff used for each K.
    pub n_per_k: BTreeMap<usize, usize>,
    pub n_rule: String,
    pub mode: QueryMode,
    pub granularity: Granularity,
    pub text_options: TextOptions,
    pub tie_break: String,
    pub step_union: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bm25_corpus: Option<Bm25Corpus>,
    pub catalog_digest: String,
    pub agents: usize,
    pub tools: usize,
    pub queries: usize,
    pub mean_steps: f64,
}

/// Where returned agents came from, counted over every scored list at the
/// largest K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub via_agent_node: usize,
    pub via_tool_node: usize,
    pub agent_fraction: f64,
    pub tool_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryMetrics {
    pub id: String,
    pub steps: usize,
    pub metrics: Vec<AtK>,
    /// Returned agents at the largest K: the direct list, or the step union.
    pub retrieved: Vec<String>,
}

/// Aggregate and per-query metrics under one granularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GranularityReport {
    pub granularity: Granularity,
    pub aggregate: Vec<AtK>,
    pub per_query: Vec<QueryMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub metadata: RunMetadata,
    /// Means over `per_query` at the configured granularity.
    pub aggregate: Vec<AtK>,
    pub per_query: Vec<QueryMetrics>,
    /// The other granularity, for step-wise runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alongside: Option<GranularityReport>,
    pub provenance: Provenance,
}

/// One row of the flat report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub strategy: Strategy,
    pub alpha_agent: f64,
    pub alpha_tool: f64,
    pub granularity: Granularity,
    pub k: usize,
    pub recall: f64,
    pub map: f64,
    pub ndcg: f64,
}

impl MetricsReport {
    pub fn at(&self, k: usize) -> Option<&AtK> {
        self.aggregate.iter().find(|m| m.k == k)
    }

    /// One row per K and granularity.
    pub fn table_rows(&self) -> Vec<TableRow> {
        let md = &self.metadata;
        let row = |g: Granularity, m: &AtK| TableRow {
            strategy: md.strategy,
            alpha_agent: md.fusion.alpha_agent,
            alpha_tool: md.fusion.alpha_tool,
            granularity: g,
            k: m.k,
            recall: m.recall,
            map: m.map,
            ndcg: m.ndcg,
        };
        let mut rows: Vec<TableRow> = self.aggregate.iter().map(|m| row(md.granularity, m)).collect();
        if let Some(other) = &self.alongside {
            rows.extend(other.aggregate.iter().map(|m| row(other.granularity, m)));
        }
        rows
    }
}

fn mean_per_query(ks: &[usize], per_query: &[QueryMetrics]) -> Vec<AtK> {
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            let items: Vec<AtK> = per_query.iter().map(|q| q.metrics[i]).collect();
            AtK::mean(k, &items)
        })
        .collect()
}

struct QueryRun {
    /// Per K: one ranked list per step (or a single direct list).
    lists: Vec<Vec<Vec<RoutedAgent>>>,
}

fn ids(agents: &[RoutedAgent]) -> Vec<&str> {
    agents.iter().map(|a| a.agent_id.as_str()).collect()
}

/// Runs `strategy` over a dataset and scores it.
pub fn evaluate_run(router: &AgentRouter, dataset: &[EvalQuery], cfg: &EvalConfig) -> Result<MetricsReport> {
    if dataset.is_empty() {
        return Err(EvalError::EmptyDataset.into());
    }
    if cfg.ks.is_empty() {
        return Err(EvalError::NoCutoffs.into());
    }
    if cfg.ks.contains(&0) {
        return Err(EvalError::Metric(MetricError::ZeroK).into());
    }
    cfg.fusion.validate()?;
    let dataset = resolve_dataset(router.graph(), dataset)?;
    let stepwise = cfg.mode == QueryMode::Stepwise;
    if stepwise {
        if let Some(q) = dataset.iter().find(|q| q.steps.is_empty()) {
            return Err(EvalError::MissingSteps { query_id: q.id.clone() }.into());
        }
    }

    let texts_of = |q: &EvalQuery| -> Vec<String> {
        if stepwise {
            q.steps.clone()
        } else {
            vec![q.question.clone()]
        }
    };
    let all_texts: Vec<String> = dataset.iter().flat_map(texts_of).collect();
    let vectors: Option<Vec<EmbeddingVector>> = if cfg.strategy.needs_embedding() {
        let refs: Vec<&str> = all_texts.iter().map(String::as_str).collect();
        Some(router.embed_queries(&refs)?)
    } else {
        None
    };
    let mut offsets = Vec::with_capacity(dataset.len());
    let mut at = 0;
    for q in &dataset {
        offsets.push(at);
        at += texts_of(q).len();
    }

    // Retrieve once per distinct cutoff at the largest K sharing it; smaller
    // K are prefixes of that list.
    let mut groups: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in &cfg.ks {
        let e = groups.entry(cfg.cutoff(k)).or_insert(k);
        *e = (*e).max(k);
    }
    let runs: Vec<QueryRun> = dataset
        .par_iter()
        .zip(offsets.par_iter())
        .map(|(q, &offset)| -> Result<QueryRun> {
            let texts = texts_of(q);
            let mut by_n: BTreeMap<usize, Vec<Vec<RoutedAgent>>> = BTreeMap::new();
            for (&n, &k_max) in &groups {
                let lists = texts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let v = vectors.as_ref().map(|vs| &vs[offset + i]);
                        router.rank_query(cfg.strategy, t, v, k_max, n, &cfg.fusion)
                    })
                    .collect::<Result<Vec<_>>>()?;
                by_n.insert(n, lists);
            }
            let lists = cfg
                .ks
                .iter()
                .map(|&k| {
                    by_n[&cfg.cutoff(k)]
                        .iter()
                        .map(|l| l[..l.len().min(k)].to_vec())
                        .collect()
                })
                .collect();
            Ok(QueryRun { lists })
        })
        .collect::<Result<_>>()?;

    let k_max_idx = (0..cfg.ks.len()).max_by_key(|&i| cfg.ks[i]).expect("ks is nonempty");
    let score = |granularity: Granularity| -> Result<Vec<QueryMetrics>> {
        dataset
            .iter()
            .zip(&runs)
            .map(|(q, run)| {
                let metrics = cfg
                    .ks
                    .iter()
                    .zip(&run.lists)
                    .map(|(&k, lists)| match granularity {
                        Granularity::PerStep if stepwise => {
                            let per_step = lists
                                .iter()
                                .enumerate()
                                .map(|(i, l)| AtK::compute(&ids(l), q.step_relevant(i), k))
                                .collect::<Result<Vec<_>, _>>()?;
                            Ok(AtK::mean(k, &per_step))
                        }
                        _ => AtK::compute(&ids(&union_steps(lists, k)), &q.relevant_agents, k),
                    })
                    .collect::<Result<Vec<_>, MetricError>>()
                    .map_err(EvalError::from)?;
                let top = &run.lists[k_max_idx];
                Ok(QueryMetrics {
                    id: q.id.clone(),
                    steps: q.steps.len(),
                    metrics,
                    retrieved: union_steps(top, cfg.ks[k_max_idx])
                        .into_iter()
                        .map(|a| a.agent_id)
                        .collect(),
                })
            })
            .collect()
    };

    let granularity = if stepwise {
        cfg.granularity
    } else {
        Granularity::PerQueryUnion
    };
    let per_query = score(granularity)?;
    let alongside = if stepwise {
        let other = match granularity {
            Granularity::PerStep => Granularity::PerQueryUnion,
            Granularity::PerQueryUnion => Granularity::PerStep,
        };
        let per_query = score(other)?;
        Some(GranularityReport {
            granularity: other,
            aggregate: mean_per_query(&cfg.ks, &per_query),
            per_query,
        })
    } else {
        None
    };

    let (mut via_agent, mut via_tool) = (0, 0);
    for run in &runs {
        for list in &run.lists[k_max_idx] {
            let (a, t) = provenance_counts(list);
            via_agent += a;
            via_tool += t;
        }
    }
    let total = (via_agent + via_tool).max(1) as f64;
    let graph = router.graph();
    let metadata = RunMetadata {
        strategy: cfg.strategy,
        strategy_note: cfg.strategy.note().map(str::to_string),
        fusion: cfg.fusion,
        model_id: router.provider().model_id().to_string(),
        dim: router.provider().dim(),
        n_per_k: cfg.ks.iter().map(|&k| (k, cfg.cutoff(k))).collect(),
        n_rule: match cfg.n {
            Some(n) => format!("fixed N={n}"),
            None => "N = max(50, 10K)".to_string(),
        },
        mode: cfg.mode,
        granularity,
        text_options: router.text_options().clone(),
        tie_break:
            "similarity descending, then tool before agent, then ingestion order; fused-score ties by smaller base rank"
                .into(),
        step_union: "steps in order, agents in rank order, first occurrence wins, truncated to K".into(),
        bm25_corpus: (cfg.strategy == Strategy::Bm25).then(|| router.bm25().corpus()),
        catalog_digest: crate::index::catalog_digest(graph),
        agents: graph.agents().len(),
        tools: graph.tools().len(),
        queries: dataset.len(),
        mean_steps: dataset.iter().map(|q| q.steps.len()).sum::<usize>() as f64 / dataset.len() as f64,
    };
    Ok(MetricsReport {
        metadata,
        aggregate: mean_per_query(&cfg.ks, &per_query),
        per_query,
        alongside,
        provenance: Provenance {
            via_agent_node: via_agent,
            via_tool_node: via_tool,
            agent_fraction: via_agent as f64 / total,
            tool_fraction: via_tool as f64 / total,
        },
    })
}

/// Weight ratios swept by default, as `(alpha_agent, alpha_tool)`.
pub const DEFAULT_GRID: [(f64, f64); 7] = [
    (1.0, 3.0),
    (1.0, 2.0),
    (1.0, 1.5),
    (1.0, 1.0),
    (1.5, 1.0),
    (2.0, 1.0),
    (3.0, 1.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha_agent: f64,
    pub alpha_tool: f64,
    pub strategy: Strategy,
    pub report: MetricsReport,
}

/// Recall at one K per grid point for both fusion strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub ratio: String,
    pub alpha_agent: f64,
    pub alpha_tool: f64,
    pub graph: f64,
    pub wrrf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Flat table: one row per grid point, strategy, granularity and K.
    pub fn table_rows(&self) -> Vec<TableRow> {
        self.rows.iter().flat_map(|r| r.report.table_rows()).collect()
    }

    pub fn row(&self, strategy: Strategy, alpha_agent: f64, alpha_tool: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.strategy == strategy && r.alpha_agent == alpha_agent && r.alpha_tool == alpha_tool)
    }

    /// Recall@`k` per grid point, in grid order.
    pub fn recall_series(&self, k: usize) -> Vec<SeriesPoint> {
        let mut points: Vec<SeriesPoint> = Vec::new();
        for r in &self.rows {
            let recall = r.report.at(k).map_or(f64::NAN, |m| m.recall);
            let idx = match points
                .iter()
                .position(|p| p.alpha_agent == r.alpha_agent && p.alpha_tool == r.alpha_tool)
            {
                Some(i) => i,
                None => {
                    points.push(SeriesPoint {
                        ratio: format!("{}:{}", r.alpha_agent, r.alpha_tool),
                        alpha_agent: r.alpha_agent,
                        alpha_tool: r.alpha_tool,
                        graph: f64::NAN,
                        wrrf: f64::NAN,
                    });
                    points.len() - 1
                }
            };
            match r.strategy {
                Strategy::Wrrf => points[idx].wrrf = recall,
                _ => points[idx].graph = recall,
            }
        }
        points
    }
}

/// Evaluates the type-weighted pipeline and the standard weighted RRF
/// baseline at every grid point.
pub fn sweep_weights(
    router: &AgentRouter,
    dataset: &[EvalQuery],
    grid: &[(f64, f64)],
    base: &EvalConfig,
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid.into());
    }
    let mut rows = Vec::with_capacity(grid.len() * 2);
    for &(alpha_agent, alpha_tool) in grid {
        for strategy in [Strategy::Graph, Strategy::Wrrf] {
            let cfg = EvalConfig {
                strategy,
                fusion: FusionConfig {
                    alpha_agent,
                    alpha_tool,
                    ..base.fusion
                },
                ..base.clone()
            };
            rows.push(SweepRow {
                alpha_agent,
                alpha_tool,
                strategy,
                report: evaluate_run(router, dataset, &cfg)?,
            });
        }
    }
    Ok(SweepReport { rows })
}

fn str_field<'a>(v: &'a Value, keys: &[&str]) -> Option<&'a str> {
    keys.iter().find_map(|k| v.get(*k).and_then(Value::as_str))
}

fn agent_refs(v: &Value, keys: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for key in keys {
        match v.get(*key) {
            Some(Value::String(s)) => out.push(s.clone()),
            Some(Value::Array(items)) => {
                for item in items {
                    match item {
                        Value::String(s) => out.push(s.clone()),
                        Value::Object(_) => {
                            if let Some(s) = str_field(item, &["server", "agent", "mcp_server", "name"]) {
                                out.push(s.to_string());
                            }
                        }
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn dedup(refs: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    refs.into_iter().filter(|r| seen.insert(r.clone())).collect()
}

/// Converts a question file in the LiveMCPBench layout into [`EvalQuery`]
/// records.
///
/// Input is a JSON array, an object holding such an array under
/// `questions`/`data`, or JSON lines. Field mapping, first match wins:
///
/// | target | source keys |
/// |---|---|
/// | id | `id`, `task_id`, `question_id`, else the 1-based record number |
/// | question | `question`, `Question`, `query`, `task` |
/// | steps | `steps`, `Steps`, `step_by_step`: strings, or objects with `step`/`description`/`text` |
/// | step labels | per step object: `servers`, `server`, `agents`, `agent`, `mcp_servers` |
/// | question labels | `relevant_agents`, `servers`, `mcp_servers`, `agents`, else the union of step labels |
///
/// Tool references of the form `server/tool` or `server.tool` count as their
/// server. With a catalog, every reference is resolved to an agent id; an
/// unresolvable reference is an error.
pub fn convert_livemcp(
    source_name: &str,
    content: &str,
    graph: Option<&KnowledgeGraph>,
) -> Result<Vec<EvalQuery>, EvalError> {
    let records: Vec<Value> = match serde_json::from_str::<Value>(content.trim()) {
        Ok(Value::Array(items)) => items,
        Ok(Value::Object(obj)) => match obj.get("questions").or_else(|| obj.get("data")) {
            Some(Value::Array(items)) => items.clone(),
            _ => vec![Value::Object(obj)],
        },
        Ok(_) | Err(_) => content
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| EvalError::Parse {
                    source_name: source_name.to_string(),
                    record: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?,
    };

    let server_of = |r: &str| -> String {
        if let Some(g) = graph {
            if g.resolve_agent(r).is_some() {
                return r.to_string();
            }
        }
        r.split(['/', '.']).next().unwrap_or(r).to_string()
    };
    let label_keys = ["servers", "server", "agents", "agent", "mcp_servers"];

    let queries = records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let err = |message: &str| EvalError::Parse {
                source_name: source_name.to_string(),
                record: i + 1,
                message: message.to_string(),
            };
            let id = match rec
                .get("id")
                .or_else(|| rec.get("task_id"))
                .or_else(|| rec.get("question_id"))
            {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Number(n)) => n.to_string(),
                _ => (i + 1).to_string(),
            };
            let question = str_field(rec, &["question", "Question", "query", "task"])
                .ok_or_else(|| err("missing question text"))?
                .to_string();
            let raw_steps = ["steps", "Steps", "step_by_step"]
                .iter()
                .find_map(|k| rec.get(*k).and_then(Value::as_array))
                .cloned()
                .unwrap_or_default();
            let mut steps = Vec::new();
            let mut step_labels = Vec::new();
            for s in &raw_steps {
                match s {
                    Value::String(text) => {
                        steps.push(text.clone());
                        step_labels.push(Vec::new());
                    }
                    Value::Object(_) => {
                        let text = str_field(s, &["step", "description", "text"])
                            .ok_or_else(|| err("step object without text"))?;
                        steps.push(text.to_string());
                        let labels = agent_refs(s, &label_keys).iter().map(|r| server_of(r)).collect();
                        step_labels.push(dedup(labels));
                    }
                    _ => return Err(err("step is neither text nor an object")),
                }
            }
            let mut relevant: Vec<String> = agent_refs(rec, &["relevant_agents", "servers", "mcp_servers", "agents"])
                .iter()
                .map(|r| server_of(r))
                .collect();
            if relevant.is_empty() {
                relevant = step_labels.iter().flatten().cloned().collect();
            }
            let relevant = dedup(relevant);
            let per_step = step_labels.iter().any(|l| !l.is_empty()).then_some(step_labels);
            Ok(EvalQuery {
                id,
                question,
                steps,
                relevant_agents: relevant,
                relevant_agents_per_step: per_step,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    match graph {
        Some(g) => resolve_dataset(g, &queries),
        None => Ok(queries),
    }
}
