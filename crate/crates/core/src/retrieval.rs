//! The routing pipeline.
//!
//! For one query vector:
//!
//! 1. search the tool corpus and the agent corpus for their top `N` hits;
//! 2. merge the two lists;
//! 3. assign global base ranks and rescore with per-type weights
//!    (see [`crate::fusion`]);
//! 4. walk the fused list in score order, map each hit to its agent (itself,
//!    or the tool's owner) and keep first occurrences until `K` agents are
//!    collected.
//!
//! Step-wise querying runs the pipeline once per step and unions the
//! per-step agent lists in step order, first occurrence winning.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{self, Bm25Corpus, Bm25Index, Bm25Params, Strategy};
use crate::catalog::{KnowledgeGraph, NodeType};
use crate::embedding::{EmbeddingProvider, EmbeddingVector, TextOptions};
use crate::error::Result;
use crate::fusion::{type_weighted_rank, FusionConfig, ScoredCandidate};
use crate::index::{IndexContainer, IndexError, IndexVersion, VectorIndex};

/// Direct querying uses the question as is; step-wise querying retrieves
/// once per decomposed step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    #[default]
    Direct,
    Stepwise,
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryMode::Direct => "direct",
            QueryMode::Stepwise => "stepwise",
        })
    }
}

impl std::str::FromStr for QueryMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "direct" => Ok(QueryMode::Direct),
            "stepwise" | "step-wise" => Ok(QueryMode::Stepwise),
            other => Err(format!("unknown query mode `{other}` (expected direct or stepwise)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RequestError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("per-corpus cutoff n={n} is smaller than k={k}")]
    CutoffBelowK { n: usize, k: usize },
    #[error("step-wise mode requires at least one step")]
    MissingSteps,
}

/// Default per-corpus cutoff for a final agent count `k`: `max(50, 10k)`.
pub fn default_cutoff(k: usize) -> usize {
    50.max(10 * k)
}

fn default_k() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalRequest {
    #[serde(alias = "query", alias = "text")]
    pub query_text: String,
    /// Final number of agents.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Per-corpus cutoff; [`default_cutoff`] when absent.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub fusion: FusionConfig,
    #[serde(default)]
    pub mode: QueryMode,
    #[serde(default)]
    pub steps: Vec<String>,
}

impl RetrievalRequest {
    pub fn new(query_text: impl Into<String>, k: usize) -> Self {
        Self {
            query_text: query_text.into(),
            k,
            n: None,
            fusion: FusionConfig::default(),
            mode: QueryMode::Direct,
            steps: Vec::new(),
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_fusion(mut self, fusion: FusionConfig) -> Self {
        self.fusion = fusion;
        self
    }

    /// Switches to step-wise mode with the given steps.
    pub fn with_steps<S: Into<String>>(mut self, steps: impl IntoIterator<Item = S>) -> Self {
        self.steps = steps.into_iter().map(Into::into).collect();
        self.mode = QueryMode::Stepwise;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.n.unwrap_or_else(|| default_cutoff(self.k))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(RequestError::ZeroK.into());
        }
        if self.cutoff() < self.k {
            return Err(RequestError::CutoffBelowK {
                n: self.cutoff(),
                k: self.k,
            }
            .into());
        }
        if self.mode == QueryMode::Stepwise && self.steps.is_empty() {
            return Err(RequestError::MissingSteps.into());
        }
        self.fusion.validate()?;
        Ok(())
    }
}

/// An agent in the final list together with the node that introduced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedAgent {
    pub agent_id: String,
    /// The agent node itself, or the tool whose ownership edge led here.
    pub evidence: ScoredCandidate,
    /// Index of the step that first produced this agent (step-wise only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub step: String,
    pub agents: Vec<RoutedAgent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub agents: Vec<RoutedAgent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_step: Option<Vec<StepResult>>,
    /// Set when the catalog holds no agents; `agents` is then empty.
    #[serde(default)]
    pub catalog_empty: bool,
}

impl RetrievalResult {
    pub fn agent_ids(&self) -> Vec<&str> {
        self.agents.iter().map(|a| a.agent_id.as_str()).collect()
    }
}

/// Walks a fused list in order and keeps the first `k` distinct agents.
pub fn traverse_to_agents(
    graph: &KnowledgeGraph,
    fused: impl IntoIterator<Item = ScoredCandidate>,
    k: usize,
) -> Result<Vec<RoutedAgent>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return Ok(out);
    }
    for candidate in fused {
        let agent_id = graph.owner_of(candidate.node_id(), candidate.node_type())?;
        if seen.insert(agent_id.to_string()) {
            out.push(RoutedAgent {
                agent_id: agent_id.to_string(),
                evidence: candidate,
                step: None,
            });
            if out.len() == k {
                break;
            }
        }
    }
    Ok(out)
}

/// Runs the graph pipeline for one query vector.
pub fn route_vector(
    graph: &KnowledgeGraph,
    tool_index: &VectorIndex,
    agent_index: &VectorIndex,
    query: &EmbeddingVector,
    k: usize,
    n: usize,
    fusion: &FusionConfig,
) -> Result<Vec<RoutedAgent>> {
    let mut merged = tool_index.top_n(query, n)?;
    merged.extend(agent_index.top_n(query, n)?);
    let fused = type_weighted_rank(merged, fusion)?;
    traverse_to_agents(graph, fused, k)
}

/// Order-preserving union of per-step agent lists, truncated to `k`.
pub fn union_steps(per_step: &[Vec<RoutedAgent>], k: usize) -> Vec<RoutedAgent> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, agents) in per_step.iter().enumerate() {
        for agent in agents {
            if out.len() == k {
                return out;
            }
            if seen.insert(agent.agent_id.as_str()) {
                out.push(RoutedAgent {
                    step: Some(i),
                    ..agent.clone()
                });
            }
        }
    }
    out
}

/// A catalog with its indexes and the provider they were built with.
///
/// Immutable after construction and safe to share across threads.
pub struct AgentRouter {
    graph: KnowledgeGraph,
    tool_index: VectorIndex,
    agent_index: VectorIndex,
    provider: Arc<dyn EmbeddingProvider>,
    text_options: TextOptions,
    bm25: Bm25Index,
}

impl fmt::Debug for AgentRouter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AgentRouter")
            .field("agents", &self.graph.agents().len())
            .field("tools", &self.graph.tools().len())
            .field("model_id", &self.provider.model_id())
            .finish_non_exhaustive()
    }
}

impl AgentRouter {
    /// Embeds both corpora of `graph` with `provider`.
    pub fn build(
        graph: KnowledgeGraph,
        provider: Arc<dyn EmbeddingProvider>,
        text_options: TextOptions,
    ) -> Result<Self> {
        let tool_index = VectorIndex::build(&graph, provider.as_ref(), NodeType::Tool, &text_options)?;
        let agent_index = VectorIndex::build(&graph, provider.as_ref(), NodeType::Agent, &text_options)?;
        Self::from_parts(graph, tool_index, agent_index, provider, text_options)
    }

    /// Wraps prebuilt indexes; fails if they do not cover `graph` or were
    /// built with a different model.
    pub fn from_parts(
        graph: KnowledgeGraph,
        tool_index: VectorIndex,
        agent_index: VectorIndex,
        provider: Arc<dyn EmbeddingProvider>,
        text_options: TextOptions,
    ) -> Result<Self> {
        for index in [&tool_index, &agent_index] {
            if index.model_id() != provider.model_id() || index.dim() != provider.dim() {
                return Err(IndexError::StaleIndex {
                    index_model: format!("{} (dim {})", index.model_id(), index.dim()),
                    provider_model: format!("{} (dim {})", provider.model_id(), provider.dim()),
                }
                .into());
            }
            index.check_covers(&graph)?;
        }
        let bm25 = Bm25Index::build(&graph, Bm25Corpus::Agents, Bm25Params::default(), &text_options);
        Ok(Self {
            graph,
            tool_index,
            agent_index,
            provider,
            text_options,
            bm25,
        })
    }

    pub fn from_container(container: IndexContainer, provider: Arc<dyn EmbeddingProvider>) -> Result<Self> {
        container.check_provider(provider.as_ref())?;
        Self::from_parts(
            container.graph,
            container.tool_index,
            container.agent_index,
            provider,
            container.text_options,
        )
    }

    /// Rebuilds the BM25 baseline index over a different corpus or parameters.
    pub fn with_bm25(mut self, corpus: Bm25Corpus, params: Bm25Params) -> Self {
        self.bm25 = Bm25Index::build(&self.graph, corpus, params, &self.text_options);
        self
    }

    pub fn graph(&self) -> &KnowledgeGraph {
        &self.graph
    }

    pub fn tool_index(&self) -> &VectorIndex {
        &self.tool_index
    }

    pub fn agent_index(&self) -> &VectorIndex {
        &self.agent_index
    }

    pub fn provider(&self) -> &dyn EmbeddingProvider {
        self.provider.as_ref()
    }

    pub fn text_options(&self) -> &TextOptions {
        &self.text_options
    }

    pub fn bm25(&self) -> &Bm25Index {
        &self.bm25
    }

    pub fn version(&self) -> IndexVersion {
        IndexVersion {
            format_version: crate::index::INDEX_FORMAT_VERSION,
            model_id: self.provider.model_id().to_string(),
            dim: self.provider.dim(),
            catalog_digest: crate::index::catalog_digest(&self.graph),
            agents: self.graph.agents().len(),
            tools: self.graph.tools().len(),
        }
    }

    /// Embeds query texts with the configured query prefix.
    pub fn embed_queries(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>> {
        let prefixed: Vec<String> = texts.iter().map(|t| self.text_options.query_text(t)).collect();
        let refs: Vec<&str> = prefixed.iter().map(String::as_str).collect();
        Ok(self.provider.embed_batch(&refs)?)
    }

    /// Ranks agents for one query under `strategy`. `vector` must be the
    /// embedded query for every strategy except BM25.
    pub fn rank_query(
        &self,
        strategy: Strategy,
        text: &str,
        vector: Option<&EmbeddingVector>,
        k: usize,
        n: usize,
        fusion: &FusionConfig,
    ) -> Result<Vec<RoutedAgent>> {
        let need_vector = || -> Result<&EmbeddingVector> {
            vector.ok_or_else(|| {
                crate::embedding::EmbeddingError::InvalidConfig(format!("strategy {strategy} needs an embedded query"))
                    .into()
            })
        };
        match strategy {
            Strategy::Graph => route_vector(
                &self.graph,
                &self.tool_index,
                &self.agent_index,
                need_vector()?,
                k,
                n,
                fusion,
            ),
            Strategy::AgentOnly => baselines::agent_only_retrieve(&self.agent_index, need_vector()?, k),
            Strategy::ToolOnly => baselines::tool_only_retrieve(&self.tool_index, &self.graph, need_vector()?, k, n),
            Strategy::Wrrf => baselines::standard_wrrf_retrieve(
                &self.tool_index,
                &self.agent_index,
                &self.graph,
                need_vector()?,
                fusion,
                k,
                n,
            ),
            Strategy::Bm25 => baselines::bm25_retrieve(&self.bm25, &self.graph, text, k),
        }
    }

    /// Direct retrieval with the graph pipeline on `request.query_text`.
    pub fn retrieve_agents(&self, request: &RetrievalRequest) -> Result<RetrievalResult> {
        let direct = RetrievalRequest {
            mode: QueryMode::Direct,
            ..request.clone()
        };
        self.route(Strategy::Graph, &direct)
    }

    /// Step-wise retrieval with the graph pipeline.
    pub fn retrieve_stepwise(&self, request: &RetrievalRequest) -> Result<RetrievalResult> {
        let stepwise = RetrievalRequest {
            mode: QueryMode::Stepwise,
            ..request.clone()
        };
        self.route(Strategy::Graph, &stepwise)
    }

    /// Graph retrieval honoring `request.mode`.
    pub fn retrieve(&self, request: &RetrievalRequest) -> Result<RetrievalResult> {
        self.route(Strategy::Graph, request)
    }

    /// Serves a request with any strategy, direct or step-wise.
    pub fn route(&self, strategy: Strategy, request: &RetrievalRequest) -> Result<RetrievalResult> {
        request.validate()?;
        let texts: Vec<&str> = match request.mode {
            QueryMode::Direct => vec![request.query_text.as_str()],
            QueryMode::Stepwise => request.steps.iter().map(String::as_str).collect(),
        };
        let vectors = if strategy.needs_embedding() {
            Some(self.embed_queries(&texts)?)
        } else {
            None
        };
        let n = request.cutoff();
        let lists: Vec<Vec<RoutedAgent>> = texts
            .par_iter()
            .enumerate()
            .map(|(i, text)| {
                let v = vectors.as_ref().map(|vs| &vs[i]);
                self.rank_query(strategy, text, v, request.k, n, &request.fusion)
            })
            .collect::<Result<_>>()?;

        let catalog_empty = self.graph.agents().is_empty();
        Ok(match request.mode {
            QueryMode::Direct => RetrievalResult {
                agents: lists.into_iter().next().unwrap_or_default(),
                per_step: None,
                catalog_empty,
            },
            QueryMode::Stepwise => RetrievalResult {
                agents: union_steps(&lists, request.k),
                per_step: Some(
                    request
                        .steps
                        .iter()
                        .zip(lists)
                        .map(|(step, agents)| StepResult {
                            step: step.clone(),
                            agents,
                        })
                        .collect(),
                ),
                catalog_empty,
            },
        })
    }
}
