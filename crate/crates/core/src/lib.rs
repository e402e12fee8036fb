//! Agent routing over a bipartite agent/tool knowledge graph.
//!
//! Agents (MCP servers) and their tools are indexed as co-equal nodes in one
//! embedding space. A query is matched against both corpora, the two ranked
//! lists are consolidated into a single list with global base ranks, rescored
//! with per-node-type weights, and walked in score order; every tool hit is
//! mapped to its owning agent through the ownership edges until `K` distinct
//! agents are collected.
//!
//! Module map:
//! - [`catalog`]: manifests, the bipartite graph, and graph persistence
//! - [`embedding`]: the provider contract, a hashed bag-of-tokens provider,
//!   and an HTTP provider with an on-disk cache
//! - [`index`]: exact per-corpus vector indexes and the index container file
//! - [`fusion`]: reciprocal rank fusion and type-conditioned weighting
//! - [`retrieval`]: the routing pipeline, direct and step-wise
//! - [`baselines`]: BM25, agent-only, tool-only and standard weighted RRF
//! - [`eval`]: ranking metrics, datasets, evaluation runs and weight sweeps

pub mod baselines;
pub mod catalog;
pub mod embedding;
mod error;
pub mod eval;
pub mod fusion;
pub mod index;
pub mod retrieval;
pub mod synthetic;
pub mod text;

pub use baselines::{Bm25Corpus, Bm25Index, Bm25Params, Strategy};
pub use catalog::{AgentNode, KnowledgeGraph, NodeType, ToolNode};
pub use embedding::{
    cosine_similarity, EmbeddingProvider, EmbeddingVector, HashingProvider, ProviderConfig, RemoteConfig,
    RemoteProvider, TextOptions,
};
pub use error::{Error, Result};
pub use eval::{EvalConfig, EvalQuery, Granularity, MetricsReport, SweepReport};
pub use fusion::{FusionConfig, ScoredCandidate};
pub use index::{Candidate, IndexContainer, VectorIndex};
pub use retrieval::{AgentRouter, QueryMode, RetrievalRequest, RetrievalResult, RoutedAgent};
