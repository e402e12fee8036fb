//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use agentgraph_core::{synthetic, AgentRouter, EmbeddingProvider, EmbeddingVector, HashingProvider, TextOptions};

/// A router over a seeded synthetic catalog with the hashing embedder.
pub fn router(agents: usize, tools: usize, dim: usize) -> AgentRouter {
    let provider: Arc<dyn EmbeddingProvider> = Arc::new(HashingProvider::new(dim, 7));
    AgentRouter::build(synthetic::catalog(agents, tools, 7), provider, TextOptions::default())
        .expect("synthetic catalog embeds")
}

/// Seeded query texts with their embeddings under `router`.
pub fn queries(router: &AgentRouter, count: usize) -> Vec<(String, EmbeddingVector)> {
    let texts = synthetic::queries(count, 11);
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let vectors = router.embed_queries(&refs).expect("queries embed");
    texts.into_iter().zip(vectors).collect()
}
