//! Exact per-corpus vector indexes and the versioned index container.

use std::cmp::Ordering;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catalog::{graph_to_bytes, KnowledgeGraph, NodeType};
use crate::embedding::{cosine, node_text, EmbeddingError, EmbeddingProvider, EmbeddingVector, NodeRef, TextOptions};

/// Version written into index container files.
pub const INDEX_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("embedding {node_type} `{node_id}` failed: {source}")]
    Embedding {
        node_type: NodeType,
        node_id: String,
        #[source]
        source: EmbeddingError,
    },
    #[error("query vector incompatible with {corpus} index: {source}")]
    Query {
        corpus: NodeType,
        #[source]
        source: EmbeddingError,
    },
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error("stale index: built with model `{index_model}` but the provider is `{provider_model}`")]
    StaleIndex {
        index_model: String,
        provider_model: String,
    },
    #[error("{corpus} index does not match the catalog: {message}")]
    CorpusMismatch { corpus: NodeType, message: String },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: unsupported index format version {found} (this build reads {expected})", .path.display())]
    VersionMismatch { path: PathBuf, found: u32, expected: u32 },
    #[error("{}: malformed index container: {message}", .path.display())]
    Malformed { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub node_id: String,
    pub values: Vec<f64>,
}

/// Brute-force cosine index over one corpus. Entry position is the node's
/// ingestion ordinal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorIndex {
    corpus_type: NodeType,
    model_id: String,
    dim: usize,
    entries: Vec<IndexEntry>,
}

/// One hit from a corpus search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub node_id: String,
    pub node_type: NodeType,
    pub similarity: f64,
    /// 1-based position within the corpus result list.
    pub corpus_rank: usize,
    pub ingestion_ordinal: usize,
}

/// Similarity descending, then ingestion ordinal ascending.
fn by_similarity(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

impl VectorIndex {
    /// Embeds every node of one corpus in ingestion order.
    pub fn build(
        graph: &KnowledgeGraph,
        provider: &dyn EmbeddingProvider,
        corpus_type: NodeType,
        opts: &TextOptions,
    ) -> Result<Self, IndexError> {
        let nodes: Vec<(&str, NodeRef<'_>)> = match corpus_type {
            NodeType::Agent => graph.agents().iter().map(|a| (a.id.as_str(), a.into())).collect(),
            NodeType::Tool => graph.tools().iter().map(|t| (t.id.as_str(), t.into())).collect(),
        };
        let texts: Vec<String> = nodes.iter().map(|(_, n)| node_text(*n, opts)).collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();

        let vectors = match provider.embed_batch(&refs) {
            Ok(v) => v,
            Err(batch_err) => {
                // Narrow the failure down to the first node that fails alone.
                for ((id, _), text) in nodes.iter().zip(&refs) {
                    if let Err(source) = provider.embed_text(text) {
                        return Err(IndexError::Embedding {
                            node_type: corpus_type,
                            node_id: id.to_string(),
                            source,
                        });
                    }
                }
                return Err(IndexError::Embedding {
                    node_type: corpus_type,
                    node_id: nodes.first().map(|(id, _)| id.to_string()).unwrap_or_default(),
                    source: batch_err,
                });
            }
        };

        let entries = nodes
            .iter()
            .zip(vectors)
            .map(|((id, _), v)| IndexEntry {
                node_id: id.to_string(),
                values: v.into_values(),
            })
            .collect();
        Ok(Self {
            corpus_type,
            model_id: provider.model_id().to_string(),
            dim: provider.dim(),
            entries,
        })
    }

    pub fn corpus_type(&self) -> NodeType {
        self.corpus_type
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    /// Similarity of the query against every entry, in ingestion order.
    pub fn similarities(&self, query: &EmbeddingVector) -> Result<Vec<f64>, IndexError> {
        self.check_query(query)?;
        Ok(self.entries.iter().map(|e| cosine(query.values(), &e.values)).collect())
    }

    fn check_query(&self, query: &EmbeddingVector) -> Result<(), IndexError> {
        let err = |source| IndexError::Query {
            corpus: self.corpus_type,
            source,
        };
        if query.model_id() != self.model_id {
            return Err(err(EmbeddingError::ModelMismatch {
                left: self.model_id.clone(),
                right: query.model_id().to_string(),
            }));
        }
        if query.dim() != self.dim {
            return Err(err(EmbeddingError::DimensionMismatch {
                expected: self.dim,
                found: query.dim(),
            }));
        }
        Ok(())
    }

    /// The `n` most similar entries, best first. Exact similarity ties go to
    /// the smaller ingestion ordinal. Returns the whole corpus, ranked, when
    /// it holds fewer than `n` entries.
    pub fn top_n(&self, query: &EmbeddingVector, n: usize) -> Result<Vec<Candidate>, IndexError> {
        if n == 0 {
            return Err(IndexError::ZeroCutoff);
        }
        let mut scored: Vec<(f64, usize)> = self
            .similarities(query)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        if n < scored.len() {
            scored.select_nth_unstable_by(n - 1, by_similarity);
            scored.truncate(n);
        }
        scored.sort_unstable_by(by_similarity);
        Ok(scored
            .into_iter()
            .enumerate()
            .map(|(rank, (similarity, ordinal))| Candidate {
                node_id: self.entries[ordinal].node_id.clone(),
                node_type: self.corpus_type,
                similarity,
                corpus_rank: rank + 1,
                ingestion_ordinal: ordinal,
            })
            .collect())
    }

    /// Checks that the entries are exactly this corpus of `graph`, in order.
    pub fn check_covers(&self, graph: &KnowledgeGraph) -> Result<(), IndexError> {
        let ids: Vec<&str> = match self.corpus_type {
            NodeType::Agent => graph.agents().iter().map(|a| a.id.as_str()).collect(),
            NodeType::Tool => graph.tools().iter().map(|t| t.id.as_str()).collect(),
        };
        let mismatch = |message: String| IndexError::CorpusMismatch {
            corpus: self.corpus_type,
            message,
        };
        if ids.len() != self.entries.len() {
            return Err(mismatch(format!(
                "{} nodes in catalog, {} entries in index",
                ids.len(),
                self.entries.len()
            )));
        }
        for (i, (id, entry)) in ids.iter().zip(&self.entries).enumerate() {
            if *id != entry.node_id {
                return Err(mismatch(format!(
                    "entry {i} is `{}`, catalog has `{id}`",
                    entry.node_id
                )));
            }
            if entry.values.len() != self.dim {
                return Err(mismatch(format!("entry `{id}` has wrong dimension")));
            }
        }
        Ok(())
    }
}

/// Identity of an index snapshot, echoed by the service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexVersion {
    pub format_version: u32,
    pub model_id: String,
    pub dim: usize,
    /// SHA-256 of the persisted catalog.
    pub catalog_digest: String,
    pub agents: usize,
    pub tools: usize,
}

/// Graph plus both corpus indexes in one versioned file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexContainer {
    pub format_version: u32,
    pub model_id: String,
    pub dim: usize,
    pub text_options: TextOptions,
    pub catalog_digest: String,
    pub graph: KnowledgeGraph,
    pub tool_index: VectorIndex,
    pub agent_index: VectorIndex,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

pub fn catalog_digest(graph: &KnowledgeGraph) -> String {
    hex::encode(Sha256::digest(graph_to_bytes(graph)))
}

impl IndexContainer {
    pub fn build(
        graph: KnowledgeGraph,
        provider: &dyn EmbeddingProvider,
        text_options: TextOptions,
    ) -> Result<Self, IndexError> {
        let tool_index = VectorIndex::build(&graph, provider, NodeType::Tool, &text_options)?;
        let agent_index = VectorIndex::build(&graph, provider, NodeType::Agent, &text_options)?;
        Ok(Self {
            format_version: INDEX_FORMAT_VERSION,
            model_id: provider.model_id().to_string(),
            dim: provider.dim(),
            text_options,
            catalog_digest: catalog_digest(&graph),
            graph,
            tool_index,
            agent_index,
        })
    }

    pub fn version(&self) -> IndexVersion {
        IndexVersion {
            format_version: self.format_version,
            model_id: self.model_id.clone(),
            dim: self.dim,
            catalog_digest: self.catalog_digest.clone(),
            agents: self.graph.agents().len(),
            tools: self.graph.tools().len(),
        }
    }

    /// Rejects a provider whose model differs from the one the index was built with.
    pub fn check_provider(&self, provider: &dyn EmbeddingProvider) -> Result<(), IndexError> {
        if provider.model_id() != self.model_id || provider.dim() != self.dim {
            return Err(IndexError::StaleIndex {
                index_model: format!("{} (dim {})", self.model_id, self.dim),
                provider_model: format!("{} (dim {})", provider.model_id(), provider.dim()),
            });
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("container serialization is infallible");
        out.push(b'\n');
        out
    }

    /// Writes the container through a temp file and an atomic rename.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let path = path.as_ref();
        let io_err = |source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(&self.to_bytes()).map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let malformed = |message: String| IndexError::Malformed {
            path: path.to_path_buf(),
            message,
        };
        let probe: VersionProbe = serde_json::from_slice(&bytes).map_err(|e| malformed(e.to_string()))?;
        if probe.format_version != INDEX_FORMAT_VERSION {
            return Err(IndexError::VersionMismatch {
                path: path.to_path_buf(),
                found: probe.format_version,
                expected: INDEX_FORMAT_VERSION,
            });
        }
        let container: Self = serde_json::from_slice(&bytes).map_err(|e| malformed(e.to_string()))?;
        for index in [&container.tool_index, &container.agent_index] {
            if index.model_id != container.model_id || index.dim != container.dim {
                return Err(malformed(format!(
                    "{} index model `{}` disagrees with container model `{}`",
                    index.corpus_type, index.model_id, container.model_id
                )));
            }
            index.check_covers(&container.graph)?;
        }
        if container.tool_index.corpus_type != NodeType::Tool || container.agent_index.corpus_type != NodeType::Agent {
            return Err(malformed("corpus types swapped".into()));
        }
        if catalog_digest(&container.graph) != container.catalog_digest {
            return Err(malformed("catalog digest does not match the stored graph".into()));
        }
        Ok(container)
    }
}
