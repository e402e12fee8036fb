//! Embedding contract, vector type, and node text rendering.
//!
//! Two providers ship with the crate: [`HashingProvider`], a pure offline
//! hashed bag-of-tokens embedder, and [`RemoteProvider`], which talks to an
//! OpenAI-compatible `/embeddings` endpoint through a content-addressed
//! on-disk cache.

mod cache;
mod hashing;
mod remote;

use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{AgentNode, ToolNode};

pub use cache::EmbeddingCache;
pub use hashing::HashingProvider;
pub use remote::{HttpReply, HttpTransport, RemoteConfig, RemoteProvider, Transport};

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("embedding model mismatch: `{left}` vs `{right}`")]
    ModelMismatch { left: String, right: String },
    #[error("provider `{model_id}` returned a non-finite value")]
    NonFinite { model_id: String },
    #[error("transport failure: {message}")]
    Transport { message: String },
    #[error("HTTP {status} from embedding endpoint: {body}")]
    Http { status: u16, body: String },
    #[error("authentication rejected (HTTP {status}): {body}")]
    Auth { status: u16, body: String },
    #[error("credential environment variable `{env_var}` is not set")]
    MissingCredential { env_var: String },
    #[error("malformed embedding response: {0}")]
    BadResponse(String),
    #[error("embedding cache {}: {source}", .path.display())]
    Cache { path: PathBuf, source: io::Error },
    #[error("invalid provider configuration: {0}")]
    InvalidConfig(String),
}

impl EmbeddingError {
    /// Whether retrying the same request may succeed.
    pub fn is_retryable(&self) -> bool {
        match self {
            EmbeddingError::Transport { .. } => true,
            EmbeddingError::Http { status, .. } => *status == 408 || *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

/// A fixed-dimension embedding tagged with the model that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    model_id: String,
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(model_id: impl Into<String>, values: Vec<f64>) -> Result<Self, EmbeddingError> {
        let model_id = model_id.into();
        if values.is_empty() {
            return Err(EmbeddingError::DimensionMismatch { expected: 1, found: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::NonFinite { model_id });
        }
        Ok(Self { model_id, values })
    }

    /// The all-zero sentinel used for empty text; it scores 0 against everything.
    pub fn zero(model_id: impl Into<String>, dim: usize) -> Self {
        Self {
            model_id: model_id.into(),
            values: vec![0.0; dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Cosine similarity of two embeddings from the same model.
///
/// Two vectors of which either is zero score 0.
pub fn cosine_similarity(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<f64, EmbeddingError> {
    if u.model_id != v.model_id {
        return Err(EmbeddingError::ModelMismatch {
            left: u.model_id.clone(),
            right: v.model_id.clone(),
        });
    }
    if u.dim() != v.dim() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(cosine(&u.values, &v.values))
}

/// Cosine over raw slices of equal length. Symmetric bit-for-bit.
pub(crate) fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    // Sorted operands make the product independent of argument order.
    let (lo, hi) = if na <= nb { (na, nb) } else { (nb, na) };
    let denom = lo.sqrt() * hi.sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    // Adding zero turns a negative zero into positive zero.
    (dot / denom).clamp(-1.0, 1.0) + 0.0
}

/// Maps text to vectors.
///
/// Implementations must be deterministic for identical input text within a
/// run. Only [`embed_nonempty`](Self::embed_nonempty) is required; the
/// provided methods handle the empty-text sentinel and validate shape.
pub trait EmbeddingProvider: Send + Sync {
    fn model_id(&self) -> &str;

    fn dim(&self) -> usize;

    /// Embeds texts that are non-empty after trimming, in input order.
    fn embed_nonempty(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbeddingError>;

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        let live: Vec<usize> = (0..texts.len()).filter(|&i| !texts[i].trim().is_empty()).collect();
        let live_texts: Vec<&str> = live.iter().map(|&i| texts[i]).collect();
        let raw = if live_texts.is_empty() {
            Vec::new()
        } else {
            self.embed_nonempty(&live_texts)?
        };
        if raw.len() != live.len() {
            return Err(EmbeddingError::BadResponse(format!(
                "asked for {} vectors, got {}",
                live.len(),
                raw.len()
            )));
        }

        let mut out: Vec<EmbeddingVector> = (0..texts.len())
            .map(|_| EmbeddingVector::zero(self.model_id(), self.dim()))
            .collect();
        for (slot, values) in live.into_iter().zip(raw) {
            if values.len() != self.dim() {
                return Err(EmbeddingError::DimensionMismatch {
                    expected: self.dim(),
                    found: values.len(),
                });
            }
            out[slot] = EmbeddingVector::new(self.model_id(), values)?;
        }
        Ok(out)
    }

    fn embed_text(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        Ok(self.embed_batch(&[text])?.pop().expect("one input yields one vector"))
    }
}

/// Controls the text that represents a node or a query in embedding space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextOptions {
    /// Prefix node texts with `agent: ` or `tool: `.
    #[serde(default)]
    pub type_prefix: bool,
    /// Append the tool parameter schema to tool texts.
    #[serde(default)]
    pub include_schema: bool,
    /// Prepended verbatim to every query before embedding.
    #[serde(default)]
    pub query_prefix: String,
}

impl TextOptions {
    pub fn query_text(&self, query: &str) -> String {
        format!("{}{query}", self.query_prefix)
    }
}

/// Borrowed view of either node type.
#[derive(Debug, Clone, Copy)]
pub enum NodeRef<'a> {
    Agent(&'a AgentNode),
    Tool(&'a ToolNode),
}

impl<'a> From<&'a AgentNode> for NodeRef<'a> {
    fn from(a: &'a AgentNode) -> Self {
        NodeRef::Agent(a)
    }
}

impl<'a> From<&'a ToolNode> for NodeRef<'a> {
    fn from(t: &'a ToolNode) -> Self {
        NodeRef::Tool(t)
    }
}

/// Canonical embedded text of a node: `<name>: <description>`, or the name
/// alone when the description is empty.
pub fn node_text<'a>(node: impl Into<NodeRef<'a>>, opts: &TextOptions) -> String {
    let node = node.into();
    let (prefix, name, description) = match node {
        NodeRef::Agent(a) => ("agent: ", a.name.as_str(), a.description.trim()),
        NodeRef::Tool(t) => ("tool: ", t.name.as_str(), t.description.trim()),
    };
    let mut text = String::new();
    if opts.type_prefix {
        text.push_str(prefix);
    }
    text.push_str(name);
    if !description.is_empty() {
        text.push_str(": ");
        text.push_str(description);
    }
    if let (true, NodeRef::Tool(tool)) = (opts.include_schema, node) {
        if let Some(schema) = tool.schema_text.as_deref().filter(|s| !s.trim().is_empty()) {
            text.push('\n');
            text.push_str(schema);
        }
    }
    text
}

/// Serializable provider selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProviderConfig {
    Deterministic {
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default)]
        seed: u64,
    },
    Remote(RemoteConfig),
}

fn default_dim() -> usize {
    HashingProvider::DEFAULT_DIM
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig::Deterministic {
            dim: HashingProvider::DEFAULT_DIM,
            seed: 0,
        }
    }
}

impl ProviderConfig {
    /// Model id the built provider will report.
    pub fn model_id(&self) -> String {
        match self {
            ProviderConfig::Deterministic { dim, seed } => HashingProvider::model_id_for(*dim, *seed),
            ProviderConfig::Remote(cfg) => cfg.model.clone(),
        }
    }

    /// Builds the provider. The remote provider caches under `cache_dir`
    /// when one is given.
    pub fn build(&self, cache_dir: Option<&Path>) -> Result<Arc<dyn EmbeddingProvider>, EmbeddingError> {
        match self {
            ProviderConfig::Deterministic { dim, seed } => {
                if *dim == 0 {
                    return Err(EmbeddingError::InvalidConfig("dim must be positive".into()));
                }
                Ok(Arc::new(HashingProvider::new(*dim, *seed)))
            }
            ProviderConfig::Remote(cfg) => {
                let cache = cache_dir.map(EmbeddingCache::open).transpose()?;
                Ok(Arc::new(RemoteProvider::from_env(cfg.clone(), cache)?))
            }
        }
    }
}
