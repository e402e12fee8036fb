//! Run configuration: an optional TOML file overlaid with command-line flags.
//!
//! Every field has a default, so an empty file (or none at all) is valid.
//! Flags win over the file. Credentials are never read from either; the
//! remote provider takes the *name* of an environment variable.

use std::fs;
use std::path::{Path, PathBuf};

use agentgraph_core::embedding::{HashingProvider, ProviderConfig, RemoteConfig};
use agentgraph_core::retrieval::{default_cutoff, QueryMode, RetrievalRequest};
use agentgraph_core::{Bm25Corpus, FusionConfig, Granularity, Strategy, TextOptions};
use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

/// Index container path used when neither `--index` nor `--output` is given.
pub const DEFAULT_INDEX_PATH: &str = "agentgraph.index.json";

/// Default listen address for `serve`.
pub const DEFAULT_LISTEN: &str = "127.0.0.1:8080";

/// Keys that would carry a secret. Rejected so they never land in archived configs.
const SECRET_KEYS: [&str; 6] = ["api_key", "apikey", "token", "secret", "password", "authorization"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    /// Offline hashing embedder.
    #[default]
    Deterministic,
    /// OpenAI-compatible embeddings endpoint.
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub catalog: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub provider: ProviderKind,
    /// Embedding dimension; 256 for the hashing embedder, 1536 for remote.
    pub dim: Option<usize>,
    pub seed: u64,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub batch_size: Option<usize>,
    pub max_in_flight: Option<usize>,
    pub timeout_secs: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    /// Per-corpus cutoff; `max(50, 10K)` when absent.
    pub n: Option<usize>,
    /// Final agent counts. `query` uses the first; `eval` and `sweep` use all.
    pub k: Vec<usize>,
    pub rrf_k: f64,
    pub alpha_agent: f64,
    pub alpha_tool: f64,
    pub normalize_similarity: bool,
    pub strategy: Strategy,
    pub granularity: Granularity,
    /// Query mode for `eval` and `sweep`.
    pub mode: QueryMode,
    pub bm25_corpus: Bm25Corpus,
    pub text: TextOptions,
    pub output: Option<PathBuf>,
    pub listen: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let fusion = FusionConfig::default();
        Self {
            catalog: None,
            index: None,
            provider: ProviderKind::Deterministic,
            dim: None,
            seed: 0,
            endpoint: None,
            model: None,
            api_key_env: "OPENAI_API_KEY".into(),
            batch_size: None,
            max_in_flight: None,
            timeout_secs: None,
            cache_dir: None,
            n: None,
            k: Vec::new(),
            rrf_k: fusion.k,
            alpha_agent: fusion.alpha_agent,
            alpha_tool: fusion.alpha_tool,
            normalize_similarity: fusion.normalize_similarity,
            strategy: Strategy::Graph,
            granularity: Granularity::PerStep,
            mode: QueryMode::Stepwise,
            bm25_corpus: Bm25Corpus::Agents,
            text: TextOptions::default(),
            output: None,
            listen: DEFAULT_LISTEN.into(),
        }
    }
}

impl RunConfig {
    /// Parses TOML text, rejecting secret-bearing keys before anything else.
    pub fn from_toml(source_name: &str, content: &str) -> anyhow::Result<Self> {
        let table: toml::Table = toml::from_str(content).with_context(|| format!("{source_name}: invalid TOML"))?;
        if let Some(key) = find_secret_key(&table) {
            bail!(
                "{source_name}: `{key}` looks like a credential; credentials are read only from the \
                 environment variable named by `api_key_env`"
            );
        }
        toml::from_str(content).with_context(|| format!("{source_name}: invalid run configuration"))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let content = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&path.display().to_string(), &content)
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            k: self.rrf_k,
            alpha_agent: self.alpha_agent,
            alpha_tool: self.alpha_tool,
            normalize_similarity: self.normalize_similarity,
        }
    }

    /// K values for evaluation.
    pub fn eval_ks(&self) -> Vec<usize> {
        if self.k.is_empty() {
            vec![1, 3, 5]
        } else {
            self.k.clone()
        }
    }

    /// K for a single query.
    pub fn query_k(&self) -> usize {
        self.k.first().copied().unwrap_or(5)
    }

    pub fn index_path(&self) -> PathBuf {
        self.index.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_INDEX_PATH))
    }

    pub fn provider_config(&self) -> ProviderConfig {
        match self.provider {
            ProviderKind::Deterministic => ProviderConfig::Deterministic {
                dim: self.dim.unwrap_or(HashingProvider::DEFAULT_DIM),
                seed: self.seed,
            },
            ProviderKind::Remote => {
                let mut cfg = RemoteConfig::new(
                    self.endpoint.clone().unwrap_or_default(),
                    self.model.clone().unwrap_or_default(),
                    self.dim.unwrap_or(1536),
                );
                cfg.api_key_env = self.api_key_env.clone();
                if let Some(b) = self.batch_size {
                    cfg.batch_size = b;
                }
                if let Some(m) = self.max_in_flight {
                    cfg.max_in_flight = m;
                }
                if let Some(t) = self.timeout_secs {
                    cfg.timeout_secs = t;
                }
                ProviderConfig::Remote(cfg)
            }
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.k.contains(&0) {
            bail!("k must be at least 1");
        }
        if let Some(n) = self.n {
            let max_k = self.eval_ks().into_iter().max().unwrap_or(1).max(self.query_k());
            if n < max_k {
                bail!("n={n} is smaller than k={max_k}; the per-corpus cutoff must be at least K");
            }
        }
        if self.dim == Some(0) {
            bail!("dim must be positive");
        }
        self.fusion().validate()?;
        if self.provider == ProviderKind::Remote {
            if self.endpoint.as_deref().is_none_or(|e| e.trim().is_empty()) {
                bail!("the remote provider requires `endpoint`");
            }
            if self.model.as_deref().is_none_or(|m| m.trim().is_empty()) {
                bail!("the remote provider requires `model`");
            }
            if self.api_key_env.trim().is_empty() {
                bail!("the remote provider requires `api_key_env`, the name of the credential variable");
            }
        }
        Ok(())
    }

    /// Resolves a request against this config's defaults.
    pub fn request(&self, partial: PartialRequest) -> (Strategy, RetrievalRequest) {
        let mode = partial.mode.unwrap_or(if partial.steps.is_empty() {
            QueryMode::Direct
        } else {
            QueryMode::Stepwise
        });
        let k = partial.k.unwrap_or_else(|| self.query_k());
        let request = RetrievalRequest {
            query_text: partial.query_text,
            k,
            n: partial.n.or(self.n).or(Some(default_cutoff(k))),
            fusion: partial.fusion.unwrap_or_else(|| self.fusion()),
            mode,
            steps: partial.steps,
        };
        (partial.strategy.unwrap_or(self.strategy), request)
    }
}

fn find_secret_key(table: &toml::Table) -> Option<String> {
    for (key, value) in table {
        let lower = key.to_ascii_lowercase();
        if SECRET_KEYS.contains(&lower.as_str()) {
            return Some(key.clone());
        }
        if let toml::Value::Table(inner) = value {
            if let Some(found) = find_secret_key(inner) {
                return Some(format!("{key}.{found}"));
            }
        }
    }
    None
}

/// A retrieval request whose omitted fields fall back to the run config.
///
/// This is the body accepted by the service's retrieval endpoint and the
/// shape `query` builds from its flags, so both paths resolve identically.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialRequest {
    #[serde(default, alias = "query", alias = "text")]
    pub query_text: String,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub fusion: Option<FusionConfig>,
    #[serde(default)]
    pub mode: Option<QueryMode>,
    #[serde(default)]
    pub steps: Vec<String>,
    #[serde(default)]
    pub strategy: Option<Strategy>,
}
