use std::collections::HashMap;
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tracing::{debug, warn};

use super::{EmbeddingCache, EmbeddingError, EmbeddingProvider};

/// Settings for an OpenAI-compatible embeddings endpoint.
///
/// The API key itself is never part of the configuration; only the name of
/// the environment variable that holds it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteConfig {
    /// Full URL of the embeddings endpoint, e.g. `https://api.openai.com/v1/embeddings`.
    pub endpoint: String,
    pub model: String,
    #[serde(default = "RemoteConfig::default_dim")]
    pub dim: usize,
    #[serde(default = "RemoteConfig::default_api_key_env")]
    pub api_key_env: String,
    #[serde(default = "RemoteConfig::default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "RemoteConfig::default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "RemoteConfig::default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "RemoteConfig::default_initial_backoff_ms")]
    pub initial_backoff_ms: u64,
    #[serde(default = "RemoteConfig::default_max_backoff_ms")]
    pub max_backoff_ms: u64,
    /// Upper bound on concurrent HTTP requests issued by this provider.
    #[serde(default = "RemoteConfig::default_max_in_flight")]
    pub max_in_flight: usize,
}

impl RemoteConfig {
    pub const DEFAULT_ENDPOINT: &'static str = "https://api.openai.com/v1/embeddings";

    fn default_dim() -> usize {
        1536
    }
    fn default_api_key_env() -> String {
        "OPENAI_API_KEY".into()
    }
    fn default_timeout_secs() -> u64 {
        60
    }
    fn default_batch_size() -> usize {
        64
    }
    fn default_max_retries() -> u32 {
        5
    }
    fn default_initial_backoff_ms() -> u64 {
        500
    }
    fn default_max_backoff_ms() -> u64 {
        16_000
    }
    fn default_max_in_flight() -> usize {
        4
    }

    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, dim: usize) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            dim,
            api_key_env: Self::default_api_key_env(),
            timeout_secs: Self::default_timeout_secs(),
            batch_size: Self::default_batch_size(),
            max_retries: Self::default_max_retries(),
            initial_backoff_ms: Self::default_initial_backoff_ms(),
            max_backoff_ms: Self::default_max_backoff_ms(),
            max_in_flight: Self::default_max_in_flight(),
        }
    }

    pub fn validate(&self) -> Result<(), EmbeddingError> {
        let bad = |m: &str| Err(EmbeddingError::InvalidConfig(m.to_string()));
        if self.endpoint.trim().is_empty() {
            return bad("remote provider requires an endpoint");
        }
        if self.model.trim().is_empty() {
            return bad("remote provider requires a model name");
        }
        if self.api_key_env.trim().is_empty() {
            return bad("remote provider requires a credential environment variable name");
        }
        if self.dim == 0 || self.batch_size == 0 || self.max_in_flight == 0 {
            return bad("dim, batch_size and max_in_flight must be positive");
        }
        Ok(())
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let ms = self
            .initial_backoff_ms
            .saturating_mul(1u64 << attempt.min(20))
            .min(self.max_backoff_ms);
        Duration::from_millis(ms)
    }
}

/// Raw HTTP reply.
#[derive(Debug, Clone)]
pub struct HttpReply {
    pub status: u16,
    pub body: String,
}

/// Moves one JSON request to the endpoint. `Err` means the request never got
/// a response (connection, timeout) and is treated as retryable.
pub trait Transport: Send + Sync {
    fn post_json(&self, url: &str, bearer: &str, body: &Value) -> Result<HttpReply, String>;
}

/// Blocking HTTP transport.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build();
        Self { agent: config.into() }
    }
}

impl Transport for HttpTransport {
    fn post_json(&self, url: &str, bearer: &str, body: &Value) -> Result<HttpReply, String> {
        let mut response = self
            .agent
            .post(url)
            .header("Authorization", &format!("Bearer {bearer}"))
            .send_json(body)
            .map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .with_config()
            .limit(256 * 1024 * 1024)
            .read_to_string()
            .map_err(|e| e.to_string())?;
        Ok(HttpReply { status, body })
    }
}

struct Semaphore {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Semaphore);

impl Semaphore {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

#[derive(Deserialize)]
struct ResponseBody {
    data: Vec<Datum>,
}

#[derive(Deserialize)]
struct Datum {
    #[serde(default)]
    index: Option<usize>,
    embedding: Vec<f64>,
}

/// Embedding provider backed by an OpenAI-compatible HTTP endpoint.
///
/// Texts are looked up in the cache first; misses are deduplicated, split
/// into batches of `batch_size`, and sent with bounded exponential backoff
/// on retryable failures (connection errors, 408, 429, 5xx). Authentication
/// failures and other 4xx responses fail immediately.
pub struct RemoteProvider {
    config: RemoteConfig,
    api_key: String,
    transport: Box<dyn Transport>,
    cache: Option<EmbeddingCache>,
    in_flight: Semaphore,
}

impl std::fmt::Debug for RemoteProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteProvider")
            .field("config", &self.config)
            .field("cache", &self.cache)
            .finish_non_exhaustive()
    }
}

impl RemoteProvider {
    /// Reads the API key from `config.api_key_env` and uses [`HttpTransport`].
    pub fn from_env(config: RemoteConfig, cache: Option<EmbeddingCache>) -> Result<Self, EmbeddingError> {
        config.validate()?;
        let api_key = std::env::var(&config.api_key_env).map_err(|_| EmbeddingError::MissingCredential {
            env_var: config.api_key_env.clone(),
        })?;
        let transport = HttpTransport::new(Duration::from_secs(config.timeout_secs));
        Self::with_transport(config, api_key, Box::new(transport), cache)
    }

    pub fn with_transport(
        config: RemoteConfig,
        api_key: String,
        transport: Box<dyn Transport>,
        cache: Option<EmbeddingCache>,
    ) -> Result<Self, EmbeddingError> {
        config.validate()?;
        let in_flight = Semaphore::new(config.max_in_flight);
        Ok(Self {
            config,
            api_key,
            transport,
            cache,
            in_flight,
        })
    }

    pub fn config(&self) -> &RemoteConfig {
        &self.config
    }

    fn request_once(&self, batch: &[&str]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        let body = json!({ "model": self.config.model, "input": batch });
        let reply = {
            let _permit = self.in_flight.acquire();
            self.transport
                .post_json(&self.config.endpoint, &self.api_key, &body)
                .map_err(|message| EmbeddingError::Transport { message })?
        };
        match reply.status {
            200..=299 => {}
            401 | 403 => {
                return Err(EmbeddingError::Auth {
                    status: reply.status,
                    body: reply.body,
                })
            }
            status => {
                return Err(EmbeddingError::Http {
                    status,
                    body: reply.body,
                })
            }
        }
        let parsed: ResponseBody =
            serde_json::from_str(&reply.body).map_err(|e| EmbeddingError::BadResponse(e.to_string()))?;
        if parsed.data.len() != batch.len() {
            return Err(EmbeddingError::BadResponse(format!(
                "sent {} inputs, received {} embeddings",
                batch.len(),
                parsed.data.len()
            )));
        }
        let mut data = parsed.data;
        if data.iter().all(|d| d.index.is_some()) {
            data.sort_by_key(|d| d.index);
        }
        let mut out = Vec::with_capacity(data.len());
        for datum in data {
            if datum.embedding.len() != self.config.dim {
                return Err(EmbeddingError::DimensionMismatch {
                    expected: self.config.dim,
                    found: datum.embedding.len(),
                });
            }
            out.push(datum.embedding);
        }
        Ok(out)
    }

    fn request_with_retry(&self, batch: &[&str]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        let mut attempt = 0;
        loop {
            match self.request_once(batch) {
                Ok(v) => return Ok(v),
                Err(e) if e.is_retryable() && attempt < self.config.max_retries => {
                    let wait = self.config.backoff(attempt);
                    warn!(error = %e, attempt, ?wait, "retrying embedding request");
                    thread::sleep(wait);
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
}

impl EmbeddingProvider for RemoteProvider {
    fn model_id(&self) -> &str {
        &self.config.model
    }

    fn dim(&self) -> usize {
        self.config.dim
    }

    fn embed_nonempty(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        let mut results: Vec<Option<Vec<f64>>> = vec![None; texts.len()];
        let mut pending: Vec<&str> = Vec::new();
        let mut slots: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, &text) in texts.iter().enumerate() {
            if let Some(cache) = &self.cache {
                if let Some(values) = cache.get(&self.config.model, text)? {
                    if values.len() == self.config.dim {
                        results[i] = Some(values);
                        continue;
                    }
                }
            }
            let entry = slots.entry(text).or_default();
            if entry.is_empty() {
                pending.push(text);
            }
            entry.push(i);
        }
        debug!(total = texts.len(), misses = pending.len(), "embedding request");

        let batches: Vec<&[&str]> = pending.chunks(self.config.batch_size).collect();
        let fetched: Vec<Result<Vec<Vec<f64>>, EmbeddingError>> =
            batches.par_iter().map(|batch| self.request_with_retry(batch)).collect();

        for (batch, outcome) in batches.iter().zip(fetched) {
            let vectors = outcome?;
            for (&text, values) in batch.iter().zip(vectors) {
                if let Some(cache) = &self.cache {
                    cache.put(&self.config.model, text, &values)?;
                }
                for &slot in &slots[text] {
                    results[slot] = Some(values.clone());
                }
            }
        }
        Ok(results
            .into_iter()
            .map(|r| r.expect("every slot filled from cache or response"))
            .collect())
    }
}
