//! Command-line surface.

use std::path::PathBuf;

use agentgraph_core::retrieval::QueryMode;
use agentgraph_core::{Bm25Corpus, Granularity, Strategy};
use clap::{Args, Parser, Subcommand};

use crate::config::{ProviderKind, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "agentgraph",
    version,
    about = "Route queries to agents over an agent/tool catalog"
)]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, env = "AGENTGRAPH_CONFIG")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub globals: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Clone, Args)]
pub struct GlobalArgs {
    /// Catalog manifest (JSON or JSON Lines).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Index container to read (and, for `index`, to write).
    #[arg(long, global = true)]
    pub index: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub provider: Option<ProviderKind>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Seed of the deterministic embedder.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Remote embeddings endpoint URL.
    #[arg(long, global = true)]
    pub endpoint: Option<String>,
    /// Remote embedding model name.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Name of the environment variable holding the remote API key.
    #[arg(long, global = true)]
    pub api_key_env: Option<String>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha_agent: Option<f64>,
    #[arg(long, global = true)]
    pub alpha_tool: Option<f64>,
    #[arg(long, global = true)]
    pub rrf_k: Option<f64>,
    /// Per-corpus cutoff.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Final agent count; repeat or comma-separate for several.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, global = true)]
    pub strategy: Option<Strategy>,
    #[arg(long, global = true)]
    pub granularity: Option<Granularity>,
    /// Query mode for `eval` and `sweep`.
    #[arg(long, global = true)]
    pub mode: Option<QueryMode>,
    #[arg(long, global = true)]
    pub bm25_corpus: Option<Bm25Corpus>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl GlobalArgs {
    /// Overlays the flags that were given onto `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        macro_rules! set_some {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = Some(v.clone());
                }
            )*};
        }
        set!(
            provider,
            seed,
            api_key_env,
            alpha_agent,
            alpha_tool,
            rrf_k,
            strategy,
            granularity,
            mode,
            bm25_corpus
        );
        set_some!(catalog, index, dim, endpoint, model, cache_dir, n, output);
        if !self.k.is_empty() {
            cfg.k = self.k.clone();
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest the catalog, embed both corpora and write the index container.
    Index,
    /// Route one query, directly or step-wise.
    Query {
        #[arg(long)]
        text: Option<String>,
        /// A decomposed step; repeat for several. Switches to step-wise mode.
        #[arg(long = "step")]
        steps: Vec<String>,
    },
    /// Score one strategy over a labeled dataset.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Evaluate the fusion strategies over a grid of type weights.
    Sweep {
        #[arg(long)]
        dataset: PathBuf,
        /// Weight pairs as `agent:tool`, comma-separated.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<String>,
    },
    /// Convert a LiveMCPBench-style question file to the dataset format.
    ConvertDataset {
        #[arg(long)]
        input: PathBuf,
    },
    /// Serve retrieval over HTTP until interrupted.
    Serve {
        #[arg(long)]
        listen: Option<String>,
    },
}
