//! Subcommand bodies. Each is a thin shell over the core library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use agentgraph_core::baselines::Bm25Params;
use agentgraph_core::catalog::load_manifest;
use agentgraph_core::eval::{self, TableRow, DEFAULT_GRID};
use agentgraph_core::index::{catalog_digest, IndexVersion};
use agentgraph_core::{
    AgentRouter, EmbeddingProvider, EvalConfig, EvalQuery, IndexContainer, MetricsReport, RetrievalRequest,
    RetrievalResult, Strategy, SweepReport,
};
use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use tracing::info;

use crate::config::RunConfig;

pub fn build_provider(cfg: &RunConfig) -> anyhow::Result<Arc<dyn EmbeddingProvider>> {
    Ok(cfg.provider_config().build(cfg.cache_dir.as_deref())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSummary {
    pub path: PathBuf,
    pub version: IndexVersion,
}

/// Writes the index container to `--output`, else `--index`, else the default path.
pub fn run_index(cfg: &RunConfig) -> anyhow::Result<IndexSummary> {
    let catalog = cfg.catalog.as_ref().context("`index` needs --catalog")?;
    let graph = load_manifest(catalog)?;
    let provider = build_provider(cfg)?;
    let container = IndexContainer::build(graph, provider.as_ref(), cfg.text.clone())?;
    let path = cfg.output.clone().unwrap_or_else(|| cfg.index_path());
    container.save(&path)?;
    let version = container.version();
    info!(agents = version.agents, tools = version.tools, model_id = %version.model_id, "index written");
    Ok(IndexSummary { path, version })
}

/// Loads the router from the index container, or builds it in memory from
/// `--catalog` when no container exists.
pub fn load_router(cfg: &RunConfig) -> anyhow::Result<AgentRouter> {
    let provider = build_provider(cfg)?;
    let index_path = cfg.index_path();
    let router = if index_path.exists() {
        let container = IndexContainer::load(&index_path)?;
        if let Some(catalog) = &cfg.catalog {
            let graph = load_manifest(catalog)?;
            if catalog_digest(&graph) != container.catalog_digest {
                bail!(
                    "index {} was built from a different catalog than {}; rerun `index`",
                    index_path.display(),
                    catalog.display()
                );
            }
        }
        AgentRouter::from_container(container, provider)?
    } else if let Some(catalog) = &cfg.catalog {
        AgentRouter::build(load_manifest(catalog)?, provider, cfg.text.clone())?
    } else {
        bail!(
            "no index at {} and no --catalog to build one from",
            index_path.display()
        );
    };
    Ok(router.with_bm25(cfg.bm25_corpus, Bm25Params::default()))
}

/// The record printed by `query` and returned by the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryOutput {
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_note: Option<String>,
    pub index: IndexVersion,
    pub request: RetrievalRequest,
    pub result: RetrievalResult,
}

/// The single query path shared by `query` and the service.
pub fn run_query(
    router: &AgentRouter,
    strategy: Strategy,
    request: RetrievalRequest,
) -> agentgraph_core::Result<QueryOutput> {
    let result = router.route(strategy, &request)?;
    Ok(QueryOutput {
        strategy,
        strategy_note: strategy.note().map(str::to_string),
        index: router.version(),
        request,
        result,
    })
}

fn eval_config(cfg: &RunConfig) -> EvalConfig {
    EvalConfig {
        strategy: cfg.strategy,
        fusion: cfg.fusion(),
        n: cfg.n,
        ks: cfg.eval_ks(),
        mode: cfg.mode,
        granularity: cfg.granularity,
    }
}

pub fn load_dataset(path: &Path) -> anyhow::Result<Vec<EvalQuery>> {
    Ok(eval::load_dataset(path)?)
}

pub fn run_eval(router: &AgentRouter, cfg: &RunConfig, dataset: &[EvalQuery]) -> anyhow::Result<MetricsReport> {
    Ok(eval::evaluate_run(router, dataset, &eval_config(cfg))?)
}

/// Parses `agent:tool` pairs; an empty list means the default grid.
pub fn parse_grid(items: &[String]) -> anyhow::Result<Vec<(f64, f64)>> {
    if items.is_empty() {
        return Ok(DEFAULT_GRID.to_vec());
    }
    items
        .iter()
        .map(|item| {
            let (a, t) = item
                .split_once(':')
                .with_context(|| format!("grid point `{item}` is not of the form agent:tool"))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad weight in `{item}`"))
            };
            Ok((parse(a)?, parse(t)?))
        })
        .collect()
}

pub fn run_sweep(
    router: &AgentRouter,
    cfg: &RunConfig,
    dataset: &[EvalQuery],
    grid: &[(f64, f64)],
) -> anyhow::Result<SweepReport> {
    Ok(eval::sweep_weights(router, dataset, grid, &eval_config(cfg))?)
}

/// Converts a benchmark question file; labels are resolved against
/// `--catalog` when one is given.
pub fn run_convert(cfg: &RunConfig, input: &Path) -> anyhow::Result<Vec<EvalQuery>> {
    let content = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let graph = cfg.catalog.as_ref().map(load_manifest).transpose()?;
    Ok(eval::convert_livemcp(
        &input.display().to_string(),
        &content,
        graph.as_ref(),
    )?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization is infallible");
    s.push('\n');
    s
}

pub fn table_csv(rows: &[TableRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn dataset_jsonl(records: &[EvalQuery]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("dataset serialization is infallible") + "\n")
        .collect()
}

/// Writes `body` to `path`, or to stdout when there is no path.
pub fn emit(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

/// Writes a JSON report and, next to it, the flat CSV table.
pub fn emit_report<T: Serialize>(output: Option<&Path>, report: &T, rows: &[TableRow]) -> anyhow::Result<()> {
    emit(output, &to_json(report))?;
    if let Some(p) = output {
        emit(Some(&p.with_extension("csv")), &table_csv(rows)?)?;
    }
    Ok(())
}
