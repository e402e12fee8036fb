//! Command line and HTTP service over `agentgraph-core`.
//!
//! The binary is a thin shell: every subcommand resolves a [`RunConfig`]
//! and delegates to the library. `query` and the service share
//! [`commands::run_query`], so they return identical records for identical
//! parameters and index versions.

pub mod args;
pub mod commands;
pub mod config;
pub mod service;

use std::sync::Arc;

use anyhow::Context;

pub use args::{Cli, Command, GlobalArgs};
pub use config::{PartialRequest, ProviderKind, RunConfig};

/// Reads the config file (if any), overlays flags and validates.
pub fn resolve_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.globals.apply(&mut cfg);
    if let Command::Serve { listen: Some(listen) } = &cli.command {
        cfg.listen = listen.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = resolve_config(&cli)?;
    let output = cfg.output.as_deref();
    match &cli.command {
        Command::Index => {
            let summary = commands::run_index(&cfg)?;
            print!("{}", commands::to_json(&summary));
        }
        Command::Query { text, steps } => {
            if text.is_none() && steps.is_empty() {
                anyhow::bail!("`query` needs --text or at least one --step");
            }
            let router = commands::load_router(&cfg)?;
            let (strategy, request) = cfg.request(PartialRequest {
                query_text: text.clone().unwrap_or_default(),
                steps: steps.clone(),
                ..PartialRequest::default()
            });
            let out = commands::run_query(&router, strategy, request)?;
            commands::emit(output, &commands::to_json(&out))?;
        }
        Command::Eval { dataset } => {
            let router = commands::load_router(&cfg)?;
            let data = commands::load_dataset(dataset)?;
            let report = commands::run_eval(&router, &cfg, &data)?;
            commands::emit_report(output, &report, &report.table_rows())?;
        }
        Command::Sweep { dataset, grid } => {
            let grid = commands::parse_grid(grid)?;
            let router = commands::load_router(&cfg)?;
            let data = commands::load_dataset(dataset)?;
            let report = commands::run_sweep(&router, &cfg, &data, &grid)?;
            commands::emit_report(output, &report, &report.table_rows())?;
        }
        Command::ConvertDataset { input } => {
            let records = commands::run_convert(&cfg, input)?;
            commands::emit(output, &commands::dataset_jsonl(&records))?;
        }
        Command::Serve { .. } => {
            let listen = cfg.listen.clone();
            let state = Arc::new(service::AppState::from_config(cfg)?);
            tokio::runtime::Runtime::new()
                .context("starting the async runtime")?
                .block_on(service::serve(state, &listen))?;
        }
    }
    Ok(())
}
