//! HTTP routing service.
//!
//! Requests run against an immutable snapshot of the router. `POST /reload`
//! rebuilds a snapshot from the index container and swaps it in atomically;
//! requests already in flight finish on the snapshot they started with.
//!
//! | method | path | body |
//! |---|---|---|
//! | POST | `/retrieve` | [`PartialRequest`] in, [`QueryOutput`] out |
//! | GET | `/health` | `{"status": "ok"}` |
//! | GET | `/version` | service version and [`IndexVersion`] |
//! | POST | `/reload` | new [`IndexVersion`] |

use std::sync::{Arc, RwLock};

use agentgraph_core::index::IndexVersion;
use agentgraph_core::{AgentRouter, Error as CoreError};
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;
use tracing::{info, warn};

use crate::commands::{load_router, run_query, QueryOutput};
use crate::config::{PartialRequest, RunConfig};

pub struct Snapshot {
    pub router: AgentRouter,
    pub config: RunConfig,
}

type Loader = dyn Fn() -> anyhow::Result<Snapshot> + Send + Sync;

pub struct AppState {
    snapshot: RwLock<Arc<Snapshot>>,
    loader: Arc<Loader>,
}

impl AppState {
    /// Builds the first snapshot with `loader`, which `/reload` calls again.
    pub fn new(loader: impl Fn() -> anyhow::Result<Snapshot> + Send + Sync + 'static) -> anyhow::Result<Self> {
        let first = loader()?;
        Ok(Self {
            snapshot: RwLock::new(Arc::new(first)),
            loader: Arc::new(loader),
        })
    }

    /// Loads from the config's index container (or catalog) on every reload.
    pub fn from_config(cfg: RunConfig) -> anyhow::Result<Self> {
        Self::new(move || {
            Ok(Snapshot {
                router: load_router(&cfg)?,
                config: cfg.clone(),
            })
        })
    }

    pub fn current(&self) -> Arc<Snapshot> {
        Arc::clone(&self.snapshot.read().unwrap_or_else(|e| e.into_inner()))
    }

    fn swap(&self, next: Snapshot) {
        *self.snapshot.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(next);
    }
}

pub fn app(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/retrieve", post(retrieve))
        .route("/health", get(health))
        .route("/version", get(version))
        .route("/reload", post(reload))
        .with_state(state)
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn core_error(e: CoreError) -> ApiError {
    let status = match e {
        CoreError::Request(_) | CoreError::Fusion(_) => StatusCode::BAD_REQUEST,
        CoreError::Embedding(_) => StatusCode::BAD_GATEWAY,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    ApiError(status, e.to_string())
}

fn join_error(e: tokio::task::JoinError) -> ApiError {
    ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
}

async fn retrieve(
    State(state): State<Arc<AppState>>,
    body: Result<Json<PartialRequest>, axum::extract::rejection::JsonRejection>,
) -> Result<Json<QueryOutput>, ApiError> {
    let Json(partial) = body.map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.body_text()))?;
    let snapshot = state.current();
    let out = tokio::task::spawn_blocking(move || {
        let (strategy, request) = snapshot.config.request(partial);
        run_query(&snapshot.router, strategy, request)
    })
    .await
    .map_err(join_error)?
    .map_err(core_error)?;
    Ok(Json(out))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Serialize)]
struct VersionBody {
    service: &'static str,
    index: IndexVersion,
}

async fn version(State(state): State<Arc<AppState>>) -> Json<VersionBody> {
    Json(VersionBody {
        service: env!("CARGO_PKG_VERSION"),
        index: state.current().router.version(),
    })
}

async fn reload(State(state): State<Arc<AppState>>) -> Result<Json<IndexVersion>, ApiError> {
    let loader = Arc::clone(&state.loader);
    match tokio::task::spawn_blocking(move || loader())
        .await
        .map_err(join_error)?
    {
        Ok(next) => {
            let version = next.router.version();
            state.swap(next);
            info!(digest = %version.catalog_digest, "snapshot reloaded");
            Ok(Json(version))
        }
        Err(e) => {
            warn!(error = %e, "reload failed; keeping the current snapshot");
            Err(ApiError(StatusCode::INTERNAL_SERVER_ERROR, format!("{e:#}")))
        }
    }
}

/// Binds `listen` and serves until Ctrl-C.
pub async fn serve(state: Arc<AppState>, listen: &str) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(listen).await?;
    info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, app(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
