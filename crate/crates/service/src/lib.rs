//! HTTP front end for the trendwalk library.
//!
//! `POST /v1/source` speaks the trend-source wire contract, so any process
//! holding a [`TrendSource`] can serve it to remote walkers. The remaining
//! routes run walks and diagnostics against the served source.

use std::future::Future;
use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::net::TcpListener;

use trendwalk::api::{
    GewekeRequest, GewekeResponse, GewekeTraceResponse, Health, SummarizeRequest,
    SummarizeResponse, WalkRequest, WalkResponse,
};
use trendwalk::diagnostics::{geweke_trace, geweke_z, summarize};
use trendwalk::mhrw::WalkConfig;
use trendwalk::run::{execute_run, RunOptions};
use trendwalk::source::wire::{answer, SourceRequest, SourceResponse, WireError, WireErrorKind};
use trendwalk::source::TrendSource;

pub type SharedSource = Arc<dyn TrendSource>;

#[derive(Clone)]
struct AppState {
    source: SharedSource,
}

/// Error body for every route: the wire-contract error object.
#[derive(Debug)]
pub struct ApiError(pub trendwalk::Error);

impl From<trendwalk::Error> for ApiError {
    fn from(e: trendwalk::Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = WireError::from(&self.0);
        let status = match body.kind {
            WireErrorKind::NotFound => StatusCode::NOT_FOUND,
            WireErrorKind::InvalidInput => StatusCode::BAD_REQUEST,
            WireErrorKind::Unavailable => StatusCode::SERVICE_UNAVAILABLE,
        };
        if status.is_server_error() {
            tracing::warn!(error = %body.error, "request failed");
        }
        (status, Json(body)).into_response()
    }
}

pub fn router(source: SharedSource) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/v1/source", post(source_op))
        .route("/v1/walk", post(walk))
        .route("/v1/geweke", post(geweke))
        .route("/v1/geweke/trace", post(geweke_trace_route))
        .route("/v1/summarize", post(summarize_route))
        .with_state(AppState { source })
}

/// Serves until `shutdown` resolves.
pub async fn serve<F>(
    listener: TcpListener,
    source: SharedSource,
    shutdown: F,
) -> std::io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    if let Ok(addr) = listener.local_addr() {
        tracing::info!(%addr, "trendwalk service listening");
    }
    axum::serve(listener, router(source))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

// Sources may block (files, remote hosts); keep them off the async workers.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> trendwalk::Result<T> + Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map_err(ApiError),
        Err(e) => Err(ApiError(trendwalk::Error::Source {
            message: format!("worker failed: {e}"),
            retryable: false,
        })),
    }
}

async fn source_op(
    State(state): State<AppState>,
    Json(request): Json<SourceRequest>,
) -> Result<Json<SourceResponse>, ApiError> {
    let source = state.source.clone();
    blocking(move || answer(source.as_ref(), &request))
        .await
        .map(Json)
}

async fn walk(
    State(state): State<AppState>,
    Json(request): Json<WalkRequest>,
) -> Result<Json<WalkResponse>, ApiError> {
    let source = state.source.clone();
    let config = WalkConfig::from(&request);
    let outcome =
        blocking(move || execute_run(source.as_ref(), &config, &RunOptions::default())).await?;
    Ok(Json(outcome.into()))
}

async fn geweke(Json(request): Json<GewekeRequest>) -> Result<Json<GewekeResponse>, ApiError> {
    Ok(Json(geweke_z(&request.chain, &request.config())?))
}

async fn geweke_trace_route(
    Json(request): Json<GewekeRequest>,
) -> Result<Json<GewekeTraceResponse>, ApiError> {
    let points = geweke_trace(&request.chain, &request.config(), request.points)?;
    Ok(Json(GewekeTraceResponse::new(points)))
}

async fn summarize_route(
    Json(request): Json<SummarizeRequest>,
) -> Result<Json<SummarizeResponse>, ApiError> {
    Ok(Json(summarize(&request.reports)?))
}
