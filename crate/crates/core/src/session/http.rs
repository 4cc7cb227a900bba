//! JSON-over-HTTP API and server-sent event stream for the session store.

use std::convert::Infallible;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event as SseEvent, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use futures::Stream;
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast::error::RecvError;

use super::model::Timestamp;
use super::store::SessionStore;
use super::SessionError;

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        let (status, code) = match &self {
            SessionError::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            SessionError::EmptySnippet => (StatusCode::UNPROCESSABLE_ENTITY, "empty_snippet"),
            SessionError::InvalidRequest(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_request"),
            SessionError::Storage(_) | SessionError::Corrupt { .. } => {
                (StatusCode::SERVICE_UNAVAILABLE, "storage_unavailable")
            }
        };
        let body = ErrorBody {
            error: code.into(),
            message: self.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for SessionError {
    fn from(r: JsonRejection) -> Self {
        SessionError::InvalidRequest(r.body_text())
    }
}

impl From<QueryRejection> for SessionError {
    fn from(r: QueryRejection) -> Self {
        SessionError::InvalidRequest(r.body_text())
    }
}

#[derive(Debug, Deserialize)]
pub struct NewSnippet {
    pub text: String,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct DraftUpdate {
    pub draft: String,
}

#[derive(Debug, Deserialize)]
pub struct TimelineQuery {
    pub since: Option<String>,
}

type Shared = Arc<SessionStore>;

/// Runs blocking store work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, SessionError> + Send + 'static,
) -> Result<T, SessionError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| SessionError::Storage(format!("worker failed: {e}")))?
}

async fn create_session(State(store): State<Shared>) -> Result<impl IntoResponse, SessionError> {
    let session = blocking(move || store.create_session()).await?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(State(store): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, SessionError> {
    Ok(Json(blocking(move || store.get_session(&id)).await?))
}

async fn add_snippet(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<NewSnippet>, JsonRejection>,
) -> Result<impl IntoResponse, SessionError> {
    let Json(body) = body?;
    let snippet = blocking(move || store.add_snippet(&id, &body.text, body.label)).await?;
    Ok((StatusCode::CREATED, Json(snippet)))
}

async fn update_draft(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<DraftUpdate>, JsonRejection>,
) -> Result<impl IntoResponse, SessionError> {
    let Json(body) = body?;
    Ok(Json(blocking(move || store.update_draft(&id, &body.draft)).await?))
}

async fn timeline(
    State(store): State<Shared>,
    Path(id): Path<String>,
    query: Result<Query<TimelineQuery>, QueryRejection>,
) -> Result<impl IntoResponse, SessionError> {
    let Query(query) = query?;
    let since = query
        .since
        .map(|s| {
            s.parse::<Timestamp>()
                .map_err(|e| SessionError::InvalidRequest(format!("since must be RFC 3339: {e}")))
        })
        .transpose()?;
    Ok(Json(store.get_timeline(&id, since)?))
}

async fn export(State(store): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, SessionError> {
    let bytes = store.export_bytes(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes))
}

async fn events(
    State(store): State<Shared>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<SseEvent, Infallible>>>, SessionError> {
    let rx = store.subscribe(&id)?;
    let stream = futures::stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(point) => {
                    let event = SseEvent::default()
                        .event("point")
                        .json_data(&point)
                        .expect("point serializes");
                    return Some((Ok(event), rx));
                }
                // Slow consumer: drop what it missed, it can poll the timeline.
                Err(RecvError::Lagged(n)) => tracing::debug!(skipped = n, "event stream lagged"),
                Err(RecvError::Closed) => return None,
            }
        }
    });
    Ok(Sse::new(stream).keep_alive(KeepAlive::new().interval(Duration::from_secs(15))))
}

#[derive(Debug, Serialize)]
struct HealthBody {
    status: &'static str,
    sessions: usize,
    provider: crate::embedding::Health,
}

async fn health(State(store): State<Shared>) -> impl IntoResponse {
    let body = tokio::task::spawn_blocking(move || HealthBody {
        status: "ok",
        sessions: store.session_ids().len(),
        provider: store.provider_health(),
    })
    .await
    .expect("health check task");
    Json(body)
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/snippets", post(add_snippet))
        .route("/sessions/{id}/draft", put(update_draft))
        .route("/sessions/{id}/timeline", get(timeline))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/events", get(events))
        .with_state(store)
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    store: Arc<SessionStore>,
    addr: SocketAddr,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    serve_on(store, tokio::net::TcpListener::bind(addr).await?, shutdown).await
}

/// Serves on an already bound listener until `shutdown` resolves.
pub async fn serve_on(
    store: Arc<SessionStore>,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "session service listening");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(shutdown)
        .await
}
