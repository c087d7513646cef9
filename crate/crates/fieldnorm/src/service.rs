//! HTTP API over a review session. All routes live under `/v1`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::review::{Decision, DocumentSummary, ReviewError, Session};

pub const CORPUS_CONTENT_TYPE: &str = "text/tab-separated-values; charset=utf-8";

pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    undecided: Option<Vec<usize>>,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "invalid_request",
            message: message.into(),
            undecided: None,
        }
    }
}

impl From<ReviewError> for ApiError {
    fn from(e: ReviewError) -> Self {
        let message = e.to_string();
        let (status, code, undecided) = match e {
            ReviewError::UnknownDocument(_) | ReviewError::UnknownRecord { .. } => (StatusCode::NOT_FOUND, "not_found", None),
            ReviewError::Continuation(_) | ReviewError::InvalidDecision(_) => {
                (StatusCode::BAD_REQUEST, "invalid_request", None)
            }
            ReviewError::Incomplete { undecided, .. } => (StatusCode::CONFLICT, "incomplete", Some(undecided)),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal", None),
        };
        ApiError {
            status,
            code,
            message,
            undecided,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(u) = self.undecided {
            error["undecided"] = json!(u);
        }
        (self.status, Json(json!({ "error": error }))).into_response()
    }
}

#[derive(Serialize)]
struct DocumentList {
    documents: Vec<DocumentSummary>,
}

#[derive(Deserialize)]
struct ExportQuery {
    #[serde(default)]
    force: bool,
}

async fn list(State(session): State<Arc<Session>>) -> impl IntoResponse {
    Json(DocumentList {
        documents: session.summaries(),
    })
}

async fn document(State(session): State<Arc<Session>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let doc = session.document(&id)?;
    let summary = doc.summary();
    Ok(Json(json!({
        "id": doc.id,
        "status": summary.status,
        "source": doc.source,
        "words": summary.words,
        "decided": summary.decided,
        "records": doc.records,
        "diagnostics": doc.diagnostics,
    }))
    .into_response())
}

async fn decide(
    State(session): State<Arc<Session>>,
    Path((id, record)): Path<(String, String)>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let record: usize = record
        .parse()
        .map_err(|_| ApiError::bad_request(format!("record index `{record}` is not a number")))?;
    let decision: Decision =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(format!("decision body: {e}")))?;
    let updated = session.decide(&id, record, decision)?;
    Ok(Json(updated).into_response())
}

async fn export(
    State(session): State<Arc<Session>>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let text = session.export(&id, q.force)?;
    Ok(([(header::CONTENT_TYPE, CORPUS_CONTENT_TYPE)], text).into_response())
}

pub fn router(session: Arc<Session>) -> Router {
    Router::new()
        .route("/v1/documents", get(list))
        .route("/v1/documents/{id}", get(document))
        .route("/v1/documents/{id}/records/{record}/decision", post(decide))
        .route("/v1/documents/{id}/export", get(export))
        .with_state(session)
}

pub async fn serve(session: Arc<Session>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(session))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
