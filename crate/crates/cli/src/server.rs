//! Read-mostly HTTP query service over an atomically swapped snapshot.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use arc_swap::ArcSwap;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use cforge_core::coverage::CoverageOptions;
use cforge_core::{DiagCode, Error};
use serde_json::Value;

use crate::query::{self, Failure, QueryError, QueryResult, Snapshot};

pub struct AppState {
    current: ArcSwap<Snapshot>,
    source: PathBuf,
    options: CoverageOptions,
}

impl AppState {
    pub fn new(snapshot: Snapshot, options: CoverageOptions) -> Arc<AppState> {
        let source = snapshot.loaded_from.clone();
        Arc::new(AppState {
            current: ArcSwap::from_pointee(snapshot),
            source,
            options,
        })
    }

    /// The snapshot serving the current request. Each handler takes it
    /// once, so a concurrent reload never splits a response.
    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.load_full()
    }
}

type Reply = (StatusCode, Json<Value>);

fn reply(result: QueryResult) -> Reply {
    match result {
        Ok(v) => (StatusCode::OK, Json(v)),
        Err(e) => {
            let status = match e.kind {
                Failure::NotFound => StatusCode::NOT_FOUND,
                Failure::Unprocessable => StatusCode::UNPROCESSABLE_ENTITY,
                Failure::Internal => StatusCode::INTERNAL_SERVER_ERROR,
            };
            (status, Json(e.body()))
        }
    }
}

fn bad_request(message: &str) -> Reply {
    let diag = query::usage_diagnostic(DiagCode::Parse, message);
    (
        StatusCode::BAD_REQUEST,
        Json(serde_json::json!({ "diagnostics": [diag] })),
    )
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/model", get(model))
        .route("/competencies", get(competencies))
        .route("/competencies/{id}/coverage", get(coverage))
        .route("/coverage/matrix", get(matrix))
        .route("/trace", get(trace))
        .route("/gaps", get(gaps))
        .route("/pathways/{id}/profile", get(pathway))
        .route("/whatif", post(whatif))
        .route("/portfolios/{student}/attainment", get(attainment))
        .route("/stats", get(stats))
        .route("/reload", post(reload))
        .with_state(state)
}

async fn model(State(st): State<Arc<AppState>>) -> Reply {
    reply(Ok(query::summary(&st.snapshot())))
}

async fn competencies(State(st): State<Arc<AppState>>) -> Reply {
    reply(Ok(query::competencies(&st.snapshot())))
}

async fn coverage(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    reply(query::coverage(&st.snapshot(), &id, st.options))
}

async fn matrix(State(st): State<Arc<AppState>>) -> Reply {
    reply(Ok(query::matrix(&st.snapshot(), st.options)))
}

async fn trace(State(st): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Reply {
    let snap = st.snapshot();
    match (q.get("topic"), q.get("competency")) {
        (Some(t), None) => reply(query::trace_topic(&snap, t)),
        (None, Some(c)) => reply(query::trace_competency(&snap, c)),
        _ => bad_request("give exactly one of the `topic` or `competency` query parameters"),
    }
}

async fn gaps(State(st): State<Arc<AppState>>) -> Reply {
    reply(Ok(query::gaps(&st.snapshot(), st.options)))
}

async fn pathway(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    reply(query::pathway(&st.snapshot(), &id, st.options))
}

async fn whatif(State(st): State<Arc<AppState>>, body: String) -> Reply {
    let snap = st.snapshot();
    reply(query::parse_delta(&body, "<request>").and_then(|d| query::whatif(&snap, &d, st.options)))
}

async fn attainment(
    State(st): State<Arc<AppState>>,
    Path(student): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Reply {
    match q.get("competency") {
        Some(c) => reply(query::attainment_of(&st.snapshot(), &student, c)),
        None => bad_request("missing `competency` query parameter"),
    }
}

async fn stats(State(st): State<Arc<AppState>>) -> Reply {
    reply(Ok(query::stats(&st.snapshot())))
}

/// Loads the source again off the request threads and swaps it in. On
/// failure the previous snapshot stays current.
async fn reload(State(st): State<Arc<AppState>>) -> Reply {
    let source = st.source.clone();
    let loaded = tokio::task::spawn_blocking(move || Snapshot::load(&source)).await;
    match loaded {
        Ok(Ok(snap)) => {
            let body = query::summary(&snap);
            st.current.store(Arc::new(snap));
            reply(Ok(body))
        }
        Ok(Err(e)) => reply(Err(QueryError::from(e))),
        Err(join) => reply(Err(QueryError {
            kind: Failure::Internal,
            diagnostics: vec![query::usage_diagnostic(
                DiagCode::Io,
                format!("reload failed: {join}"),
            )],
        })),
    }
}

/// Binds `addr` and serves until interrupted.
pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> Result<(), Error> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(addr.to_string(), e))?;
    eprintln!(
        "serving {} on http://{}",
        state.source.display(),
        listener.local_addr().unwrap_or(addr)
    );
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr.to_string(), e))
}
