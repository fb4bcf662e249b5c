//! Stateless JSON API over the classifier. Every handler is a pure function
//! of its request; the client owns the game session.
//!
//! | route                | body / query                  | response                                  |
//! |----------------------|-------------------------------|-------------------------------------------|
//! | `GET /healthz`       |                               | `{"status":"ok"}`                         |
//! | `GET /api/graph`     | `?n=5&attach=1,4`             | Π, Δ, I/J and orbit totals                |
//! | `POST /api/classify` | `{graph, config}`             | `{side, weights}`                         |
//! | `POST /api/move`     | `{graph, config, vertex}`     | `{config}`, 409 if the vertex is white    |
//! | `POST /api/reach`    | `{graph, from, to, witness?}` | `{reachable, witness?, distance?}`        |
//! | `POST /api/solve`    | `{graph, from, to}`           | `{solvable, moves}`                       |
//!
//! Errors are `{"error": {"kind", "message"}}` with status 400 (malformed
//! request), 409 (illegal move), 413 (n above the witness cap; `/api/reach`
//! still carries the decision) or 422 (invalid graph).

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use flipgame_core::oracle::Limits;
use flipgame_core::summary::{self, GraphSummary};
use flipgame_core::{Classifier, Config, Error, GraphSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

#[derive(Clone, Debug, Default)]
pub struct ServerConfig {
    pub limits: Limits,
    /// Directory served under `/` for the UI bundle.
    pub static_dir: Option<PathBuf>,
}

/// A failed request: status plus a JSON error object.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn malformed(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            kind: "Malformed",
            message: message.into(),
        }
    }
}

fn status_of(e: &Error) -> StatusCode {
    match e {
        _ if e.is_graph_error() => StatusCode::UNPROCESSABLE_ENTITY,
        Error::IllegalMove(_) => StatusCode::CONFLICT,
        Error::CapExceeded { .. } | Error::GroupCapExceeded(_) => StatusCode::PAYLOAD_TOO_LARGE,
        Error::InternalRankError { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        Self {
            status: status_of(&e),
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "kind": self.kind, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

type Shared = Arc<ServerConfig>;

/// The route table.
pub fn app(config: ServerConfig) -> Router {
    let static_dir = config.static_dir.clone();
    let api = Router::new()
        .route("/healthz", get(healthz))
        .route("/api/graph", get(graph_info))
        .route("/api/classify", post(classify))
        .route("/api/move", post(apply_move))
        .route("/api/reach", post(reach))
        .route("/api/solve", post(solve))
        .with_state(Arc::new(config));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

/// Binds `addr` and serves until the process exits.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app(config)).await
}

async fn not_found() -> ApiError {
    ApiError {
        status: StatusCode::NOT_FOUND,
        kind: "NotFound",
        message: "no such route".into(),
    }
}

async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

/// Graphs arrive either as `{"n": 5, "attach": [1, 4]}` or as the text form
/// `"n=5 attach=1,4"`. A wrong shape is malformed (400); a well-formed but
/// invalid graph is 422.
#[derive(Deserialize)]
#[serde(untagged)]
enum GraphInput {
    Object { n: i64, attach: Vec<i64> },
    Text(String),
}

impl GraphInput {
    fn into_spec(self) -> Result<GraphSpec, ApiError> {
        match self {
            GraphInput::Object { n, attach } => {
                let n = usize::try_from(n).map_err(|_| Error::NBelowTwo(0))?;
                Ok(GraphSpec::validate(n, &attach)?)
            }
            GraphInput::Text(s) => Ok(s.parse()?),
        }
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::malformed(format!("invalid request body: {e}")))
}

fn parse_config(g: &GraphSpec, s: &str) -> Result<Config, ApiError> {
    Ok(g.parse_config(s)?)
}

async fn graph_info(Query(q): Query<HashMap<String, String>>) -> ApiResult {
    let n = q
        .get("n")
        .ok_or_else(|| ApiError::malformed("missing query parameter n"))?;
    let attach = q.get("attach").map(String::as_str).unwrap_or("");
    let g: GraphSpec = format!("n={n} attach={attach}").parse()?;
    let cls = Classifier::new(&g)?;
    Ok(Json(GraphSummary::new(&cls)).into_response())
}

#[derive(Deserialize)]
struct ClassifyRequest {
    graph: GraphInput,
    config: String,
}

async fn classify(body: Bytes) -> ApiResult {
    let req: ClassifyRequest = parse_body(&body)?;
    let g = req.graph.into_spec()?;
    let u = parse_config(&g, &req.config)?;
    let label = Classifier::new(&g)?.classify(&u);
    Ok(Json(label).into_response())
}

#[derive(Deserialize)]
struct MoveRequest {
    graph: GraphInput,
    config: String,
    vertex: usize,
}

async fn apply_move(body: Bytes) -> ApiResult {
    let req: MoveRequest = parse_body(&body)?;
    let g = req.graph.into_spec()?;
    let u = parse_config(&g, &req.config)?;
    let next = g.apply_move(&u, req.vertex, true)?;
    Ok(Json(json!({ "config": next })).into_response())
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
struct ReachRequest {
    graph: GraphInput,
    from: String,
    to: String,
    #[serde(default = "default_true")]
    witness: bool,
}

async fn reach(State(cfg): State<Shared>, body: Bytes) -> ApiResult {
    let req: ReachRequest = parse_body(&body)?;
    let g = req.graph.into_spec()?;
    let from = parse_config(&g, &req.from)?;
    let to = parse_config(&g, &req.to)?;
    let cls = Classifier::new(&g)?;
    let out = summary::reach(&cls, &from, &to, req.witness, &cfg.limits)?;
    let status = if out.capped {
        StatusCode::PAYLOAD_TOO_LARGE
    } else {
        StatusCode::OK
    };
    Ok((status, Json(out)).into_response())
}

#[derive(Deserialize)]
struct SolveRequest {
    graph: GraphInput,
    from: String,
    to: String,
}

async fn solve(State(cfg): State<Shared>, body: Bytes) -> ApiResult {
    let req: SolveRequest = parse_body(&body)?;
    let g = req.graph.into_spec()?;
    let from = parse_config(&g, &req.from)?;
    let to = parse_config(&g, &req.to)?;
    let w = summary::solve(&g, &from, &to, &cfg.limits)?;
    Ok(Json(json!({ "solvable": w.is_some(), "moves": w })).into_response())
}
