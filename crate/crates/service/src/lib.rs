//! Session-scoped HTTP API for building an assessment pair by pair and
//! querying it.
//!
//! Each session owns an assessment and a cached full-method generator that
//! is dropped whenever the assessment changes. Requests against one session
//! are serialised; distinct sessions run concurrently.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use choix::generators::{assessment_to_conjunctive, assessment_to_conjunctive_naive};
use choix::{Assessment, AssessmentPair, Deadline, Error as CoreError, Method, OptionSetDoc, Pipeline, ToleranceConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{Mutex, RwLock};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub tolerance: ToleranceConfig,
    /// Limit for building the full generator; exceeding it yields 503.
    pub build_timeout: Duration,
    /// Directory for JSON snapshots of every session, if any.
    pub persist_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self { tolerance: ToleranceConfig::default(), build_timeout: Duration::from_secs(30), persist_dir: None }
    }
}

struct Session {
    id: String,
    assessment: Assessment,
    generator: Option<Arc<Pipeline>>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    id: String,
    assessment: Assessment,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
    config: Arc<ServiceConfig>,
}

impl AppState {
    /// Creates the state, restoring any snapshots found in the persistence directory.
    pub fn new(config: ServiceConfig) -> std::io::Result<Self> {
        let mut sessions = HashMap::new();
        if let Some(dir) = &config.persist_dir {
            std::fs::create_dir_all(dir)?;
            for entry in std::fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    let text = std::fs::read_to_string(&path)?;
                    let snap: Snapshot = serde_json::from_str(&text)
                        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))?;
                    let session = Session { id: snap.id.clone(), assessment: snap.assessment, generator: None };
                    sessions.insert(snap.id, Arc::new(Mutex::new(session)));
                }
            }
        }
        Ok(Self { sessions: Arc::new(RwLock::new(sessions)), config: Arc::new(config) })
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }

    fn snapshot_path(dir: &Path, id: &str) -> PathBuf {
        dir.join(format!("{id}.json"))
    }

    fn persist(&self, session: &Session) -> Result<(), ApiError> {
        if let Some(dir) = &self.config.persist_dir {
            let snap = Snapshot { id: session.id.clone(), assessment: session.assessment.clone() };
            let text = serde_json::to_string(&snap).map_err(|e| ApiError::internal(e.to_string()))?;
            let path = Self::snapshot_path(dir, &session.id);
            let tmp = path.with_extension("json.tmp");
            std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, &path)).map_err(|e| ApiError::internal(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    extra: Option<Value>,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self { status: StatusCode::BAD_REQUEST, message: message.into(), extra: None }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self { status: StatusCode::NOT_FOUND, message: message.into(), extra: None }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { status: StatusCode::INTERNAL_SERVER_ERROR, message: message.into(), extra: None }
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Solver(_) | CoreError::OracleLimit(_) => ApiError::internal(e.to_string()),
            CoreError::DeadlineExceeded => {
                Self { status: StatusCode::SERVICE_UNAVAILABLE, message: e.to_string(), extra: None }
            }
            _ => ApiError::bad_request(e.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.message });
        if let Some(extra) = self.extra {
            body["partial"] = extra;
        }
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session).delete(delete_session))
        .route("/api/sessions/{id}/pairs", post(add_pair))
        .route("/api/sessions/{id}/pairs/{index}", delete(remove_pair))
        .route("/api/sessions/{id}/consistency", get(consistency))
        .route("/api/sessions/{id}/choose", post(choose))
        .route("/api/sessions/{id}/stats", get(stats))
        .with_state(state)
}

/// Sizes that are cheap to compute without the full generator.
fn cheap_stats(a: &Assessment, tol: &ToleranceConfig) -> ApiResult<Value> {
    let naive = assessment_to_conjunctive_naive(a);
    let simplified = assessment_to_conjunctive(a, tol)?;
    Ok(json!({
        "h_naive": naive.len(),
        "h_simplified": simplified.len(),
        "g_naive_size": naive.disjunctive_size().to_string(),
    }))
}

/// Returns the cached full generator, building it if the cache is stale.
async fn generator(state: &AppState, session: &mut Session) -> ApiResult<Arc<Pipeline>> {
    if let Some(g) = &session.generator {
        return Ok(Arc::clone(g));
    }
    let a = session.assessment.clone();
    let tol = state.config.tolerance;
    let deadline = Deadline::after(state.config.build_timeout);
    let built = tokio::task::spawn_blocking(move || Pipeline::build_until(&a, Method::Full, &tol, deadline))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?;
    match built {
        Ok(p) => {
            let p = Arc::new(p);
            session.generator = Some(Arc::clone(&p));
            Ok(p)
        }
        Err(CoreError::DeadlineExceeded) => Err(ApiError {
            status: StatusCode::SERVICE_UNAVAILABLE,
            message: format!("building the generator took longer than {:?}", state.config.build_timeout),
            extra: Some(cheap_stats(&session.assessment, &tol)?),
        }),
        Err(e) => Err(e.into()),
    }
}

async fn is_consistent(state: &AppState, session: &mut Session) -> ApiResult<bool> {
    let g = generator(state, session).await?;
    let tol = state.config.tolerance;
    Ok(tokio::task::spawn_blocking(move || g.is_consistent(&tol)).await.map_err(|e| ApiError::internal(e.to_string()))??)
}

#[derive(Deserialize)]
struct CreateSession {
    dimension: i64,
}

async fn create_session(State(state): State<AppState>, body: Result<Json<CreateSession>, JsonRejection>) -> ApiResult<impl IntoResponse> {
    let Json(req) = body?;
    if req.dimension < 1 {
        return Err(ApiError::bad_request(format!("dimension must be at least 1, got {}", req.dimension)));
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Session { id: id.clone(), assessment: Assessment::empty(req.dimension as usize)?, generator: None };
    state.persist(&session)?;
    state.sessions.write().await.insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))))
}

async fn get_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let s = session.lock().await;
    Ok(Json(json!({
        "id": s.id,
        "dimension": s.assessment.dimension(),
        "pairs": s.assessment.pairs(),
    })))
}

async fn delete_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<StatusCode> {
    let removed = state.sessions.write().await.remove(&id);
    let session = removed.ok_or_else(|| ApiError::not_found(format!("no session {id}")))?;
    // wait for in-flight work on the session before dropping its snapshot
    let _guard = session.lock().await;
    if let Some(dir) = &state.config.persist_dir {
        let path = AppState::snapshot_path(dir, &id);
        if path.exists() {
            std::fs::remove_file(path).map_err(|e| ApiError::internal(e.to_string()))?;
        }
    }
    Ok(StatusCode::NO_CONTENT)
}

async fn summary(state: &AppState, s: &mut Session) -> ApiResult<Json<Value>> {
    let consistent = is_consistent(state, s).await?;
    Ok(Json(json!({ "pairs": s.assessment.len(), "consistent": consistent })))
}

async fn add_pair(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<AssessmentPair>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let Json(pair) = body?;
    let mut s = session.lock().await;
    s.assessment.push(pair)?;
    s.generator = None;
    state.persist(&s)?;
    summary(&state, &mut s).await
}

async fn remove_pair(State(state): State<AppState>, UrlPath((id, index)): UrlPath<(String, usize)>) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let mut s = session.lock().await;
    if s.assessment.remove(index).is_none() {
        return Err(ApiError::not_found(format!("no pair at index {index}")));
    }
    s.generator = None;
    state.persist(&s)?;
    summary(&state, &mut s).await
}

async fn consistency(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let mut s = session.lock().await;
    let consistent = is_consistent(&state, &mut s).await?;
    Ok(Json(json!({ "consistent": consistent })))
}

async fn choose(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<OptionSetDoc>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let Json(doc) = body?;
    let mut s = session.lock().await;
    if doc.options.is_empty() {
        return Err(ApiError::bad_request("options must be nonempty"));
    }
    doc.options.check_dim(s.assessment.dimension())?;
    let g = generator(&state, &mut s).await?;
    let tol = state.config.tolerance;
    let result = tokio::task::spawn_blocking(move || g.choose(&doc.options, &tol))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
    Ok(Json(serde_json::to_value(result).map_err(|e| ApiError::internal(e.to_string()))?))
}

async fn stats(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let session = state.session(&id).await?;
    let mut s = session.lock().await;
    let mut body = cheap_stats(&s.assessment, &state.config.tolerance)?;
    let g = generator(&state, &mut s).await?;
    let full = match g.as_ref() {
        Pipeline::Materialized(d) => d.len(),
        Pipeline::Lazy { .. } => unreachable!("the full method materialises its generator"),
    };
    body["g_full_size"] = json!(full);
    Ok(Json(body))
}
