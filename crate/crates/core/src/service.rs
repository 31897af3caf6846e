//! HTTP facade for interactive stop-set editing.
//!
//! Sessions hold one image and mask, a mutable curve set and the artifacts
//! of the last run. They live in memory only; the least recently used one is
//! evicted once the store is full.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use base64::Engine;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use crate::contours::render_contours;
use crate::distance::stopset::{StopSetDocument, StopSetSpec};
use crate::distance::{tfld, AdmissibilityReport, CurveRole};
use crate::domain::InpaintDomain;
use crate::error::Error;
use crate::io;
use crate::pipeline::{run_pipeline, RunParams, RunReport};
use crate::raster::RasterImage;

pub const DEFAULT_CAPACITY: usize = 16;

/// `POST /session` body: base64-encoded PNGs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    pub image: String,
    pub mask: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionCreated {
    pub id: String,
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub masked_pixels: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StopSetAccepted {
    pub role: CurveRole,
    /// Rasterized pixel count per curve.
    pub pixel_counts: Vec<usize>,
    pub warnings: Vec<String>,
}

/// `POST /session/{id}/run` body: run parameters plus the contour count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRequest {
    #[serde(flatten)]
    pub params: RunParams,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_levels() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResponse {
    pub admissible: bool,
    pub report: RunReport,
}

#[derive(Debug, Clone)]
struct Artifacts {
    report: RunReport,
    result: Option<Bytes>,
    contours: Bytes,
    distance: Bytes,
}

#[derive(Debug)]
struct Session {
    image: Arc<RasterImage>,
    domain: Arc<InpaintDomain>,
    curves: Mutex<Option<(StopSetSpec, StopSetDocument)>>,
    artifacts: Mutex<Option<Arc<Artifacts>>>,
    running: AtomicBool,
}

/// Shared session store.
#[derive(Debug, Clone)]
pub struct AppState {
    sessions: Arc<Mutex<IndexMap<Uuid, Arc<Session>>>>,
    capacity: usize,
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(DEFAULT_CAPACITY)
    }
}

impl AppState {
    pub fn new(capacity: usize) -> Self {
        Self {
            sessions: Arc::new(Mutex::new(IndexMap::new())),
            capacity: capacity.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session store").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn insert(&self, session: Session) -> Uuid {
        let id = Uuid::new_v4();
        let mut map = self.sessions.lock().expect("session store");
        while map.len() >= self.capacity {
            if let Some((old, _)) = map.shift_remove_index(0) {
                log::info!("evicting session {old}");
            }
        }
        map.insert(id, Arc::new(session));
        id
    }

    /// Looks a session up and marks it most recently used.
    fn touch(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        let id = Uuid::parse_str(id).map_err(|_| ApiError::not_found("no such session"))?;
        let mut map = self.sessions.lock().expect("session store");
        let index = map.get_index_of(&id).ok_or_else(|| ApiError::not_found("no such session"))?;
        let last = map.len() - 1;
        map.move_index(index, last);
        Ok(Arc::clone(&map[last]))
    }
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl std::fmt::Display) -> Self {
        Self {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }

    fn not_found(message: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn decode_b64_png(field: &str, data: &str) -> Result<RasterImage, ApiError> {
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(data.trim())
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("{field}: invalid base64: {e}")))?;
    io::decode_png(&bytes).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("{field}: {e}")))
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateSession =
        serde_json::from_slice(&body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let image = decode_b64_png("image", &req.image)?;
    let mask = io::mask_from_image(&decode_b64_png("mask", &req.mask)?);
    let domain = InpaintDomain::new(&image, &mask).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let created = SessionCreated {
        id: String::new(),
        width: image.width(),
        height: image.height(),
        channels: image.channels(),
        masked_pixels: domain.inpaint_count(),
    };
    let id = state.insert(Session {
        image: Arc::new(image),
        domain: Arc::new(domain),
        curves: Mutex::new(None),
        artifacts: Mutex::new(None),
        running: AtomicBool::new(false),
    });
    let created = SessionCreated {
        id: id.to_string(),
        ..created
    };
    Ok((StatusCode::CREATED, Json(created)).into_response())
}

async fn put_stopset(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<StopSetAccepted>, ApiError> {
    let session = state.touch(&id)?;
    let unprocessable = |e: Error| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e);
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let document = StopSetDocument::from_json(text).map_err(unprocessable)?;
    let parsed = document
        .clone()
        .into_spec(session.image.width(), session.image.height())
        .map_err(unprocessable)?;
    if parsed.spec.role == CurveRole::Stop {
        parsed.spec.validate_for_domain(&session.domain).map_err(unprocessable)?;
    }
    let accepted = StopSetAccepted {
        role: parsed.spec.role,
        pixel_counts: parsed.spec.rasterize().iter().map(Vec::len).collect(),
        warnings: parsed.warnings,
    };
    *session.curves.lock().expect("session curves") = Some((parsed.spec, document));
    Ok(Json(accepted))
}

async fn get_stopset(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.touch(&id)?;
    let curves = session.curves.lock().expect("session curves");
    match curves.as_ref() {
        Some((_, doc)) => Ok(Json(doc.clone()).into_response()),
        None => Err(ApiError::not_found("no stop set")),
    }
}

/// Clears the in-flight flag when the run ends, however it ends.
struct RunGuard(Arc<Session>);

impl Drop for RunGuard {
    fn drop(&mut self) {
        self.0.running.store(false, Ordering::Release);
    }
}

fn execute(session: &Session, request: &RunRequest) -> Result<Artifacts, ApiError> {
    let curves = session.curves.lock().expect("session curves").as_ref().map(|(s, _)| s.clone());
    let out = run_pipeline(&session.image, &session.domain, curves.as_ref(), &request.params)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let internal = |e: Error| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e);
    let base = out.result.as_ref().unwrap_or(&session.image);
    let contours = io::encode_png(&render_contours(&out.field, base, request.levels).map_err(internal)?).map_err(internal)?;
    let result = match &out.result {
        Some(img) => Some(Bytes::from(io::encode_png(img).map_err(internal)?)),
        None => None,
    };
    Ok(Artifacts {
        report: out.report,
        result,
        contours: Bytes::from(contours),
        distance: Bytes::from(tfld::encode(&out.field)),
    })
}

async fn run(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let session = state.touch(&id)?;
    let request: RunRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    if request.levels == 0 {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "levels must be at least 1"));
    }
    if session.running.swap(true, Ordering::AcqRel) {
        return Err(ApiError::new(StatusCode::CONFLICT, "a run is already in flight for this session"));
    }
    let guard = RunGuard(Arc::clone(&session));
    let artifacts = tokio::task::spawn_blocking(move || {
        let _guard = guard;
        execute(&_guard.0, &request)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))??;
    let artifacts = Arc::new(artifacts);
    *session.artifacts.lock().expect("session artifacts") = Some(Arc::clone(&artifacts));
    let admissible = artifacts.report.admissibility.valid;
    let status = if admissible {
        StatusCode::OK
    } else {
        StatusCode::UNPROCESSABLE_ENTITY
    };
    let body = RunResponse {
        admissible,
        report: artifacts.report.clone(),
    };
    Ok((status, Json(body)).into_response())
}

fn last_artifacts(session: &Session) -> Result<Arc<Artifacts>, ApiError> {
    session
        .artifacts
        .lock()
        .expect("session artifacts")
        .clone()
        .ok_or_else(|| ApiError::not_found("no run has completed"))
}

async fn get_report(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<RunReport>, ApiError> {
    let session = state.touch(&id)?;
    Ok(Json(last_artifacts(&session)?.report.clone()))
}

async fn get_admissibility(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<AdmissibilityReport>, ApiError> {
    let session = state.touch(&id)?;
    Ok(Json(last_artifacts(&session)?.report.admissibility.clone()))
}

async fn get_artifact(
    State(state): State<AppState>,
    Path((id, which)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let session = state.touch(&id)?;
    let artifacts = last_artifacts(&session)?;
    let (bytes, content_type) = match which.as_str() {
        "result" => (
            artifacts.result.clone().ok_or_else(|| ApiError::not_found("last run was not admissible"))?,
            "image/png",
        ),
        "contours" => (artifacts.contours.clone(), "image/png"),
        "distance" => (artifacts.distance.clone(), "application/octet-stream"),
        other => return Err(ApiError::not_found(&format!("no artifact \"{other}\""))),
    };
    Ok(([(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/stopset", put(put_stopset).get(get_stopset))
        .route("/session/{id}/run", post(run))
        .route("/session/{id}/report", get(get_report))
        .route("/session/{id}/admissibility", get(get_admissibility))
        .route("/session/{id}/{which}", get(get_artifact))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(AppState::default())).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{BoolGrid, PixelCoord};

    fn session() -> Session {
        let image = RasterImage::filled(8, 8, 1, 10.0).unwrap();
        let mask = BoolGrid::from_fn(8, 8, |p: PixelCoord| p.i == 4 && p.j == 4);
        Session {
            domain: Arc::new(InpaintDomain::new(&image, &mask).unwrap()),
            image: Arc::new(image),
            curves: Mutex::new(None),
            artifacts: Mutex::new(None),
            running: AtomicBool::new(false),
        }
    }

    #[test]
    fn store_evicts_least_recently_used() {
        let state = AppState::new(2);
        let a = state.insert(session());
        let b = state.insert(session());
        state.touch(&a.to_string()).unwrap();
        let c = state.insert(session());
        assert_eq!(state.len(), 2);
        assert!(state.touch(&b.to_string()).is_err());
        assert!(state.touch(&a.to_string()).is_ok());
        assert!(state.touch(&c.to_string()).is_ok());
        assert_eq!(state.touch("not-a-uuid").unwrap_err().status, StatusCode::NOT_FOUND);
    }

    #[test]
    fn run_request_is_flat() {
        let r: RunRequest = serde_json::from_str(
            r#"{"distance":"dtb","epsilon":3,"mu":50,"sigma":0.5,"rho":5,"kernel":"coherence"}"#,
        )
        .unwrap();
        assert_eq!(r.levels, 10);
        assert_eq!(r.params.fill.epsilon, 3.0);
    }
}
