use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;
use uiml_core::behavior::EventInstance;
use uiml_core::doc::Part;
use uiml_core::render::RenderTarget;
use uiml_core::{validate, SourcePos, Toolkit};

use super::session::{RenderSettings, Session};

/// The session behind a lock: requests run one at a time.
pub type SharedSession = Arc<Mutex<Session>>;

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<SourcePos>,
}

impl ApiError {
    /// A well-formed request the document model refuses.
    pub fn domain(code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: code.to_string(),
            message: message.into(),
            location: None,
        }
    }

    /// Document text that does not parse.
    pub fn validation(code: &str, message: impl Into<String>, location: Option<SourcePos>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: code.to_string(),
            message: message.into(),
            location,
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "Internal".into(),
            message: message.into(),
            location: None,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        ApiError::domain("BadRequest", rejection.body_text())
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Unwrap a JSON body, answering malformed ones in the API's error shape.
fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(ApiError::from)
}

pub fn router(session: SharedSession) -> Router {
    Router::new()
        .route("/api/document", get(get_document).put(put_document))
        .route("/api/property", post(post_property))
        .route("/api/transform", post(post_transform))
        .route("/api/render", post(post_render))
        .route("/api/event", post(post_event))
        .route("/api/sourcemap", get(get_sourcemap))
        .route("/api/history", get(get_history))
        .route("/api/history/restore", post(post_restore))
        .with_state(session)
}

#[derive(Serialize)]
struct TreeNode {
    name: String,
    class: String,
    children: Vec<TreeNode>,
}

impl TreeNode {
    fn of(part: &Part) -> TreeNode {
        TreeNode {
            name: part.name.clone(),
            class: part.class.clone(),
            children: part.children.iter().map(TreeNode::of).collect(),
        }
    }
}

fn document_json(s: &Session) -> Value {
    let doc = s.document();
    let vocab = Toolkit::builtin().vocabulary_for(doc);
    let diagnostics: Vec<Value> = validate(doc, vocab)
        .iter()
        .map(|d| {
            json!({
                "severity": d.severity,
                "code": d.code,
                "message": d.message,
                "location": d.location,
            })
        })
        .collect();
    let tree: Vec<Value> = doc
        .interfaces
        .iter()
        .flat_map(|i| &i.structures)
        .map(|st| json!({ "id": st.id, "parts": st.roots.iter().map(TreeNode::of).collect::<Vec<_>>() }))
        .collect();
    json!({
        "session_id": s.id,
        "text": s.text(),
        "tree": tree,
        "part_count": doc.interfaces.iter().flat_map(|i| &i.structures).map(|st| st.part_count()).sum::<usize>(),
        "diagnostics": diagnostics,
        "history_length": s.history().len(),
    })
}

async fn get_document(State(session): State<SharedSession>) -> Json<Value> {
    Json(document_json(&*session.lock().await))
}

#[derive(Deserialize)]
struct DocumentBody {
    text: String,
}

async fn put_document(
    State(session): State<SharedSession>,
    payload: Result<Json<DocumentBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let req = body(payload)?;
    let mut s = session.lock().await;
    let ordinal = s.replace(req.text)?.ordinal;
    let mut doc = document_json(&s);
    doc["ordinal"] = json!(ordinal);
    Ok(Json(doc))
}

#[derive(Deserialize)]
struct PropertyBody {
    part: String,
    prop: String,
    value: String,
}

async fn post_property(
    State(session): State<SharedSession>,
    payload: Result<Json<PropertyBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let req = body(payload)?;
    let mut s = session.lock().await;
    let snap = s.set_property(&req.part, &req.prop, &req.value)?;
    Ok(Json(
        json!({ "ordinal": snap.ordinal, "label": snap.label, "text": snap.document_text }),
    ))
}

#[derive(Deserialize)]
struct TransformBody {
    mapping: String,
}

async fn post_transform(
    State(session): State<SharedSession>,
    payload: Result<Json<TransformBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let req = body(payload)?;
    let s = session.lock().await;
    let out = s.transform(&req.mapping)?;
    Ok(Json(json!({
        "text": uiml_core::serialize_document(&out.document),
        "source_map": out.source_map,
        "report": out.report,
    })))
}

#[derive(Deserialize)]
struct RenderBody {
    #[serde(default = "default_target")]
    target: RenderTarget,
    style: Option<String>,
    content: Option<String>,
    /// Answer with the rendered text itself instead of JSON.
    #[serde(default)]
    raw: bool,
}

fn default_target() -> RenderTarget {
    RenderTarget::Html
}

async fn post_render(
    State(session): State<SharedSession>,
    payload: Result<Json<RenderBody>, JsonRejection>,
) -> ApiResult<Response> {
    let req = body(payload)?;
    let mut s = session.lock().await;
    let rendered = s.render(RenderSettings {
        target: req.target,
        style: req.style,
        content: req.content,
    })?;
    if req.raw {
        let mime = match req.target {
            RenderTarget::Html => "text/html; charset=utf-8",
            RenderTarget::MockDesk => "application/json",
        };
        return Ok(([(header::CONTENT_TYPE, mime)], rendered.output.text.clone()).into_response());
    }
    let value = serde_json::to_value(rendered).map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(value).into_response())
}

async fn post_event(
    State(session): State<SharedSession>,
    payload: Result<Json<EventInstance>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let ev = body(payload)?;
    let mut s = session.lock().await;
    let (effects, rt) = s.event(&ev)?;
    let lines: Vec<String> = effects.iter().map(ToString::to_string).collect();
    Ok(Json(json!({
        "effects": effects,
        "lines": lines,
        "active_structure": rt.active_structure,
        "widgets": rt.widgets,
        "external_calls": rt.external_calls,
    })))
}

async fn get_sourcemap(State(session): State<SharedSession>) -> ApiResult<Json<Value>> {
    let s = session.lock().await;
    let rendered = s
        .last_render()
        .ok_or_else(|| ApiError::domain("NoRender", "nothing has been rendered yet"))?;
    let mut images: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (target, origin) in &rendered.source_map.entries {
        images.entry(origin).or_default().push(target);
    }
    Ok(Json(json!({
        "target": rendered.output.target,
        "entries": rendered.source_map.entries,
        "images": images,
        "annotations": rendered.output.annotations,
    })))
}

async fn get_history(State(session): State<SharedSession>) -> Json<Value> {
    let s = session.lock().await;
    Json(json!({ "session_id": s.id, "snapshots": s.history() }))
}

#[derive(Deserialize)]
struct RestoreBody {
    ordinal: usize,
}

async fn post_restore(
    State(session): State<SharedSession>,
    payload: Result<Json<RestoreBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let req = body(payload)?;
    let mut s = session.lock().await;
    let ordinal = s.restore(req.ordinal)?.ordinal;
    let mut doc = document_json(&s);
    doc["ordinal"] = json!(ordinal);
    Ok(Json(doc))
}
