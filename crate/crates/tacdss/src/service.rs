//! Read-only HTTP facade over a loaded model.
//!
//! | method | path           | body / response                                   |
//! |--------|----------------|---------------------------------------------------|
//! | POST   | `/api/infer`   | `{factors: [4 numbers], units}` → score + trace   |
//! | GET    | `/api/system`  | the model document                                |
//! | GET    | `/api/rules`   | rules with linguistic labels                      |
//! | GET    | `/api/presets` | the reference scenarios                           |
//!
//! Anything else is served from the optional static directory.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use tacdss_core::domain::{self, DecisionFactors, NormalizedFactors, FACTOR_NAMES};
use tacdss_core::{infer, FuzzySystem};
use tower_http::services::ServeDir;

use crate::explain::rule_label;
use crate::model_io::model_to_string;

struct AppState {
    system: FuzzySystem,
    document: String,
}

#[derive(Debug, Serialize)]
pub struct MembershipView {
    pub variable: String,
    pub labels: Vec<String>,
    pub degrees: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct InferResponse {
    pub score: f64,
    /// `[rule_id, strength]` pairs in rule-base order.
    pub firings: Vec<(usize, f64)>,
    pub memberships: Vec<MembershipView>,
    pub fallback_flag: bool,
    pub normalized_factors: [f64; 4],
}

#[derive(Debug, Serialize)]
pub struct RuleView {
    pub id: usize,
    pub antecedent: Vec<usize>,
    pub consequent: usize,
    pub weight: f64,
    pub label: String,
}

#[derive(Debug, Serialize)]
pub struct PresetView {
    pub name: &'static str,
    pub factors: [f64; 4],
    pub recorded_score: Option<f64>,
    pub expected_score: Option<f64>,
}

/// Builds the router. Requests under `/api` never touch the filesystem.
pub fn router(system: FuzzySystem, static_dir: Option<PathBuf>) -> Router {
    let state = Arc::new(AppState {
        document: model_to_string(&system),
        system,
    });
    let api = Router::new()
        .route("/api/infer", post(post_infer))
        .route("/api/system", get(get_system))
        .route("/api/rules", get(get_rules))
        .route("/api/presets", get(get_presets))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(system: FuzzySystem, addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(system, static_dir)).await
}

fn bad_request(status: StatusCode, field: Option<&str>, message: String) -> Response {
    (status, Json(json!({ "error": message, "field": field }))).into_response()
}

async fn post_infer(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let body: Value = match serde_json::from_slice(&body) {
        Ok(v) => v,
        Err(e) => return bad_request(StatusCode::BAD_REQUEST, None, format!("malformed JSON: {e}")),
    };
    let Some(factors) = body.get("factors").and_then(Value::as_array) else {
        return bad_request(
            StatusCode::BAD_REQUEST,
            Some("factors"),
            "`factors` must be an array of 4 numbers".into(),
        );
    };
    if factors.len() != FACTOR_NAMES.len() {
        return bad_request(
            StatusCode::UNPROCESSABLE_ENTITY,
            Some("factors"),
            format!("expected {} factors, got {}", FACTOR_NAMES.len(), factors.len()),
        );
    }
    let mut values = [0.0; 4];
    for (i, v) in factors.iter().enumerate() {
        match v.as_f64() {
            Some(x) => values[i] = x,
            None => {
                return bad_request(
                    StatusCode::BAD_REQUEST,
                    Some(FACTOR_NAMES[i]),
                    format!("`{}` must be a number", FACTOR_NAMES[i]),
                )
            }
        }
    }
    let units = match body.get("units") {
        None => "normalized",
        Some(Value::String(s)) if s == "normalized" || s == "raw" => s.as_str(),
        Some(_) => {
            return bad_request(
                StatusCode::BAD_REQUEST,
                Some("units"),
                "`units` must be \"normalized\" or \"raw\"".into(),
            )
        }
    };
    let normalized = if units == "raw" {
        domain::normalize(&DecisionFactors {
            fuel_litres: values[0],
            interrupt_minutes: values[1],
            weapon_percent: values[2],
            danger_points: values[3],
        })
    } else {
        NormalizedFactors::from_slice(&values)
    };
    let normalized = match normalized {
        Ok(n) => n,
        Err(tacdss_core::Error::FactorOutOfRange { field, value, min, max }) => {
            return bad_request(
                StatusCode::BAD_REQUEST,
                Some(field),
                format!("`{field}` = {value} is outside [{min}, {max}]"),
            )
        }
        Err(e) => return bad_request(StatusCode::BAD_REQUEST, None, e.to_string()),
    };
    let x = normalized.to_array();
    let (score, trace) = match infer(&state.system, &x) {
        Ok(r) => r,
        Err(e) => return (StatusCode::INTERNAL_SERVER_ERROR, Json(json!({ "error": e.to_string() }))).into_response(),
    };
    let memberships = state
        .system
        .inputs()
        .iter()
        .zip(trace.memberships)
        .map(|(v, degrees)| MembershipView {
            variable: v.name().to_string(),
            labels: v.labels().to_vec(),
            degrees,
        })
        .collect();
    Json(InferResponse {
        score,
        firings: trace.firings.into_iter().enumerate().collect(),
        memberships,
        fallback_flag: trace.fallback,
        normalized_factors: x,
    })
    .into_response()
}

async fn get_system(State(state): State<Arc<AppState>>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.document.clone()).into_response()
}

async fn get_rules(State(state): State<Arc<AppState>>) -> Json<Vec<RuleView>> {
    let s = &state.system;
    Json(
        s.rules()
            .iter()
            .enumerate()
            .map(|(id, r)| RuleView {
                id,
                antecedent: r.antecedent.clone(),
                consequent: r.consequent,
                weight: r.weight,
                label: rule_label(s, r),
            })
            .collect(),
    )
}

async fn get_presets() -> Json<Vec<PresetView>> {
    Json(
        domain::presets()
            .into_iter()
            .map(|p| PresetView {
                name: p.name,
                factors: p.factors.to_array(),
                recorded_score: p.recorded_score,
                expected_score: p.expected_score,
            })
            .collect(),
    )
}
