//! JSON over HTTP. Callers identify themselves with the `x-person-id`
//! header; there is no other authentication.

use std::net::SocketAddr;
use std::sync::Arc;

use atlas_core::graph::OfficeLocation;
use atlas_core::{Actor, GraphError, LinkId, NewPerson, Person, PersonId};
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::analytics::{ConfirmationStats, ThirdPartyStats};
use crate::atlas::Atlas;
use crate::error::AtlasError;
use crate::events::{ActionEvent, ActionKind, AddSource, FloorPlan, Target, View};
use crate::payload::{EgoPayload, FloorPayload, GlobalPayload, LinkPayload, SourceStats, SuggestionPayload, ViewStats};

pub const IDENTITY_HEADER: &str = "x-person-id";
pub const DEFAULT_SEARCH_LIMIT: usize = 20;

type Shared = Arc<Atlas>;

/// Error body: `{"code": ..., "message": ...}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError(pub AtlasError);

impl From<AtlasError> for ApiError {
    fn from(e: AtlasError) -> Self {
        ApiError(e)
    }
}

impl From<GraphError> for ApiError {
    fn from(e: GraphError) -> Self {
        ApiError(e.into())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(AtlasError::Validation(e.body_text()))
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError(AtlasError::Validation(e.body_text()))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let code = self.0.code();
        let status = match code {
            "validation" => StatusCode::BAD_REQUEST,
            "unauthenticated" => StatusCode::UNAUTHORIZED,
            "forbidden" => StatusCode::FORBIDDEN,
            "not_found" => StatusCode::NOT_FOUND,
            "duplicate_link" => StatusCode::CONFLICT,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = ErrorBody {
            code: code.to_string(),
            message: self.0.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// The authenticated caller. Rejects requests whose header is missing,
/// malformed or names nobody.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Identity(pub PersonId);

fn header_identity(parts: &Parts) -> Option<PersonId> {
    let raw = parts.headers.get(IDENTITY_HEADER)?.to_str().ok()?;
    raw.trim().parse::<u64>().ok().map(PersonId)
}

impl FromRequestParts<Shared> for Identity {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, atlas: &Shared) -> Result<Self, Self::Rejection> {
        let id = header_identity(parts).ok_or(AtlasError::Unauthenticated)?;
        if atlas.state().graph.person(id).is_none() {
            return Err(AtlasError::Unauthenticated.into());
        }
        Ok(Identity(id))
    }
}

impl axum::extract::OptionalFromRequestParts<Shared> for Identity {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, atlas: &Shared) -> Result<Option<Self>, Self::Rejection> {
        if parts.headers.contains_key(IDENTITY_HEADER) {
            <Identity as FromRequestParts<Shared>>::from_request_parts(parts, atlas)
                .await
                .map(Some)
        } else {
            Ok(None)
        }
    }
}

pub fn router(atlas: Shared) -> Router {
    Router::new()
        .route("/api/people", get(search_people).post(add_person))
        .route("/api/people/{id}", get(get_person))
        .route("/api/people/{id}/ego", get(person_ego))
        .route("/api/me/ego", get(my_ego))
        .route("/api/global", get(global))
        .route("/api/physical/floors", get(floors))
        .route("/api/physical/floors/{id}", get(floor))
        .route("/api/suggestions", get(suggestions))
        .route("/api/links", post(create_link))
        .route("/api/links/{id}/confirm", post(confirm_link))
        .route("/api/links/{id}", axum::routing::delete(delete_link))
        .route("/api/events", post(post_event))
        .route("/api/stats/views", get(view_stats))
        .route("/api/stats/sources", get(source_stats))
        .route("/api/stats/confirmation", get(confirmation_stats))
        .route("/api/stats/third-party", get(third_party_stats))
        .with_state(atlas)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(atlas: Shared, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(atlas)).await
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    #[serde(default)]
    q: String,
    limit: Option<usize>,
}

async fn search_people(
    State(atlas): State<Shared>,
    _me: Identity,
    params: Result<Query<SearchParams>, QueryRejection>,
) -> ApiResult<Json<Vec<Person>>> {
    let Query(params) = params?;
    Ok(Json(atlas.search(&params.q, params.limit.unwrap_or(DEFAULT_SEARCH_LIMIT))))
}

#[derive(Debug, Deserialize)]
struct PersonRequest {
    display_name: String,
    #[serde(default)]
    group: String,
    avatar_ref: Option<String>,
    office: Option<OfficeLocation>,
    external_id: Option<String>,
}

/// Manual entry. Without an identity header the system is recorded as the
/// one who added the person.
async fn add_person(
    State(atlas): State<Shared>,
    me: Option<Identity>,
    body: Result<Json<PersonRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Person>)> {
    let Json(req) = body?;
    let actor = me.map_or(Actor::System, |Identity(id)| Actor::Person(id));
    let entry = NewPerson {
        display_name: req.display_name,
        group: req.group,
        avatar_ref: req.avatar_ref,
        office: req.office,
        external_id: req.external_id,
    };
    let person = atlas.add_person(actor, entry)?;
    Ok((StatusCode::CREATED, Json(person)))
}

async fn get_person(State(atlas): State<Shared>, _me: Identity, Path(id): Path<u64>) -> ApiResult<Json<Person>> {
    Ok(Json(atlas.person(PersonId(id))?))
}

async fn my_ego(State(atlas): State<Shared>, Identity(me): Identity) -> ApiResult<Json<EgoPayload>> {
    Ok(Json(atlas.ego(me, me)?))
}

async fn person_ego(
    State(atlas): State<Shared>,
    Identity(me): Identity,
    Path(id): Path<u64>,
) -> ApiResult<Json<EgoPayload>> {
    Ok(Json(atlas.ego(me, PersonId(id))?))
}

#[derive(Debug, Deserialize)]
struct GlobalParams {
    include_unconfirmed: Option<bool>,
}

async fn global(
    State(atlas): State<Shared>,
    _me: Identity,
    params: Result<Query<GlobalParams>, QueryRejection>,
) -> ApiResult<Json<GlobalPayload>> {
    let Query(params) = params?;
    let payload = atlas.global(params.include_unconfirmed.unwrap_or(true));
    Ok(Json(GlobalPayload::clone(&payload)))
}

async fn floors(State(atlas): State<Shared>, _me: Identity) -> Json<Vec<FloorPlan>> {
    Json(atlas.floors())
}

async fn floor(State(atlas): State<Shared>, _me: Identity, Path(id): Path<String>) -> ApiResult<Json<FloorPayload>> {
    Ok(Json(atlas.floor(&id)?))
}

#[derive(Debug, Deserialize)]
struct LimitParams {
    limit: Option<usize>,
}

async fn suggestions(
    State(atlas): State<Shared>,
    Identity(me): Identity,
    params: Result<Query<LimitParams>, QueryRejection>,
) -> ApiResult<Json<Vec<SuggestionPayload>>> {
    let Query(params) = params?;
    Ok(Json(atlas.suggestions(me, params.limit)?))
}

#[derive(Debug, Deserialize)]
struct LinkRequest {
    a: PersonId,
    b: PersonId,
    #[serde(rename = "type")]
    link_type: Option<String>,
    source: Option<AddSource>,
    view: Option<View>,
}

async fn create_link(
    State(atlas): State<Shared>,
    Identity(me): Identity,
    body: Result<Json<LinkRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<LinkPayload>)> {
    let Json(req) = body?;
    let link = atlas.create_link(me, req.a, req.b, req.link_type.as_deref(), req.source, req.view)?;
    Ok((StatusCode::CREATED, Json(LinkPayload::new(link))))
}

async fn confirm_link(
    State(atlas): State<Shared>,
    Identity(me): Identity,
    Path(id): Path<u64>,
) -> ApiResult<Json<LinkPayload>> {
    Ok(Json(LinkPayload::new(atlas.confirm_link(me, LinkId(id))?)))
}

async fn delete_link(State(atlas): State<Shared>, Identity(me): Identity, Path(id): Path<u64>) -> ApiResult<StatusCode> {
    atlas.delete_link(me, LinkId(id))?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Debug, Deserialize)]
struct EventRequest {
    kind: ActionKind,
    view: Option<View>,
    query: Option<String>,
    target: Option<Target>,
    timestamp: Option<DateTime<Utc>>,
}

async fn post_event(
    State(atlas): State<Shared>,
    Identity(me): Identity,
    body: Result<Json<EventRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<ActionEvent>)> {
    let Json(req) = body?;
    let mut event = ActionEvent::new(me.into(), req.kind, req.timestamp.unwrap_or_else(|| atlas.now()));
    event.view = req.view;
    event.query = req.query;
    event.target = req.target;
    let event = atlas.record_event(event)?;
    Ok((StatusCode::CREATED, Json(event)))
}

async fn view_stats(State(atlas): State<Shared>, _me: Identity) -> Json<ViewStats> {
    Json(atlas.view_stats())
}

async fn source_stats(State(atlas): State<Shared>, _me: Identity) -> Json<SourceStats> {
    Json(atlas.source_stats())
}

async fn confirmation_stats(State(atlas): State<Shared>, _me: Identity) -> Json<ConfirmationStats> {
    Json(atlas.confirmation_stats())
}

async fn third_party_stats(State(atlas): State<Shared>, _me: Identity) -> Json<ThirdPartyStats> {
    Json(atlas.third_party_stats())
}
