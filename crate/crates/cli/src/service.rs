//! Local JSON service hosting game sessions.
//!
//! Handlers only parse, lock and serialize; the game itself lives in
//! [`crate::session`] and the engine in `linksmooth::solver`.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, RwLock, TryLockError};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use linksmooth::multigraph::{EdgeId, Multigraph};
use linksmooth::solver::{Action, Move, Player, Solver};

use crate::report::{classify, GraphInput};
use crate::session::{Session, SessionError, SessionStatus};

pub const DEFAULT_PORT: u16 = 8787;
/// Largest edge count the engine answers within the request.
pub const SYNC_EDGE_LIMIT: usize = 12;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::Disconnected | SessionError::NoEdges => StatusCode::BAD_REQUEST,
            SessionError::Finished | SessionError::NotYourTurn(_) => StatusCode::CONFLICT,
            SessionError::IllegalMove(..) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.to_string())
    }
}

/// One line of the persistence log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LogEvent {
    Create {
        id: String,
        graph: Multigraph,
        human: Player,
        first: Player,
    },
    Move {
        id: String,
        actor: Player,
        edge: EdgeId,
        action: Action,
    },
}

struct Slot {
    session: Mutex<Session>,
    /// An engine move is being computed off-request.
    pending: AtomicBool,
}

pub struct AppState {
    solver: Arc<Solver>,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
    log: Option<Mutex<File>>,
}

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("log line {line}: {msg}")]
    Replay { line: usize, msg: String },
}

impl AppState {
    pub fn new(solver: Arc<Solver>) -> Self {
        AppState {
            solver,
            sessions: RwLock::new(HashMap::new()),
            log: None,
        }
    }

    /// Replays the log at `path` (if present) and appends to it from now on.
    pub fn with_persistence(solver: Arc<Solver>, path: &Path) -> Result<Self, PersistError> {
        let mut state = AppState::new(solver);
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let replay_err = |msg: String| PersistError::Replay { line: i + 1, msg };
                let event: LogEvent = serde_json::from_str(&line).map_err(|e| replay_err(e.to_string()))?;
                state.apply_logged(event).map_err(|e| replay_err(e.message))?;
            }
        }
        state.log = Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?));
        // sessions cut off before the engine answered
        let slots: Vec<Arc<Slot>> = state.sessions.read().unwrap().values().cloned().collect();
        for slot in slots {
            let mut s = slot.session.lock().unwrap();
            if let Some(mv) = s.play_engine(&state.solver) {
                state.record(&LogEvent::Move {
                    id: s.id.clone(),
                    actor: s.engine(),
                    edge: mv.edge,
                    action: mv.action,
                });
            }
        }
        Ok(state)
    }

    fn apply_logged(&self, event: LogEvent) -> Result<(), ApiError> {
        match event {
            LogEvent::Create { id, graph, human, first } => {
                let s = Session::new(id.clone(), graph, human, first)?;
                self.insert(s);
            }
            LogEvent::Move { id, actor, edge, action } => {
                let slot = self.slot(&id)?;
                let mut s = slot.session.lock().unwrap();
                s.play(actor, Move::new(edge, action))?;
            }
        }
        Ok(())
    }

    fn record(&self, event: &LogEvent) {
        if let Some(log) = &self.log {
            let mut f = log.lock().unwrap();
            // a failed append loses durability, not the live session
            if let Err(e) = writeln!(f, "{}", serde_json::to_string(event).unwrap()) {
                eprintln!("persist: {e}");
            }
        }
    }

    fn insert(&self, s: Session) -> Arc<Slot> {
        let slot = Arc::new(Slot {
            session: Mutex::new(s.clone()),
            pending: AtomicBool::new(false),
        });
        self.sessions.write().unwrap().insert(s.id.clone(), slot.clone());
        slot
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        self.sessions.read().unwrap().get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap().len()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub session: Session,
    pub to_move: Option<Player>,
    pub warning: Option<String>,
    /// The engine is still choosing its move; poll the session.
    pub pending: bool,
}

impl SessionView {
    fn of(s: &Session, pending: bool) -> Self {
        SessionView {
            session: s.clone(),
            to_move: s.to_move(),
            warning: s.warning().map(str::to_string),
            pending,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CreateResponse {
    #[serde(flatten)]
    pub view: SessionView,
    pub engine_reply: Option<Move>,
    pub poll: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveResponse {
    pub accepted: bool,
    pub engine_reply: Option<Move>,
    pub status: SessionStatus,
    pub session: SessionView,
    pub poll: Option<String>,
}

#[derive(Deserialize)]
struct CreateRequest {
    graph: GraphInput,
    human: Player,
    first: Player,
}

#[derive(Deserialize)]
struct MoveRequest {
    edge: EdgeId,
    action: Action,
}

#[derive(Deserialize)]
struct ClassifyRequest {
    graph: GraphInput,
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))
}

fn poll_url(id: &str) -> String {
    format!("/sessions/{id}")
}

enum EngineReply {
    None,
    Played(Move),
    Deferred,
}

/// Lets the engine answer if it is its turn: inline for small graphs,
/// otherwise on a background thread.
fn engine_turn(state: &Arc<AppState>, slot: &Arc<Slot>, s: &mut Session) -> EngineReply {
    if !s.engine_to_move() {
        return EngineReply::None;
    }
    if s.state.graph.edge_count() <= SYNC_EDGE_LIMIT {
        let mv = s.play_engine(&state.solver).expect("engine to move");
        state.record(&LogEvent::Move {
            id: s.id.clone(),
            actor: s.engine(),
            edge: mv.edge,
            action: mv.action,
        });
        return EngineReply::Played(mv);
    }
    slot.pending.store(true, Ordering::SeqCst);
    let snapshot = s.clone();
    let (state, slot) = (state.clone(), slot.clone());
    tokio::task::spawn_blocking(move || {
        let choice = snapshot.engine_move(&state.solver).expect("engine to move");
        let mut s = slot.session.lock().unwrap();
        let engine = s.engine();
        s.play(engine, choice.mv).expect("engine moves are legal");
        state.record(&LogEvent::Move {
            id: s.id.clone(),
            actor: engine,
            edge: choice.mv.edge,
            action: choice.mv.action,
        });
        slot.pending.store(false, Ordering::SeqCst);
    });
    EngineReply::Deferred
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let graph = req.graph.into_graph().map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Session::new(id.clone(), graph.clone(), req.human, req.first)?;
    state.record(&LogEvent::Create {
        id: id.clone(),
        graph,
        human: req.human,
        first: req.first,
    });
    let slot = state.insert(session);
    tokio::task::spawn_blocking(move || {
        let mut s = slot.session.lock().unwrap();
        let reply = engine_turn(&state, &slot, &mut s);
        let deferred = matches!(reply, EngineReply::Deferred);
        let body = CreateResponse {
            view: SessionView::of(&s, deferred),
            engine_reply: match reply {
                EngineReply::Played(m) => Some(m),
                _ => None,
            },
            poll: deferred.then(|| poll_url(&s.id)),
        };
        let code = if deferred { StatusCode::ACCEPTED } else { StatusCode::CREATED };
        Ok((code, Json(body)).into_response())
    })
    .await
    .expect("session worker")
}

async fn get_session(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    let slot = state.slot(&id)?;
    let pending = slot.pending.load(Ordering::SeqCst);
    let s = slot.session.lock().unwrap();
    Ok(Json(SessionView::of(&s, pending)))
}

async fn play_move(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let slot = state.slot(&id)?;
    let req: MoveRequest = parse_body(&body)?;
    tokio::task::spawn_blocking(move || {
        if slot.pending.load(Ordering::SeqCst) {
            return Err(ApiError::new(StatusCode::CONFLICT, "the engine is still moving"));
        }
        let mut s = match slot.session.try_lock() {
            Ok(s) => s,
            Err(TryLockError::WouldBlock) => {
                return Err(ApiError::new(StatusCode::CONFLICT, "another move is in progress"))
            }
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
        };
        let mv = Move::new(req.edge, req.action);
        let human = s.human;
        s.play(human, mv)?;
        state.record(&LogEvent::Move {
            id: s.id.clone(),
            actor: human,
            edge: mv.edge,
            action: mv.action,
        });
        let reply = engine_turn(&state, &slot, &mut s);
        let deferred = matches!(reply, EngineReply::Deferred);
        let body = MoveResponse {
            accepted: true,
            engine_reply: match reply {
                EngineReply::Played(m) => Some(m),
                _ => None,
            },
            status: s.status,
            session: SessionView::of(&s, deferred),
            poll: deferred.then(|| poll_url(&s.id)),
        };
        let code = if deferred { StatusCode::ACCEPTED } else { StatusCode::OK };
        Ok((code, Json(body)).into_response())
    })
    .await
    .expect("move worker")
}

async fn analysis(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id)?;
    let snapshot = slot.session.lock().unwrap().clone();
    let a = tokio::task::spawn_blocking(move || snapshot.analysis(&state.solver))
        .await
        .expect("analysis worker");
    Ok(Json(a).into_response())
}

async fn classify_graph(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: ClassifyRequest = parse_body(&body)?;
    let g = req.graph.into_graph().map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    tokio::task::spawn_blocking(move || {
        classify(&state.solver, &g)
            .map(|c| Json(c).into_response())
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))
    })
    .await
    .expect("classify worker")
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(play_move))
        .route("/sessions/{id}/analysis", get(analysis))
        .route("/classify", post(classify_graph))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

pub async fn serve(state: Arc<AppState>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
