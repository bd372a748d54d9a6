use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use linksmooth::solver::Solver;
use linksmooth_cli::service::{router, AppState, LogEvent};
use linksmooth_cli::session::PARITY_WARNING;

fn app() -> Router {
    router(Arc::new(AppState::new(Arc::new(Solver::new()))))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

async fn create(app: &Router, graph: Value, human: &str, first: &str) -> (StatusCode, Value) {
    call(app, "POST", "/sessions", Some(json!({ "graph": graph, "human": human, "first": first }))).await
}

fn mv(edge: usize, action: &str) -> Option<Value> {
    Some(json!({ "edge": edge, "action": action }))
}

#[tokio::test]
async fn engine_answers_on_the_digon() {
    let app = app();
    let (code, s) = create(&app, json!("v 2\ne 0 1\ne 0 1"), "L", "L").await;
    assert_eq!(code, StatusCode::CREATED);
    assert_eq!(s["to_move"], "L");
    assert!(s["engine_reply"].is_null());
    assert!(s["warning"].is_null());
    let id = s["id"].as_str().unwrap();

    let (code, r) = call(&app, "POST", &format!("/sessions/{id}/moves"), mv(0, "delete")).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(r["engine_reply"], json!({ "edge": 1, "action": "contract" }));
    assert_eq!(r["status"], "KWon");
    assert_eq!(r["session"]["history"].as_array().unwrap().len(), 2);

    let (code, _) = call(&app, "POST", &format!("/sessions/{id}/moves"), mv(1, "delete")).await;
    assert_eq!(code, StatusCode::CONFLICT);
}

#[tokio::test]
async fn engine_moves_first_and_warns_k() {
    let app = app();
    let theta = json!({ "v": 2, "edges": [[0, 1], [0, 1], [0, 1]] });
    let (code, s) = create(&app, theta, "K", "L").await;
    assert_eq!(code, StatusCode::CREATED);
    assert_eq!(s["warning"], PARITY_WARNING);
    assert!(s["engine_reply"].is_object());
    assert_eq!(s["to_move"], "K");
    assert_eq!(s["history"][0]["actor"], "L");
}

#[tokio::test]
async fn bad_requests() {
    let app = app();
    let (code, e) = create(&app, json!("v 3\ne 0 1"), "K", "K").await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
    assert!(e["error"].is_string());
    assert_eq!(create(&app, json!("v 1"), "K", "K").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(create(&app, json!("v 2\ne 0 5"), "K", "K").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(create(&app, json!("v 2\ne 0 1"), "X", "K").await.0, StatusCode::BAD_REQUEST);
    let (code, _) = call(&app, "POST", "/sessions", None).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);

    assert_eq!(call(&app, "GET", "/sessions/nope", None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "POST", "/sessions/nope/moves", mv(0, "delete")).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "GET", "/sessions/nope/analysis", None).await.0, StatusCode::NOT_FOUND);

    let (_, s) = create(&app, json!("v 2\ne 0 1\ne 0 1\ne 0 1"), "K", "K").await;
    let id = s["id"].as_str().unwrap();
    let uri = format!("/sessions/{id}/moves");
    assert_eq!(call(&app, "POST", &uri, mv(7, "delete")).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(call(&app, "POST", &uri, Some(json!({ "edge": 0 }))).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn terminal_moves() {
    let app = app();
    let (_, s) = create(&app, json!("v 2\ne 0 1"), "L", "L").await;
    let id = s["id"].as_str().unwrap();
    let (code, r) = call(&app, "POST", &format!("/sessions/{id}/moves"), mv(0, "delete")).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(r["status"], "LWon");
    assert!(r["engine_reply"].is_null());
    assert!(r["session"]["to_move"].is_null());
}

#[tokio::test]
async fn loop_deletion_wins_for_k() {
    let app = app();
    let (_, s) = create(&app, json!("v 1\ne 0 0"), "K", "K").await;
    let id = s["id"].as_str().unwrap();
    let (_, r) = call(&app, "POST", &format!("/sessions/{id}/moves"), mv(0, "delete")).await;
    assert_eq!(r["status"], "KWon");
}

#[tokio::test]
async fn analysis_endpoint() {
    let app = app();
    let (_, s) = create(&app, json!("v 2\ne 0 1\ne 0 1\ne 0 1"), "K", "K").await;
    let id = s["id"].as_str().unwrap();
    let (code, a) = call(&app, "GET", &format!("/sessions/{id}/analysis"), None).await;
    assert_eq!(code, StatusCode::OK);
    let moves = a["moves"].as_array().unwrap();
    assert_eq!(moves.len(), 6);
    assert_eq!(moves.iter().filter(|m| m["wins_for_mover"] == true).count(), 3);
    assert_eq!(a["mover"], "K");
    assert_eq!(a["outcome"], "N");

    let (_, s) = create(&app, json!("v 2\ne 0 1"), "L", "L").await;
    let id = s["id"].as_str().unwrap();
    call(&app, "POST", &format!("/sessions/{id}/moves"), mv(0, "delete")).await;
    let (_, a) = call(&app, "GET", &format!("/sessions/{id}/analysis"), None).await;
    assert_eq!(a["moves"], json!([]));
    assert!(a["mover"].is_null());
}

#[tokio::test]
async fn classify_endpoint() {
    let app = app();
    let (code, c) = call(&app, "POST", "/classify", Some(json!({ "graph": "v 2\ne 0 1\ne 0 1\ne 0 1" }))).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(c["outcome"], "N");
    assert_eq!(c["note"], "K must move first");
    let (code, _) = call(&app, "POST", "/classify", Some(json!({ "graph": "v 2" }))).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn large_graphs_answer_in_the_background() {
    let app = app();
    // a path with 13 edges: every deletion loses, so K contracts
    let edges: Vec<[usize; 2]> = (0..13).map(|i| [i, i + 1]).collect();
    let (code, s) = create(&app, json!({ "v": 14, "edges": edges }), "L", "K").await;
    assert_eq!(code, StatusCode::ACCEPTED);
    let id = s["id"].as_str().unwrap().to_string();
    assert_eq!(s["poll"], format!("/sessions/{id}"));
    assert_eq!(s["pending"], true);
    let mut view = Value::Null;
    for _ in 0..200 {
        view = call(&app, "GET", &format!("/sessions/{id}"), None).await.1;
        if view["pending"] == false {
            break;
        }
        tokio::time::sleep(Duration::from_millis(25)).await;
    }
    assert_eq!(view["pending"], false);
    assert_eq!(view["history"][0]["actor"], "K");
    assert_eq!(view["history"][0]["action"], "contract");
    assert_eq!(view["to_move"], "L");
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let path = std::env::temp_dir().join(format!("linksmooth-log-{}.jsonl", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let solver = Arc::new(Solver::new());
    let state = Arc::new(AppState::with_persistence(solver.clone(), &path).unwrap());
    let app = router(state);
    let (_, s) = create(&app, json!("v 3\ne 0 1\ne 1 2\ne 2 0\ne 0 1"), "L", "L").await;
    let id = s["id"].as_str().unwrap().to_string();
    let (_, r) = call(&app, "POST", &format!("/sessions/{id}/moves"), mv(3, "delete")).await;
    let before = call(&app, "GET", &format!("/sessions/{id}"), None).await.1;
    assert_eq!(before["history"], r["session"]["history"]);

    let restored = Arc::new(AppState::with_persistence(solver.clone(), &path).unwrap());
    assert_eq!(restored.session_count(), 1);
    let after = call(&router(restored), "GET", &format!("/sessions/{id}"), None).await.1;
    assert_eq!(after, before);

    // a log cut off before the engine replied is completed on startup
    let cut = serde_json::to_string(&LogEvent::Create {
        id: "cut".into(),
        graph: linksmooth::multigraph::named::theta(),
        human: linksmooth::solver::Player::K,
        first: linksmooth::solver::Player::L,
    })
    .unwrap();
    std::fs::write(&path, cut + "\n").unwrap();
    let resumed = router(Arc::new(AppState::with_persistence(solver, &path).unwrap()));
    let view = call(&resumed, "GET", "/sessions/cut", None).await.1;
    assert_eq!(view["history"].as_array().unwrap().len(), 1);
    assert_eq!(view["to_move"], "K");
    let _ = std::fs::remove_file(&path);
}
