use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use draftcoach_core::data::{generate_synthetic, MatchLogFile, SyntheticConfig};
use draftcoach_core::draft::{HeroId, Team};
use draftcoach_core::markov::{MarkovConfig, TransitionModel};
use draftcoach_core::mcts::MctsConfig;
use draftcoach_service::session::{CreateSession, Session};
use draftcoach_service::{router, AppState, LoadedModels, ServiceConfig};
use http_body_util::BodyExt;
use proptest::prelude::*;
use serde_json::{json, Value};
use tower::ServiceExt;

struct Fixture {
    models: LoadedModels,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let cfg = SyntheticConfig::random(40, 0.5, 0.2, 0.2, 3);
        let (file, oracle) = generate_synthetic(&cfg, 120).unwrap();
        let markov = TransitionModel::fit(
            &file.draft_sequences().unwrap(),
            MarkovConfig { pool_size: 40, ..Default::default() },
        )
        .unwrap();
        Fixture {
            models: LoadedModels {
                win: Some(Arc::new(oracle)),
                markov: Some(Arc::new(markov)),
                data: Some(Arc::new(file)),
            },
        }
    })
}

fn data() -> &'static MatchLogFile {
    fixture().models.data.as_deref().unwrap()
}

fn app_with(models: LoadedModels, cap: usize) -> Router {
    let config = ServiceConfig {
        seed: 7,
        iteration_cap: cap,
        search: MctsConfig { iterations: 200, ..Default::default() },
        compare_samples: 20,
    };
    router(AppState::new(models, config))
}

fn app() -> Router {
    app_with(fixture().models.clone(), 1000)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    let v = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, v, bytes)
}

async fn new_session(app: &Router) -> String {
    let (st, v, _) = call(app, "POST", "/session", Some(json!({"template": "hok", "best_of": 3}))).await;
    assert_eq!(st, StatusCode::CREATED, "{v}");
    v["result"]["id"].as_str().unwrap().to_string()
}

async fn commit(app: &Router, id: &str, hero: u64) -> (StatusCode, Value) {
    let (st, v, _) = call(app, "POST", &format!("/session/{id}/commit"), Some(json!({ "hero": hero }))).await;
    (st, v)
}

fn legal(v: &Value) -> Vec<u64> {
    v["result"]["legal"].as_array().unwrap().iter().map(|h| h.as_u64().unwrap()).collect()
}

#[tokio::test]
async fn create_and_get_session() {
    let app = app();
    let a = new_session(&app).await;
    let b = new_session(&app).await;
    assert_ne!(a, b);
    let (st, v, _) = call(&app, "GET", &format!("/session/{a}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["result"]["cursor"], 0);
    assert_eq!(v["result"]["pool_size"], 40);
    assert_eq!(v["result"]["next"]["action"], "ban");
    assert_eq!(v["result"]["next"]["team"], "ours");
    assert_eq!(v["seed"], 7);
}

#[tokio::test]
async fn unknown_template_and_session() {
    let app = app();
    let (st, v, _) = call(&app, "POST", "/session", Some(json!({"template": "chess"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "invalid_template");
    assert!(v["rule"].is_null());
    let (st, v, _) = call(&app, "GET", "/session/nope", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "not_found");
    let (st, v, _) = call(&app, "POST", "/session", Some(json!({"best_of": "three"}))).await;
    assert!(st.is_client_error());
    assert_eq!(v["code"], "bad_request");
}

#[tokio::test]
async fn commit_undo_and_rules() {
    let app = app();
    let id = new_session(&app).await;
    let (_, initial, _) = call(&app, "GET", &format!("/session/{id}"), None).await;
    let (st, v) = commit(&app, &id, 5).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["result"]["cursor"], 1);
    assert_eq!(v["result"]["bans"], json!([5]));
    let (st, v) = commit(&app, &id, 5).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!((v["code"].as_str(), v["rule"].as_str()), (Some("rule_violation"), Some("duplicate")));
    let (st, v) = commit(&app, &id, 99).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["rule"], "out_of_range");
    let (st, v, _) = call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["result"], initial["result"]);
    let (st, v, _) = call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "empty_history");
}

#[tokio::test]
async fn finish_round_applies_previous_round_rule() {
    let app = app();
    let id = new_session(&app).await;
    let mut v = Value::Null;
    for _ in 0..18 {
        let h = legal(&call(&app, "GET", &format!("/session/{id}"), None).await.1)[0];
        v = commit(&app, &id, h).await.1;
    }
    assert!(v["result"]["next"].is_null());
    let picked = v["result"]["blue_picks"][0].as_u64().unwrap();
    let (st, v, _) = call(&app, "POST", &format!("/session/{id}/finish-round"), Some(json!({"winner": "ours"}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["result"]["round"], 1);
    assert_eq!(v["result"]["results"], json!(["ours"]));
    assert_eq!(v["result"]["our_side"], "red");
    // bans ignore the previous-round masks; picks do not
    assert!(legal(&v).contains(&picked));
    let mut v = v;
    for _ in 0..4 {
        let h = *legal(&v).iter().find(|&&h| h != picked).unwrap();
        v = commit(&app, &id, h).await.1;
    }
    assert_eq!(v["result"]["next"]["action"], "pick");
    assert!(!legal(&v).contains(&picked));
    let (st, v) = commit(&app, &id, picked).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["rule"], "previous_round");
    let (st, v, _) = call(&app, "POST", &format!("/session/{id}/finish-round"), Some(json!({"winner": "ours"}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "round_not_finished");
}

#[tokio::test]
async fn recommend_turns_and_determinism() {
    let app = app();
    let id = new_session(&app).await;
    let req = json!({"session": id, "iterations": 300, "seed": 11});
    let (st, v, bytes) = call(&app, "POST", "/recommend", Some(req.clone())).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["config"]["iterations"], 300);
    assert_eq!(v["result"]["iterations"], 300);
    let chosen = v["result"]["chosen"].as_u64().unwrap();
    assert!(legal(&call(&app, "GET", &format!("/session/{id}"), None).await.1).contains(&chosen));
    let (_, _, again) = call(&app, "POST", "/recommend", Some(req)).await;
    assert_eq!(bytes, again);

    commit(&app, &id, chosen).await;
    let (st, v, _) = call(&app, "POST", "/recommend", Some(json!({"session": id}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "wrong_turn");
    let (st, v, _) = call(&app, "POST", "/predict", Some(json!({"session": id}))).await;
    assert_eq!(st, StatusCode::OK);
    let preds = v["result"].as_array().unwrap();
    assert_eq!(preds.len(), 3);
    assert!(preds.iter().all(|p| p["hero"].as_u64() != Some(chosen)));
    assert!(preds[0]["probability"].as_f64() >= preds[1]["probability"].as_f64());
}

#[tokio::test]
async fn predict_on_our_turn_is_wrong_turn() {
    let app = app();
    let id = new_session(&app).await;
    let (st, v, _) = call(&app, "POST", "/predict", Some(json!({"session": id}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "wrong_turn");
}

#[tokio::test]
async fn iteration_cap_warns() {
    let app = app_with(fixture().models.clone(), 50);
    let id = new_session(&app).await;
    let (_, v, _) = call(&app, "POST", "/recommend", Some(json!({"session": id, "iterations": 5000}))).await;
    assert_eq!(v["config"]["iterations"], 50);
    assert_eq!(v["result"]["iterations"], 50);
    assert!(v["warnings"][0].as_str().unwrap().contains("capped"));
}

#[tokio::test]
async fn path_clamps_and_overrides() {
    let app = app();
    let id = new_session(&app).await;
    let (st, v, _) = call(&app, "POST", "/path", Some(json!({"session": id, "depth": 40, "iterations": 60}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 18);
    assert_eq!(v["config"]["depth"], 18);
    assert!(v["warnings"][0].as_str().unwrap().contains("clamped"));

    let (_, base, _) = call(&app, "POST", "/path", Some(json!({"session": id, "depth": 6, "iterations": 60}))).await;
    let steps = base["result"]["steps"].as_array().unwrap();
    let alt = steps[2]["alternatives"][1]["hero"].as_u64().unwrap();
    let (_, over, _) = call(
        &app,
        "POST",
        "/path",
        Some(json!({"session": id, "depth": 6, "iterations": 60, "overrides": [{"index": 2, "hero": alt}]})),
    )
    .await;
    let osteps = over["result"]["steps"].as_array().unwrap();
    assert_eq!(osteps[..2], steps[..2]);
    assert_eq!(osteps[2]["hero"], alt);
    assert_eq!(osteps[2]["source"], "custom");
    assert_eq!(osteps.len(), 6);
}

#[tokio::test]
async fn compare_two_drafts() {
    let app = app();
    let id = new_session(&app).await;
    let d1: Vec<u64> = (0..18).collect();
    let d2: Vec<u64> = (10..28).collect();
    let (st, v, _) = call(&app, "POST", "/compare", Some(json!({"session": id, "drafts": [d1, d2]}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(v["config"]["samples"], 20);
    for r in rows {
        let p = r["round_probability"].as_f64().unwrap();
        assert_eq!(r["below_half"].as_bool().unwrap(), p < 0.5);
        assert!(r["expected_wins"].as_f64().unwrap() <= 3.0);
    }
    let (st, v, _) = call(&app, "POST", "/compare", Some(json!({"session": id, "drafts": [[0, 1, 2]]}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "draft_not_finished");
}

#[tokio::test]
async fn analytics_endpoints() {
    let app = app();
    let (st, v, _) = call(&app, "GET", "/stats/hero", None).await;
    assert_eq!(st, StatusCode::OK);
    let picks: u64 = v["result"].as_array().unwrap().iter().map(|h| h["picks"].as_u64().unwrap()).sum();
    assert_eq!(picks, 10 * data().matches.len() as u64);

    let team = &data().matches[0].blue_team;
    let (st, v, _) = call(&app, "GET", &format!("/stats/hero?team={}", team.replace(' ', "%20")), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["config"]["team"], team.as_str());

    let player = &data().matches[0].players[0].player;
    let (st, v, _) = call(&app, "GET", &format!("/stats/player?player={}&metric=gold", player.replace(' ', "%20")), None).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert!(v["result"]["q1"].as_f64() <= v["result"]["q3"].as_f64());
    let (st, v, _) = call(&app, "GET", "/stats/player?player=ghost", None).await;
    assert_eq!((st, v["code"].as_str()), (StatusCode::NOT_FOUND, Some("unknown_player")));

    let (st, v, _) = call(&app, "GET", &format!("/stats/team?team={}&heroes=", team.replace(' ', "%20")), None).await;
    assert_eq!(st, StatusCode::OK);
    assert!(v["result"]["samples"].as_u64().unwrap() > 0);

    let (st, v, _) = call(&app, "GET", "/relations?hero=3&relation=counters&min_support=1", None).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert!(v["result"].as_array().unwrap().len() <= 3);

    let date = data().matches[60].date;
    let (st, v, _) = call(&app, "GET", &format!("/patch-diff?date={date}&hero=3"), None).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    let early = data().matches[0].date;
    let (st, v, _) = call(&app, "GET", &format!("/patch-diff?date={early}&hero=3"), None).await;
    assert_eq!((st, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("empty_window")));
    assert!(v["message"].as_str().unwrap().contains("before"));
    let (st, v, _) = call(&app, "GET", "/patch-diff?date=notadate&hero=3", None).await;
    assert_eq!((st, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("bad_request")));
}

#[tokio::test]
async fn missing_models_are_reported() {
    let app = app_with(LoadedModels::default(), 100);
    let (st, v, _) = call(&app, "GET", "/stats/hero", None).await;
    assert_eq!((st, v["code"].as_str()), (StatusCode::SERVICE_UNAVAILABLE, Some("model_missing")));
    let (_, v, _) = call(&app, "POST", "/session", Some(json!({"pool_size": 40}))).await;
    let id = v["result"]["id"].as_str().unwrap();
    let (_, v, _) = call(&app, "POST", "/recommend", Some(json!({"session": id}))).await;
    assert_eq!(v["code"], "model_missing");
}

#[derive(Clone, Debug)]
enum Op {
    Commit(usize, u8),
    Undo(usize),
}

fn ops() -> impl Strategy<Value = Vec<Op>> {
    prop::collection::vec(
        prop_oneof![
            3 => (0usize..2, any::<u8>()).prop_map(|(s, k)| Op::Commit(s, k)),
            1 => (0usize..2).prop_map(Op::Undo),
        ],
        1..30,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Interleaved edits of two sessions leave each equal to a local replica
    /// that only saw its own edits.
    #[test]
    fn sessions_are_isolated(ops in ops()) {
        let rt = tokio::runtime::Builder::new_current_thread().build().unwrap();
        rt.block_on(async {
            let app = app();
            let ids = [new_session(&app).await, new_session(&app).await];
            let mut local: Vec<Session> = ids
                .iter()
                .map(|id| Session::create(id.clone(), &CreateSession::default(), 40).unwrap())
                .collect();
            for op in &ops {
                match *op {
                    Op::Commit(s, k) => {
                        let legal = local[s].series.legal_actions(&local[s].state).unwrap();
                        let h = legal[k as usize % legal.len()];
                        let (st, _) = commit(&app, &ids[s], h.0 as u64).await;
                        prop_assert_eq!(st, StatusCode::OK);
                        local[s].commit(h).unwrap();
                    }
                    Op::Undo(s) => {
                        let (st, _, _) = call(&app, "POST", &format!("/session/{}/undo", ids[s]), None).await;
                        prop_assert_eq!(st.is_success(), local[s].undo().is_ok());
                    }
                }
            }
            for s in 0..2 {
                let (_, v, _) = call(&app, "GET", &format!("/session/{}", ids[s]), None).await;
                prop_assert_eq!(&v["result"], &serde_json::to_value(local[s].summary()).unwrap());
            }
            Ok(())
        })?;
    }

    /// Commit followed by undo restores the session exactly.
    #[test]
    fn commit_then_undo_is_identity(prefix in prop::collection::vec(any::<u8>(), 0..17), k in any::<u8>()) {
        let mut s = Session::create("t".into(), &CreateSession::default(), 40).unwrap();
        for p in prefix {
            let legal = s.series.legal_actions(&s.state).unwrap();
            s.commit(legal[p as usize % legal.len()]).unwrap();
        }
        let before = s.summary();
        let legal = s.series.legal_actions(&s.state).unwrap();
        s.commit(legal[k as usize % legal.len()]).unwrap();
        s.undo().unwrap();
        prop_assert_eq!(s.summary(), before);
        let replayed = draftcoach_service::session::replay(&s.series, &s.history).unwrap();
        prop_assert_eq!(replayed, s.state.clone());
    }
}

#[test]
fn session_replays_to_state_after_round() {
    let mut s = Session::create("t".into(), &CreateSession::default(), 40).unwrap();
    for _ in 0..18 {
        let h = s.series.legal_actions(&s.state).unwrap()[0];
        s.commit(h).unwrap();
    }
    s.finish_round(Team::Theirs).unwrap();
    assert!(s.history.is_empty());
    s.commit(s.series.legal_actions(&s.state).unwrap()[0]).unwrap();
    assert_eq!(draftcoach_service::session::replay(&s.series, &s.history).unwrap(), s.state);
    assert!(s.commit(HeroId(0)).is_err());
}
