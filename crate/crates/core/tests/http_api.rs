//! The session API over a real socket, as the editor front end uses it.

use std::io::{BufRead, BufReader};
use std::sync::Arc;
use std::time::Duration;

use adoptscope::session::{export_bytes, http, replay, verify_export, SessionExport, SessionStore, StoreConfig};
use adoptscope::{Analyzer, HashEmbedder};
use serde_json::{json, Value};

struct Server {
    base: String,
    store: Arc<SessionStore>,
    _dir: tempfile::TempDir,
    _runtime: tokio::runtime::Runtime,
}

fn server() -> Server {
    let dir = tempfile::tempdir().unwrap();
    let config = StoreConfig::new(dir.path()).with_debounce(Duration::from_millis(20));
    let store = Arc::new(SessionStore::open(config, Analyzer::shared(), Arc::new(HashEmbedder)).unwrap());
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    runtime.spawn(http::serve_on(store.clone(), listener, std::future::pending()));
    Server {
        base,
        store,
        _dir: dir,
        _runtime: runtime,
    }
}

fn agent() -> ureq::Agent {
    ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(Duration::from_secs(10)))
        .build()
        .into()
}

fn json_of(mut r: ureq::http::Response<ureq::Body>) -> (u16, Value) {
    let status = r.status().as_u16();
    (status, r.body_mut().read_json().unwrap())
}

impl Server {
    fn create(&self) -> String {
        let (status, body) = json_of(agent().post(format!("{}/sessions", self.base)).send_empty().unwrap());
        assert_eq!(status, 201);
        body["id"].as_str().unwrap().to_string()
    }

    fn snippet(&self, id: &str, text: &str) -> (u16, Value) {
        json_of(
            agent()
                .post(format!("{}/sessions/{id}/snippets", self.base))
                .send_json(json!({ "text": text }))
                .unwrap(),
        )
    }

    fn draft(&self, id: &str, draft: &str) -> (u16, Value) {
        json_of(
            agent()
                .put(format!("{}/sessions/{id}/draft", self.base))
                .send_json(json!({ "draft": draft }))
                .unwrap(),
        )
    }

    fn get(&self, path: &str) -> (u16, Value) {
        json_of(agent().get(format!("{}{path}", self.base)).call().unwrap())
    }
}

#[test]
fn health_reports_provider_and_sessions() {
    let s = server();
    s.create();
    let (status, body) = s.get("/health");
    assert_eq!(status, 200);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["sessions"], 1);
    assert_eq!(body["provider"]["status"], "healthy");
}

#[test]
fn errors_use_status_codes_and_codes() {
    let s = server();
    for path in ["/sessions/nope", "/sessions/nope/timeline", "/sessions/nope/export", "/sessions/nope/events"] {
        let (status, body) = s.get(path);
        assert_eq!((status, body["error"].as_str()), (404, Some("unknown_session")), "{path}");
    }
    assert_eq!(s.draft("nope", "x").0, 404);

    let id = s.create();
    let (status, body) = s.snippet(&id, "   \n");
    assert_eq!((status, body["error"].as_str()), (422, Some("empty_snippet")));

    let bad = agent()
        .post(format!("{}/sessions/{id}/snippets", s.base))
        .content_type("application/json")
        .send("{\"txt\": 1}")
        .unwrap();
    let (status, body) = json_of(bad);
    assert_eq!((status, body["error"].as_str()), (422, Some("invalid_request")));

    let (status, body) = s.get(&format!("/sessions/{id}/timeline?since=yesterday"));
    assert_eq!((status, body["error"].as_str()), (422, Some("invalid_request")));
}

#[test]
fn draft_equal_to_snippet_scores_full_overlap() {
    let s = server();
    let id = s.create();
    let text = "Bob kept his promise and waited by the old doorway.";
    let (status, snippet) = s.snippet(&id, text);
    assert_eq!(status, 201);
    assert_eq!(snippet["id"], "s1");
    s.snippet(&id, "A completely different sentence about rivers.");

    let (status, point) = s.draft(&id, text);
    assert_eq!(status, 200);
    assert_eq!(point["per_snippet"]["s1"]["jaccard"], 1.0);
    assert_eq!(point["aggregate"]["jaccard"], 1.0);
    assert_eq!(point["partial"], false);

    let (_, point) = s.draft(&id, "");
    assert_eq!(point["aggregate"]["jaccard"], 0.0);
    assert_eq!(point["draft_length"], 0);
}

#[test]
fn timeline_since_returns_only_newer_points() {
    let s = server();
    let id = s.create();
    s.snippet(&id, "The rain fell on the street.");
    let points: Vec<Value> = ["The rain", "The rain fell", "The rain fell on the street."]
        .iter()
        .map(|d| s.draft(&id, d).1)
        .collect();
    let (_, all) = s.get(&format!("/sessions/{id}/timeline"));
    assert_eq!(all.as_array().unwrap().len(), 3);

    let since = points[0]["at"].as_str().unwrap();
    let encoded = since.replace('+', "%2B").replace(':', "%3A");
    let (status, newer) = s.get(&format!("/sessions/{id}/timeline?since={encoded}"));
    assert_eq!(status, 200);
    let newer = newer.as_array().unwrap();
    assert_eq!(newer.len(), 2);
    assert_eq!(newer[0], points[1]);
    assert_eq!(newer[1], points[2]);
}

#[test]
fn event_stream_delivers_points() {
    let s = server();
    let id = s.create();
    s.snippet(&id, "The cat sat on the mat.");

    let url = format!("{}/sessions/{id}/events", s.base);
    let reader = std::thread::spawn(move || {
        let mut response = agent().get(url).call().unwrap();
        assert_eq!(response.status().as_u16(), 200);
        let content_type = response.headers()["content-type"].to_str().unwrap().to_string();
        assert!(content_type.starts_with("text/event-stream"));
        let mut lines = BufReader::new(response.body_mut().as_reader()).lines();
        let mut event = None;
        for line in lines.by_ref() {
            let line = line.unwrap();
            if let Some(name) = line.strip_prefix("event: ") {
                event = Some(name.to_string());
            }
            if let Some(data) = line.strip_prefix("data: ") {
                return (event, serde_json::from_str::<Value>(data).unwrap());
            }
        }
        panic!("stream ended");
    });
    // Give the subscriber time to attach before the point is written.
    std::thread::sleep(Duration::from_millis(200));
    let (_, point) = s.draft(&id, "The cat sat.");
    let (event, data) = reader.join().unwrap();
    assert_eq!(event.as_deref(), Some("point"));
    assert_eq!(data, point);
}

#[test]
fn export_verifies_and_matches_the_log() {
    let s = server();
    let id = s.create();
    s.snippet(&id, "Friendship can outlast twenty years of silence.");
    s.snippet(&id, "The law does not bend for old friends.");
    for draft in ["Friendship", "Friendship can outlast", "Friendship can outlast the law."] {
        s.draft(&id, draft);
    }
    let mut response = agent().get(format!("{}/sessions/{id}/export", s.base)).call().unwrap();
    assert_eq!(response.status().as_u16(), 200);
    let bytes = response.body_mut().read_to_vec().unwrap();

    let export: SessionExport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(export.snippets.len(), 2);
    assert_eq!(export.timeline.len(), 3);
    assert_eq!(export.draft, "Friendship can outlast the law.");
    assert!(verify_export(&export, &Analyzer::shared(), &HashEmbedder).is_empty());

    let replayed = replay(&s.store.log_path(&id).unwrap()).unwrap();
    assert_eq!(export_bytes(&replayed.export()), bytes);
}

#[test]
fn tampered_export_fails_verification() {
    let s = server();
    let id = s.create();
    s.snippet(&id, "One snippet.");
    s.draft(&id, "One snippet.");
    let mut export = s.store.export(&id).unwrap();
    export.timeline[0].aggregate.jaccard = 0.5;
    export.timeline[0].draft.push_str(" more");
    let problems = verify_export(&export, &Analyzer::shared(), &HashEmbedder);
    assert_eq!(problems.len(), 3, "{problems:?}");
}
