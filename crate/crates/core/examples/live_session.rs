//! Start the session service in-process and drive it over HTTP: add a
//! snippet, type a draft in steps, then read the timeline and export.

use std::sync::Arc;
use std::time::Duration;

use adoptscope::session::{http, SessionStore, StoreConfig};
use adoptscope::{Analyzer, HashEmbedder};
use serde_json::{json, Value};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("adoptscope-live-{}", std::process::id()));
    let config = StoreConfig::new(&dir).with_debounce(Duration::from_millis(50));
    let store = Arc::new(SessionStore::open(config, Analyzer::shared(), Arc::new(HashEmbedder))?);

    let runtime = tokio::runtime::Runtime::new()?;
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let base = format!("http://{}", listener.local_addr()?);
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = runtime.spawn(http::serve_on(store, listener, async {
        let _ = stopped.await;
    }));

    let agent = ureq::agent();
    let session: Value = agent.post(format!("{base}/sessions")).send_empty()?.body_mut().read_json()?;
    let id = session["id"].as_str().unwrap_or_default().to_string();
    println!("session {id}");

    let snippet = "Remote work saves commuting time but can leave people isolated.";
    agent
        .post(format!("{base}/sessions/{id}/snippets"))
        .send_json(json!({ "text": snippet, "label": "AI" }))?;

    let steps = [
        "Remote work",
        "Remote work saves time.",
        "Remote work saves commuting time, yet some people feel isolated.",
    ];
    for draft in steps {
        let point: Value = agent
            .put(format!("{base}/sessions/{id}/draft"))
            .send_json(json!({ "draft": draft }))?
            .body_mut()
            .read_json()?;
        println!("{:<66} {}", draft, point["aggregate"]);
    }

    let timeline: Value = agent.get(format!("{base}/sessions/{id}/timeline")).call()?.body_mut().read_json()?;
    println!("timeline points: {}", timeline.as_array().map_or(0, Vec::len));
    let export = agent.get(format!("{base}/sessions/{id}/export")).call()?.body_mut().read_to_string()?;
    println!("export: {} bytes, log at {}", export.len(), dir.display());

    let _ = stop.send(());
    runtime.block_on(server)??;
    Ok(())
}
