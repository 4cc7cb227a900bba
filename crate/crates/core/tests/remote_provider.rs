//! Contract tests for the remote embedder against an in-process stub service.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use adoptscope::embedding::{CachedProvider, FallbackChain, ProviderKind};
use adoptscope::metrics::cosine;
use adoptscope::{EmbedError, EmbeddingProvider, HashEmbedder, RemoteConfig, RemoteEmbedder};
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};

const DIM: usize = 4;

struct Stub {
    base: String,
    hits: Arc<AtomicUsize>,
    _runtime: tokio::runtime::Runtime,
}

/// Vector derived from the text length so equal texts get equal vectors.
fn vector_for(text: &str) -> Vec<f64> {
    let n = text.len() as f64;
    vec![1.0, n, n * 0.5, 2.0]
}

fn stub() -> Stub {
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    let app = Router::new()
        .route(
            "/embed",
            post(move |Json(body): Json<Value>| {
                counter.fetch_add(1, Ordering::SeqCst);
                async move {
                    let text = body["text"].as_str().unwrap_or_default().to_string();
                    Json(json!({ "vector": vector_for(&text) }))
                }
            }),
        )
        .route("/wrong-dim", post(|| async { Json(json!({ "vector": [1.0, 2.0] })) }))
        .route("/error", post(|| async { (StatusCode::INTERNAL_SERVER_ERROR, "boom") }))
        .route("/garbage", post(|| async { "not json" }))
        .route(
            "/slow",
            post(|| async {
                tokio::time::sleep(Duration::from_millis(800)).await;
                Json(json!({ "vector": [1.0, 0.0, 0.0, 0.0] }))
            }),
        );
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let listener = runtime
        .block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))
        .unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    runtime.spawn(async move { axum::serve(listener, app).await.unwrap() });
    Stub {
        base,
        hits,
        _runtime: runtime,
    }
}

fn remote(url: String) -> RemoteEmbedder {
    let mut config = RemoteConfig::new(url, DIM);
    config.timeout = Duration::from_millis(300);
    RemoteEmbedder::new(config)
}

#[test]
fn returns_unit_vectors_from_the_service() {
    let s = stub();
    let r = remote(format!("{}/embed", s.base));
    let v = r.embed("hello").unwrap();
    let raw = vector_for("hello");
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    for (got, want) in v.iter().zip(&raw) {
        assert!((got - want / norm).abs() < 1e-12);
    }
    assert!(r.healthcheck().is_healthy());
    assert_eq!(r.kind(), ProviderKind::Remote);
}

#[test]
fn empty_text_is_zero_without_a_request() {
    let s = stub();
    let r = remote(format!("{}/embed", s.base));
    assert_eq!(r.embed("  ").unwrap(), vec![0.0; DIM]);
    assert_eq!(s.hits.load(Ordering::SeqCst), 0);
}

#[test]
fn failures_map_to_typed_errors() {
    let s = stub();
    assert_eq!(
        remote(format!("{}/wrong-dim", s.base)).embed("x"),
        Err(EmbedError::DimensionMismatch { expected: DIM, actual: 2 })
    );
    for path in ["error", "garbage", "slow", "missing"] {
        let err = remote(format!("{}/{path}", s.base)).embed("x").unwrap_err();
        assert!(matches!(err, EmbedError::ProviderUnavailable(_)), "{path}: {err:?}");
    }
    assert!(!remote(format!("{}/error", s.base)).healthcheck().is_healthy());
}

#[test]
fn fallback_chain_answers_both_sides_from_one_space() {
    let s = stub();
    let chain = FallbackChain::new(Box::new(remote(format!("{}/error", s.base))));
    let (a, b) = chain.embed_pair("the cat sat", "the cat sat").unwrap();
    assert_eq!(a, HashEmbedder.embed("the cat sat").unwrap());
    assert!((cosine(&a, &b) - 1.0).abs() < 1e-12);

    // A dimension mismatch is a contract violation, not an outage.
    let strict = FallbackChain::new(Box::new(remote(format!("{}/wrong-dim", s.base))));
    assert!(matches!(strict.embed_pair("a", "b"), Err(EmbedError::DimensionMismatch { .. })));
}

#[test]
fn cache_avoids_repeat_requests() {
    let s = stub();
    let cached = CachedProvider::new(remote(format!("{}/embed", s.base)), NonZeroUsize::new(8).unwrap());
    for _ in 0..3 {
        cached.embed("same text").unwrap();
    }
    assert_eq!(s.hits.load(Ordering::SeqCst), 1);
    assert_eq!(cached.cached_len(), 1);
}

#[test]
fn concurrent_calls_all_succeed() {
    let s = stub();
    let r = Arc::new(remote(format!("{}/embed", s.base)));
    let handles: Vec<_> = (0..16)
        .map(|i| {
            let r = r.clone();
            std::thread::spawn(move || r.embed(&"w".repeat(i + 1)).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap().len(), DIM);
    }
    assert_eq!(s.hits.load(Ordering::SeqCst), 16);
}
