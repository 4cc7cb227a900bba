//! Offline hashing, a remote service behind a fallback chain, and caching.
//!
//! cargo run --example embedding_providers -- [http://host/embed]

use std::num::NonZeroUsize;

use adoptscope::embedding::{CachedProvider, FallbackChain};
use adoptscope::metrics::cosine;
use adoptscope::{EmbeddingProvider, HashEmbedder, RemoteConfig, RemoteEmbedder};

fn main() {
    let a = "The team met online every morning.";
    let b = "Every morning the team met online.";

    let (va, vb) = HashEmbedder.embed_pair(a, b).expect("hashing never fails");
    println!("hash: dim {} cosine {:.4}", va.len(), cosine(&va, &vb));

    let endpoint = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "http://127.0.0.1:9/embed".into());
    let remote = RemoteEmbedder::new(RemoteConfig::new(endpoint.clone(), 384));
    println!("remote {endpoint}: {:?}", remote.embed_pair(a, b).map(|(v, _)| v.len()));

    let chain = CachedProvider::new(
        FallbackChain::new(Box::new(RemoteEmbedder::new(RemoteConfig::new(endpoint, 384)))),
        NonZeroUsize::new(64).unwrap(),
    );
    for round in 1..=2 {
        let (va, vb) = chain.embed_pair(a, b).expect("the chain always answers");
        println!(
            "chain round {round}: kind {:?} cosine {:.4} cached {}",
            chain.kind(),
            cosine(&va, &vb),
            chain.cached_len()
        );
    }
}
