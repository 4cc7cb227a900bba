use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, DurationRound, SecondsFormat, TimeDelta, Utc};
use serde::{Deserialize, Serialize};

use crate::metrics::MetricVector;

/// UTC instant with microsecond resolution, serialized as RFC 3339.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(DateTime<Utc>);

impl Timestamp {
    pub fn now() -> Self {
        Timestamp(
            Utc::now()
                .duration_trunc(TimeDelta::microseconds(1))
                .expect("microsecond truncation"),
        )
    }

    /// `now`, or one microsecond past `previous` if the clock has not moved
    /// beyond it.
    pub fn after(previous: Option<Timestamp>) -> Self {
        let now = Timestamp::now();
        match previous {
            Some(p) if now <= p => Timestamp(p.0 + TimeDelta::microseconds(1)),
            _ => now,
        }
    }

    pub fn as_datetime(&self) -> DateTime<Utc> {
        self.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_rfc3339_opts(SecondsFormat::Micros, true))
    }
}

impl FromStr for Timestamp {
    type Err = chrono::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Timestamp(DateTime::parse_from_rfc3339(s)?.with_timezone(&Utc)))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snippet {
    pub id: String,
    pub text: String,
    pub added_at: Timestamp,
    #[serde(default)]
    pub label: Option<String>,
}

/// A [`MetricVector`] whose embedding score may be missing because the
/// provider was unavailable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointScores {
    pub jaccard: f64,
    pub pos_tf_isf_cosine: f64,
    pub embedding_cosine: Option<f64>,
    pub sentiment_match: f64,
}

impl PointScores {
    pub const ZERO: PointScores = PointScores {
        jaccard: 0.0,
        pos_tf_isf_cosine: 0.0,
        embedding_cosine: Some(0.0),
        sentiment_match: 0.0,
    };

    /// Per-metric maximum. Absent embedding scores are ignored; the result
    /// has none only if every input lacks one. No inputs gives all zeros.
    pub fn max_of<'a>(scores: impl IntoIterator<Item = &'a PointScores>) -> PointScores {
        let mut iter = scores.into_iter().peekable();
        if iter.peek().is_none() {
            return PointScores::ZERO;
        }
        let mut out = PointScores {
            jaccard: f64::NEG_INFINITY,
            pos_tf_isf_cosine: f64::NEG_INFINITY,
            embedding_cosine: None,
            sentiment_match: f64::NEG_INFINITY,
        };
        for s in iter {
            out.jaccard = out.jaccard.max(s.jaccard);
            out.pos_tf_isf_cosine = out.pos_tf_isf_cosine.max(s.pos_tf_isf_cosine);
            out.sentiment_match = out.sentiment_match.max(s.sentiment_match);
            out.embedding_cosine = match (out.embedding_cosine, s.embedding_cosine) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
        }
        out
    }
}

impl From<MetricVector> for PointScores {
    fn from(v: MetricVector) -> Self {
        PointScores {
            jaccard: v.jaccard,
            pos_tf_isf_cosine: v.pos_tf_isf_cosine,
            embedding_cosine: Some(v.embedding_cosine),
            sentiment_match: v.sentiment_match,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelinePoint {
    pub at: Timestamp,
    /// Characters, not bytes.
    pub draft_length: usize,
    pub per_snippet: BTreeMap<String, PointScores>,
    pub aggregate: PointScores,
    /// Set when some embedding scores are missing.
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub created_at: Timestamp,
    pub draft: String,
    pub snippets: Vec<Snippet>,
    pub timeline: Vec<TimelinePoint>,
}

pub const EXPORT_FORMAT: &str = "adoptscope.session.v1";

/// Self-contained session export. Field order is fixed by declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionExport {
    pub format: String,
    pub id: String,
    pub created_at: Timestamp,
    pub draft: String,
    pub snippets: Vec<Snippet>,
    pub timeline: Vec<ExportedPoint>,
}

/// A timeline point with the draft snapshot it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedPoint {
    pub at: Timestamp,
    pub draft: String,
    pub draft_length: usize,
    pub per_snippet: BTreeMap<String, PointScores>,
    pub aggregate: PointScores,
    pub partial: bool,
}

impl ExportedPoint {
    pub fn new(draft: &str, p: &TimelinePoint) -> Self {
        ExportedPoint {
            at: p.at,
            draft: draft.to_string(),
            draft_length: p.draft_length,
            per_snippet: p.per_snippet.clone(),
            aggregate: p.aggregate,
            partial: p.partial,
        }
    }
}
