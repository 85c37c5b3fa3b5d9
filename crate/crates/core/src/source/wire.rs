//! JSON request/response contract for remote trend sources.
//!
//! ```text
//! {"op":"countries"}              -> [{"woeid":..,"name":..}, ...]
//! {"op":"trends","woeid":23424977} -> [{"woeid":..,"name":..,"label":..,"followers":[..]}, ...]
//! ```
//!
//! Failures are answered with a [`WireError`] object. The contract is
//! transport-agnostic; the service crate carries it over HTTP POST.

use serde::{Deserialize, Serialize};

use super::{CountryRef, TrendRecord, TrendSource};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum SourceRequest {
    Countries,
    Trends { woeid: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceResponse {
    Countries(Vec<CountryRef>),
    Trends(Vec<TrendRecord>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireErrorKind {
    NotFound,
    InvalidInput,
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireError {
    pub kind: WireErrorKind,
    pub error: String,
}

impl From<&Error> for WireError {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::NotFound(_) => WireErrorKind::NotFound,
            Error::InvalidInput(_) | Error::Parse { .. } | Error::Json(_) => {
                WireErrorKind::InvalidInput
            }
            Error::Source { .. } | Error::Io(_) => WireErrorKind::Unavailable,
        };
        WireError {
            kind,
            error: e.to_string(),
        }
    }
}

impl From<WireError> for Error {
    fn from(e: WireError) -> Self {
        match e.kind {
            WireErrorKind::NotFound => Error::NotFound(e.error),
            WireErrorKind::InvalidInput => Error::InvalidInput(e.error),
            WireErrorKind::Unavailable => Error::Source {
                message: e.error,
                retryable: true,
            },
        }
    }
}

/// Answers one request from a local source.
pub fn answer(source: &dyn TrendSource, request: &SourceRequest) -> Result<SourceResponse> {
    match *request {
        SourceRequest::Countries => source.countries().map(SourceResponse::Countries),
        SourceRequest::Trends { woeid } => {
            let country = source
                .countries()?
                .into_iter()
                .find(|c| c.woeid == woeid)
                .ok_or_else(|| Error::not_found(format!("woeid {woeid}")))?;
            source.fetch_trends(&country).map(SourceResponse::Trends)
        }
    }
}
