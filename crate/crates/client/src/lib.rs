//! Blocking client for a trendwalk service.
//!
//! [`LiveSource`] adapts any HTTP backend speaking the trend-source wire
//! contract into a [`TrendSource`], which is how `--world live:<endpoint>`
//! reaches the pipeline.

use std::time::Duration;

use reqwest::blocking::Client as Http;
use reqwest::{StatusCode, Url};
use serde::de::DeserializeOwned;
use serde::Serialize;

use trendwalk::api::{
    GewekeRequest, GewekeResponse, GewekeTraceResponse, Health, SummarizeRequest,
    SummarizeResponse, WalkRequest, WalkResponse,
};
use trendwalk::source::wire::{SourceRequest, WireError};
use trendwalk::source::{CountryRef, TrendRecord, TrendSource};
use trendwalk::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

pub const SOURCE_PATH: &str = "v1/source";

#[derive(Debug, Clone)]
pub struct Client {
    base: Url,
    http: Http,
}

impl Client {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: &str) -> Result<Self> {
        Self::with_timeout(base, DEFAULT_TIMEOUT)
    }

    pub fn with_timeout(base: &str, timeout: Duration) -> Result<Self> {
        let mut base = Url::parse(base)
            .map_err(|e| Error::InvalidInput(format!("bad endpoint {base:?}: {e}")))?;
        if !base.path().ends_with('/') {
            let path = format!("{}/", base.path());
            base.set_path(&path);
        }
        let http = Http::builder()
            .timeout(timeout)
            .build()
            .map_err(transport)?;
        Ok(Client { base, http })
    }

    pub fn base(&self) -> &Url {
        &self.base
    }

    pub fn health(&self) -> Result<Health> {
        let url = self.url("health")?;
        decode(self.http.get(url).send().map_err(transport)?)
    }

    pub fn source(&self, request: &SourceRequest) -> Result<reqwest::blocking::Response> {
        let url = self.url(SOURCE_PATH)?;
        self.http.post(url).json(request).send().map_err(transport)
    }

    pub fn walk(&self, request: &WalkRequest) -> Result<WalkResponse> {
        self.post("v1/walk", request)
    }

    pub fn geweke(&self, request: &GewekeRequest) -> Result<GewekeResponse> {
        self.post("v1/geweke", request)
    }

    pub fn geweke_trace(&self, request: &GewekeRequest) -> Result<GewekeTraceResponse> {
        self.post("v1/geweke/trace", request)
    }

    pub fn summarize(&self, request: &SummarizeRequest) -> Result<SummarizeResponse> {
        self.post("v1/summarize", request)
    }

    fn url(&self, path: &str) -> Result<Url> {
        self.base
            .join(path)
            .map_err(|e| Error::InvalidInput(format!("bad path {path:?}: {e}")))
    }

    fn post<Q: Serialize, R: DeserializeOwned>(&self, path: &str, body: &Q) -> Result<R> {
        let url = self.url(path)?;
        decode(self.http.post(url).json(body).send().map_err(transport)?)
    }
}

/// Trend source served over HTTP by the wire contract.
#[derive(Debug, Clone)]
pub struct LiveSource {
    client: Client,
}

impl LiveSource {
    pub fn new(endpoint: &str) -> Result<Self> {
        Ok(LiveSource {
            client: Client::new(endpoint)?,
        })
    }

    pub fn from_client(client: Client) -> Self {
        LiveSource { client }
    }

    fn call<R: DeserializeOwned>(&self, request: &SourceRequest) -> Result<R> {
        decode(self.client.source(request)?)
    }
}

impl TrendSource for LiveSource {
    fn countries(&self) -> Result<Vec<CountryRef>> {
        self.call(&SourceRequest::Countries)
    }

    fn fetch_trends(&self, country: &CountryRef) -> Result<Vec<TrendRecord>> {
        self.call(&SourceRequest::Trends {
            woeid: country.woeid,
        })
    }
}

fn transport(e: reqwest::Error) -> Error {
    Error::Source {
        message: format!("transport: {e}"),
        retryable: true,
    }
}

fn decode<R: DeserializeOwned>(resp: reqwest::blocking::Response) -> Result<R> {
    let status = resp.status();
    let bytes = resp.bytes().map_err(transport)?;
    if status.is_success() {
        return serde_json::from_slice(&bytes).map_err(|e| Error::Source {
            message: format!("malformed response: {e}"),
            retryable: false,
        });
    }
    if let Ok(wire) = serde_json::from_slice::<WireError>(&bytes) {
        return Err(wire.into());
    }
    let text = String::from_utf8_lossy(&bytes);
    let message = format!("{status}: {}", text.trim());
    Err(match status {
        StatusCode::NOT_FOUND => Error::NotFound(message),
        s if s.is_client_error() => Error::InvalidInput(message),
        _ => Error::Source {
            message,
            retryable: true,
        },
    })
}
