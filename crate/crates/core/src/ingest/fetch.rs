//! Registry metadata crawler with a persistent on-disk cache.
//!
//! The client issues `GET {base_url}/{ecosystem}/{name}` and expects a JSON
//! document describing the package and its releases:
//!
//! ```json
//! {
//!   "name": "ggplot2",
//!   "package_id": "SM_123",
//!   "latest_version": "3.4.4",
//!   "releases": [
//!     {"version": "3.4.4", "dependencies": [
//!       {"name": "rlang", "kind": "Imports"},
//!       {"name": "covr", "kind": "Suggests"}
//!     ]}
//!   ]
//! }
//! ```
//!
//! Only the release named by `latest_version` is read, and only its required
//! dependencies are kept. Raw responses are stored under
//! `<cache_dir>/<ecosystem>/<folded-name>.json`; a 404 is remembered with a
//! `<folded-name>.404` marker so unknown packages are not requested again.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use super::{Ecosystem, PackageRecord};

/// Overrides the default cache directory when set.
pub const CACHE_DIR_ENV: &str = "DEPNET_CACHE_DIR";

const REQUIRED_KINDS: [&str; 6] = ["runtime", "required", "install", "depends", "imports", "linkingto"];

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{ecosystem} package `{name}` unknown to the registry")]
    UnknownPackage { ecosystem: Ecosystem, name: String },
    #[error("request for {url} failed after {attempts} attempts: {message}")]
    Network { url: String, attempts: u32, message: String },
    #[error("request for {url} returned HTTP {status}")]
    Http { url: String, status: u16 },
    #[error("malformed registry payload in {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("cache I/O on {}: {source}", path.display())]
    Cache { path: PathBuf, source: io::Error },
}

impl FetchError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, FetchError::Network { .. })
    }
}

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub base_url: String,
    pub cache_dir: PathBuf,
    /// Minimum spacing between two requests to the registry host.
    pub politeness_delay: Duration,
    /// Attempts after the first one for transport errors and 5xx responses.
    pub max_retries: u32,
    pub concurrency: usize,
    pub timeout: Duration,
}

impl ClientConfig {
    /// Defaults: cache in `$DEPNET_CACHE_DIR` or `./cache`, 200 ms politeness
    /// delay, 3 retries, 4 concurrent requests.
    pub fn new(base_url: impl Into<String>) -> Self {
        let cache_dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("cache"));
        Self {
            base_url: base_url.into(),
            cache_dir,
            politeness_delay: Duration::from_millis(200),
            max_retries: 3,
            concurrency: 4,
            timeout: Duration::from_secs(30),
        }
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = dir.into();
        self
    }

    pub fn with_politeness_delay(mut self, delay: Duration) -> Self {
        self.politeness_delay = delay;
        self
    }
}

#[derive(Debug, Deserialize)]
struct Payload {
    name: String,
    #[serde(default)]
    package_id: Option<String>,
    latest_version: String,
    #[serde(default)]
    releases: Vec<Release>,
}

#[derive(Debug, Deserialize)]
struct Release {
    version: String,
    #[serde(default)]
    dependencies: Vec<Dependency>,
}

#[derive(Debug, Deserialize)]
struct Dependency {
    name: String,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    optional: bool,
}

impl Dependency {
    fn is_required(&self) -> bool {
        if self.optional {
            return false;
        }
        match &self.kind {
            None => true,
            Some(k) => REQUIRED_KINDS.iter().any(|r| r.eq_ignore_ascii_case(k.trim())),
        }
    }
}

/// Turns a raw registry payload into a record of its latest release.
pub fn parse_payload(
    ecosystem: Ecosystem,
    body: &[u8],
    origin: &Path,
) -> Result<PackageRecord, FetchError> {
    let parse_err = |message: String| FetchError::Parse { path: origin.to_path_buf(), message };
    let payload: Payload = serde_json::from_slice(body).map_err(|e| parse_err(e.to_string()))?;
    let release = payload
        .releases
        .iter()
        .find(|r| r.version == payload.latest_version)
        .ok_or_else(|| parse_err(format!("no release matching latest_version {}", payload.latest_version)))?;
    let own = ecosystem.fold_name(&payload.name);
    let dependencies = release
        .dependencies
        .iter()
        .filter(|d| d.is_required())
        // R itself appears in CRAN/Bioconductor `Depends:` fields.
        .filter(|d| !(ecosystem != Ecosystem::Pypi && d.name.trim() == "R"))
        .filter(|d| ecosystem.fold_name(&d.name) != own)
        .map(|d| d.name.trim().to_string())
        .collect();
    let mut record = PackageRecord {
        ecosystem,
        package_id: payload.package_id.unwrap_or(own),
        name: payload.name,
        latest_version: payload.latest_version,
        dependencies,
    };
    record.normalize_dependencies();
    Ok(record)
}

enum Cached {
    Body(Vec<u8>),
    Unknown,
    Absent,
}

/// HTTP client for the registry API. Safe to share between threads.
pub struct RegistryClient {
    config: ClientConfig,
    agent: ureq::Agent,
    last_request: Mutex<Option<Instant>>,
    key_locks: Mutex<HashMap<PathBuf, Arc<Mutex<()>>>>,
    network_calls: AtomicUsize,
}

impl RegistryClient {
    pub fn new(config: ClientConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            config,
            agent,
            last_request: Mutex::new(None),
            key_locks: Mutex::new(HashMap::new()),
            network_calls: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &ClientConfig {
        &self.config
    }

    /// HTTP requests issued so far, retries included.
    pub fn network_calls(&self) -> usize {
        self.network_calls.load(Ordering::SeqCst)
    }

    pub fn cache_path(&self, ecosystem: Ecosystem, name: &str) -> PathBuf {
        let folded: String = ecosystem
            .fold_name(name)
            .chars()
            .map(|c| if matches!(c, '/' | '\\' | ':') { '_' } else { c })
            .collect();
        self.config.cache_dir.join(ecosystem.as_str()).join(format!("{folded}.json"))
    }

    fn url(&self, ecosystem: Ecosystem, name: &str) -> String {
        format!("{}/{}/{}", self.config.base_url.trim_end_matches('/'), ecosystem, name.trim())
    }

    fn lock_for(&self, path: &Path) -> Arc<Mutex<()>> {
        let mut locks = self.key_locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(path.to_path_buf()).or_default().clone()
    }

    fn read_cache(&self, path: &Path) -> Result<Cached, FetchError> {
        let cache_err = |source| FetchError::Cache { path: path.to_path_buf(), source };
        match fs::read(path) {
            Ok(body) => return Ok(Cached::Body(body)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(cache_err(e)),
        }
        if path.with_extension("404").exists() {
            return Ok(Cached::Unknown);
        }
        Ok(Cached::Absent)
    }

    fn write_atomically(path: &Path, body: &[u8]) -> Result<(), FetchError> {
        let cache_err = |source| FetchError::Cache { path: path.to_path_buf(), source };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(cache_err)?;
        }
        let tmp = path.with_extension("part");
        fs::write(&tmp, body).map_err(cache_err)?;
        fs::rename(&tmp, path).map_err(cache_err)
    }

    fn wait_politely(&self) {
        let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(prev) = *last {
            let ready = prev + self.config.politeness_delay;
            let now = Instant::now();
            if ready > now {
                thread::sleep(ready - now);
            }
        }
        *last = Some(Instant::now());
    }

    fn get(&self, url: &str) -> Result<Option<Vec<u8>>, FetchError> {
        let mut attempts = 0;
        loop {
            attempts += 1;
            self.wait_politely();
            self.network_calls.fetch_add(1, Ordering::SeqCst);
            let failure = match self.agent.get(url).call() {
                Ok(mut resp) => {
                    let status = resp.status().as_u16();
                    match status {
                        200..=299 => {
                            let mut body = Vec::new();
                            match resp.body_mut().as_reader().read_to_end(&mut body) {
                                Ok(_) => return Ok(Some(body)),
                                Err(e) => e.to_string(),
                            }
                        }
                        404 | 410 => return Ok(None),
                        500..=599 | 429 => format!("HTTP {status}"),
                        _ => return Err(FetchError::Http { url: url.to_string(), status }),
                    }
                }
                Err(e) => e.to_string(),
            };
            if attempts > self.config.max_retries {
                return Err(FetchError::Network { url: url.to_string(), attempts, message: failure });
            }
            log::debug!("retrying {url} after: {failure}");
            thread::sleep(self.config.politeness_delay * attempts);
        }
    }

    /// Metadata for the latest release of one package, from the cache when
    /// possible.
    pub fn fetch(&self, ecosystem: Ecosystem, name: &str) -> Result<PackageRecord, FetchError> {
        let path = self.cache_path(ecosystem, name);
        let lock = self.lock_for(&path);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let unknown = || FetchError::UnknownPackage { ecosystem, name: name.to_string() };

        match self.read_cache(&path)? {
            Cached::Body(body) => return parse_payload(ecosystem, &body, &path),
            Cached::Unknown => return Err(unknown()),
            Cached::Absent => {}
        }
        match self.get(&self.url(ecosystem, name))? {
            Some(body) => {
                Self::write_atomically(&path, &body)?;
                parse_payload(ecosystem, &body, &path)
            }
            None => {
                Self::write_atomically(&path.with_extension("404"), b"")?;
                Err(unknown())
            }
        }
    }
}

/// See [`RegistryClient::fetch`].
pub fn fetch_package_metadata(
    client: &RegistryClient,
    ecosystem: Ecosystem,
    name: &str,
) -> Result<PackageRecord, FetchError> {
    client.fetch(ecosystem, name)
}

/// A starting point for a crawl. A known `package_id` replaces whatever id
/// the registry reports so records line up with mention data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrawlSeed {
    pub ecosystem: Ecosystem,
    pub name: String,
    pub package_id: Option<String>,
}

#[derive(Debug, Default)]
pub struct CrawlOutcome {
    /// Sorted by ecosystem, then folded name.
    pub records: Vec<PackageRecord>,
    pub unknown: Vec<(Ecosystem, String)>,
    pub failed: Vec<(Ecosystem, String, String)>,
}

/// Fetches the seeds and, level by level, every required dependency they
/// pull in until the transitive closure is known.
pub fn crawl(client: &RegistryClient, seeds: &[CrawlSeed]) -> CrawlOutcome {
    let mut seen: HashSet<(Ecosystem, String)> = HashSet::new();
    let mut frontier: Vec<CrawlSeed> = Vec::new();
    for s in seeds {
        if seen.insert((s.ecosystem, s.ecosystem.fold_name(&s.name))) {
            frontier.push(s.clone());
        }
    }

    let mut outcome = CrawlOutcome::default();
    while !frontier.is_empty() {
        let results = fetch_level(client, &frontier);
        let mut next = Vec::new();
        for (seed, result) in frontier.iter().zip(results) {
            match result {
                Ok(mut record) => {
                    if let Some(id) = &seed.package_id {
                        record.package_id = id.clone();
                    }
                    for dep in &record.dependencies {
                        if seen.insert((seed.ecosystem, seed.ecosystem.fold_name(dep))) {
                            next.push(CrawlSeed {
                                ecosystem: seed.ecosystem,
                                name: dep.clone(),
                                package_id: None,
                            });
                        }
                    }
                    outcome.records.push(record);
                }
                Err(FetchError::UnknownPackage { ecosystem, name }) => {
                    outcome.unknown.push((ecosystem, name))
                }
                Err(e) => {
                    log::warn!("{e}");
                    outcome.failed.push((seed.ecosystem, seed.name.clone(), e.to_string()))
                }
            }
        }
        frontier = next;
    }
    outcome
        .records
        .sort_by_cached_key(|r| (r.ecosystem, r.ecosystem.fold_name(&r.name)));
    outcome.unknown.sort();
    outcome.failed.sort();
    outcome
}

fn fetch_level(client: &RegistryClient, level: &[CrawlSeed]) -> Vec<Result<PackageRecord, FetchError>> {
    let workers = client.config.concurrency.clamp(1, level.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<PackageRecord, FetchError>>>> =
        level.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(seed) = level.get(i) else { break };
                let result = client.fetch(seed.ecosystem, &seed.name);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every level slot is filled")
        })
        .collect()
}
