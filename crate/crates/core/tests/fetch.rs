//! Registry crawler against a local mock HTTP server.

mod common;

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use depnet::cli::{self, Command, RunConfig};
use depnet::ingest::fetch::{crawl, ClientConfig, CrawlSeed, FetchError, RegistryClient};
use depnet::ingest::{load_registry_snapshot, Ecosystem};

type Route = Box<dyn Fn(usize) -> (u16, String) + Send + Sync>;

/// Serves `routes` by request path; the closure receives how many times the
/// path was requested before. Unknown paths get 404.
struct MockRegistry {
    base_url: String,
    hits: Arc<Mutex<HashMap<String, usize>>>,
}

impl MockRegistry {
    fn start(routes: Vec<(&str, Route)>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base_url = format!("http://{}", listener.local_addr().unwrap());
        let routes: HashMap<String, Route> = routes.into_iter().map(|(p, r)| (p.to_string(), r)).collect();
        let hits: Arc<Mutex<HashMap<String, usize>>> = Arc::default();
        let counter = hits.clone();
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut request_line = String::new();
                if reader.read_line(&mut request_line).is_err() {
                    continue;
                }
                let mut line = String::new();
                while reader.read_line(&mut line).map(|n| n > 2).unwrap_or(false) {
                    line.clear();
                }
                let path = request_line.split_whitespace().nth(1).unwrap_or("/").to_string();
                let seen = {
                    let mut h = counter.lock().unwrap();
                    let n = h.entry(path.clone()).or_insert(0);
                    *n += 1;
                    *n - 1
                };
                let (status, body) = routes.get(&path).map(|r| r(seen)).unwrap_or((404, String::new()));
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
            }
        });
        MockRegistry { base_url, hits }
    }

    fn hits(&self, path: &str) -> usize {
        self.hits.lock().unwrap().get(path).copied().unwrap_or(0)
    }
}

fn payload(name: &str, deps: &str) -> String {
    format!(
        r#"{{"name":"{name}","latest_version":"1.0","releases":[{{"version":"0.9","dependencies":[]}},{{"version":"1.0","dependencies":[{deps}]}}]}}"#
    )
}

fn ok(body: String) -> Route {
    Box::new(move |_| (200, body.clone()))
}

fn client(base: &str, cache: &std::path::Path) -> RegistryClient {
    RegistryClient::new(
        ClientConfig::new(base).with_cache_dir(cache).with_politeness_delay(Duration::ZERO),
    )
}

fn seed(name: &str) -> CrawlSeed {
    CrawlSeed { ecosystem: Ecosystem::Cran, name: name.into(), package_id: None }
}

fn registry_routes() -> Vec<(&'static str, Route)> {
    vec![
        (
            "/cran/A",
            ok(payload(
                "A",
                r#"{"name":"R","kind":"depends"},{"name":"B","kind":"imports"},{"name":"C","kind":"suggests"},{"name":"D","optional":true},{"name":"A"}"#,
            )),
        ),
        ("/cran/B", ok(payload("B", r#"{"name":"Missing","kind":"depends"}"#))),
    ]
}

#[test]
fn crawl_follows_required_dependencies_and_caches() {
    let server = MockRegistry::start(registry_routes());
    let cache = tempfile::tempdir().unwrap();

    let first = client(&server.base_url, cache.path());
    let outcome = crawl(&first, &[seed("A")]);
    let names: Vec<&str> = outcome.records.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["A", "B"]);
    assert_eq!(outcome.records[0].dependencies, ["B"]);
    assert_eq!(outcome.unknown, [(Ecosystem::Cran, "Missing".to_string())]);
    assert!(outcome.failed.is_empty());
    assert_eq!(first.network_calls(), 3);
    assert!(cache.path().join("cran/A.json").exists());
    assert!(cache.path().join("cran/Missing.404").exists());

    let second = client(&server.base_url, cache.path());
    let again = crawl(&second, &[seed("A")]);
    assert_eq!(second.network_calls(), 0, "cached crawl must not touch the network");
    assert_eq!(again.records, outcome.records);
    assert_eq!(again.unknown, outcome.unknown);
    assert_eq!(server.hits("/cran/Missing"), 1);
}

#[test]
fn server_errors_are_retried_a_bounded_number_of_times() {
    let server = MockRegistry::start(vec![
        ("/cran/Flaky", Box::new(|seen| if seen == 0 { (503, String::new()) } else { (200, payload("Flaky", "")) })),
        ("/cran/Down", Box::new(|_| (500, String::new()))),
        ("/cran/Forbidden", Box::new(|_| (403, String::new()))),
    ]);
    let cache = tempfile::tempdir().unwrap();
    let c = client(&server.base_url, cache.path());

    assert_eq!(c.fetch(Ecosystem::Cran, "Flaky").unwrap().name, "Flaky");
    assert_eq!(server.hits("/cran/Flaky"), 2);

    match c.fetch(Ecosystem::Cran, "Down") {
        Err(FetchError::Network { attempts, .. }) => assert_eq!(attempts, 4),
        other => panic!("expected a network error, got {other:?}"),
    }
    assert_eq!(server.hits("/cran/Down"), 4);
    assert!(!cache.path().join("cran/Down.json").exists());
    assert!(!cache.path().join("cran/Down.404").exists());

    assert!(matches!(c.fetch(Ecosystem::Cran, "Forbidden"), Err(FetchError::Http { status: 403, .. })));
    assert_eq!(server.hits("/cran/Forbidden"), 1);
}

#[test]
fn pypi_names_are_folded_for_the_cache() {
    let server = MockRegistry::start(vec![("/pypi/Foo.Bar_baz", ok(payload("Foo.Bar_baz", "")))]);
    let cache = tempfile::tempdir().unwrap();
    let c = client(&server.base_url, cache.path());
    c.fetch(Ecosystem::Pypi, "Foo.Bar_baz").unwrap();
    assert!(cache.path().join("pypi/foo-bar-baz.json").exists());
    // A differently spelled name of the same project is a cache hit.
    c.fetch(Ecosystem::Pypi, "foo-bar.baz").unwrap();
    assert_eq!(c.network_calls(), 1);
}

#[test]
fn fetch_command_feeds_build() {
    let server = MockRegistry::start(registry_routes());
    let inputs = common::write_minimal_inputs();
    let out = inputs.dir.path().join("out");
    let cfg = RunConfig {
        mentions: Some(inputs.mentions.clone()),
        citations: Some(inputs.citations.clone()),
        api_url: Some(server.base_url.clone()),
        cache_dir: Some(inputs.dir.path().join("cache")),
        out: out.clone(),
        ..Default::default()
    };
    cli::execute(Command::Fetch, &cfg).unwrap();
    let registry = out.join("registry.jsonl");
    let snapshot = load_registry_snapshot(BufReader::new(std::fs::File::open(&registry).unwrap())).unwrap();
    assert_eq!(snapshot.value.index.len(), 2);
    assert_eq!(snapshot.value.missing, [(Ecosystem::Cran, "Missing".to_string())]);
    let report = std::fs::read_to_string(out.join("fetch_report.txt")).unwrap();
    assert!(report.contains("cran Missing"), "{report}");

    let build = RunConfig { registry: Some(registry), ..cfg };
    let summary = cli::execute(Command::Build, &build).unwrap();
    assert!(summary.contains("cran: 3"), "{summary}");
    assert!(summary.contains("missing metadata (1):\n  cran Missing"), "{summary}");
}
