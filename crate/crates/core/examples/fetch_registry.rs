//! Crawls a registry API for a package and its transitive required
//! dependencies, caching every response on disk.
//!
//!     cargo run --example fetch_registry -- <api-url> <ecosystem> <name>...
//!
//! Without arguments a small in-process registry is started so the example
//! runs offline. A second crawl over the same cache makes no requests.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use depnet::ingest::fetch::{crawl, ClientConfig, CrawlSeed, RegistryClient};
use depnet::ingest::Ecosystem;

fn demo_registry() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind local port");
    let base = format!("http://{}", listener.local_addr().unwrap());
    thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            let mut stream = stream;
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            let _ = reader.read_line(&mut request);
            let mut line = String::new();
            while reader.read_line(&mut line).map(|n| n > 2).unwrap_or(false) {
                line.clear();
            }
            let body = match request.split_whitespace().nth(1) {
                Some("/pypi/scanpy") => r#"{"name":"scanpy","latest_version":"1.10","releases":[{"version":"1.10","dependencies":[{"name":"anndata"},{"name":"numpy"},{"name":"pytest","kind":"test"}]}]}"#,
                Some("/pypi/anndata") => r#"{"name":"anndata","latest_version":"0.10","releases":[{"version":"0.10","dependencies":[{"name":"numpy"},{"name":"h5py"}]}]}"#,
                Some("/pypi/numpy") => r#"{"name":"numpy","latest_version":"2.0","releases":[{"version":"2.0","dependencies":[]}]}"#,
                _ => "",
            };
            let status = if body.is_empty() { "404 Not Found" } else { "200 OK" };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    base
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (base, seeds) = if args.len() >= 3 {
        let eco: Ecosystem = args[1].parse()?;
        let seeds = args[2..].iter().map(|n| CrawlSeed { ecosystem: eco, name: n.clone(), package_id: None }).collect();
        (args[0].clone(), seeds)
    } else {
        let seed = CrawlSeed { ecosystem: Ecosystem::Pypi, name: "scanpy".into(), package_id: None };
        (demo_registry(), vec![seed])
    };

    let cache = std::env::temp_dir().join(format!("depnet-example-cache-{}", std::process::id()));
    for pass in 1..=2 {
        let client = RegistryClient::new(
            ClientConfig::new(base.as_str()).with_cache_dir(&cache).with_politeness_delay(Duration::from_millis(50)),
        );
        let outcome = crawl(&client, &seeds);
        println!("pass {pass}: {} network requests", client.network_calls());
        for r in &outcome.records {
            println!("  {} {} {} -> {:?}", r.ecosystem, r.name, r.latest_version, r.dependencies);
        }
        for (eco, name) in &outcome.unknown {
            println!("  unknown: {eco} {name}");
        }
        for (eco, name, why) in &outcome.failed {
            println!("  failed: {eco} {name}: {why}");
        }
    }
    println!("cache: {}", cache.display());
    Ok(())
}
