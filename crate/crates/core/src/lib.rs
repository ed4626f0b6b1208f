pub mod centrality;
pub mod cli;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod structure;
