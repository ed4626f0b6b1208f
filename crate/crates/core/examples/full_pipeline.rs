//! The whole staged pipeline through the command layer: raw CSV/JSONL inputs
//! to GEXF, centrality CSVs, summary tables, quadrant listings and the cycle
//! report, all in a temporary output directory.
//!
//!     cargo run --example full_pipeline [-- <out-dir>]

use std::fs;
use std::path::PathBuf;

use depnet::cli::{execute, Command, RunConfig};

const MENTIONS: &str = "paper_doi,ecosystem,package_id,package_name
10.1/a,cran,ggplot2,ggplot2
10.1/a,bioconductor,DESeq2,DESeq2
10.1/b,cran,ggplot2,ggplot2
10.1/b,pypi,scanpy,scanpy
10.1/c,pypi,scanpy,scanpy
10.1/c,pypi,numpy,numpy
10.1/d,cran,vegan,vegan
10.1/e,bioconductor,limma,limma
10.1/e,cran,Unlisted,Unlisted
";

const CITATIONS: &str = "paper_doi,citation_count
10.1/a,120
10.1/b,8
10.1/c,33
10.1/d,2
";

const REGISTRY: &str = r#"{"ecosystem":"cran","package_id":"ggplot2","name":"ggplot2","latest_version":"3.5.1","dependencies":["rlang","vctrs","scales"]}
{"ecosystem":"cran","package_id":"rlang","name":"rlang","latest_version":"1.1.4","dependencies":[]}
{"ecosystem":"cran","package_id":"vctrs","name":"vctrs","latest_version":"0.6.5","dependencies":["rlang"]}
{"ecosystem":"cran","package_id":"scales","name":"scales","latest_version":"1.3.0","dependencies":["rlang","farver"]}
{"ecosystem":"cran","package_id":"farver","name":"farver","latest_version":"2.1.2","dependencies":[]}
{"ecosystem":"cran","package_id":"vegan","name":"vegan","latest_version":"2.6","dependencies":["permute"]}
{"ecosystem":"cran","package_id":"permute","name":"permute","latest_version":"0.9","dependencies":[]}
{"ecosystem":"bioconductor","package_id":"DESeq2","name":"DESeq2","latest_version":"1.44","dependencies":["S4Vectors","BiocGenerics"]}
{"ecosystem":"bioconductor","package_id":"S4Vectors","name":"S4Vectors","latest_version":"0.42","dependencies":["BiocGenerics"]}
{"ecosystem":"bioconductor","package_id":"BiocGenerics","name":"BiocGenerics","latest_version":"0.50","dependencies":[]}
{"ecosystem":"bioconductor","package_id":"limma","name":"limma","latest_version":"3.60","dependencies":[]}
{"ecosystem":"pypi","package_id":"scanpy","name":"scanpy","latest_version":"1.10","dependencies":["anndata","numpy"]}
{"ecosystem":"pypi","package_id":"anndata","name":"anndata","latest_version":"0.10","dependencies":["numpy","h5py"]}
{"ecosystem":"pypi","package_id":"numpy","name":"numpy","latest_version":"2.0","dependencies":[]}
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("depnet-pipeline-{}", std::process::id())));
    let inputs = out.join("inputs");
    fs::create_dir_all(&inputs)?;
    fs::write(inputs.join("mentions.csv"), MENTIONS)?;
    fs::write(inputs.join("citations.csv"), CITATIONS)?;
    fs::write(inputs.join("registry.jsonl"), REGISTRY)?;

    let cfg = RunConfig {
        mentions: Some(inputs.join("mentions.csv")),
        citations: Some(inputs.join("citations.csv")),
        registry: Some(inputs.join("registry.jsonl")),
        out: out.clone(),
        top_k: 3,
        include: vec!["numpy".into()],
        ..Default::default()
    };
    for command in [Command::Build, Command::Analyze, Command::Stats, Command::Quadrants, Command::Cycles] {
        println!("== {command:?}");
        print!("{}", execute(command, &cfg)?);
    }
    println!("== quadrants_weighted.csv");
    print!("{}", fs::read_to_string(out.join("quadrants_weighted.csv"))?);
    println!("outputs in {}", out.display());
    Ok(())
}
