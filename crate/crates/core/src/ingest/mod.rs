//! Input datasets: software mentions, paper citation counts and registry
//! dependency snapshots, plus an optional registry crawler.
//!
//! The three file formats are plain CSV (mentions, citations) and JSON lines
//! (registry snapshot). Every parser reports rejected rows instead of dropping
//! them, so `accepted + rejected == total` always holds.

mod snapshot;
mod tabular;

pub mod fetch;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use snapshot::{
    load_registry_snapshot, write_registry_snapshot, PackageIndex, PackageRecord, RegistrySnapshot,
};
pub use tabular::{
    parse_citations, parse_mentions, write_citations, write_mentions, CitationMap, MentionRecord,
};

/// A package registry namespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ecosystem {
    Bioconductor,
    Cran,
    Pypi,
}

impl Ecosystem {
    pub const ALL: [Ecosystem; 3] = [Ecosystem::Bioconductor, Ecosystem::Cran, Ecosystem::Pypi];

    pub fn as_str(self) -> &'static str {
        match self {
            Ecosystem::Bioconductor => "bioconductor",
            Ecosystem::Cran => "cran",
            Ecosystem::Pypi => "pypi",
        }
    }

    /// Canonical lookup form of a package name in this ecosystem.
    ///
    /// PyPI names compare case-insensitively with runs of `-`, `_` and `.`
    /// folded to a single `-`. CRAN and Bioconductor names are case-sensitive
    /// and returned unchanged.
    pub fn fold_name(self, name: &str) -> String {
        match self {
            Ecosystem::Pypi => {
                let mut out = String::with_capacity(name.len());
                let mut in_sep = false;
                for ch in name.trim().chars() {
                    if matches!(ch, '-' | '_' | '.') {
                        if !in_sep {
                            out.push('-');
                        }
                        in_sep = true;
                    } else {
                        out.extend(ch.to_lowercase());
                        in_sep = false;
                    }
                }
                out
            }
            Ecosystem::Cran | Ecosystem::Bioconductor => name.trim().to_string(),
        }
    }
}

impl fmt::Display for Ecosystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsupported ecosystem `{0}`")]
pub struct UnknownEcosystem(pub String);

impl FromStr for Ecosystem {
    type Err = UnknownEcosystem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "bioconductor" => Ok(Ecosystem::Bioconductor),
            "cran" => Ok(Ecosystem::Cran),
            "pypi" => Ok(Ecosystem::Pypi),
            other => Err(UnknownEcosystem(other.to_string())),
        }
    }
}

/// A data row that failed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    /// 1-based line number in the source, counting the header as line 1.
    pub line: u64,
    pub reason: String,
}

/// Accepted values from one input stream together with the rows that were
/// refused.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub rejects: Vec<Reject>,
    /// Number of data rows seen, header excluded.
    pub total_rows: usize,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{what}: missing or incomplete header, expected `{expected}`")]
    MissingHeader { what: &'static str, expected: &'static str },
    #[error("line {line}: {reason}")]
    InvalidRecord { line: u64, reason: String },
    #[error("snapshot inconsistent: {ecosystem} package `{name}` has conflicting records")]
    ConflictingRecord { ecosystem: Ecosystem, name: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pypi_names_fold_case_and_separators() {
        assert_eq!(Ecosystem::Pypi.fold_name("Scikit_Learn"), "scikit-learn");
        assert_eq!(Ecosystem::Pypi.fold_name("zope.interface"), "zope-interface");
        assert_eq!(Ecosystem::Pypi.fold_name("a__-b"), "a-b");
    }

    #[test]
    fn r_names_are_case_sensitive() {
        assert_eq!(Ecosystem::Cran.fold_name("DESeq2"), "DESeq2");
        assert_ne!(Ecosystem::Cran.fold_name("Matrix"), Ecosystem::Cran.fold_name("matrix"));
    }

    #[test]
    fn ecosystem_parse_rejects_conda() {
        assert_eq!("cran".parse::<Ecosystem>().unwrap(), Ecosystem::Cran);
        assert!("conda".parse::<Ecosystem>().is_err());
    }
}
