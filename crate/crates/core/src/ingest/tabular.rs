use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, WriterBuilder};

use super::{Ecosystem, IngestError, Parsed, Reject};

const MENTIONS_HEADER: &str = "paper_doi,ecosystem,package_id,package_name";
const CITATIONS_HEADER: &str = "paper_doi,citation_count";

/// One paper mentioning one package.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MentionRecord {
    pub paper_doi: String,
    pub ecosystem: Ecosystem,
    /// Stable identifier of the package within its ecosystem.
    pub package_id: String,
    pub package_name: String,
}

/// Citation counts keyed by DOI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationMap {
    entries: BTreeMap<String, u64>,
}

impl CitationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// `None` when the DOI has no citation data, as opposed to `Some(0)`.
    pub fn get(&self, doi: &str) -> Option<u64> {
        self.entries.get(doi).copied()
    }

    /// Records a count, keeping the larger value when the DOI is already present.
    pub fn insert(&mut self, doi: impl Into<String>, count: u64) {
        let slot = self.entries.entry(doi.into()).or_insert(count);
        *slot = (*slot).max(count);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl FromIterator<(String, u64)> for CitationMap {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        let mut map = CitationMap::new();
        for (doi, count) in iter {
            map.insert(doi, count);
        }
        map
    }
}

/// Column positions resolved from a header row.
fn locate_columns<const N: usize>(
    headers: &StringRecord,
    names: [&str; N],
    what: &'static str,
    expected: &'static str,
) -> Result<[usize; N], IngestError> {
    let mut out = [0; N];
    for (slot, name) in out.iter_mut().zip(names) {
        *slot = headers
            .iter()
            .position(|h| h.trim().trim_start_matches('\u{feff}') == name)
            .ok_or(IngestError::MissingHeader { what, expected })?;
    }
    Ok(out)
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader)
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Parses `mentions.csv`. Rows repeating an earlier
/// `(paper_doi, ecosystem, package_id)` triple are merged into the first.
pub fn parse_mentions<R: Read>(reader: R) -> Result<Parsed<Vec<MentionRecord>>, IngestError> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(IngestError::MissingHeader { what: "mentions", expected: MENTIONS_HEADER });
    }
    let [doi_col, eco_col, id_col, name_col] = locate_columns(
        &headers,
        ["paper_doi", "ecosystem", "package_id", "package_name"],
        "mentions",
        MENTIONS_HEADER,
    )?;

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    let mut rejects = Vec::new();
    let mut total_rows = 0;
    for row in rdr.records() {
        let row = row?;
        total_rows += 1;
        let line = line_of(&row);
        let field = |i: usize| row.get(i).map(str::trim);
        let (Some(doi), Some(eco), Some(id), Some(name)) =
            (field(doi_col), field(eco_col), field(id_col), field(name_col))
        else {
            rejects.push(Reject { line, reason: "missing fields".into() });
            continue;
        };
        let ecosystem = match eco.parse::<Ecosystem>() {
            Ok(e) => e,
            Err(_) => {
                rejects.push(Reject { line, reason: "unsupported ecosystem".into() });
                continue;
            }
        };
        if doi.is_empty() {
            rejects.push(Reject { line, reason: "empty paper_doi".into() });
            continue;
        }
        if id.is_empty() {
            rejects.push(Reject { line, reason: "empty package_id".into() });
            continue;
        }
        if seen.insert((doi.to_string(), ecosystem, id.to_string())) {
            records.push(MentionRecord {
                paper_doi: doi.to_string(),
                ecosystem,
                package_id: id.to_string(),
                package_name: if name.is_empty() { id.to_string() } else { name.to_string() },
            });
        }
    }
    Ok(Parsed { value: records, rejects, total_rows })
}

/// Parses `citations.csv`. Duplicate DOIs keep their maximum count.
pub fn parse_citations<R: Read>(reader: R) -> Result<Parsed<CitationMap>, IngestError> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers()?.clone();
    let [doi_col, count_col] = locate_columns(
        &headers,
        ["paper_doi", "citation_count"],
        "citations",
        CITATIONS_HEADER,
    )?;

    let mut map = CitationMap::new();
    let mut rejects = Vec::new();
    let mut total_rows = 0;
    for row in rdr.records() {
        let row = row?;
        total_rows += 1;
        let line = line_of(&row);
        let (Some(doi), Some(count)) = (row.get(doi_col), row.get(count_col)) else {
            rejects.push(Reject { line, reason: "missing fields".into() });
            continue;
        };
        let doi = doi.trim();
        if doi.is_empty() {
            rejects.push(Reject { line, reason: "empty paper_doi".into() });
            continue;
        }
        match count.trim().parse::<u64>() {
            Ok(c) => map.insert(doi, c),
            Err(_) => rejects.push(Reject {
                line,
                reason: format!("citation_count `{}` is not a non-negative integer", count.trim()),
            }),
        }
    }
    Ok(Parsed { value: map, rejects, total_rows })
}

pub fn write_mentions<W: Write>(writer: W, records: &[MentionRecord]) -> Result<(), IngestError> {
    let mut w = WriterBuilder::new().from_writer(writer);
    w.write_record(["paper_doi", "ecosystem", "package_id", "package_name"])?;
    for r in records {
        w.write_record([&r.paper_doi, r.ecosystem.as_str(), &r.package_id, &r.package_name])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_citations<W: Write>(writer: W, citations: &CitationMap) -> Result<(), IngestError> {
    let mut w = WriterBuilder::new().from_writer(writer);
    w.write_record(["paper_doi", "citation_count"])?;
    for (doi, count) in citations.iter() {
        w.write_record([doi, &count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
