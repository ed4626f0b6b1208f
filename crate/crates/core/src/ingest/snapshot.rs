use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Ecosystem, IngestError, Parsed, Reject};

/// Direct dependencies of the latest release of one package.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageRecord {
    pub ecosystem: Ecosystem,
    pub package_id: String,
    pub name: String,
    pub latest_version: String,
    /// Names of required packages in the same ecosystem, in registry order.
    pub dependencies: Vec<String>,
}

impl PackageRecord {
    /// Drops empty and repeated dependency names (after folding), keeping
    /// first occurrences.
    pub(crate) fn normalize_dependencies(&mut self) -> usize {
        let before = self.dependencies.len();
        let mut seen = HashSet::new();
        let eco = self.ecosystem;
        self.dependencies
            .retain(|d| !d.trim().is_empty() && seen.insert(eco.fold_name(d)));
        for d in &mut self.dependencies {
            *d = d.trim().to_string();
        }
        before - self.dependencies.len()
    }
}

/// Package records addressable by folded name and by package id.
#[derive(Debug, Clone, Default)]
pub struct PackageIndex {
    records: Vec<PackageRecord>,
    by_name: HashMap<(Ecosystem, String), usize>,
    by_id: HashMap<(Ecosystem, String), usize>,
}

impl PackageIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record. Re-adding an identical record is a no-op; a different
    /// record under an existing name or id is a conflict.
    pub fn insert(&mut self, record: PackageRecord) -> Result<bool, IngestError> {
        let eco = record.ecosystem;
        let name_key = (eco, eco.fold_name(&record.name));
        let id_key = (eco, record.package_id.clone());
        let existing = self.by_name.get(&name_key).or_else(|| self.by_id.get(&id_key));
        if let Some(&i) = existing {
            if self.records[i] == record {
                return Ok(false);
            }
            return Err(IngestError::ConflictingRecord { ecosystem: eco, name: record.name });
        }
        let i = self.records.len();
        self.by_name.insert(name_key, i);
        self.by_id.insert(id_key, i);
        self.records.push(record);
        Ok(true)
    }

    pub fn get_by_name(&self, ecosystem: Ecosystem, name: &str) -> Option<&PackageRecord> {
        self.by_name
            .get(&(ecosystem, ecosystem.fold_name(name)))
            .map(|&i| &self.records[i])
    }

    pub fn get_by_id(&self, ecosystem: Ecosystem, package_id: &str) -> Option<&PackageRecord> {
        self.by_id.get(&(ecosystem, package_id.to_string())).map(|&i| &self.records[i])
    }

    /// Records in insertion order.
    pub fn records(&self) -> &[PackageRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Dependency names that have no record of their own, deduplicated by
    /// folded name and sorted.
    pub fn missing_dependencies(&self) -> Vec<(Ecosystem, String)> {
        let mut missing = BTreeMap::new();
        for r in &self.records {
            for dep in &r.dependencies {
                if self.get_by_name(r.ecosystem, dep).is_none() {
                    missing
                        .entry((r.ecosystem, r.ecosystem.fold_name(dep)))
                        .or_insert_with(|| dep.clone());
                }
            }
        }
        missing.into_iter().map(|((eco, _), name)| (eco, name)).collect()
    }
}

impl FromIterator<PackageRecord> for Result<PackageIndex, IngestError> {
    fn from_iter<I: IntoIterator<Item = PackageRecord>>(iter: I) -> Self {
        let mut index = PackageIndex::new();
        for mut r in iter {
            r.normalize_dependencies();
            index.insert(r)?;
        }
        Ok(index)
    }
}

#[derive(Debug, Clone)]
pub struct RegistrySnapshot {
    pub index: PackageIndex,
    /// Dependencies named by some record but absent from the snapshot.
    pub missing: Vec<(Ecosystem, String)>,
}

/// Loads a `registry.jsonl` snapshot, one [`PackageRecord`] per line.
///
/// Lines that are not valid records are rejected. Two different records for
/// the same package make the snapshot inconsistent and abort loading.
pub fn load_registry_snapshot<R: BufRead>(
    reader: R,
) -> Result<Parsed<RegistrySnapshot>, IngestError> {
    let mut index = PackageIndex::new();
    let mut rejects = Vec::new();
    let mut total_rows = 0;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        total_rows += 1;
        let line_no = n as u64 + 1;
        let mut record: PackageRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                rejects.push(Reject { line: line_no, reason: e.to_string() });
                continue;
            }
        };
        if record.name.trim().is_empty() || record.package_id.trim().is_empty() {
            rejects.push(Reject { line: line_no, reason: "empty name or package_id".into() });
            continue;
        }
        let dropped = record.normalize_dependencies();
        if dropped > 0 {
            log::warn!(
                "line {line_no}: dropped {dropped} empty or repeated dependencies of {} `{}`",
                record.ecosystem,
                record.name
            );
        }
        index.insert(record)?;
    }
    let missing = index.missing_dependencies();
    Ok(Parsed { value: RegistrySnapshot { index, missing }, rejects, total_rows })
}

pub fn write_registry_snapshot<'a, W, I>(mut writer: W, records: I) -> Result<(), IngestError>
where
    W: Write,
    I: IntoIterator<Item = &'a PackageRecord>,
{
    for r in records {
        serde_json::to_writer(&mut writer, r).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}
