//! Roster ingestion: a UTF-8 CSV file with the header
//! `student_key,display_name`.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct RosterEntry {
    pub student_key: String,
    #[serde(default)]
    pub display_name: Option<String>,
}

#[derive(Debug, Error)]
pub enum RosterError {
    #[error("cannot read roster {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("roster is not valid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("record {record}: student_key is empty")]
    EmptyKey { record: usize },
    #[error("duplicate student keys: {}", keys.join(", "))]
    DuplicateKeys { keys: Vec<String> },
}

/// Parses roster CSV from a reader. Keys must be nonempty and unique.
pub fn parse_roster(reader: impl Read) -> Result<Vec<RosterEntry>, RosterError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut entries = Vec::new();
    for (i, row) in csv_reader.deserialize::<RosterEntry>().enumerate() {
        let mut entry = row?;
        if entry.student_key.is_empty() {
            return Err(RosterError::EmptyKey { record: i + 1 });
        }
        if entry.display_name.as_deref() == Some("") {
            entry.display_name = None;
        }
        entries.push(entry);
    }

    let mut seen = std::collections::HashSet::new();
    let mut duplicates = Vec::new();
    for entry in &entries {
        if !seen.insert(entry.student_key.as_str())
            && !duplicates.contains(&entry.student_key)
        {
            duplicates.push(entry.student_key.clone());
        }
    }
    if !duplicates.is_empty() {
        return Err(RosterError::DuplicateKeys { keys: duplicates });
    }
    Ok(entries)
}

/// Reads and parses a roster file.
pub fn read_roster(path: impl AsRef<Path>) -> Result<Vec<RosterEntry>, RosterError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| RosterError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_roster(file)
}
