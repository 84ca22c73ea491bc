//! Question assembly: runs seed → derivation → attribution for one student
//! key, gates every record behind the truth-table oracle and the difficulty
//! re-check, and provides the batch and re-validation operations built on
//! line-delimited JSON records.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attribution::{assign_literals, extract_pair};
use crate::config::{ConfigError, RunConfig};
use crate::derivation::{check_difficulty, generate, RuleFamily, Side, TraceEntry};
use crate::laws::{law_table, CategoryCounts};
use crate::logic::{equivalent, parse, render, OracleError, Syntax};
use crate::roster::RosterEntry;
use crate::seed::{md5_hex, HexStream, SeedError};

/// Statistics of one question, recomputable from its trace and expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordStats {
    pub left_leaves: usize,
    pub right_leaves: usize,
    pub laws_by_category: CategoryCounts,
    pub total_laws: usize,
}

/// One emitted question: the student key, the digest the question derives
/// from, the pair in every output syntax, the solution trace, and stats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub student_key: String,
    pub digest_hex: String,
    pub lhs_text: String,
    pub rhs_text: String,
    pub lhs_ascii: String,
    pub rhs_ascii: String,
    pub latex: String,
    /// The model solution; absent when solutions are stripped for
    /// student-facing sheets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
    pub stats: RecordStats,
}

impl QuestionRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid seed: {0}")]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal defect for digest {digest}: {reason}; trace: {trace}")]
    Gate {
        digest: String,
        reason: String,
        trace: String,
    },
}

fn seed_input(student_key: &str, salt: Option<&str>) -> Vec<u8> {
    let mut input = Vec::new();
    if let Some(salt) = salt {
        input.extend_from_slice(salt.as_bytes());
    }
    input.extend_from_slice(student_key.as_bytes());
    input
}

/// Generates the question record for one student key.
///
/// The record is emitted only if the rendered pair passes the truth-table
/// oracle and the derivation passes the difficulty re-check; a failure of
/// either is reported as an internal defect carrying the digest and trace,
/// never silently emitted.
pub fn generate_record(
    student_key: &str,
    config: &RunConfig,
) -> Result<QuestionRecord, GenerateError> {
    config.difficulty.validate()?;
    let digest = md5_hex(&seed_input(student_key, config.salt.as_deref()));
    let mut stream = HexStream::new(&digest, config.difficulty.offset)?;

    let deriv = generate(&mut stream, &config.difficulty);
    let assignment = assign_literals(&deriv, &mut stream, config.difficulty.pool_size);

    let gate = |reason: String| GenerateError::Gate {
        digest: digest.clone(),
        reason,
        trace: serde_json::to_string(deriv.trace()).expect("trace serializes"),
    };
    let pair = extract_pair(&deriv, &assignment).map_err(|e| gate(e.to_string()))?;
    match equivalent(&pair.lhs, &pair.rhs) {
        Ok(true) => {}
        Ok(false) => return Err(gate("sides are not truth-table equivalent".into())),
        Err(e) => return Err(GenerateError::Oracle(e)),
    }
    if let Err(violation) = check_difficulty(&deriv, &config.difficulty) {
        return Err(gate(violation.to_string()));
    }

    let trace = deriv.trace().to_vec();
    let laws_by_category = trace_law_counts(&trace);
    let stats = RecordStats {
        left_leaves: deriv.leaf_count(Side::Left),
        right_leaves: deriv.leaf_count(Side::Right),
        total_laws: laws_by_category.total(),
        laws_by_category,
    };
    let lhs_ascii = render(&pair.lhs, Syntax::Ascii);
    let rhs_ascii = render(&pair.rhs, Syntax::Ascii);
    let latex = format!(
        "{} \\equiv {}",
        render(&pair.lhs, Syntax::Latex),
        render(&pair.rhs, Syntax::Latex)
    );
    Ok(QuestionRecord {
        student_key: student_key.to_string(),
        digest_hex: digest,
        lhs_text: pair.lhs_text,
        rhs_text: pair.rhs_text,
        lhs_ascii,
        rhs_ascii,
        latex,
        trace: Some(trace),
        stats,
    })
}

fn trace_law_counts(trace: &[TraceEntry]) -> CategoryCounts {
    let mut counts = CategoryCounts::default();
    for entry in trace {
        if entry.family == RuleFamily::Law {
            let category = entry
                .category
                .unwrap_or_else(|| law_table()[entry.rule].category());
            *counts.get_mut(category) += 1;
        }
    }
    counts
}

/// Summary of a batch run.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub records: usize,
    pub distinct_pairs: usize,
    pub laws_by_category: CategoryCounts,
}

impl BatchSummary {
    pub fn distinct_ratio(&self) -> f64 {
        if self.records == 0 {
            return 1.0;
        }
        self.distinct_pairs as f64 / self.records as f64
    }
}

/// Generates one record per roster entry, in roster order.
///
/// With `include_solutions` off the traces are stripped for student-facing
/// sheets.
pub fn generate_batch(
    roster: &[RosterEntry],
    config: &RunConfig,
    include_solutions: bool,
) -> Result<(Vec<QuestionRecord>, BatchSummary), GenerateError> {
    let mut records = Vec::with_capacity(roster.len());
    let mut pairs = HashSet::new();
    let mut laws = CategoryCounts::default();
    for entry in roster {
        let mut record = generate_record(&entry.student_key, config)?;
        pairs.insert((record.lhs_text.clone(), record.rhs_text.clone()));
        laws.easy += record.stats.laws_by_category.easy;
        laws.median += record.stats.laws_by_category.median;
        laws.hard += record.stats.laws_by_category.hard;
        if !include_solutions {
            record.trace = None;
        }
        records.push(record);
    }
    let summary = BatchSummary {
        records: records.len(),
        distinct_pairs: pairs.len(),
        laws_by_category: laws,
    };
    Ok((records, summary))
}

/// Writes records as line-delimited JSON.
pub fn write_records(
    mut writer: impl Write,
    records: &[QuestionRecord],
) -> std::io::Result<()> {
    for record in records {
        writer.write_all(record.to_json().as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Re-validation outcome for one line of a records file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordOutcome {
    pub line: usize,
    /// Absent when the line did not even parse as a record.
    pub student_key: Option<String>,
    /// Empty when the record passed every check.
    pub issues: Vec<String>,
}

impl RecordOutcome {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Outcome of re-validating a records file, one entry per record.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub outcomes: Vec<RecordOutcome>,
}

impl ValidationReport {
    pub fn checked(&self) -> usize {
        self.outcomes.len()
    }

    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.checked() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

/// Reparses each record's ASCII expressions, re-runs the truth-table oracle,
/// and recomputes the statistics from the trace and the parsed expressions.
/// Malformed records are reported with their line number and validation
/// continues.
pub fn validate_records(reader: impl BufRead) -> std::io::Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let outcome = match serde_json::from_str::<QuestionRecord>(&text) {
            Ok(record) => {
                let mut issues = Vec::new();
                check_record(&record, &mut issues);
                RecordOutcome {
                    line: line_no,
                    student_key: Some(record.student_key),
                    issues,
                }
            }
            Err(e) => RecordOutcome {
                line: line_no,
                student_key: None,
                issues: vec![format!("malformed record: {e}")],
            },
        };
        report.outcomes.push(outcome);
    }
    Ok(report)
}

fn check_record(record: &QuestionRecord, issues: &mut Vec<String>) {
    let mut push = |message: String| issues.push(message);

    let lhs = match parse(&record.lhs_ascii) {
        Ok(p) => Some(p),
        Err(e) => {
            push(format!("lhs_ascii does not parse: {e}"));
            None
        }
    };
    let rhs = match parse(&record.rhs_ascii) {
        Ok(p) => Some(p),
        Err(e) => {
            push(format!("rhs_ascii does not parse: {e}"));
            None
        }
    };
    let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
        return;
    };

    match equivalent(&lhs, &rhs) {
        Ok(true) => {}
        Ok(false) => push("sides are not truth-table equivalent".into()),
        Err(e) => push(format!("oracle error: {e}")),
    }

    if lhs.leaf_count() != record.stats.left_leaves {
        push(format!(
            "stats mismatch: left_leaves is {}, expression has {}",
            record.stats.left_leaves,
            lhs.leaf_count()
        ));
    }
    if rhs.leaf_count() != record.stats.right_leaves {
        push(format!(
            "stats mismatch: right_leaves is {}, expression has {}",
            record.stats.right_leaves,
            rhs.leaf_count()
        ));
    }
    if let Some(trace) = &record.trace {
        let counts = trace_law_counts(trace);
        if counts != record.stats.laws_by_category {
            push("stats mismatch: laws_by_category disagrees with the trace".into());
        }
        if counts.total() != record.stats.total_laws {
            push(format!(
                "stats mismatch: total_laws is {}, trace has {}",
                record.stats.total_laws,
                counts.total()
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn roster(n: usize) -> Vec<RosterEntry> {
        (0..n)
            .map(|i| RosterEntry {
                student_key: format!("2023{i:04}"),
                display_name: None,
            })
            .collect()
    }

    #[test]
    fn records_are_deterministic() {
        let config = RunConfig::default();
        let a = generate_record("20230042", &config).unwrap();
        let b = generate_record("20230042", &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn record_sides_reparse_and_agree_across_syntaxes() {
        let config = RunConfig::default();
        let record = generate_record("20230042", &config).unwrap();
        let lhs_u = parse(&record.lhs_text).unwrap();
        let lhs_a = parse(&record.lhs_ascii).unwrap();
        assert_eq!(lhs_u, lhs_a);
        let rhs_u = parse(&record.rhs_text).unwrap();
        let rhs_a = parse(&record.rhs_ascii).unwrap();
        assert_eq!(rhs_u, rhs_a);
        assert_eq!(equivalent(&lhs_u, &rhs_u), Ok(true));
    }

    #[test]
    fn latex_line_reparses_to_the_same_pair() {
        let config = RunConfig::default();
        for i in 0..50 {
            let record = generate_record(&format!("s{i}"), &config).unwrap();
            let (lhs_tex, rhs_tex) = record
                .latex
                .split_once(" \\equiv ")
                .expect("latex line contains the equivalence");
            let detex = |s: &str| {
                parse(
                    &s.replace("\\neg ", "!")
                        .replace("\\wedge", "&")
                        .replace("\\vee", "|")
                        .replace("\\to", "->")
                        .replace("\\leftrightarrow", "<->"),
                )
                .unwrap()
            };
            assert_eq!(detex(lhs_tex), parse(&record.lhs_ascii).unwrap());
            assert_eq!(detex(rhs_tex), parse(&record.rhs_ascii).unwrap());
        }
    }

    #[test]
    fn salt_changes_the_digest_and_the_question() {
        let unsalted = RunConfig::default();
        let salted = RunConfig {
            salt: Some("section-7".into()),
            ..RunConfig::default()
        };
        let a = generate_record("20230042", &unsalted).unwrap();
        let b = generate_record("20230042", &salted).unwrap();
        assert_ne!(a.digest_hex, b.digest_hex);
        // The salted digest equals hashing the concatenation directly.
        assert_eq!(b.digest_hex, md5_hex(b"section-720230042"));
    }

    #[test]
    fn batch_preserves_roster_order_and_validates() {
        let config = RunConfig::default();
        let entries = roster(30);
        let (records, summary) = generate_batch(&entries, &config, true).unwrap();
        assert_eq!(records.len(), 30);
        for (entry, record) in entries.iter().zip(&records) {
            assert_eq!(entry.student_key, record.student_key);
        }
        assert_eq!(summary.records, 30);
        assert!(summary.distinct_ratio() > 0.9);

        let mut buffer = Vec::new();
        write_records(&mut buffer, &records).unwrap();
        let report = validate_records(Cursor::new(&buffer)).unwrap();
        assert_eq!(report.checked(), 30);
        assert!(report.all_passed(), "outcomes: {:?}", report.outcomes);
    }

    #[test]
    fn stripped_solutions_omit_the_trace() {
        let config = RunConfig::default();
        let (records, _) = generate_batch(&roster(2), &config, false).unwrap();
        assert!(records.iter().all(|r| r.trace.is_none()));
        let mut buffer = Vec::new();
        write_records(&mut buffer, &records).unwrap();
        assert!(!String::from_utf8(buffer.clone()).unwrap().contains("trace"));
        // Equivalence is still verifiable without solutions.
        let report = validate_records(Cursor::new(&buffer)).unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn tampered_records_are_flagged() {
        let config = RunConfig::default();
        let record = generate_record("20230042", &config).unwrap();

        // Break equivalence.
        let mut bad = record.clone();
        bad.rhs_ascii = "!p".into();
        bad.stats.right_leaves = 1;
        let mut buffer = Vec::new();
        write_records(&mut buffer, &[record.clone(), bad]).unwrap();
        let report = validate_records(Cursor::new(&buffer)).unwrap();
        assert_eq!(report.checked(), 2);
        assert_eq!(report.passed(), 1);
        let failure = &report.outcomes[1];
        assert_eq!(failure.line, 2);
        assert!(failure.issues[0].contains("not truth-table equivalent"));

        // Tamper with the stats.
        let mut bad_stats = record.clone();
        bad_stats.stats.total_laws += 1;
        let mut buffer = Vec::new();
        write_records(&mut buffer, &[bad_stats]).unwrap();
        let report = validate_records(Cursor::new(&buffer)).unwrap();
        assert!(!report.all_passed());
        assert!(report.outcomes[0].issues[0].contains("total_laws"));

        // Malformed line is reported and validation continues.
        let mut buffer = Vec::new();
        buffer.extend_from_slice(b"{ not json\n");
        write_records(&mut buffer, &[record]).unwrap();
        let report = validate_records(Cursor::new(&buffer)).unwrap();
        assert_eq!(report.checked(), 2);
        assert_eq!(report.passed(), 1);
        assert_eq!(report.outcomes[0].line, 1);
        assert!(report.outcomes[0].issues[0].contains("malformed"));
    }

    #[test]
    fn unsalted_digest_hashes_the_key_verbatim() {
        let config = RunConfig::default();
        let record = generate_record("zz", &config).unwrap();
        assert_eq!(record.digest_hex, md5_hex(b"zz"));
    }
}
