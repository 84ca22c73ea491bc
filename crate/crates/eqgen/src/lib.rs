//! Deterministic generation of propositional logical-equivalence exercises.
//!
//! Each student key is hashed to an MD5 digest whose hex digits drive every
//! choice in a coupled two-sided derivation: structural rules grow the same
//! syntax on both sides, law rules rewrite the sides apart along one of
//! nineteen equivalence laws, and an instructor-tunable difficulty
//! controller shapes the result. The two extracted expressions are verified
//! equivalent with a brute-force truth-table oracle before anything is
//! emitted, so identical inputs always reproduce identical, sound questions.
//!
//! The high-level entry points are [`question::generate_record`] for one
//! student and [`question::generate_batch`] for a roster; the layers under
//! them ([`logic`], [`seed`], [`laws`], [`derivation`], [`attribution`]) are
//! public for direct use.

pub mod attribution;
pub mod config;
pub mod derivation;
pub mod laws;
pub mod logic;
pub mod question;
pub mod roster;
pub mod seed;

pub use attribution::{assign_literals, extract_pair, RenderedPair, VARIABLE_POOL};
pub use config::{ConfigError, DifficultyConfig, RunConfig};
pub use derivation::{
    check_difficulty, generate, DerivationBuilder, InstanceId, PairedDerivation, Side, TraceEntry,
};
pub use laws::{law_table, select_rule, Category, LawFamily, LawRule};
pub use logic::{equivalent, parse, render, Proposition, Syntax};
pub use question::{
    generate_batch, generate_record, validate_records, BatchSummary, QuestionRecord,
    ValidationReport,
};
pub use roster::{parse_roster, read_roster, RosterEntry};
pub use seed::{md5_hex, HexStream};
