//! Brute-force truth-table equivalence check.

use thiserror::Error;

use super::{Assignment, Proposition};

/// Default cap on the number of distinct variables the oracle will enumerate.
pub const DEFAULT_VARIABLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("expression pair uses {count} variables, exceeding the oracle limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
}

/// True iff `a` and `b` have the same truth value under every assignment of
/// the variables occurring in either, checked by enumerating all 2^n rows.
pub fn equivalent(a: &Proposition, b: &Proposition) -> Result<bool, OracleError> {
    equivalent_with_limit(a, b, DEFAULT_VARIABLE_LIMIT)
}

/// [`equivalent`] with an explicit variable cap (at most 63).
pub fn equivalent_with_limit(
    a: &Proposition,
    b: &Proposition,
    limit: usize,
) -> Result<bool, OracleError> {
    let mut vars: Vec<&str> = a.variables();
    for v in b.variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    if vars.len() > limit.min(63) {
        return Err(OracleError::TooManyVariables {
            count: vars.len(),
            limit: limit.min(63),
        });
    }

    let mut assignment: Assignment = vars.iter().map(|v| (v.to_string(), false)).collect();
    for row in 0..(1u64 << vars.len()) {
        for (i, v) in vars.iter().enumerate() {
            *assignment.get_mut(*v).expect("assignment covers vars") = row >> i & 1 == 1;
        }
        // The assignment is total over both variable sets, so eval cannot fail.
        let va = a.eval(&assignment).expect("total assignment");
        let vb = b.eval(&assignment).expect("total assignment");
        if va != vb {
            return Ok(false);
        }
    }
    Ok(true)
}
