//! Propositional syntax and semantics: the AST, evaluation, the truth-table
//! equivalence oracle, a text parser and a minimal-parentheses renderer.
//!
//! Operator precedence follows the usual convention (negation binds tightest,
//! then conjunction, disjunction, implication, biconditional). Internally most
//! comparisons run on the inverted *binding power* scale, where a larger value
//! binds tighter and atoms sit at infinity.

mod oracle;
mod parser;
mod render;

pub use oracle::{equivalent, equivalent_with_limit, OracleError, DEFAULT_VARIABLE_LIMIT};
pub use parser::{parse, ParseError};
pub use render::{render, Syntax};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Binding power assigned to variables and constants: they are atoms and are
/// never parenthesized.
pub const ATOM_BINDING_POWER: u8 = u8::MAX;

/// A logical operator, unary or binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

impl Operator {
    /// Conventional precedence level; a smaller value binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            Operator::Not => 1,
            Operator::And => 2,
            Operator::Or => 3,
            Operator::Implies => 4,
            Operator::Iff => 5,
        }
    }

    /// Inverted precedence; a larger value binds tighter.
    pub fn binding_power(self) -> u8 {
        6 - self.precedence()
    }
}

/// A binary connective. Negation is a separate AST node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BinOp {
    pub fn operator(self) -> Operator {
        match self {
            BinOp::And => Operator::And,
            BinOp::Or => Operator::Or,
            BinOp::Implies => Operator::Implies,
            BinOp::Iff => Operator::Iff,
        }
    }

    pub fn binding_power(self) -> u8 {
        self.operator().binding_power()
    }
}

/// A propositional formula.
///
/// Parenthesization is a rendering artifact; no node stores it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Proposition {
    /// Truth constant `T` or `F`.
    Const(bool),
    /// Propositional variable (lowercase identifier).
    Var(String),
    Not(Box<Proposition>),
    Binary(BinOp, Box<Proposition>, Box<Proposition>),
}

/// Truth values for a set of variables.
pub type Assignment = HashMap<String, bool>;

/// Evaluation failure: the assignment does not cover a variable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unbound variable `{0}`")]
pub struct UnboundVariable(pub String);

impl Proposition {
    pub fn var(name: impl Into<String>) -> Self {
        Proposition::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Proposition) -> Self {
        Proposition::Not(Box::new(p))
    }

    pub fn and(l: Proposition, r: Proposition) -> Self {
        Proposition::Binary(BinOp::And, Box::new(l), Box::new(r))
    }

    pub fn or(l: Proposition, r: Proposition) -> Self {
        Proposition::Binary(BinOp::Or, Box::new(l), Box::new(r))
    }

    pub fn implies(l: Proposition, r: Proposition) -> Self {
        Proposition::Binary(BinOp::Implies, Box::new(l), Box::new(r))
    }

    pub fn iff(l: Proposition, r: Proposition) -> Self {
        Proposition::Binary(BinOp::Iff, Box::new(l), Box::new(r))
    }

    /// Binding power of the top operator; atoms report [`ATOM_BINDING_POWER`].
    pub fn binding_power(&self) -> u8 {
        match self {
            Proposition::Const(_) | Proposition::Var(_) => ATOM_BINDING_POWER,
            Proposition::Not(_) => Operator::Not.binding_power(),
            Proposition::Binary(op, _, _) => op.binding_power(),
        }
    }

    /// Evaluates the formula under `assignment`.
    ///
    /// Implication is false exactly for the antecedent-true, consequent-false
    /// case; the biconditional is true iff both operands agree.
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, UnboundVariable> {
        match self {
            Proposition::Const(v) => Ok(*v),
            Proposition::Var(name) => assignment
                .get(name)
                .copied()
                .ok_or_else(|| UnboundVariable(name.clone())),
            Proposition::Not(child) => Ok(!child.eval(assignment)?),
            Proposition::Binary(op, l, r) => {
                let l = l.eval(assignment)?;
                let r = r.eval(assignment)?;
                Ok(match op {
                    BinOp::And => l && r,
                    BinOp::Or => l || r,
                    BinOp::Implies => !l || r,
                    BinOp::Iff => l == r,
                })
            }
        }
    }

    /// Variable names in first-occurrence order (left-to-right depth-first),
    /// duplicates collapsed.
    pub fn variables(&self) -> Vec<&str> {
        fn walk<'a>(p: &'a Proposition, out: &mut Vec<&'a str>) {
            match p {
                Proposition::Const(_) => {}
                Proposition::Var(name) => {
                    if !out.contains(&name.as_str()) {
                        out.push(name);
                    }
                }
                Proposition::Not(child) => walk(child, out),
                Proposition::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Number of leaf occurrences (variables and constants), shared subtrees
    /// counted once per occurrence.
    pub fn leaf_count(&self) -> usize {
        match self {
            Proposition::Const(_) | Proposition::Var(_) => 1,
            Proposition::Not(child) => child.leaf_count(),
            Proposition::Binary(_, l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Height of the tree; a lone leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Proposition::Const(_) | Proposition::Var(_) => 1,
            Proposition::Not(child) => 1 + child.depth(),
            Proposition::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Syntax::Unicode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Proposition {
        Proposition::var("p")
    }

    fn q() -> Proposition {
        Proposition::var("q")
    }

    fn assign(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
    }

    #[test]
    fn binding_power_inverts_precedence() {
        let ops = [
            Operator::Not,
            Operator::And,
            Operator::Or,
            Operator::Implies,
            Operator::Iff,
        ];
        for op in ops {
            assert!((1..=5).contains(&op.precedence()));
            assert_eq!(op.binding_power(), 6 - op.precedence());
        }
        // Strictly decreasing binding power as the precedence value grows.
        for w in ops.windows(2) {
            assert!(w[0].precedence() < w[1].precedence());
            assert!(w[0].binding_power() > w[1].binding_power());
        }
    }

    #[test]
    fn eval_basic_cases() {
        let and = Proposition::and(p(), q());
        assert_eq!(and.eval(&assign(&[("p", true), ("q", false)])), Ok(false));

        let imp = Proposition::implies(p(), q());
        assert_eq!(imp.eval(&assign(&[("p", false), ("q", false)])), Ok(true));

        assert_eq!(p().eval(&assign(&[("p", true)])), Ok(true));
    }

    #[test]
    fn eval_unbound_variable_is_named() {
        let err = Proposition::and(p(), q())
            .eval(&assign(&[("p", true)]))
            .unwrap_err();
        assert_eq!(err, UnboundVariable("q".to_string()));
    }

    #[test]
    fn variables_first_occurrence_order() {
        let e = Proposition::or(p(), Proposition::and(p(), q()));
        assert_eq!(e.variables(), vec!["p", "q"]);

        assert!(Proposition::Const(true).variables().is_empty());

        let e = Proposition::not(Proposition::implies(q(), p()));
        assert_eq!(e.variables(), vec!["q", "p"]);
    }

    #[test]
    fn leaf_count_counts_occurrences() {
        let e = Proposition::and(Proposition::or(p(), Proposition::Const(true)), p());
        assert_eq!(e.leaf_count(), 3);
        assert_eq!(p().leaf_count(), 1);
    }
}
