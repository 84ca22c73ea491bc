//! The production-rule inventory: five structural rules that grow identical
//! syntax on both sides of the pair, and nineteen law rules that rewrite the
//! left side into one pattern and the right side into an equivalent one.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::logic::{render, BinOp, Proposition, Syntax};

/// Difficulty ranking of a law family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Easy,
    Median,
    Hard,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Easy => "easy",
            Category::Median => "median",
            Category::Hard => "hard",
        })
    }
}

/// Per-category counters, used both for instructor quotas and for statistics.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub easy: usize,
    pub median: usize,
    pub hard: usize,
}

impl CategoryCounts {
    pub fn new(easy: usize, median: usize, hard: usize) -> Self {
        CategoryCounts { easy, median, hard }
    }

    pub fn get(&self, category: Category) -> usize {
        match category {
            Category::Easy => self.easy,
            Category::Median => self.median,
            Category::Hard => self.hard,
        }
    }

    pub fn get_mut(&mut self, category: Category) -> &mut usize {
        match category {
            Category::Easy => &mut self.easy,
            Category::Median => &mut self.median,
            Category::Hard => &mut self.hard,
        }
    }

    pub fn total(&self) -> usize {
        self.easy + self.median + self.hard
    }
}

/// The structural productions, in listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructuralKind {
    Literal,
    And,
    Or,
    Implies,
    Not,
}

/// All structural rules; the index in this array is the rule's order.
pub const STRUCTURAL_RULES: [StructuralKind; 5] = [
    StructuralKind::Literal,
    StructuralKind::And,
    StructuralKind::Or,
    StructuralKind::Implies,
    StructuralKind::Not,
];

impl StructuralKind {
    pub fn order(self) -> usize {
        STRUCTURAL_RULES
            .iter()
            .position(|k| *k == self)
            .expect("kind listed")
    }

    pub fn name(self) -> &'static str {
        match self {
            StructuralKind::Literal => "literal",
            StructuralKind::And => "and",
            StructuralKind::Or => "or",
            StructuralKind::Implies => "implies",
            StructuralKind::Not => "not",
        }
    }
}

/// Law families, named as in the usual equivalence-law table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawFamily {
    Identity,
    Domination,
    Commutative,
    Idempotent,
    Negation,
    Absorption,
    Associative,
    DeMorgan,
    DoubleNegation,
    Distributive,
}

impl LawFamily {
    pub fn name(self) -> &'static str {
        match self {
            LawFamily::Identity => "Identity",
            LawFamily::Domination => "Domination",
            LawFamily::Commutative => "Commutative",
            LawFamily::Idempotent => "Idempotent",
            LawFamily::Negation => "Negation",
            LawFamily::Absorption => "Absorption",
            LawFamily::Associative => "Associative",
            LawFamily::DeMorgan => "De Morgan",
            LawFamily::DoubleNegation => "Double Negation",
            LawFamily::Distributive => "Distributive",
        }
    }

    pub fn category(self) -> Category {
        match self {
            LawFamily::Identity | LawFamily::DoubleNegation | LawFamily::Domination => {
                Category::Easy
            }
            LawFamily::DeMorgan
            | LawFamily::Distributive
            | LawFamily::Idempotent
            | LawFamily::Negation => Category::Median,
            LawFamily::Absorption | LawFamily::Commutative | LawFamily::Associative => {
                Category::Hard
            }
        }
    }

    /// Families allowed to directly follow a Commutative or Associative
    /// application.
    pub fn is_swap(self) -> bool {
        matches!(self, LawFamily::Commutative | LawFamily::Associative)
    }

    pub fn is_swap_followup(self) -> bool {
        matches!(
            self,
            LawFamily::Absorption
                | LawFamily::Idempotent
                | LawFamily::DoubleNegation
                | LawFamily::Identity
        )
    }
}

/// Expansion slots shared between the two sides of a law rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    J,
    K,
    L,
}

/// All slots, in creation order.
pub const SLOTS: [Slot; 3] = [Slot::J, Slot::K, Slot::L];

/// A proposition-shaped skeleton over slots. Law rules only ever use
/// negation, conjunction and disjunction internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Slot(Slot),
    Const(bool),
    Not(Box<Pattern>),
    Binary(BinOp, Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn slot(s: Slot) -> Self {
        Pattern::Slot(s)
    }

    fn not(p: Pattern) -> Self {
        Pattern::Not(Box::new(p))
    }

    fn and(l: Pattern, r: Pattern) -> Self {
        Pattern::Binary(BinOp::And, Box::new(l), Box::new(r))
    }

    fn or(l: Pattern, r: Pattern) -> Self {
        Pattern::Binary(BinOp::Or, Box::new(l), Box::new(r))
    }

    /// Slots occurring in the pattern, deduplicated, in `J, K, L` order.
    pub fn slots(&self) -> Vec<Slot> {
        fn walk(p: &Pattern, used: &mut [bool; 3]) {
            match p {
                Pattern::Slot(s) => used[*s as usize] = true,
                Pattern::Const(_) => {}
                Pattern::Not(c) => walk(c, used),
                Pattern::Binary(_, l, r) => {
                    walk(l, used);
                    walk(r, used);
                }
            }
        }
        let mut used = [false; 3];
        walk(self, &mut used);
        SLOTS
            .iter()
            .copied()
            .filter(|s| used[*s as usize])
            .collect()
    }

    /// Replaces each slot by `f(slot)`.
    pub fn instantiate(&self, f: &impl Fn(Slot) -> Proposition) -> Proposition {
        match self {
            Pattern::Slot(s) => f(*s),
            Pattern::Const(v) => Proposition::Const(*v),
            Pattern::Not(c) => Proposition::not(c.instantiate(f)),
            Pattern::Binary(op, l, r) => Proposition::Binary(
                *op,
                Box::new(l.instantiate(f)),
                Box::new(r.instantiate(f)),
            ),
        }
    }
}

/// One directed law rule: rewrite the left side into `gamma1` and the right
/// side into `gamma2` over the same slot instances.
#[derive(Debug, Clone, PartialEq)]
pub struct LawRule {
    /// Position in the listing; defines the default selection order.
    pub id: usize,
    pub family: LawFamily,
    pub gamma1: Pattern,
    pub gamma2: Pattern,
}

impl LawRule {
    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    pub fn category(&self) -> Category {
        self.family.category()
    }

    /// Slots used by the rule (always the union of both sides, which equals
    /// the left side's slots).
    pub fn slots(&self) -> Vec<Slot> {
        self.gamma1.slots()
    }

    /// Human-readable schema with slots shown as `p`, `q`, `r`.
    pub fn schema(&self, syntax: Syntax) -> String {
        let show = |s: Slot| {
            Proposition::var(match s {
                Slot::J => "p",
                Slot::K => "q",
                Slot::L => "r",
            })
        };
        let lhs = render(&self.gamma1.instantiate(&show), syntax);
        let rhs = render(&self.gamma2.instantiate(&show), syntax);
        match syntax {
            Syntax::Unicode => format!("{lhs} ≡ {rhs}"),
            Syntax::Ascii => format!("{lhs} == {rhs}"),
            Syntax::Latex => format!("{lhs} \\equiv {rhs}"),
        }
    }
}

static LAW_TABLE: LazyLock<Vec<LawRule>> = LazyLock::new(build_law_table);

/// The nineteen law rules in listing order.
pub fn law_table() -> &'static [LawRule] {
    &LAW_TABLE
}

fn build_law_table() -> Vec<LawRule> {
    use LawFamily::*;
    use Slot::{J, K, L};

    let j = || Pattern::slot(J);
    let k = || Pattern::slot(K);
    let l = || Pattern::slot(L);
    let t = || Pattern::Const(true);
    let f = || Pattern::Const(false);

    let defs: Vec<(LawFamily, Pattern, Pattern)> = vec![
        (Commutative, Pattern::and(j(), k()), Pattern::and(k(), j())),
        (Identity, Pattern::and(j(), t()), j()),
        (Identity, Pattern::or(j(), f()), j()),
        (Domination, Pattern::and(j(), f()), f()),
        (Domination, Pattern::or(j(), t()), t()),
        (Negation, Pattern::and(j(), Pattern::not(j())), f()),
        (Negation, Pattern::or(j(), Pattern::not(j())), t()),
        (Commutative, Pattern::or(j(), k()), Pattern::or(k(), j())),
        (Idempotent, Pattern::and(j(), j()), j()),
        (Idempotent, Pattern::or(j(), j()), j()),
        (Absorption, Pattern::or(j(), Pattern::and(j(), k())), j()),
        (Absorption, Pattern::and(j(), Pattern::or(j(), k())), j()),
        (
            Associative,
            Pattern::and(Pattern::and(j(), k()), l()),
            Pattern::and(Pattern::and(k(), j()), l()),
        ),
        (
            Associative,
            Pattern::or(Pattern::or(j(), k()), l()),
            Pattern::or(Pattern::or(k(), j()), l()),
        ),
        (
            DeMorgan,
            Pattern::not(Pattern::and(j(), k())),
            Pattern::or(Pattern::not(j()), Pattern::not(k())),
        ),
        (
            DeMorgan,
            Pattern::not(Pattern::or(j(), k())),
            Pattern::and(Pattern::not(j()), Pattern::not(k())),
        ),
        (DoubleNegation, Pattern::not(Pattern::not(j())), j()),
        (
            Distributive,
            Pattern::and(j(), Pattern::or(k(), l())),
            Pattern::or(Pattern::and(j(), k()), Pattern::and(j(), l())),
        ),
        (
            Distributive,
            Pattern::or(j(), Pattern::and(k(), l())),
            Pattern::and(Pattern::or(j(), k()), Pattern::or(j(), l())),
        ),
    ];

    defs.into_iter()
        .enumerate()
        .map(|(id, (family, gamma1, gamma2))| LawRule {
            id,
            family,
            gamma1,
            gamma2,
        })
        .collect()
}

/// Maps a hex digit onto an index of an ordered rule family by proportional
/// bucketing: `floor(digit * family_size / 16)`.
pub fn select_rule(digit: u8, family_size: usize) -> usize {
    debug_assert!(digit < 16);
    debug_assert!(family_size > 0);
    digit as usize * family_size / 16
}
