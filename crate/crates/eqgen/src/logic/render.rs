//! Minimal-parentheses rendering.
//!
//! A child is wrapped in parentheses when it binds strictly looser than its
//! parent, and additionally on equal binding power on the side the parser
//! does not associate toward: the right operand of the (left-associative)
//! conjunction and disjunction, the left operand of the (right-associative)
//! implication and biconditional. Atoms are never parenthesized. That makes
//! the rendering injective, so `parse(render(x)) == x` for every tree.

use super::{BinOp, Operator, Proposition};

/// Output spelling of the logical operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    Unicode,
    Ascii,
    Latex,
}

impl Syntax {
    fn not_sym(self) -> &'static str {
        match self {
            Syntax::Unicode => "¬",
            Syntax::Ascii => "!",
            Syntax::Latex => "\\neg ",
        }
    }

    fn bin_sym(self, op: BinOp) -> &'static str {
        match (self, op) {
            (Syntax::Unicode, BinOp::And) => " ∧ ",
            (Syntax::Unicode, BinOp::Or) => " ∨ ",
            (Syntax::Unicode, BinOp::Implies) => " ⊃ ",
            (Syntax::Unicode, BinOp::Iff) => " ↔ ",
            (Syntax::Ascii, BinOp::And) => " & ",
            (Syntax::Ascii, BinOp::Or) => " | ",
            (Syntax::Ascii, BinOp::Implies) => " -> ",
            (Syntax::Ascii, BinOp::Iff) => " <-> ",
            (Syntax::Latex, BinOp::And) => " \\wedge ",
            (Syntax::Latex, BinOp::Or) => " \\vee ",
            (Syntax::Latex, BinOp::Implies) => " \\to ",
            (Syntax::Latex, BinOp::Iff) => " \\leftrightarrow ",
        }
    }

    fn const_sym(self, value: bool) -> &'static str {
        if value {
            "T"
        } else {
            "F"
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
    UnderNot,
}

fn needs_parens(child: &Proposition, parent_bp: u8, parent: Option<BinOp>, side: Side) -> bool {
    let child_bp = child.binding_power();
    if child_bp < parent_bp {
        return true;
    }
    if child_bp == parent_bp {
        return matches!(
            (parent, side),
            (Some(BinOp::And) | Some(BinOp::Or), Side::Right)
                | (Some(BinOp::Implies) | Some(BinOp::Iff), Side::Left)
        );
    }
    false
}

fn write_child(
    child: &Proposition,
    parent_bp: u8,
    parent: Option<BinOp>,
    side: Side,
    syntax: Syntax,
    out: &mut String,
) {
    if needs_parens(child, parent_bp, parent, side) {
        out.push('(');
        write_prop(child, syntax, out);
        out.push(')');
    } else {
        write_prop(child, syntax, out);
    }
}

fn write_prop(prop: &Proposition, syntax: Syntax, out: &mut String) {
    match prop {
        Proposition::Const(v) => out.push_str(syntax.const_sym(*v)),
        Proposition::Var(name) => out.push_str(name),
        Proposition::Not(child) => {
            out.push_str(syntax.not_sym());
            write_child(
                child,
                Operator::Not.binding_power(),
                None,
                Side::UnderNot,
                syntax,
                out,
            );
        }
        Proposition::Binary(op, l, r) => {
            write_child(l, op.binding_power(), Some(*op), Side::Left, syntax, out);
            out.push_str(syntax.bin_sym(*op));
            write_child(r, op.binding_power(), Some(*op), Side::Right, syntax, out);
        }
    }
}

/// Renders the formula with minimal parentheses in the given syntax.
pub fn render(prop: &Proposition, syntax: Syntax) -> String {
    let mut out = String::new();
    write_prop(prop, syntax, &mut out);
    out
}
