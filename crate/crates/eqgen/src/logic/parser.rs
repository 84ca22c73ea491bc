//! Recursive-descent parser for expression text.
//!
//! One lexer accepts both the Unicode and the ASCII operator spellings (the
//! token sets do not overlap), so a single entry point serves every syntax
//! the renderer emits. Negation binds tightest, conjunction and disjunction
//! are left-associative, implication and the biconditional right-associative,
//! and parentheses override everything.

use thiserror::Error;

use super::Proposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected token `{token}` at position {pos}")]
    UnexpectedToken { pos: usize, token: String },
    #[error("unbalanced parenthesis at position {pos}")]
    UnbalancedParen { pos: usize },
    #[error("trailing input `{token}` at position {pos}")]
    TrailingInput { pos: usize, token: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Not,
    And,
    Or,
    Implies,
    Iff,
    True,
    False,
    Ident(String),
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Not => "¬".into(),
            Token::And => "∧".into(),
            Token::Or => "∨".into(),
            Token::Implies => "⊃".into(),
            Token::Iff => "↔".into(),
            Token::True => "T".into(),
            Token::False => "F".into(),
            Token::Ident(name) => name.clone(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
        }
    }
}

/// Tokens tagged with the character position they start at.
fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let pos = i;
        let ch = chars[i];
        let token = match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '¬' | '!' => Token::Not,
            '∧' | '&' => Token::And,
            '∨' | '|' => Token::Or,
            '⊃' => Token::Implies,
            '↔' => Token::Iff,
            '(' => Token::LParen,
            ')' => Token::RParen,
            'T' => Token::True,
            'F' => Token::False,
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    i += 1;
                    Token::Implies
                } else {
                    return Err(ParseError::UnexpectedChar { pos, ch });
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    i += 2;
                    Token::Iff
                } else {
                    return Err(ParseError::UnexpectedChar { pos, ch });
                }
            }
            c if c.is_ascii_lowercase() => {
                let mut name = String::new();
                while i < chars.len()
                    && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit())
                {
                    name.push(chars[i]);
                    i += 1;
                }
                tokens.push((pos, Token::Ident(name)));
                continue;
            }
            _ => return Err(ParseError::UnexpectedChar { pos, ch }),
        };
        tokens.push((pos, token));
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.cursor)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek().map(|(_, t)| t) == Some(token) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    // iff := implies (↔ iff)?   (right-associative)
    fn iff(&mut self) -> Result<Proposition, ParseError> {
        let lhs = self.implies()?;
        if self.eat(&Token::Iff) {
            let rhs = self.iff()?;
            return Ok(Proposition::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    // implies := or (⊃ implies)?   (right-associative)
    fn implies(&mut self) -> Result<Proposition, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implies()?;
            return Ok(Proposition::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // or := and (∨ and)*   (left-associative)
    fn or(&mut self) -> Result<Proposition, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            let rhs = self.and()?;
            lhs = Proposition::or(lhs, rhs);
        }
        Ok(lhs)
    }

    // and := unary (∧ unary)*   (left-associative)
    fn and(&mut self) -> Result<Proposition, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            let rhs = self.unary()?;
            lhs = Proposition::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Proposition, ParseError> {
        if self.eat(&Token::Not) {
            return Ok(Proposition::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Proposition, ParseError> {
        match self.next() {
            Some((_, Token::True)) => Ok(Proposition::Const(true)),
            Some((_, Token::False)) => Ok(Proposition::Const(false)),
            Some((_, Token::Ident(name))) => Ok(Proposition::Var(name)),
            Some((pos, Token::LParen)) => {
                let inner = self.iff()?;
                match self.next() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((pos, token)) => Err(ParseError::UnexpectedToken {
                        pos,
                        token: token.describe(),
                    }),
                    None => Err(ParseError::UnbalancedParen { pos }),
                }
            }
            Some((pos, token)) => Err(ParseError::UnexpectedToken {
                pos,
                token: token.describe(),
            }),
            None => Err(ParseError::UnexpectedToken {
                pos: self.len,
                token: "end of input".into(),
            }),
        }
    }
}

/// Parses expression text in either the Unicode or ASCII spelling.
pub fn parse(text: &str) -> Result<Proposition, ParseError> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        len: text.chars().count(),
    };
    let prop = parser.iff()?;
    if let Some((pos, token)) = parser.peek() {
        if *token == Token::RParen {
            return Err(ParseError::UnbalancedParen { pos: *pos });
        }
        return Err(ParseError::TrailingInput {
            pos: *pos,
            token: token.describe(),
        });
    }
    Ok(prop)
}
