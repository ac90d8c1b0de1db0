//! S-expression syntax for formulas:
//!
//! ```text
//! (var NAME) | (not F) | (and F F) | (or F F) | (implies F F) | (iff F F)
//! | (F F) | (P F) | (G F) | (H F) | true | false
//! ```

use super::{Formula, LogicError};
use crate::game::valid_token;

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')' | b'#') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push((start, Token::Atom(&text[start..i])));
            }
        }
    }
    out
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> LogicError {
        let pos = self.tokens.get(self.at).map_or(self.end, |t| t.0);
        LogicError::Syntax { pos, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.at).map(|t| t.1.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    /// Steps back over the token just consumed, if any, so errors point at it.
    fn back(&mut self, consumed: bool) {
        if consumed {
            self.at -= 1;
        }
    }

    fn expect_close(&mut self) -> Result<(), LogicError> {
        match self.next() {
            Some(Token::Close) => Ok(()),
            other => {
                self.back(other.is_some());
                Err(self.error("expected `)`"))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.next() {
            Some(Token::Atom("true")) => Ok(Formula::True),
            Some(Token::Atom("false")) => Ok(Formula::False),
            Some(Token::Atom(a)) => {
                self.at -= 1;
                Err(self.error(format!("unexpected atom `{a}`")))
            }
            Some(Token::Close) => {
                self.at -= 1;
                Err(self.error("unexpected `)`"))
            }
            None => Err(self.error("unexpected end of input")),
            Some(Token::Open) => {
                let head = match self.next() {
                    Some(Token::Atom(h)) => h,
                    other => {
                        self.back(other.is_some());
                        return Err(self.error("expected operator after `(`"));
                    }
                };
                let f = match head {
                    "var" => match self.next() {
                        Some(Token::Atom(name)) if valid_token(name) => Formula::var(name),
                        other => {
                            self.back(other.is_some());
                            return Err(self.error("expected proposition name"));
                        }
                    },
                    "not" => self.formula()?.not(),
                    "F" => self.formula()?.future(),
                    "P" => self.formula()?.past(),
                    "G" => self.formula()?.always_future(),
                    "H" => self.formula()?.always_past(),
                    "and" | "or" | "implies" | "iff" => {
                        let a = self.formula()?;
                        let b = self.formula()?;
                        match head {
                            "and" => a.and(b),
                            "or" => a.or(b),
                            "implies" => a.implies(b),
                            _ => a.iff(b),
                        }
                    }
                    other => {
                        self.at -= 1;
                        return Err(self.error(format!("unknown operator `{other}`")));
                    }
                };
                self.expect_close()?;
                Ok(f)
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let mut p = Parser { tokens: tokenize(text), at: 0, end: text.len() };
    let f = p.formula()?;
    if p.at != p.tokens.len() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    let (head, args): (&str, Vec<&Formula>) = match f {
        Formula::True => return out.push_str("true"),
        Formula::False => return out.push_str("false"),
        Formula::Var(p) => {
            out.push_str("(var ");
            out.push_str(p.name());
            out.push(')');
            return;
        }
        Formula::Not(a) => ("not", vec![a]),
        Formula::And(a, b) => ("and", vec![a, b]),
        Formula::Or(a, b) => ("or", vec![a, b]),
        Formula::Implies(a, b) => ("implies", vec![a, b]),
        Formula::Iff(a, b) => ("iff", vec![a, b]),
        Formula::Future(a) => ("F", vec![a]),
        Formula::Past(a) => ("P", vec![a]),
        Formula::AlwaysFuture(a) => ("G", vec![a]),
        Formula::AlwaysPast(a) => ("H", vec![a]),
    };
    out.push('(');
    out.push_str(head);
    for a in args {
        out.push(' ');
        write_formula(a, out);
    }
    out.push(')');
}
