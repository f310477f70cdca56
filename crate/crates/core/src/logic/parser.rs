//! Formula grammar.
//!
//! ```text
//! iff     := implies ("<->" implies)*
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" iff ")" | "top" | "bottom" | IDENT
//! ```
//!
//! A conditional is `FORMULA given FORMULA`. The lexer also knows the number
//! and punctuation tokens used by knowledge-base files, so the same token
//! stream serves both.

use std::fmt;

use thiserror::Error;

use super::{ConditionalEvent, Formula, LogicError};

const RESERVED: &[&str] = &["top", "bottom", "given"];

pub(crate) fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    At,
    Slash,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Not => f.write_str("`!`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::At => f.write_str("`@`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

/// Token with its 1-based starting column.
pub(crate) type Spanned = (Tok, usize);

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((Tok::Number(chars[start..i].iter().collect()), col));
            continue;
        }
        let (tok, len) = match c {
            '!' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            ':' => (Tok::Colon, 1),
            '@' => (Tok::At, 1),
            '/' => (Tok::Slash, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
            other => return Err(ParseError::new(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(toks: Vec<Spanned>) -> Self {
        Parser { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.column(), format!("expected {expected}, found {}", self.peek()))
    }

    pub(crate) fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub(crate) fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "top" => {
                    self.bump();
                    Ok(Formula::Top)
                }
                "bottom" => {
                    self.bump();
                    Ok(Formula::Bottom)
                }
                "given" => Err(ParseError::new(col, "expected a formula before `given`")),
                _ => {
                    self.bump();
                    let atom = super::Atom::new(name).map_err(|e| ParseError::new(col, e.to_string()))?;
                    Ok(Formula::Atom(atom))
                }
            },
            _ => Err(self.error("a formula")),
        }
    }

    /// `FORMULA given FORMULA`, with the antecedent checked for satisfiability.
    pub(crate) fn conditional(&mut self) -> Result<ConditionalEvent, ParseError> {
        let consequent = self.formula()?;
        if !self.at_keyword("given") {
            return Err(self.error("`given`"));
        }
        self.bump();
        let col = self.column();
        let antecedent = self.formula()?;
        ConditionalEvent::new(consequent, antecedent).map_err(|e: LogicError| ParseError::new(col, e.to_string()))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses `E given H`.
pub fn parse_conditional(text: &str) -> Result<ConditionalEvent, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let c = p.conditional()?;
    p.expect_end()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn conjunction() {
        assert_eq!(parse_formula("linda & steve").unwrap(), Formula::and(a("linda"), a("steve")));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("!(a | b) -> c").unwrap(),
            Formula::implies(Formula::not(Formula::or(a("a"), a("b"))), a("c"))
        );
        assert_eq!(
            parse_formula("a | b & c").unwrap(),
            Formula::or(a("a"), Formula::and(a("b"), a("c")))
        );
        assert_eq!(
            parse_formula("a <-> b -> c").unwrap(),
            Formula::iff(a("a"), Formula::implies(a("b"), a("c")))
        );
        assert_eq!(parse_formula("!a & b").unwrap(), Formula::and(Formula::not(a("a")), a("b")));
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            Formula::implies(a("a"), Formula::implies(a("b"), a("c")))
        );
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("top").unwrap(), Formula::Top);
        assert_eq!(parse_formula("bottom").unwrap(), Formula::Bottom);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_formula("a & ").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_formula("a $ b").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_formula("(a | b").unwrap_err();
        assert_eq!(e.column, 7);
        assert!(parse_formula("a b").is_err());
        assert!(parse_formula("given").is_err());
    }

    #[test]
    fn conditional_with_contradictory_antecedent_is_rejected() {
        assert!(parse_conditional("b given a & !a").is_err());
        assert!(parse_conditional("b given bottom").is_err());
        let c = parse_conditional("!noisy given linda & steve").unwrap();
        assert_eq!(c.antecedent(), &Formula::and(a("linda"), a("steve")));
    }
}
