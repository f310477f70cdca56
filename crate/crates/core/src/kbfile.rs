//! Line-oriented knowledge-base files.
//!
//! ```text
//! # comment
//! atoms: linda, steve, great, noisy
//! great given linda @ eps 0.05
//! !noisy given linda & steve : [0.9, 1]
//! ```
//!
//! `@ eps e` is shorthand for `[1 − e, 1]`. Numbers are decimals or `p/q`
//! and are read exactly. The optional `atoms:` line adds atoms to the
//! universe even when no assertion mentions them.

use std::fmt;

use thiserror::Error;

use crate::engine::{EngineError, KnowledgeBase};
use crate::logic::parser::{lex, Parser, Tok};
use crate::logic::{Atom, ConditionalEvent};
use crate::rational::{self, Rational};
use crate::rules::ProbInterval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct KbError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Interval(ProbInterval),
    /// `[1 − ε, 1]`.
    Eps(Rational),
}

impl Bound {
    pub fn interval(&self) -> ProbInterval {
        match self {
            Bound::Interval(i) => i.clone(),
            Bound::Eps(e) => ProbInterval::from_eps(e.clone()).expect("ε checked at parse time"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Interval(i) => write!(f, ": [{}, {}]", rational::to_literal(i.lo()), rational::to_literal(i.hi())),
            Bound::Eps(e) => write!(f, "@ eps {}", rational::to_literal(e)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KbLine {
    Blank,
    /// Text after `#`, verbatim.
    Comment(String),
    Atoms { atoms: Vec<Atom>, comment: Option<String> },
    Assertion { event: ConditionalEvent, bound: Bound, comment: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KbDocument {
    pub lines: Vec<KbLine>,
}

fn number(p: &mut Parser) -> Result<Rational, (usize, String)> {
    let col = p.column();
    let Tok::Number(whole) = p.peek().clone() else {
        return Err((col, p.error("a number").message));
    };
    p.bump();
    let text = if *p.peek() == Tok::Slash {
        p.bump();
        let Tok::Number(d) = p.peek().clone() else {
            return Err((p.column(), p.error("a denominator").message));
        };
        p.bump();
        format!("{whole}/{d}")
    } else {
        whole
    };
    let r = rational::parse_rational(&text).map_err(|e| (col, e.to_string()))?;
    if !rational::is_probability(&r) {
        return Err((col, format!("{text} is outside [0, 1]")));
    }
    Ok(r)
}

fn parse_line(code: &str) -> Result<Option<KbLine>, (usize, String)> {
    let toks = lex(code).map_err(|e| (e.column, e.message))?;
    let mut p = Parser::new(toks);
    if *p.peek() == Tok::End {
        return Ok(None);
    }
    let pe = |e: crate::logic::ParseError| (e.column, e.message);

    if p.at_keyword("atoms") {
        // `atoms` followed by `:` declares atoms; otherwise it is an atom name.
        let mut probe = Parser::new(lex(code).map_err(|e| (e.column, e.message))?);
        probe.bump();
        if *probe.peek() == Tok::Colon {
            p.bump();
            p.bump();
            let mut atoms = Vec::new();
            loop {
                let col = p.column();
                match p.bump() {
                    Tok::Ident(name) => atoms.push(Atom::new(name).map_err(|e| (col, e.to_string()))?),
                    _ => return Err((col, "expected an atom name".to_string())),
                }
                match p.peek() {
                    Tok::Comma => {
                        p.bump();
                    }
                    Tok::End => break,
                    _ => return Err((p.column(), p.error("`,` or end of line").message)),
                }
            }
            return Ok(Some(KbLine::Atoms { atoms, comment: None }));
        }
    }

    let event = p.conditional().map_err(pe)?;
    let bound = match p.peek() {
        Tok::Colon => {
            p.bump();
            let open = p.column();
            p.expect(Tok::LBracket, "`[`").map_err(pe)?;
            let lo = number(&mut p)?;
            p.expect(Tok::Comma, "`,`").map_err(pe)?;
            let hi = number(&mut p)?;
            p.expect(Tok::RBracket, "`]`").map_err(pe)?;
            let i = ProbInterval::new(lo, hi).map_err(|e| (open, e.to_string()))?;
            Bound::Interval(i)
        }
        Tok::At => {
            p.bump();
            if !p.at_keyword("eps") {
                return Err((p.column(), p.error("`eps`").message));
            }
            p.bump();
            Bound::Eps(number(&mut p)?)
        }
        _ => return Err((p.column(), p.error("`:` or `@`").message)),
    };
    p.expect_end().map_err(pe)?;
    Ok(Some(KbLine::Assertion { event, bound, comment: None }))
}

impl KbDocument {
    pub fn parse(text: &str) -> Result<KbDocument, KbError> {
        let mut lines = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let (code, comment) = match raw.find('#') {
                Some(k) => (&raw[..k], Some(raw[k + 1..].to_string())),
                None => (raw, None),
            };
            let parsed = parse_line(code).map_err(|(column, message)| KbError {
                line: n + 1,
                column,
                message,
            })?;
            lines.push(match (parsed, comment) {
                (None, None) => KbLine::Blank,
                (None, Some(c)) => KbLine::Comment(c),
                (Some(KbLine::Atoms { atoms, .. }), comment) => KbLine::Atoms { atoms, comment },
                (Some(KbLine::Assertion { event, bound, .. }), comment) => KbLine::Assertion { event, bound, comment },
                (Some(other), _) => other,
            });
        }
        Ok(KbDocument { lines })
    }

    /// Assertions in file order.
    pub fn assertions(&self) -> Vec<(ConditionalEvent, ProbInterval)> {
        self.lines
            .iter()
            .filter_map(|l| match l {
                KbLine::Assertion { event, bound, .. } => Some((event.clone(), bound.interval())),
                _ => None,
            })
            .collect()
    }

    pub fn declared_atoms(&self) -> Vec<Atom> {
        self.lines
            .iter()
            .flat_map(|l| match l {
                KbLine::Atoms { atoms, .. } => atoms.clone(),
                _ => vec![],
            })
            .collect()
    }

    pub fn to_knowledge_base(&self, atom_limit: usize) -> Result<KnowledgeBase, EngineError> {
        KnowledgeBase::load_with(self.assertions(), self.declared_atoms(), atom_limit)
    }
}

impl fmt::Display for KbDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |f: &mut fmt::Formatter<'_>, c: &Option<String>| match c {
            Some(c) => writeln!(f, "  #{c}"),
            None => writeln!(f),
        };
        for line in &self.lines {
            match line {
                KbLine::Blank => writeln!(f)?,
                KbLine::Comment(c) => writeln!(f, "#{c}")?,
                KbLine::Atoms { atoms, comment } => {
                    let names: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
                    write!(f, "atoms: {}", names.join(", "))?;
                    tail(f, comment)?;
                }
                KbLine::Assertion { event, bound, comment } => {
                    write!(f, "{event} {bound}")?;
                    tail(f, comment)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    const PARTY: &str = "\
# party
atoms: linda, steve, great, noisy
great given linda @ eps 0.05
steve given linda @ eps 0.2   # rule 2
!noisy given linda & steve : [0.9, 1]
linda given steve : [19/20, 1]

!great given !noisy @ eps 1/5
";

    #[test]
    fn parses_the_party_file() {
        let doc = KbDocument::parse(PARTY).unwrap();
        let a = doc.assertions();
        assert_eq!(a.len(), 5);
        assert_eq!(a[0].1, ProbInterval::new(parse_rational("0.95").unwrap(), parse_rational("1").unwrap()).unwrap());
        assert_eq!(a[3].1, a[0].1);
        assert_eq!(a[4].1.lo(), &parse_rational("0.8").unwrap());
        assert_eq!(doc.declared_atoms().len(), 4);
        assert!(matches!(&doc.lines[3], KbLine::Assertion { comment: Some(c), .. } if c == " rule 2"));
    }

    #[test]
    fn round_trip() {
        let doc = KbDocument::parse(PARTY).unwrap();
        let printed = doc.to_string();
        assert_eq!(KbDocument::parse(&printed).unwrap(), doc);
        assert!(printed.contains("great given linda @ eps 0.05"));
        assert!(printed.contains("linda given steve : [0.95, 1]"));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = KbDocument::parse("b given a : [0.2, 0.4]\nb given : [0, 1]\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = KbDocument::parse("b given a : [0.6, 0.4]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 13));
        let e = KbDocument::parse("b given a @ eps 1.5").unwrap_err();
        assert_eq!((e.line, e.column), (1, 17));
        let e = KbDocument::parse("b given a @ delta 0.1").unwrap_err();
        assert_eq!(e.column, 13);
        let e = KbDocument::parse("b given a & !a : [0, 1]").unwrap_err();
        assert_eq!(e.line, 1);
        let e = KbDocument::parse("atoms: a, top").unwrap_err();
        assert_eq!(e.column, 11);
    }

    #[test]
    fn atoms_can_be_an_atom_name() {
        let doc = KbDocument::parse("atoms given x : [0, 1]").unwrap();
        assert_eq!(doc.assertions()[0].0.to_string(), "atoms given x");
    }
}
