use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{parser, Constituent, LogicError};

/// Name of a basic event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    /// Accepts identifiers matching `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new(name: impl Into<String>) -> Result<Self, LogicError> {
        let name = name.into();
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(LogicError::InvalidAtom(name));
        }
        if parser::is_reserved(&name) {
            return Err(LogicError::ReservedWord(name));
        }
        Ok(Atom(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Propositional sentence over named atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Panics on an invalid name; use [`Atom::new`] for untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Negation that cancels an outer `!` instead of stacking another one.
    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Truth value under `world`; every atom of the formula must be assigned.
    pub fn evaluate(&self, world: &Constituent) -> Result<bool, LogicError> {
        Ok(match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(a) => world
                .value(a)
                .ok_or_else(|| LogicError::MissingAtom(a.clone()))?,
            Formula::Not(f) => !f.evaluate(world)?,
            Formula::And(a, b) => a.evaluate(world)? & b.evaluate(world)?,
            Formula::Or(a, b) => a.evaluate(world)? | b.evaluate(world)?,
            Formula::Implies(a, b) => !a.evaluate(world)? | b.evaluate(world)?,
            Formula::Iff(a, b) => a.evaluate(world)? == b.evaluate(world)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 6,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Left-associative operators parenthesize a right child of equal
        // precedence; `->` is right-associative and does the opposite.
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, p: u8, right_assoc: bool| {
            let (lmin, rmin) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
            a.write_child(f, lmin)?;
            write!(f, " {op} ")?;
            b.write_child(f, rmin)
        };
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Bottom => f.write_str("bottom"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.write_child(f, 5)
            }
            Formula::And(a, b) => binary(f, a, "&", b, 4, false),
            Formula::Or(a, b) => binary(f, a, "|", b, 3, false),
            Formula::Implies(a, b) => binary(f, a, "->", b, 2, true),
            Formula::Iff(a, b) => binary(f, a, "<->", b, 1, false),
        }
    }
}

impl FromStr for Formula {
    type Err = parser::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parser::parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}
