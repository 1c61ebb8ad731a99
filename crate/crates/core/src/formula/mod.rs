//! Temporal-logic formulas: abstract syntax, concrete-syntax parsing,
//! finite-trace semantics and negation normal form.
//!
//! The same [`Formula`] type is shared by the finite-trace interpretation
//! (see [`satisfies`]) and the infinite-trace interpretation used by the
//! reduction path in [`crate::ltl_bridge`].

mod nnf;
mod parse;
mod semantics;
mod trace;

pub use nnf::to_nnf;
pub use parse::{parse, ParseError};
pub use semantics::{evaluate, satisfies, EvalError};
pub use trace::{Trace, TraceError};

pub(crate) use semantics::{eval_masks, eval_positions};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Proposition identifier reserved for the finite-to-infinite reduction.
pub const RESERVED_ALIVE: &str = "alive";

/// An interned proposition identifier.
///
/// Names are interned process-wide, so propositions compare, hash and copy
/// as plain integers while printing as their original name.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(u32);

struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();

fn interner() -> &'static RwLock<Interner> {
    INTERNER.get_or_init(|| {
        RwLock::new(Interner {
            names: Vec::new(),
            ids: HashMap::new(),
        })
    })
}

/// Error raised when a proposition name does not match
/// `[a-zA-Z_][a-zA-Z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid proposition name {0:?}")]
pub struct InvalidName(pub String);

/// Returns true iff `name` matches `[a-zA-Z_][a-zA-Z0-9_]*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Prop {
    /// Interns `name`, validating it first.
    pub fn new(name: &str) -> Result<Prop, InvalidName> {
        if !is_valid_name(name) {
            return Err(InvalidName(name.to_string()));
        }
        Ok(Prop::intern(name))
    }

    /// The reserved `alive` proposition.
    pub fn alive() -> Prop {
        Prop::intern(RESERVED_ALIVE)
    }

    fn intern(name: &str) -> Prop {
        {
            let table = interner().read().unwrap();
            if let Some(&id) = table.ids.get(name) {
                return Prop(id);
            }
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.ids.get(name) {
            return Prop(id);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        let id = table.names.len() as u32;
        table.names.push(leaked);
        table.ids.insert(leaked, id);
        Prop(id)
    }

    /// The interned name.
    pub fn name(self) -> &'static str {
        interner().read().unwrap().names[self.0 as usize]
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prop({})", self.name())
    }
}

impl Serialize for Prop {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Prop {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Prop::new(&name).map_err(D::Error::custom)
    }
}

/// Abstract syntax of temporal formulas.
///
/// `Release` and `WeakNext` are internal connectives: they are produced by
/// [`to_nnf`] as the duals of `Until` and strong `Next` and have no concrete
/// syntax, so [`parse`] never returns them.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Prop),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    /// Atom with a validated name.
    pub fn atom(name: &str) -> Result<Formula, InvalidName> {
        Ok(Formula::Atom(Prop::new(name)?))
    }

    pub fn prop(p: Prop) -> Formula {
        Formula::Atom(p)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    /// All propositions occurring in the formula.
    pub fn propositions(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p| {
            out.insert(p);
        });
        out
    }

    /// Propositions in first-occurrence (preorder) order.
    pub fn propositions_ordered(&self) -> Vec<Prop> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_atoms(&mut |p| {
            if seen.insert(p) {
                out.push(p);
            }
        });
        out
    }

    /// Whether the reserved `alive` proposition occurs in the formula.
    pub fn mentions_alive(&self) -> bool {
        self.propositions().contains(&Prop::alive())
    }

    fn visit_atoms(&self, f: &mut impl FnMut(Prop)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => f(*p),
            Formula::Not(c)
            | Formula::Next(c)
            | Formula::WeakNext(c)
            | Formula::Eventually(c)
            | Formula::Globally(c) => c.visit_atoms(f),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Until(l, r)
            | Formula::Release(l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
        }
    }

    /// True for `And`, `Or`, `Implies`, `Until` and `Release` nodes.
    pub(crate) fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..)
                | Formula::Or(..)
                | Formula::Implies(..)
                | Formula::Until(..)
                | Formula::Release(..)
        )
    }

    fn binary_tag(&self) -> Option<u8> {
        match self {
            Formula::And(..) => Some(0),
            Formula::Or(..) => Some(1),
            Formula::Implies(..) => Some(2),
            Formula::Until(..) => Some(3),
            Formula::Release(..) => Some(4),
            _ => None,
        }
    }
}

// Printing discipline: binary subexpressions are parenthesized wherever they
// are nested, except that a right-nested chain of the same binary operator is
// flattened (all binary operators parse right-associatively, so flattened
// chains re-parse to the same tree). Unary operands are parenthesized only
// when binary.
fn fmt_child(
    f: &mut fmt::Formatter<'_>,
    child: &Formula,
    parent: Option<u8>,
    right: bool,
) -> fmt::Result {
    let parens = match child.binary_tag() {
        None => false,
        Some(tag) => !(right && parent == Some(tag)),
    };
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

fn fmt_binary(
    f: &mut fmt::Formatter<'_>,
    op: &str,
    tag: u8,
    l: &Formula,
    r: &Formula,
) -> fmt::Result {
    fmt_child(f, l, Some(tag), false)?;
    write!(f, " {op} ")?;
    fmt_child(f, r, Some(tag), true)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(c) => {
                f.write_str("!")?;
                fmt_child(f, c, None, false)
            }
            Formula::Next(c) => {
                f.write_str("X ")?;
                fmt_child(f, c, None, false)
            }
            // No concrete syntax; printed for diagnostics only.
            Formula::WeakNext(c) => {
                f.write_str("WX ")?;
                fmt_child(f, c, None, false)
            }
            Formula::Eventually(c) => {
                f.write_str("F ")?;
                fmt_child(f, c, None, false)
            }
            Formula::Globally(c) => {
                f.write_str("G ")?;
                fmt_child(f, c, None, false)
            }
            Formula::And(l, r) => fmt_binary(f, "&", 0, l, r),
            Formula::Or(l, r) => fmt_binary(f, "|", 1, l, r),
            Formula::Implies(l, r) => fmt_binary(f, "->", 2, l, r),
            Formula::Until(l, r) => fmt_binary(f, "U", 3, l, r),
            // No concrete syntax; printed for diagnostics only.
            Formula::Release(l, r) => fmt_binary(f, "R", 4, l, r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop_interning_is_stable() {
        let a = Prop::new("p").unwrap();
        let b = Prop::new("p").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.name(), "p");
        assert_ne!(a, Prop::new("q").unwrap());
    }

    #[test]
    fn prop_names_are_validated() {
        assert!(Prop::new("_x1").is_ok());
        assert!(Prop::new("1x").is_err());
        assert!(Prop::new("").is_err());
        assert!(Prop::new("a-b").is_err());
    }

    #[test]
    fn propositions_of_formula() {
        let f = parse("F (g1 & g2)").unwrap();
        let names: Vec<_> = f.propositions().iter().map(|p| p.name()).collect();
        assert_eq!(names, vec!["g1", "g2"]);
        assert!(Formula::True.propositions().is_empty());
        let f = parse("p & !p").unwrap();
        assert_eq!(f.propositions().len(), 1);
    }

    #[test]
    fn first_occurrence_order() {
        let f = parse("(b U a) & F b & c").unwrap();
        let names: Vec<_> = f.propositions_ordered().iter().map(|p| p.name()).collect();
        assert_eq!(names, vec!["b", "a", "c"]);
    }

    #[test]
    fn display_parenthesizes_nested_binaries() {
        let p = Formula::atom("p").unwrap();
        let alive = Formula::atom("q").unwrap();
        let f = Formula::and(
            Formula::and(p, alive.clone()),
            Formula::until(
                alive,
                Formula::globally(Formula::not(Formula::atom("r").unwrap())),
            ),
        );
        assert_eq!(f.to_string(), "(p & q) & (q U G !r)");
    }

    #[test]
    fn display_flattens_right_nested_chains() {
        let f = parse("a & b & c").unwrap();
        assert_eq!(f.to_string(), "a & b & c");
        let f = parse("a U b U c").unwrap();
        assert_eq!(f.to_string(), "a U b U c");
    }
}
