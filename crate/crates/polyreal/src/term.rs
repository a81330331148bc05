//! Terms of the tiered real function algebra.
//!
//! Functions take *normal* arguments followed by *safe* arguments; the
//! [`Signature`] records how many of each. Basic functions:
//!
//! | syntax      | signature | meaning                               |
//! |-------------|-----------|---------------------------------------|
//! | `0`, `1`    | `(0;0)`   | constants                             |
//! | `(add)`     | `(0;2)`   | `x + y`                               |
//! | `(sub)`     | `(0;2)`   | `x - y`                               |
//! | `(proj m n i)` | `(m;n)` | i-th argument, 1-based               |
//! | `(cond)`    | `(0;3)`   | `x*y + (1-x)*z`                       |
//! | `(parity)`  | `(0;1)`   | `max(0, (pi/2) sin(pi x))`            |
//! | `(pred)`    | `(0;1)`   | continuous floor-halving              |
//!
//! Operators: `(comp h (g...) (g...))` is safe composition
//! `h(g1(x;); g2(x;y))`, and `(si g h0 h1)` is recursion on binary notation
//! extended to the reals by interpolation between adjacent integer values.
//! Sugar: `(k N)` builds the integer constant `N` as a successor chain;
//! `(succ0)`, `(succ1)`, `(pred-shift)` and `(cond-discrete)` name the
//! standard derived functions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sexpr::{err_at, parse_one, Sexpr};

/// Argument counts: `normal` arguments first, then `safe` arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub normal: u32,
    pub safe: u32,
}

impl Signature {
    pub const fn new(normal: u32, safe: u32) -> Self {
        Self { normal, safe }
    }

    pub fn arity(&self) -> u32 {
        self.normal + self.safe
    }

    pub fn is_closed(&self) -> bool {
        self.normal == 0 && self.safe == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.normal, self.safe)
    }
}

/// Abstract syntax of the algebra. Structural equality is plain tree
/// equality; signatures are synthesized by the tier checker, never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Zero,
    One,
    Add,
    Sub,
    Proj { normal: u32, safe: u32, index: u32 },
    Cond,
    Parity,
    Pred,
    Comp { h: Box<Term>, normals: Vec<Term>, safes: Vec<Term> },
    Si { g: Box<Term>, h0: Box<Term>, h1: Box<Term> },
}

impl Term {
    pub fn comp(h: Term, normals: Vec<Term>, safes: Vec<Term>) -> Term {
        Term::Comp { h: Box::new(h), normals, safes }
    }

    pub fn si(g: Term, h0: Term, h1: Term) -> Term {
        Term::Si { g: Box::new(g), h0: Box::new(h0), h1: Box::new(h1) }
    }

    pub fn proj(normal: u32, safe: u32, index: u32) -> Term {
        Term::Proj { normal, safe, index }
    }

    /// The integer constant `k`, written in binary as a chain of successor
    /// applications: one successor per bit, so the tree stays small.
    pub fn int_const(k: u64) -> Term {
        match k {
            0 => Term::Zero,
            1 => Term::One,
            _ => {
                let prev = Term::int_const(k / 2);
                let succ = if k % 2 == 1 {
                    crate::builders::succ1()
                } else {
                    crate::builders::succ0()
                };
                Term::comp(succ, vec![], vec![prev])
            }
        }
    }

    fn from_sexpr(e: &Sexpr) -> Result<Term> {
        match e {
            Sexpr::Atom(text, pos) => match text.as_str() {
                "0" => Ok(Term::Zero),
                "1" => Ok(Term::One),
                other => Err(err_at(*pos, format!("unknown atom `{other}`"))),
            },
            Sexpr::List(items, pos) => {
                let head = match items.first() {
                    Some(Sexpr::Atom(h, _)) => h.as_str(),
                    Some(other) => {
                        return Err(err_at(other.pos(), "expected a head symbol"));
                    }
                    None => return Err(err_at(*pos, "empty list")),
                };
                let args = &items[1..];
                let expect_nullary = |kind: Term| -> Result<Term> {
                    if args.is_empty() {
                        Ok(kind)
                    } else {
                        Err(err_at(*pos, format!("`{head}` takes no arguments")))
                    }
                };
                match head {
                    "add" => expect_nullary(Term::Add),
                    "sub" => expect_nullary(Term::Sub),
                    "cond" => expect_nullary(Term::Cond),
                    "parity" => expect_nullary(Term::Parity),
                    "pred" => expect_nullary(Term::Pred),
                    "succ0" => expect_nullary(crate::builders::succ0()),
                    "succ1" => expect_nullary(crate::builders::succ1()),
                    "pred-shift" => expect_nullary(crate::builders::pred_shift()),
                    "cond-discrete" => expect_nullary(crate::builders::cond_discrete()),
                    "proj" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`proj` takes m n i"));
                        }
                        let nums = args
                            .iter()
                            .map(parse_u32)
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Term::proj(nums[0], nums[1], nums[2]))
                    }
                    "k" => {
                        if args.len() != 1 {
                            return Err(err_at(*pos, "`k` takes one integer"));
                        }
                        let n = parse_u64(&args[0])?;
                        Ok(Term::int_const(n))
                    }
                    "comp" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`comp` takes h (normals) (safes)"));
                        }
                        let h = Term::from_sexpr(&args[0])?;
                        let normals = parse_vector(&args[1])?;
                        let safes = parse_vector(&args[2])?;
                        Ok(Term::comp(h, normals, safes))
                    }
                    "si" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`si` takes g h0 h1"));
                        }
                        Ok(Term::si(
                            Term::from_sexpr(&args[0])?,
                            Term::from_sexpr(&args[1])?,
                            Term::from_sexpr(&args[2])?,
                        ))
                    }
                    other => Err(err_at(*pos, format!("unknown head `{other}`"))),
                }
            }
        }
    }
}

fn parse_vector(e: &Sexpr) -> Result<Vec<Term>> {
    match e {
        Sexpr::List(items, _) => items.iter().map(Term::from_sexpr).collect(),
        Sexpr::Atom(_, pos) => Err(err_at(*pos, "expected a parenthesized vector of terms")),
    }
}

fn parse_u32(e: &Sexpr) -> Result<u32> {
    match e {
        Sexpr::Atom(text, pos) => text
            .parse::<u32>()
            .map_err(|_| err_at(*pos, format!("expected a nonnegative integer, got `{text}`"))),
        Sexpr::List(_, pos) => Err(err_at(*pos, "expected an integer")),
    }
}

fn parse_u64(e: &Sexpr) -> Result<u64> {
    match e {
        Sexpr::Atom(text, pos) => text
            .parse::<u64>()
            .map_err(|_| err_at(*pos, format!("expected a nonnegative integer, got `{text}`"))),
        Sexpr::List(_, pos) => Err(err_at(*pos, "expected an integer")),
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(src: &str) -> Result<Term> {
        Term::from_sexpr(&parse_one(src)?)
    }
}

/// Parses one term from the concrete syntax.
pub fn parse(src: &str) -> Result<Term> {
    src.parse()
}

impl fmt::Display for Term {
    /// Canonical single-line rendering; sugar is expanded. `parse` of the
    /// output reproduces the tree exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Add => write!(f, "(add)"),
            Term::Sub => write!(f, "(sub)"),
            Term::Cond => write!(f, "(cond)"),
            Term::Parity => write!(f, "(parity)"),
            Term::Pred => write!(f, "(pred)"),
            Term::Proj { normal, safe, index } => write!(f, "(proj {normal} {safe} {index})"),
            Term::Comp { h, normals, safes } => {
                write!(f, "(comp {h} (")?;
                write_spaced(f, normals)?;
                write!(f, ") (")?;
                write_spaced(f, safes)?;
                write!(f, "))")
            }
            Term::Si { g, h0, h1 } => write!(f, "(si {g} {h0} {h1})"),
        }
    }
}

fn write_spaced(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Round-trip rendering of a term.
pub fn pretty_print(t: &Term) -> String {
    t.to_string()
}
