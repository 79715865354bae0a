use std::fmt;

use super::FiniteAlgebra;
use crate::error::{Error, Result};

/// A term over an algebra's signature.
///
/// Text form: `op(t1, .., tk)` for applications, a bare symbol for
/// constants, and `x`, `y`, `z`, `w` or `x0`, `x1`, .. for variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(op.into(), args)
    }

    /// One more than the largest variable index, or 0 for ground terms.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::arity).max().unwrap_or(0),
        }
    }

    /// Checks every symbol exists with the arity used.
    pub fn check(&self, alg: &FiniteAlgebra) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(name, args) => {
                alg.op_checked(name, args.len())?;
                args.iter().try_for_each(|a| a.check(alg))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Malformed(format!("trailing input in term `{text}`")));
        }
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !b"(),".contains(&self.s[self.pos]) && !self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let sym = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii slice").to_string();
        if sym.is_empty() {
            return Err(Error::Malformed(format!("expected a symbol at byte {start}")));
        }
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == b'(' {
            self.pos += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.pos < self.s.len() && self.s[self.pos] == b')' {
                self.pos += 1;
                return Ok(Term::App(sym, args));
            }
            loop {
                args.push(self.term()?);
                self.skip_ws();
                match self.s.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        return Ok(Term::App(sym, args));
                    }
                    _ => return Err(Error::Malformed(format!("unbalanced term near byte {}", self.pos))),
                }
            }
        }
        Ok(match variable(&sym) {
            Some(i) => Term::Var(i),
            None => Term::App(sym, Vec::new()),
        })
    }
}

fn variable(sym: &str) -> Option<usize> {
    match sym {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => sym.strip_prefix('x').and_then(|d| d.parse().ok()),
    }
}

/// Evaluates `t` in `alg` under `env` (variable `i` is bound to `env[i]`).
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, env: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => env.get(*i).copied().ok_or(Error::MissingVariable(*i)),
        Term::App(name, args) => {
            let k = alg.op_index(name).ok_or_else(|| Error::UnknownOperation(name.clone()))?;
            let op = &alg.operations()[k];
            if op.arity != args.len() {
                return Err(Error::ArityMismatch {
                    op: name.clone(),
                    expected: op.arity,
                    found: args.len(),
                });
            }
            let vals = args.iter().map(|a| eval_term(alg, a, env)).collect::<Result<Vec<_>>>()?;
            Ok(alg.apply(k, &vals))
        }
    }
}
