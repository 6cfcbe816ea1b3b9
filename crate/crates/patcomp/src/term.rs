//! First-order terms, positions and substitutions.
//!
//! Terms are built over the whole signature (constructors and defined
//! symbols). Argument tuples of defined symbols use the structural tuple
//! symbols, so a "value tuple" is an ordinary [`Term`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, SortId, SymbolId};

/// A variable together with its sort, when known.
///
/// Sorts are inferred from the position a variable occupies; patterns built
/// directly through the API may leave them unknown.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Option<SortId>,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var { name: name.into(), sort: None }
    }

    pub fn sorted(name: impl Into<String>, sort: SortId) -> Self {
        Var { name: name.into(), sort: Some(sort) }
    }
}

/// A term: a variable or a symbol application.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(SymbolId, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn app(sym: SymbolId, args: Vec<Term>) -> Self {
        Term::App(sym, args)
    }

    pub fn constant(sym: SymbolId) -> Self {
        Term::App(sym, vec![])
    }

    pub fn tuple(args: Vec<Term>) -> Self {
        let n = args.len() as u32;
        Term::App(SymbolId::Tuple(n), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Ground and free of defined symbols, i.e. a value.
    pub fn is_value(&self, sig: &Signature) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(sym, args) => {
                (sym.is_tuple() || sig.is_constructor(*sym)) && args.iter().all(|a| a.is_value(sig))
            }
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    /// Variable names, in depth-first left-to-right order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.name) {
                    out.push(v.name.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// All positions of the term in depth-first pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                path.push(i + 1);
                a.collect_positions(path, out);
                path.pop();
            }
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, PositionError> {
        let mut cur = self;
        for &i in &pos.0 {
            match cur {
                Term::App(_, args) if i >= 1 && i <= args.len() => cur = &args[i - 1],
                _ => return Err(PositionError::Invalid(pos.clone())),
            }
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &Position, sub: Term) -> Result<Term, PositionError> {
        if pos.is_root() {
            return Ok(sub);
        }
        match self {
            Term::App(sym, args) => {
                let i = pos.0[0];
                if i < 1 || i > args.len() {
                    return Err(PositionError::Invalid(pos.clone()));
                }
                let mut new_args = args.clone();
                new_args[i - 1] = args[i - 1].replace_at(&Position(pos.0[1..].to_vec()), sub)?;
                Ok(Term::App(*sym, new_args))
            }
            Term::Var(_) => Err(PositionError::Invalid(pos.clone())),
        }
    }
}

/// A path from the root of a term, one 1-based child index per step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    /// True when `other` extends `self`, i.e. the subterm at `other` is
    /// contained in the subterm at `self`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ε")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PositionError {
    #[error("invalid position {0}")]
    Invalid(Position),
}

/// A finite mapping from variable names to terms, identity elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn singleton(name: impl Into<String>, t: Term) -> Self {
        let mut s = Substitution::new();
        s.bind(name, t);
        s
    }

    pub fn bind(&mut self, name: impl Into<String>, t: Term) {
        self.bindings.insert(name.into(), t);
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.get(name)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(&v.name) {
                Some(bound) => bound.clone(),
                None => t.clone(),
            },
            Term::App(sym, args) => Term::App(*sym, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// Disjoint union; fails on conflicting bindings for the same name.
    pub fn merge(&self, other: &Substitution) -> Option<Substitution> {
        let mut out = self.clone();
        for (k, v) in &other.bindings {
            match out.bindings.get(k) {
                Some(existing) if existing != v => return None,
                _ => {
                    out.bindings.insert(k.clone(), v.clone());
                }
            }
        }
        Some(out)
    }

    /// Restriction of the substitution to the given variable names.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Substitution {
        let mut out = Substitution::new();
        for n in names {
            if let Some(t) = self.bindings.get(n) {
                out.bind(n, t.clone());
            }
        }
        out
    }
}

/// Deterministic source of variable names that never collide with a
/// reserved set collected from the input problem.
#[derive(Debug, Clone, Default)]
pub struct FreshNamer {
    prefix: String,
    counter: u64,
    reserved: std::collections::HashSet<String>,
}

impl FreshNamer {
    pub fn new() -> Self {
        FreshNamer { prefix: "z".to_string(), counter: 0, reserved: Default::default() }
    }

    pub fn with_prefix(prefix: impl Into<String>) -> Self {
        FreshNamer { prefix: prefix.into(), ..FreshNamer::new() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(name.to_string());
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        for n in names {
            self.reserve(n);
        }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("{}{}", self.prefix, self.counter);
            if !self.reserved.contains(&name) {
                self.reserved.insert(name.clone());
                return name;
            }
        }
    }

    pub fn fresh_var(&mut self, sort: Option<SortId>) -> Var {
        Var { name: self.fresh(), sort }
    }
}
