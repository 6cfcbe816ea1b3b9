//! Problem-file parser.
//!
//! ```text
//! // sorts with their constructors
//! sort U = a | b | f(U,U);
//! // defined symbols
//! def phi : U,U -> U;
//! // the rule block, ordered or set
//! rules ordered
//!   phi(x, y@!a) -> y;
//!   phi(a+b, y) -> y;
//!   phi(f(x,y), z) -> x;
//! ```
//!
//! Pattern syntax: `!p` (anti-pattern), `p \ q` (complement), `p + q`
//! (sum), `x@p` (alias), `_|_` (empty), `<p,q>` (tuple), `//` comments.
//! `@` binds tighter than `\`, which binds tighter than `+`; `\` and `+`
//! associate to the left. Identifiers that are not declared symbols are
//! variables; a variable's sort is inferred from the position it occupies.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::pattern::Pattern;
use crate::rules::{ExtendedRule, Mode, RuleProgram};
use crate::signature::{Signature, SortId};
use crate::term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Semi,
    Pipe,
    Colon,
    At,
    Backslash,
    Plus,
    Bang,
    Eq,
    Arrow,
    Bottom,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Pipe => "`|`",
            Tok::Colon => "`:`",
            Tok::At => "`@`",
            Tok::Backslash => "`\\`",
            Tok::Plus => "`+`",
            Tok::Bang => "`!`",
            Tok::Eq => "`=`",
            Tok::Arrow => "`->`",
            Tok::Bottom => "`_|_`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek(0) {
                if c.is_ascii_whitespace() {
                    self.bump();
                } else if c == b'/' && self.peek(1) == Some(b'/') {
                    while let Some(c) = self.peek(0) {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek(0) else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            // the empty pattern `_|_` before general identifiers
            if c == b'_' && self.peek(1) == Some(b'|') && self.peek(2) == Some(b'_') {
                self.bump();
                self.bump();
                self.bump();
                out.push((Tok::Bottom, line, col));
                continue;
            }
            if c == b'-' && self.peek(1) == Some(b'>') {
                self.bump();
                self.bump();
                out.push((Tok::Arrow, line, col));
                continue;
            }
            let tok = match c {
                b'(' => Some(Tok::LParen),
                b')' => Some(Tok::RParen),
                b'<' => Some(Tok::Lt),
                b'>' => Some(Tok::Gt),
                b',' => Some(Tok::Comma),
                b';' => Some(Tok::Semi),
                b'|' => Some(Tok::Pipe),
                b':' => Some(Tok::Colon),
                b'@' => Some(Tok::At),
                b'\\' => Some(Tok::Backslash),
                b'+' => Some(Tok::Plus),
                b'!' => Some(Tok::Bang),
                b'=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = tok {
                self.bump();
                out.push((tok, line, col));
                continue;
            }
            if c.is_ascii_alphabetic() || c == b'_' {
                let start = self.pos;
                while let Some(c) = self.peek(0) {
                    if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                out.push((Tok::Ident(name), line, col));
                continue;
            }
            return Err(ParseError {
                line,
                col,
                message: format!("unexpected character `{}`", c as char),
            });
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    sig: Signature,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.at].1, self.toks[self.at].2)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected {what}, found {other}"))),
        }
    }

    fn sort_ref(&mut self) -> Result<SortId, ParseError> {
        let (line, col) = self.here();
        let name = self.ident("a sort name")?;
        self.sig.sort_id(&name).ok_or(ParseError {
            line,
            col,
            message: format!("unknown sort `{name}`"),
        })
    }

    fn file(&mut self) -> Result<RuleProgram, ParseError> {
        // declarations: constructors are collected first so sorts can refer
        // to each other, then resolved
        let mut pending_ctors: Vec<(SortId, String, Vec<String>, usize, usize)> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(kw) if kw == "sort" => {
                    self.bump();
                    let name = self.ident("a sort name")?;
                    let sort = self
                        .sig
                        .add_sort(&name)
                        .map_err(|e| self.err(e.to_string()))?;
                    self.expect(&Tok::Eq)?;
                    loop {
                        let (line, col) = self.here();
                        let cname = self.ident("a constructor name")?;
                        let mut args = Vec::new();
                        if *self.peek() == Tok::LParen {
                            self.bump();
                            loop {
                                args.push(self.ident("a sort name")?);
                                if *self.peek() == Tok::Comma {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                            self.expect(&Tok::RParen)?;
                        }
                        pending_ctors.push((sort, cname, args, line, col));
                        if *self.peek() == Tok::Pipe {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(&Tok::Semi)?;
                }
                Tok::Ident(kw) if kw == "def" => {
                    // constructors must exist before defined symbols
                    self.flush_ctors(&mut pending_ctors)?;
                    self.bump();
                    let name = self.ident("a defined symbol name")?;
                    self.expect(&Tok::Colon)?;
                    let mut args = vec![self.sort_ref()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.sort_ref()?);
                    }
                    self.expect(&Tok::Arrow)?;
                    let result = self.sort_ref()?;
                    self.sig
                        .add_defined(&name, args, result)
                        .map_err(|e| self.err(e.to_string()))?;
                    self.expect(&Tok::Semi)?;
                }
                Tok::Ident(kw) if kw == "rules" => {
                    self.flush_ctors(&mut pending_ctors)?;
                    return self.rules_block();
                }
                other => {
                    return Err(self.err(format!(
                        "expected `sort`, `def` or `rules`, found {other}"
                    )))
                }
            }
        }
    }

    fn flush_ctors(
        &mut self,
        pending: &mut Vec<(SortId, String, Vec<String>, usize, usize)>,
    ) -> Result<(), ParseError> {
        for (sort, name, args, line, col) in pending.drain(..) {
            let mut arg_ids = Vec::with_capacity(args.len());
            for a in &args {
                let id = self.sig.sort_id(a).ok_or(ParseError {
                    line,
                    col,
                    message: format!("unknown sort `{a}` in constructor `{name}`"),
                })?;
                arg_ids.push(id);
            }
            self.sig
                .add_constructor(&name, arg_ids, sort)
                .map_err(|e| ParseError { line, col, message: e.to_string() })?;
        }
        Ok(())
    }

    fn rules_block(&mut self) -> Result<RuleProgram, ParseError> {
        self.expect(&Tok::Ident("rules".into()))?;
        let mode = match self.peek().clone() {
            Tok::Ident(m) if m == "ordered" => Mode::Ordered,
            Tok::Ident(m) if m == "set" => Mode::Set,
            other => return Err(self.err(format!("expected `ordered` or `set`, found {other}"))),
        };
        self.bump();
        if let Err(e) = self.sig.check_inhabited() {
            return Err(self.err(e.to_string()));
        }
        let mut rules = Vec::new();
        loop {
            if *self.peek() == Tok::Eof {
                break;
            }
            let rule = self.rule(rules.len() + 1)?;
            rules.push(rule);
            self.expect(&Tok::Semi)?;
        }
        if rules.is_empty() {
            return Err(self.err("a rules block needs at least one rule"));
        }
        Ok(RuleProgram { signature: std::mem::take(&mut self.sig), mode, rules })
    }

    fn rule(&mut self, index: usize) -> Result<ExtendedRule, ParseError> {
        let (line, col) = self.here();
        let name = self.ident("a defined symbol")?;
        let head = self.sig.symbol_id(&name).filter(|&s| self.sig.is_defined(s)).ok_or(
            ParseError { line, col, message: format!("`{name}` is not a defined symbol") },
        )?;
        let arg_sorts = self.sig.arg_sorts(head).expect("defined symbol").to_vec();
        self.expect(&Tok::LParen)?;
        let mut vars: HashMap<String, SortId> = HashMap::new();
        let mut lhs = Vec::new();
        loop {
            let expected = arg_sorts.get(lhs.len()).copied();
            lhs.push(self.pattern(expected, &mut vars)?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(&Tok::RParen)?;
        self.expect(&Tok::Arrow)?;
        let result_sort = self.sig.result_sort(head);
        let rhs = self.term(result_sort, &mut vars)?;
        Ok(ExtendedRule { head, lhs, rhs, source_index: index })
    }

    /// pat := sum; sum := diff ("+" diff)*
    fn pattern(
        &mut self,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
    ) -> Result<Pattern, ParseError> {
        let mut acc = self.diff(expected, vars)?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.diff(expected, vars)?;
            acc = Pattern::plus(acc, rhs);
        }
        Ok(acc)
    }

    /// diff := atpat ("\" atpat)*
    fn diff(
        &mut self,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
    ) -> Result<Pattern, ParseError> {
        let mut acc = self.atpat(expected, vars)?;
        while *self.peek() == Tok::Backslash {
            self.bump();
            let rhs = self.atpat(expected, vars)?;
            acc = Pattern::minus(acc, rhs);
        }
        Ok(acc)
    }

    /// atpat := ID "@" atpat | base
    fn atpat(
        &mut self,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
    ) -> Result<Pattern, ParseError> {
        if let Tok::Ident(name) = self.peek().clone() {
            if self.toks.get(self.at + 1).map(|t| &t.0) == Some(&Tok::At) {
                let (line, col) = self.here();
                if self.sig.symbol_id(&name).is_some() {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("alias `{name}` collides with a declared symbol"),
                    });
                }
                self.bump();
                self.bump();
                let var = self.bind_var(name, expected, vars, line, col)?;
                let body = self.atpat(expected, vars)?;
                return Ok(Pattern::Alias(var, Box::new(body)));
            }
        }
        self.base(expected, vars)
    }

    /// base := "_|_" | "!" base | ID | ID "(" pat,* ")" | "<" pat,* ">" | "(" pat ")"
    fn base(
        &mut self,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
    ) -> Result<Pattern, ParseError> {
        match self.peek().clone() {
            Tok::Bottom => {
                self.bump();
                Ok(Pattern::Bottom)
            }
            Tok::Bang => {
                self.bump();
                Ok(Pattern::anti(self.base(expected, vars)?))
            }
            Tok::LParen => {
                self.bump();
                let p = self.pattern(expected, vars)?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            Tok::Lt => {
                self.bump();
                let mut args = Vec::new();
                loop {
                    args.push(self.pattern(None, vars)?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(&Tok::Gt)?;
                Ok(Pattern::tuple(args))
            }
            Tok::Ident(name) => {
                let (line, col) = self.here();
                self.bump();
                match self.sig.symbol_id(&name) {
                    Some(sym) => {
                        if self.sig.is_defined(sym) {
                            return Err(ParseError {
                                line,
                                col,
                                message: format!("defined symbol `{name}` in a pattern"),
                            });
                        }
                        let arg_sorts = self.sig.arg_sorts(sym).expect("declared").to_vec();
                        let args = if *self.peek() == Tok::LParen {
                            self.bump();
                            let mut args = Vec::new();
                            loop {
                                let want = arg_sorts.get(args.len()).copied();
                                args.push(self.pattern(want, vars)?);
                                if *self.peek() == Tok::Comma {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                            self.expect(&Tok::RParen)?;
                            args
                        } else {
                            Vec::new()
                        };
                        if args.len() != arg_sorts.len() {
                            return Err(ParseError {
                                line,
                                col,
                                message: format!(
                                    "constructor `{name}` expects {} arguments, got {}",
                                    arg_sorts.len(),
                                    args.len()
                                ),
                            });
                        }
                        Ok(Pattern::App(sym, args))
                    }
                    None => {
                        if *self.peek() == Tok::LParen {
                            return Err(ParseError {
                                line,
                                col,
                                message: format!("unknown symbol `{name}`"),
                            });
                        }
                        let var = self.bind_var(name, expected, vars, line, col)?;
                        Ok(Pattern::Var(var))
                    }
                }
            }
            other => Err(self.err(format!("expected a pattern, found {other}"))),
        }
    }

    /// Record a variable occurrence, inferring its sort from the expected
    /// sort of the position. Conflicting sorts for one name are an error.
    fn bind_var(
        &mut self,
        name: String,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
        line: usize,
        col: usize,
    ) -> Result<Var, ParseError> {
        match (vars.get(&name).copied(), expected) {
            (Some(prev), Some(want)) if prev != want => Err(ParseError {
                line,
                col,
                message: format!(
                    "variable `{name}` used at sort `{}` and sort `{}`",
                    self.sig.sort_name(prev),
                    self.sig.sort_name(want)
                ),
            }),
            (Some(prev), _) => Ok(Var::sorted(name, prev)),
            (None, Some(want)) => {
                vars.insert(name.clone(), want);
                Ok(Var::sorted(name, want))
            }
            (None, None) => Err(ParseError {
                line,
                col,
                message: format!("cannot infer the sort of variable `{name}`"),
            }),
        }
    }

    /// term := ID | ID "(" term,* ")"
    fn term(
        &mut self,
        expected: Option<SortId>,
        vars: &mut HashMap<String, SortId>,
    ) -> Result<Term, ParseError> {
        let (line, col) = self.here();
        let name = self.ident("a term")?;
        match self.sig.symbol_id(&name) {
            Some(sym) => {
                let arg_sorts = self.sig.arg_sorts(sym).expect("declared").to_vec();
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    loop {
                        let want = arg_sorts.get(args.len()).copied();
                        args.push(self.term(want, vars)?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen)?;
                    args
                } else {
                    Vec::new()
                };
                if args.len() != arg_sorts.len() {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!(
                            "symbol `{name}` expects {} arguments, got {}",
                            arg_sorts.len(),
                            args.len()
                        ),
                    });
                }
                Ok(Term::App(sym, args))
            }
            None => {
                if *self.peek() == Tok::LParen {
                    return Err(ParseError { line, col, message: format!("unknown symbol `{name}`") });
                }
                let var = self.bind_var(name, expected, vars, line, col)?;
                Ok(Term::Var(var))
            }
        }
    }
}

/// Parse a whole problem file. Well-formedness beyond syntax and sorts
/// (linearity, matchable variables) is the job of
/// [`crate::rules::validate`].
pub fn parse_program(text: &str) -> Result<RuleProgram, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser { toks, at: 0, sig: Signature::new() };
    let prog = parser.file()?;
    Ok(prog)
}

/// Parse a single pattern against an existing signature. Variable sorts are
/// inferred where the position determines them; tuple components and bare
/// variables at the top stay unsorted unless `expected` pins them.
pub fn parse_pattern(
    sig: &Signature,
    text: &str,
    expected: Option<SortId>,
) -> Result<Pattern, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser { toks, at: 0, sig: sig.clone() };
    let mut vars = HashMap::new();
    // bare variables without context are fine here: default their sort when
    // the signature is mono-sorted
    let expected = expected.or_else(|| {
        if sig.sort_count() == 1 {
            sig.sorts().next()
        } else {
            None
        }
    });
    let p = parser.pattern(expected, &mut vars)?;
    parser.expect(&Tok::Eof)?;
    Ok(p)
}
