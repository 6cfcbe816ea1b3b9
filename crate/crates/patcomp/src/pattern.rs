//! Extended patterns and the variable calculus on them.
//!
//! The pattern grammar covers plain constructor patterns plus the extended
//! forms: sums `p + q`, relative complements `p \ q`, the empty pattern
//! `_|_`, aliases `x@p` and anti-patterns `!p`. All patterns handled here
//! are linear; [`check_linear`] reports the offending variable and both
//! positions when they are not.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::signature::{Shape, Signature, SymbolId};
use crate::term::{Position, PositionError, Substitution, Term, Var};

/// An extended pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Var(Var),
    /// Constructor or tuple application.
    App(SymbolId, Vec<Pattern>),
    /// `p + q`: matches whatever either side matches.
    Plus(Box<Pattern>, Box<Pattern>),
    /// `p \ q`: matches whatever `p` matches except what `q` matches.
    Minus(Box<Pattern>, Box<Pattern>),
    /// `_|_`: matches nothing.
    Bottom,
    /// `x@p`: matches what `p` matches, binding the value to `x` as well.
    Alias(Var, Box<Pattern>),
    /// `!p`: matches whatever `p` does not. Sugar, eliminated before
    /// normalization.
    Anti(Box<Pattern>),
}

impl Pattern {
    pub fn var(name: impl Into<String>) -> Self {
        Pattern::Var(Var::new(name))
    }

    pub fn app(sym: SymbolId, args: Vec<Pattern>) -> Self {
        Pattern::App(sym, args)
    }

    pub fn constant(sym: SymbolId) -> Self {
        Pattern::App(sym, vec![])
    }

    pub fn tuple(args: Vec<Pattern>) -> Self {
        let n = args.len() as u32;
        Pattern::App(SymbolId::Tuple(n), args)
    }

    pub fn plus(l: Pattern, r: Pattern) -> Self {
        Pattern::Plus(Box::new(l), Box::new(r))
    }

    pub fn minus(l: Pattern, r: Pattern) -> Self {
        Pattern::Minus(Box::new(l), Box::new(r))
    }

    pub fn alias(v: Var, p: Pattern) -> Self {
        Pattern::Alias(v, Box::new(p))
    }

    pub fn anti(p: Pattern) -> Self {
        Pattern::Anti(Box::new(p))
    }

    /// Left-associated sum of the given patterns; `_|_` when empty.
    pub fn sum(mut ps: Vec<Pattern>) -> Self {
        if ps.is_empty() {
            return Pattern::Bottom;
        }
        let first = ps.remove(0);
        ps.into_iter().fold(first, Pattern::plus)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Pattern::Var(_))
    }

    /// Only variables, constructor/tuple applications: the patterns a plain
    /// CTRS accepts.
    pub fn is_constructor_pattern(&self) -> bool {
        match self {
            Pattern::Var(_) => true,
            Pattern::App(_, args) => args.iter().all(Pattern::is_constructor_pattern),
            _ => false,
        }
    }

    /// Constructor pattern possibly containing variable aliases.
    pub fn is_aliased_constructor_pattern(&self) -> bool {
        match self {
            Pattern::Var(_) => true,
            Pattern::App(_, args) => args.iter().all(Pattern::is_aliased_constructor_pattern),
            Pattern::Alias(_, body) => {
                // alias chains are rejected: the body must not itself be an alias
                !matches!(body.as_ref(), Pattern::Alias(..)) && body.is_aliased_constructor_pattern()
            }
            _ => false,
        }
    }

    /// Contains no complement.
    pub fn is_additive(&self) -> bool {
        match self {
            Pattern::Var(_) | Pattern::Bottom => true,
            Pattern::App(_, args) => args.iter().all(Pattern::is_additive),
            Pattern::Plus(l, r) => l.is_additive() && r.is_additive(),
            Pattern::Alias(_, p) => p.is_additive(),
            Pattern::Minus(..) | Pattern::Anti(_) => false,
        }
    }

    /// Additive and free of `_|_`.
    pub fn is_pure_additive(&self) -> bool {
        self.is_additive() && !self.contains_bottom()
    }

    pub fn contains_bottom(&self) -> bool {
        match self {
            Pattern::Bottom => true,
            Pattern::Var(_) => false,
            Pattern::App(_, args) => args.iter().any(Pattern::contains_bottom),
            Pattern::Plus(l, r) | Pattern::Minus(l, r) => l.contains_bottom() || r.contains_bottom(),
            Pattern::Alias(_, p) | Pattern::Anti(p) => p.contains_bottom(),
        }
    }

    pub fn contains_anti(&self) -> bool {
        match self {
            Pattern::Anti(_) => true,
            Pattern::Var(_) | Pattern::Bottom => false,
            Pattern::App(_, args) => args.iter().any(Pattern::contains_anti),
            Pattern::Plus(l, r) | Pattern::Minus(l, r) => l.contains_anti() || r.contains_anti(),
            Pattern::Alias(_, p) => p.contains_anti(),
        }
    }

    pub fn contains_alias(&self) -> bool {
        match self {
            Pattern::Alias(..) => true,
            Pattern::Var(_) | Pattern::Bottom => false,
            Pattern::App(_, args) => args.iter().any(Pattern::contains_alias),
            Pattern::Plus(l, r) | Pattern::Minus(l, r) => l.contains_alias() || r.contains_alias(),
            Pattern::Anti(p) => p.contains_alias(),
        }
    }

    /// All variable names, in depth-first left-to-right order; alias
    /// variables come before the variables of their body.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Var(v) => {
                if !out.contains(&v.name) {
                    out.push(v.name.clone());
                }
            }
            Pattern::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
            Pattern::Plus(l, r) | Pattern::Minus(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Pattern::Bottom => {}
            Pattern::Alias(v, p) => {
                if !out.contains(&v.name) {
                    out.push(v.name.clone());
                }
                p.collect_vars(out);
            }
            Pattern::Anti(p) => p.collect_vars(out),
        }
    }

    /// Rename variables according to the map; unmapped names are kept.
    pub fn rename(&self, map: &HashMap<String, String>) -> Pattern {
        let ren = |v: &Var| Var {
            name: map.get(&v.name).cloned().unwrap_or_else(|| v.name.clone()),
            sort: v.sort,
        };
        match self {
            Pattern::Var(v) => Pattern::Var(ren(v)),
            Pattern::App(sym, args) => Pattern::App(*sym, args.iter().map(|a| a.rename(map)).collect()),
            Pattern::Plus(l, r) => Pattern::plus(l.rename(map), r.rename(map)),
            Pattern::Minus(l, r) => Pattern::minus(l.rename(map), r.rename(map)),
            Pattern::Bottom => Pattern::Bottom,
            Pattern::Alias(v, p) => Pattern::Alias(ren(v), Box::new(p.rename(map))),
            Pattern::Anti(p) => Pattern::anti(p.rename(map)),
        }
    }

    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        let children = self.children();
        for (i, c) in children.iter().enumerate() {
            path.push(i + 1);
            c.collect_positions(path, out);
            path.pop();
        }
    }

    fn children(&self) -> Vec<&Pattern> {
        match self {
            Pattern::Var(_) | Pattern::Bottom => vec![],
            Pattern::App(_, args) => args.iter().collect(),
            Pattern::Plus(l, r) | Pattern::Minus(l, r) => vec![l, r],
            Pattern::Alias(_, p) | Pattern::Anti(p) => vec![p],
        }
    }

    pub fn subpattern_at(&self, pos: &Position) -> Result<&Pattern, PositionError> {
        let mut cur = self;
        for &i in &pos.0 {
            let children = cur.children();
            if i < 1 || i > children.len() {
                return Err(PositionError::Invalid(pos.clone()));
            }
            cur = children[i - 1];
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &Position, sub: Pattern) -> Result<Pattern, PositionError> {
        if pos.is_root() {
            return Ok(sub);
        }
        let i = pos.0[0];
        let rest = Position(pos.0[1..].to_vec());
        let bad = || PositionError::Invalid(pos.clone());
        match self {
            Pattern::App(sym, args) => {
                if i < 1 || i > args.len() {
                    return Err(bad());
                }
                let mut new_args = args.clone();
                new_args[i - 1] = args[i - 1].replace_at(&rest, sub)?;
                Ok(Pattern::App(*sym, new_args))
            }
            Pattern::Plus(l, r) => match i {
                1 => Ok(Pattern::plus(l.replace_at(&rest, sub)?, (**r).clone())),
                2 => Ok(Pattern::plus((**l).clone(), r.replace_at(&rest, sub)?)),
                _ => Err(bad()),
            },
            Pattern::Minus(l, r) => match i {
                1 => Ok(Pattern::minus(l.replace_at(&rest, sub)?, (**r).clone())),
                2 => Ok(Pattern::minus((**l).clone(), r.replace_at(&rest, sub)?)),
                _ => Err(bad()),
            },
            Pattern::Alias(v, p) => {
                if i != 1 {
                    return Err(bad());
                }
                Ok(Pattern::Alias(v.clone(), Box::new(p.replace_at(&rest, sub)?)))
            }
            Pattern::Anti(p) => {
                if i != 1 {
                    return Err(bad());
                }
                Ok(Pattern::anti(p.replace_at(&rest, sub)?))
            }
            Pattern::Var(_) | Pattern::Bottom => Err(bad()),
        }
    }
}

/// A set of variable names, or the set of all variables.
///
/// The universal case exists because the matchable variables of `_|_` are
/// all variables; keeping it symbolic means unions and intersections stay
/// proportional to the finite side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarSet {
    Universal,
    Finite(BTreeSet<String>),
}

impl VarSet {
    pub fn empty() -> Self {
        VarSet::Finite(BTreeSet::new())
    }

    pub fn singleton(name: impl Into<String>) -> Self {
        let mut s = BTreeSet::new();
        s.insert(name.into());
        VarSet::Finite(s)
    }

    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Self {
        VarSet::Finite(names.into_iter().collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        match self {
            VarSet::Universal => true,
            VarSet::Finite(s) => s.contains(name),
        }
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        match (self, other) {
            (VarSet::Universal, _) | (_, VarSet::Universal) => VarSet::Universal,
            (VarSet::Finite(a), VarSet::Finite(b)) => VarSet::Finite(a.union(b).cloned().collect()),
        }
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        match (self, other) {
            (VarSet::Universal, s) | (s, VarSet::Universal) => s.clone(),
            (VarSet::Finite(a), VarSet::Finite(b)) => {
                VarSet::Finite(a.intersection(b).cloned().collect())
            }
        }
    }

    /// The finite names, if the set is finite.
    pub fn names(&self) -> Option<&BTreeSet<String>> {
        match self {
            VarSet::Universal => None,
            VarSet::Finite(s) => Some(s),
        }
    }

    /// True when the set is finite and a subset of `other`.
    pub fn is_subset(&self, other: &VarSet) -> bool {
        match (self, other) {
            (_, VarSet::Universal) => true,
            (VarSet::Universal, VarSet::Finite(_)) => false,
            (VarSet::Finite(a), VarSet::Finite(b)) => a.is_subset(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("anti-pattern still present; eliminate it first")]
    AntiPresent,
    #[error("variable `{name}` occurs at {first} and {second}")]
    NonLinear { name: String, first: Position, second: Position },
}

/// Linearity check: `Ok(())`, or the variable that occurs twice along with
/// both positions.
pub fn check_linear(p: &Pattern) -> Result<(), PatternError> {
    let mut seen: HashMap<String, Position> = HashMap::new();
    check_linear_rec(p, &mut Vec::new(), &mut seen)
}

/// Joint linearity of a sequence of patterns (an argument tuple): variable
/// occurrences are tracked across all of them. Positions are reported as if
/// the patterns were the children of a tuple at the root.
pub fn check_linear_all(ps: &[Pattern]) -> Result<(), PatternError> {
    let mut seen: HashMap<String, Position> = HashMap::new();
    for (i, p) in ps.iter().enumerate() {
        check_linear_rec(p, &mut vec![i + 1], &mut seen)?;
    }
    Ok(())
}

fn check_linear_rec(
    p: &Pattern,
    path: &mut Vec<usize>,
    seen: &mut HashMap<String, Position>,
) -> Result<(), PatternError> {
    let mut record = |name: &str, path: &[usize]| -> Result<(), PatternError> {
        let here = Position(path.to_vec());
        if let Some(first) = seen.get(name) {
            return Err(PatternError::NonLinear {
                name: name.to_string(),
                first: first.clone(),
                second: here,
            });
        }
        seen.insert(name.to_string(), here);
        Ok(())
    };
    match p {
        Pattern::Var(v) => record(&v.name, path),
        Pattern::Bottom => Ok(()),
        Pattern::Alias(v, body) => {
            record(&v.name, path)?;
            path.push(1);
            let r = check_linear_rec(body, path, seen);
            path.pop();
            r
        }
        Pattern::Anti(body) => {
            path.push(1);
            let r = check_linear_rec(body, path, seen);
            path.pop();
            r
        }
        Pattern::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i + 1);
                let r = check_linear_rec(a, path, seen);
                path.pop();
                r?;
            }
            Ok(())
        }
        Pattern::Plus(l, r) | Pattern::Minus(l, r) => {
            path.push(1);
            let rl = check_linear_rec(l, path, seen);
            path.pop();
            rl?;
            path.push(2);
            let rr = check_linear_rec(r, path, seen);
            path.pop();
            rr
        }
    }
}

/// The variables a successful match is guaranteed to bind.
///
/// Sums keep only the variables common to both branches, a complement binds
/// only on its left side, and `_|_` yields the universal set. Anti-patterns
/// must be eliminated first.
pub fn matchable_vars(p: &Pattern) -> Result<VarSet, PatternError> {
    match p {
        Pattern::Var(v) => Ok(VarSet::singleton(v.name.clone())),
        Pattern::App(_, args) => {
            let mut acc = VarSet::empty();
            for a in args {
                acc = acc.union(&matchable_vars(a)?);
            }
            Ok(acc)
        }
        Pattern::Plus(l, r) => Ok(matchable_vars(l)?.intersection(&matchable_vars(r)?)),
        Pattern::Minus(l, _) => matchable_vars(l),
        Pattern::Bottom => Ok(VarSet::Universal),
        Pattern::Alias(v, body) => Ok(VarSet::singleton(v.name.clone()).union(&matchable_vars(body)?)),
        Pattern::Anti(_) => Err(PatternError::AntiPresent),
    }
}

/// Matchable variables of an argument tuple: the union over components.
pub fn matchable_vars_all(ps: &[Pattern]) -> Result<VarSet, PatternError> {
    let mut acc = VarSet::empty();
    for p in ps {
        acc = acc.union(&matchable_vars(p)?);
    }
    Ok(acc)
}

/// The variables that are not matchable: `var(p) \ mvar(p)`.
pub fn free_vars(p: &Pattern) -> Result<BTreeSet<String>, PatternError> {
    let mv = matchable_vars(p)?;
    Ok(p.vars().into_iter().filter(|v| !mv.contains(v)).collect())
}

/// Match a constructor pattern against a value, producing the witnessing
/// substitution over exactly `var(p)`.
pub fn match_constructor(p: &Pattern, v: &Term) -> Option<Substitution> {
    match (p, v) {
        (Pattern::Var(x), _) => Some(Substitution::singleton(x.name.clone(), v.clone())),
        (Pattern::App(f, ps), Term::App(g, vs)) if f == g && ps.len() == vs.len() => {
            let mut acc = Substitution::new();
            for (pi, vi) in ps.iter().zip(vs) {
                let s = match_constructor(pi, vi)?;
                // patterns are linear, so the merge never conflicts
                acc = acc.merge(&s)?;
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Decide whether a value belongs to the ground semantics of an anti-free
/// extended pattern.
pub fn match_extended(p: &Pattern, v: &Term) -> bool {
    match p {
        Pattern::Var(_) => true,
        Pattern::App(f, ps) => match v {
            Term::App(g, vs) => f == g && ps.len() == vs.len() && ps.iter().zip(vs).all(|(pi, vi)| match_extended(pi, vi)),
            Term::Var(_) => false,
        },
        Pattern::Plus(l, r) => match_extended(l, v) || match_extended(r, v),
        Pattern::Minus(l, r) => match_extended(l, v) && !match_extended(r, v),
        Pattern::Bottom => false,
        Pattern::Alias(_, body) => match_extended(body, v),
        Pattern::Anti(_) => panic!("match_extended on anti-pattern; eliminate it first"),
    }
}

/// Canonical renaming: variables renumbered `v1, v2, ...` in depth-first
/// left-to-right order, sort annotations erased. Two patterns are
/// alpha-equivalent exactly when their canonical forms are equal.
pub fn canonicalize(p: &Pattern) -> Pattern {
    let vars = p.vars();
    let map: HashMap<String, String> =
        vars.into_iter().enumerate().map(|(i, v)| (v, format!("v{}", i + 1))).collect();
    erase_sorts(&p.rename(&map))
}

fn erase_sorts(p: &Pattern) -> Pattern {
    let bare = |v: &Var| Var::new(v.name.clone());
    match p {
        Pattern::Var(v) => Pattern::Var(bare(v)),
        Pattern::App(sym, args) => Pattern::App(*sym, args.iter().map(erase_sorts).collect()),
        Pattern::Plus(l, r) => Pattern::plus(erase_sorts(l), erase_sorts(r)),
        Pattern::Minus(l, r) => Pattern::minus(erase_sorts(l), erase_sorts(r)),
        Pattern::Bottom => Pattern::Bottom,
        Pattern::Alias(v, body) => Pattern::Alias(bare(v), Box::new(erase_sorts(body))),
        Pattern::Anti(body) => Pattern::anti(erase_sorts(body)),
    }
}

pub fn alpha_eq(p: &Pattern, q: &Pattern) -> bool {
    canonicalize(p) == canonicalize(q)
}

/// Alpha-equivalence of summand sets: equal multisets of canonicalized
/// patterns, ignoring order.
pub fn alpha_eq_sets(ps: &[Pattern], qs: &[Pattern]) -> bool {
    if ps.len() != qs.len() {
        return false;
    }
    let mut a: Vec<Pattern> = ps.iter().map(canonicalize).collect();
    let mut b: Vec<Pattern> = qs.iter().map(canonicalize).collect();
    a.sort();
    b.sort();
    a == b
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    Arity { symbol: String, expected: usize, got: usize },
    #[error("argument {index} of `{symbol}` has sort `{got}`, expected `{expected}`")]
    ArgSort { symbol: String, index: usize, expected: String, got: String },
    #[error("variable `{0}` used at two different sorts")]
    VarSort(String),
    #[error("sides of `{0}` have different shapes")]
    ShapeMismatch(&'static str),
    #[error("tuple pattern not allowed in this position")]
    NestedTuple,
    #[error("defined symbol `{0}` not allowed in a pattern")]
    DefinedInPattern(String),
}

/// Compute the shape of a pattern and check it is well-sorted against the
/// signature. Unknown-sort variables are accepted; `_|_` takes any shape.
pub fn pattern_shape(sig: &Signature, p: &Pattern) -> Result<Option<Shape>, SortError> {
    match p {
        Pattern::Var(v) => Ok(v.sort.map(Shape::Sort)),
        Pattern::Bottom => Ok(None),
        Pattern::App(SymbolId::Tuple(n), args) => {
            if args.len() != *n as usize {
                return Err(SortError::Arity {
                    symbol: "<tuple>".into(),
                    expected: *n as usize,
                    got: args.len(),
                });
            }
            let mut sorts = Vec::with_capacity(args.len());
            for a in args {
                match pattern_shape(sig, a)? {
                    Some(Shape::Sort(s)) => sorts.push(s),
                    Some(Shape::Tuple(_)) => return Err(SortError::NestedTuple),
                    // component sort unknown: give up on the tuple shape
                    None => return Ok(None),
                }
            }
            Ok(Some(Shape::Tuple(sorts)))
        }
        Pattern::App(sym, args) => {
            if sig.is_defined(*sym) {
                return Err(SortError::DefinedInPattern(sig.symbol_name(*sym).to_string()));
            }
            let expected = sig.arg_sorts(*sym).expect("declared symbol");
            if args.len() != expected.len() {
                return Err(SortError::Arity {
                    symbol: sig.symbol_name(*sym).to_string(),
                    expected: expected.len(),
                    got: args.len(),
                });
            }
            for (i, (a, &want)) in args.iter().zip(expected).enumerate() {
                match pattern_shape(sig, a)? {
                    Some(Shape::Sort(got)) if got != want => {
                        return Err(SortError::ArgSort {
                            symbol: sig.symbol_name(*sym).to_string(),
                            index: i + 1,
                            expected: sig.sort_name(want).to_string(),
                            got: sig.sort_name(got).to_string(),
                        })
                    }
                    Some(Shape::Tuple(_)) => return Err(SortError::NestedTuple),
                    _ => {}
                }
            }
            Ok(Some(Shape::Sort(sig.result_sort(*sym).expect("declared symbol"))))
        }
        Pattern::Plus(l, r) | Pattern::Minus(l, r) => {
            let which = if matches!(p, Pattern::Plus(..)) { "+" } else { "\\" };
            let ls = pattern_shape(sig, l)?;
            let rs = pattern_shape(sig, r)?;
            match (ls, rs) {
                (Some(a), Some(b)) if a != b => Err(SortError::ShapeMismatch(if which == "+" {
                    "+"
                } else {
                    "\\"
                })),
                (a, b) => Ok(a.or(b)),
            }
        }
        Pattern::Alias(v, body) => {
            let bs = pattern_shape(sig, body)?;
            match (v.sort.map(Shape::Sort), bs) {
                (Some(a), Some(b)) if a != b => Err(SortError::ShapeMismatch("@")),
                (a, b) => Ok(a.or(b)),
            }
        }
        Pattern::Anti(body) => pattern_shape(sig, body),
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarSet::Universal => write!(f, "ALL"),
            VarSet::Finite(s) => {
                write!(f, "{{")?;
                for (i, n) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
