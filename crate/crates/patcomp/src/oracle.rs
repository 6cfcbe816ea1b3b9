//! Brute-force ground semantics over a depth-bounded value universe.
//!
//! The universe of a sort is infinite in general; everything here works on
//! the finite set of values of height at most `depth`. Equality at a given
//! depth therefore refutes semantic equality but never proves it: these
//! functions are falsifiers for the exact decision procedures, not
//! verifiers.

use thiserror::Error;

use crate::pattern::{match_extended, Pattern};
use crate::signature::{Shape, Signature, SortId};
use crate::term::Term;

/// Default enumeration depth; enough to separate every pattern the worked
/// examples in this crate use.
pub const DEFAULT_DEPTH: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("sort `{sort}` has no value of height <= {depth}")]
    EmptySort { sort: String, depth: usize },
    #[error("cannot determine the shape of the pattern")]
    UnknownShape,
}

/// The values of one sort (or one tuple shape) up to a height bound,
/// duplicate-free, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTermSet {
    pub shape: Shape,
    pub depth: usize,
    pub terms: Vec<Term>,
}

impl GroundTermSet {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }
}

/// All ground constructor terms of `sort` with height at most `depth`,
/// ordered by constructor declaration order and then recursively by
/// argument order.
pub fn enumerate(sig: &Signature, sort: SortId, depth: usize) -> Result<GroundTermSet, OracleError> {
    assert!(depth >= 1, "depth must be at least 1");
    let terms = enumerate_terms(sig, sort, depth);
    if terms.is_empty() {
        return Err(OracleError::EmptySort {
            sort: sig.sort_name(sort).to_string(),
            depth,
        });
    }
    Ok(GroundTermSet { shape: Shape::Sort(sort), depth, terms })
}

fn enumerate_terms(sig: &Signature, sort: SortId, depth: usize) -> Vec<Term> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for c in sig.constructors_of_sort(sort) {
        let arg_sorts = sig.arg_sorts(c).expect("constructor");
        if arg_sorts.is_empty() {
            out.push(Term::constant(c));
            continue;
        }
        let arg_sets: Vec<Vec<Term>> =
            arg_sorts.iter().map(|&s| enumerate_terms(sig, s, depth - 1)).collect();
        if arg_sets.iter().any(Vec::is_empty) {
            continue;
        }
        for combo in cartesian(&arg_sets) {
            out.push(Term::App(c, combo));
        }
    }
    out
}

/// Values of a tuple shape: the componentwise product, each component
/// bounded by the same depth.
pub fn enumerate_shape(sig: &Signature, shape: &Shape, depth: usize) -> Result<GroundTermSet, OracleError> {
    match shape {
        Shape::Sort(s) => enumerate(sig, *s, depth),
        Shape::Tuple(sorts) => {
            let mut comps = Vec::with_capacity(sorts.len());
            for &s in sorts {
                comps.push(enumerate(sig, s, depth)?.terms);
            }
            let terms = cartesian(&comps).into_iter().map(Term::tuple).collect();
            Ok(GroundTermSet { shape: shape.clone(), depth, terms })
        }
    }
}

fn cartesian(sets: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for t in set {
                let mut row = prefix.clone();
                row.push(t.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Determine the universe a pattern ranges over. This is deliberately more
/// lenient than the well-sortedness check: patterns produced without the
/// sorted encoding may contain ill-sorted subterms, which simply denote the
/// empty set over the well-sorted universe.
pub(crate) fn shape_of(sig: &Signature, p: &Pattern) -> Result<Shape, OracleError> {
    if let Some(shape) = root_shape(sig, p) {
        return Ok(shape);
    }
    if sig.sort_count() == 1 {
        let u = sig.sorts().next().expect("one sort");
        return Ok(match structural_width(p) {
            1 => Shape::Sort(u),
            n => Shape::Tuple(vec![u; n]),
        });
    }
    Err(OracleError::UnknownShape)
}

fn root_shape(sig: &Signature, p: &Pattern) -> Option<Shape> {
    match p {
        Pattern::Var(v) => v.sort.map(Shape::Sort),
        Pattern::Bottom => None,
        Pattern::App(crate::signature::SymbolId::Tuple(_), args) => {
            let mut sorts = Vec::with_capacity(args.len());
            for a in args {
                match root_shape(sig, a)? {
                    Shape::Sort(s) => sorts.push(s),
                    Shape::Tuple(_) => return None,
                }
            }
            Some(Shape::Tuple(sorts))
        }
        Pattern::App(sym, _) => sig.result_sort(*sym).map(Shape::Sort),
        Pattern::Plus(l, r) | Pattern::Minus(l, r) => {
            root_shape(sig, l).or_else(|| root_shape(sig, r))
        }
        Pattern::Alias(v, body) => v.sort.map(Shape::Sort).or_else(|| root_shape(sig, body)),
        Pattern::Anti(body) => root_shape(sig, body),
    }
}

fn structural_width(p: &Pattern) -> usize {
    match p {
        Pattern::App(crate::signature::SymbolId::Tuple(n), _) => *n as usize,
        Pattern::Plus(l, r) | Pattern::Minus(l, r) => {
            let w = structural_width(l);
            if w != 1 {
                w
            } else {
                structural_width(r)
            }
        }
        Pattern::Alias(_, body) | Pattern::Anti(body) => structural_width(body),
        _ => 1,
    }
}

/// The depth-truncated ground semantics of an anti-free pattern: the
/// enumerated universe filtered through the instance relation.
pub fn oracle_semantics(sig: &Signature, p: &Pattern, depth: usize) -> Result<GroundTermSet, OracleError> {
    let shape = shape_of(sig, p)?;
    let universe = enumerate_shape(sig, &shape, depth)?;
    let terms = universe.terms.into_iter().filter(|v| match_extended(p, v)).collect();
    Ok(GroundTermSet { shape, depth, terms })
}

/// Truncated semantics computed bottom-up from the set equations (union
/// for `+`, difference for `\`, intersection for `@`, empty for `_|_`),
/// rather than by filtering through the instance relation. The two routes
/// must agree; tests exploit that.
pub fn denotation(sig: &Signature, p: &Pattern, depth: usize) -> Result<GroundTermSet, OracleError> {
    let shape = shape_of(sig, p)?;
    let terms = denote(sig, p, &shape, depth)?;
    Ok(GroundTermSet { shape, depth, terms })
}

fn denote(sig: &Signature, p: &Pattern, shape: &Shape, depth: usize) -> Result<Vec<Term>, OracleError> {
    match p {
        Pattern::Var(_) => {
            // the full universe of the pattern's shape, truncated
            Ok(match enumerate_shape(sig, shape, depth) {
                Ok(set) => set.terms,
                Err(OracleError::EmptySort { .. }) => Vec::new(),
                Err(e) => return Err(e),
            })
        }
        Pattern::Bottom => Ok(Vec::new()),
        Pattern::App(sym, args) => {
            if depth == 0 {
                return Ok(Vec::new());
            }
            // an application that cannot inhabit the requested universe
            // denotes the empty set there
            let arg_shapes: Vec<Shape> = match sym {
                crate::signature::SymbolId::Tuple(_) => match shape {
                    Shape::Tuple(sorts) if sorts.len() == args.len() => {
                        sorts.iter().map(|&s| Shape::Sort(s)).collect()
                    }
                    _ => return Ok(Vec::new()),
                },
                _ => {
                    match shape {
                        Shape::Sort(s) if sig.result_sort(*sym) == Some(*s) => {}
                        _ => return Ok(Vec::new()),
                    }
                    sig.arg_sorts(*sym)
                        .expect("declared symbol")
                        .iter()
                        .map(|&s| Shape::Sort(s))
                        .collect()
                }
            };
            // component depth: tuples keep the full bound, constructors
            // consume one level
            let child_depth = if sym.is_tuple() { depth } else { depth - 1 };
            if child_depth == 0 && !args.is_empty() {
                return Ok(Vec::new());
            }
            let mut arg_sets = Vec::with_capacity(args.len());
            for (a, s) in args.iter().zip(&arg_shapes) {
                arg_sets.push(denote(sig, a, s, child_depth)?);
            }
            if arg_sets.iter().any(Vec::is_empty) && !args.is_empty() {
                return Ok(Vec::new());
            }
            Ok(cartesian(&arg_sets).into_iter().map(|combo| Term::App(*sym, combo)).collect())
        }
        Pattern::Plus(l, r) => {
            let mut out = denote(sig, l, shape, depth)?;
            for t in denote(sig, r, shape, depth)? {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
            Ok(out)
        }
        Pattern::Minus(l, r) => {
            let rs = denote(sig, r, shape, depth)?;
            Ok(denote(sig, l, shape, depth)?.into_iter().filter(|t| !rs.contains(t)).collect())
        }
        Pattern::Alias(_, body) => denote(sig, body, shape, depth),
        Pattern::Anti(_) => panic!("denotation on anti-pattern; eliminate it first"),
    }
}

/// Compare the truncated semantics of two patterns; on inequality, one
/// witness value from the symmetric difference.
pub fn semantics_equal(
    sig: &Signature,
    p: &Pattern,
    q: &Pattern,
    depth: usize,
) -> Result<Result<(), Term>, OracleError> {
    let ps = oracle_semantics(sig, p, depth)?;
    let qs = oracle_semantics(sig, q, depth)?;
    for t in &ps.terms {
        if !qs.contains(t) {
            return Ok(Err(t.clone()));
        }
    }
    for t in &qs.terms {
        if !ps.contains(t) {
            return Ok(Err(t.clone()));
        }
    }
    Ok(Ok(()))
}

/// Semantics of a list of patterns: the union of the members' semantics.
pub fn oracle_semantics_set(
    sig: &Signature,
    ps: &[Pattern],
    depth: usize,
) -> Result<Vec<Term>, OracleError> {
    let mut out: Vec<Term> = Vec::new();
    for p in ps {
        for t in oracle_semantics(sig, p, depth)?.terms {
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// The first value of the sort in enumeration order, probing increasing
/// depths. Used to instantiate witnesses.
pub fn smallest_value(sig: &Signature, sort: SortId) -> Option<Term> {
    for depth in 1..=8 {
        if let Ok(set) = enumerate(sig, sort, depth) {
            return set.terms.into_iter().next();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{Signature, SymbolId};

    fn sig_abf() -> (Signature, SymbolId, SymbolId, SymbolId) {
        let mut sig = Signature::new();
        let a = sig.add_mono_constructor("a", 0).unwrap();
        let b = sig.add_mono_constructor("b", 0).unwrap();
        let f = sig.add_mono_constructor("f", 2).unwrap();
        (sig, a, b, f)
    }

    #[test]
    fn depth_one_has_only_constants() {
        let (sig, a, b, _) = sig_abf();
        let u = sig.sort_id(crate::signature::MONO_SORT).unwrap();
        let set = enumerate(&sig, u, 1).unwrap();
        assert_eq!(set.terms, vec![Term::constant(a), Term::constant(b)]);
    }

    #[test]
    fn depth_two_count_is_constants_plus_pairs() {
        // 2 constants + 2*2 applications of f
        let (sig, _, _, _) = sig_abf();
        let u = sig.sort_id(crate::signature::MONO_SORT).unwrap();
        let set = enumerate(&sig, u, 2).unwrap();
        assert_eq!(set.len(), 6);
        // duplicate-free
        let mut dedup = set.terms.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn empty_sort_is_an_error() {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        sig.add_constructor("f", vec![s], s).unwrap();
        assert_eq!(
            enumerate(&sig, s, 3),
            Err(OracleError::EmptySort { sort: "S".into(), depth: 3 })
        );
    }

    #[test]
    fn semantics_of_bottom_is_empty() {
        let (sig, _, _, _) = sig_abf();
        for d in 1..=3 {
            assert!(oracle_semantics(&sig, &Pattern::Bottom, d).unwrap().is_empty());
        }
    }

    #[test]
    fn variable_minus_all_constants_is_empty_at_depth_one() {
        let (sig, a, b, _) = sig_abf();
        let p = Pattern::minus(
            Pattern::var("x"),
            Pattern::plus(Pattern::constant(a), Pattern::constant(b)),
        );
        assert!(oracle_semantics(&sig, &p, 1).unwrap().is_empty());
    }

    #[test]
    fn filtered_semantics_of_constructor_pattern() {
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]);
        let set = oracle_semantics(&sig, &p, 2).unwrap();
        assert_eq!(
            set.terms,
            vec![
                Term::app(f, vec![Term::constant(a), Term::constant(b)]),
                Term::app(f, vec![Term::constant(b), Term::constant(b)]),
            ]
        );
    }

    #[test]
    fn truncation_is_monotone() {
        let (sig, a, _, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
        );
        for d in 1..3 {
            let small = oracle_semantics(&sig, &p, d).unwrap();
            let big = oracle_semantics(&sig, &p, d + 1).unwrap();
            for t in &small.terms {
                assert!(big.contains(t));
            }
        }
    }

    #[test]
    fn denotation_agrees_with_instance_filter() {
        let (sig, a, b, f) = sig_abf();
        let pats = vec![
            Pattern::var("x"),
            Pattern::minus(Pattern::var("x"), Pattern::constant(a)),
            Pattern::plus(Pattern::constant(a), Pattern::constant(b)),
            Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]),
            Pattern::minus(
                Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
                Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
            ),
            Pattern::alias(
                crate::term::Var::new("w"),
                Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(a)]),
            ),
        ];
        for p in pats {
            for d in 1..=3 {
                let mut left = oracle_semantics(&sig, &p, d).unwrap().terms;
                let mut right = denotation(&sig, &p, d).unwrap().terms;
                left.sort();
                right.sort();
                assert_eq!(left, right, "pattern {p:?} at depth {d}");
            }
        }
    }

    #[test]
    fn tuple_semantics_componentwise() {
        let (sig, a, b, f) = sig_abf();
        // <x, b> at depth 2: 6 choices for x, fixed b
        let p = Pattern::tuple(vec![Pattern::var("x"), Pattern::constant(b)]);
        let set = oracle_semantics(&sig, &p, 2).unwrap();
        assert_eq!(set.len(), 6);
        let faa = Term::app(f, vec![Term::constant(a), Term::constant(a)]);
        assert!(set.contains(&Term::tuple(vec![faa, Term::constant(b)])));
    }

    #[test]
    fn witness_on_unequal_semantics() {
        let (sig, a, _, _) = sig_abf();
        let out = semantics_equal(&sig, &Pattern::var("x"), &Pattern::Bottom, 1).unwrap();
        assert_eq!(out, Err(Term::constant(a)));
        let ok = semantics_equal(
            &sig,
            &Pattern::plus(Pattern::constant(a), Pattern::var("y")),
            &Pattern::plus(Pattern::var("y"), Pattern::constant(a)),
            2,
        )
        .unwrap();
        assert!(ok.is_ok());
    }

    #[test]
    fn smallest_value_is_first_constant() {
        let (sig, a, _, _) = sig_abf();
        let u = sig.sort_id(crate::signature::MONO_SORT).unwrap();
        assert_eq!(smallest_value(&sig, u), Some(Term::constant(a)));
    }
}
