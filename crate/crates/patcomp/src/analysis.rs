//! Match-specification analyses.
//!
//! Everything here reduces to one question: is a pattern subsumed by a set
//! of patterns? The answer is exact — `p` is subsumed by `{p1..pn}` exactly
//! when `p \ (p1 + .. + pn)` normalizes to `_|_` — and the residual
//! summands of a failed subsumption are the uncovered patterns, which makes
//! for useful diagnostics.
//!
//! Aliases carry no semantics (`x@p` covers what `p` covers), so inputs are
//! stripped of them; anti-patterns are desugared on entry.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::normalize::{eliminate_anti, normalize_plain, NormalForm, NormalizeConfig, NormalizeError};
use crate::oracle::{self, smallest_value};
use crate::pattern::Pattern;
use crate::signature::{Shape, Signature, SortId};
use crate::term::{FreshNamer, Term, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("patterns have different shapes; they never match the same values")]
    ShapeMismatch,
    #[error("cannot determine the shape of the pattern list")]
    UnknownShape,
}

/// Outcome of a subsumption test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subsumption {
    Subsumed,
    /// What the set fails to cover.
    Residual(NormalForm),
}

impl Subsumption {
    pub fn is_subsumed(&self) -> bool {
        matches!(self, Subsumption::Subsumed)
    }
}

/// Strip aliases: `x@p` becomes `p` everywhere.
pub fn strip_aliases(p: &Pattern) -> Pattern {
    match p {
        Pattern::Var(_) | Pattern::Bottom => p.clone(),
        Pattern::App(sym, args) => Pattern::App(*sym, args.iter().map(strip_aliases).collect()),
        Pattern::Plus(l, r) => Pattern::plus(strip_aliases(l), strip_aliases(r)),
        Pattern::Minus(l, r) => Pattern::minus(strip_aliases(l), strip_aliases(r)),
        Pattern::Alias(_, body) => strip_aliases(body),
        Pattern::Anti(body) => Pattern::anti(strip_aliases(body)),
    }
}

/// Rename every variable of the pattern to a fresh name, keeping sorts.
fn rename_apart(p: &Pattern, fresh: &mut FreshNamer) -> Pattern {
    let map = p
        .vars()
        .into_iter()
        .map(|v| (v, fresh.fresh()))
        .collect::<std::collections::HashMap<_, _>>();
    p.rename(&map)
}

fn prepare(sig: &Signature, p: &Pattern, fresh: &mut FreshNamer) -> Pattern {
    strip_aliases(&eliminate_anti(sig, p, fresh))
}

/// Is `p` subsumed by the set `ps`? Exact: decided by normalizing
/// `p \ (p1 + .. + pn)`.
pub fn is_subsumed(
    sig: &Signature,
    p: &Pattern,
    ps: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<Subsumption, AnalysisError> {
    let minuend = prepare(sig, p, fresh);
    let parts: Vec<Pattern> = ps
        .iter()
        .map(|q| {
            let q = prepare(sig, q, fresh);
            rename_apart(&q, fresh)
        })
        .collect();
    let expr = Pattern::minus(minuend, Pattern::sum(parts));
    let nf = normalize_plain(sig, &expr, cfg, fresh)?;
    if nf.is_bottom() {
        Ok(Subsumption::Subsumed)
    } else {
        Ok(Subsumption::Residual(nf))
    }
}

/// 1-based indices of the patterns that can never be the first match: each
/// is subsumed by the patterns before it.
pub fn useless_indices(
    sig: &Signature,
    ps: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<BTreeSet<usize>, AnalysisError> {
    let mut out = BTreeSet::new();
    for i in 0..ps.len() {
        if is_subsumed(sig, &ps[i], &ps[..i], cfg, fresh)?.is_subsumed() {
            out.insert(i + 1);
        }
    }
    Ok(out)
}

/// Exhaustiveness: does the list cover every value? The uncovered space is
/// returned as residual patterns, together with one ground witness per
/// residual where one can be instantiated.
pub fn check_exhaustive(
    sig: &Signature,
    ps: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<(bool, Vec<Pattern>), AnalysisError> {
    if ps.is_empty() {
        return Err(AnalysisError::UnknownShape);
    }
    let shape = common_shape(sig, ps)?;
    // one fresh variable per component, at the component's sort
    let whole = match &shape {
        Shape::Sort(s) => Pattern::Var(fresh.fresh_var(Some(*s))),
        Shape::Tuple(sorts) => Pattern::tuple(
            sorts.iter().map(|&s| Pattern::Var(fresh.fresh_var(Some(s)))).collect(),
        ),
    };
    let parts: Vec<Pattern> =
        ps.iter().map(|q| rename_apart(&prepare(sig, q, fresh), fresh)).collect();
    let expr = Pattern::minus(whole, Pattern::sum(parts));
    let nf = normalize_plain(sig, &expr, cfg, fresh)?;
    let witnesses = nf.into_summands();
    Ok((witnesses.is_empty(), witnesses))
}

fn common_shape(sig: &Signature, ps: &[Pattern]) -> Result<Shape, AnalysisError> {
    let mut shape: Option<Shape> = None;
    for p in ps {
        let s = oracle::shape_of(sig, p).map_err(|_| AnalysisError::UnknownShape)?;
        match &shape {
            None => shape = Some(s),
            Some(prev) if *prev != s => return Err(AnalysisError::ShapeMismatch),
            _ => {}
        }
    }
    shape.ok_or(AnalysisError::UnknownShape)
}

/// Instantiate the remaining variables of a residual pattern with the
/// smallest value of their sort, giving one concrete uncovered value.
pub fn ground_witness(sig: &Signature, p: &Pattern) -> Option<Term> {
    match p {
        Pattern::Var(v) => {
            let sort = v.sort.or_else(|| {
                if sig.sort_count() == 1 {
                    Some(SortId(0))
                } else {
                    None
                }
            })?;
            smallest_value(sig, sort)
        }
        Pattern::App(sym, args) => {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                out.push(ground_witness(sig, a)?);
            }
            Some(Term::App(*sym, out))
        }
        Pattern::Alias(_, body) => ground_witness(sig, body),
        _ => None,
    }
}

/// What a full check of a pattern list reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    /// 1-based indices of useless patterns.
    pub useless: BTreeSet<usize>,
    pub exhaustive: bool,
    /// Residual patterns covering the uncovered space; empty iff exhaustive.
    pub witnesses: Vec<Pattern>,
    /// One ground instance per witness, where derivable.
    pub ground_witnesses: Vec<Term>,
}

pub fn analyze(
    sig: &Signature,
    ps: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<AnalysisReport, AnalysisError> {
    let useless = useless_indices(sig, ps, cfg, fresh)?;
    let (exhaustive, witnesses) = check_exhaustive(sig, ps, cfg, fresh)?;
    let ground_witnesses = witnesses.iter().filter_map(|w| ground_witness(sig, w)).collect();
    Ok(AnalysisReport { useless, exhaustive, witnesses, ground_witnesses })
}

/// Disambiguation: replace the ordered list `[p1..pn]` by sets `P1..Pn`
/// where `Pi` covers exactly the values matched first at position `i`. The
/// order of the sets no longer matters.
pub fn disambiguate(
    sig: &Signature,
    ps: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<Vec<Vec<Pattern>>, AnalysisError> {
    let mut out = Vec::with_capacity(ps.len());
    for i in 0..ps.len() {
        let minuend = prepare(sig, &ps[i], fresh);
        let parts: Vec<Pattern> = ps[..i]
            .iter()
            .map(|q| rename_apart(&prepare(sig, q, fresh), fresh))
            .collect();
        let expr = if parts.is_empty() {
            minuend
        } else {
            Pattern::minus(minuend, Pattern::sum(parts))
        };
        let nf = normalize_plain(sig, &expr, cfg, fresh)?;
        out.push(nf.into_summands());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{alpha_eq_sets, match_extended};
    use crate::signature::SymbolId;

    fn sig_abf() -> (Signature, SymbolId, SymbolId, SymbolId) {
        let mut sig = Signature::new();
        let a = sig.add_mono_constructor("a", 0).unwrap();
        let b = sig.add_mono_constructor("b", 0).unwrap();
        let f = sig.add_mono_constructor("f", 2).unwrap();
        (sig, a, b, f)
    }

    fn fresh() -> FreshNamer {
        let mut n = FreshNamer::new();
        n.reserve_all(["x", "y", "z", "w"]);
        n
    }

    fn cfg() -> NormalizeConfig {
        NormalizeConfig::default()
    }

    /// The four-tuple example: [<b,y>, <a,b>, <f(x,y),z>, <x,b>].
    fn tuple_list(sig_parts: &(Signature, SymbolId, SymbolId, SymbolId)) -> Vec<Pattern> {
        let (_, a, b, f) = *sig_parts;
        vec![
            Pattern::tuple(vec![Pattern::constant(b), Pattern::var("y")]),
            Pattern::tuple(vec![Pattern::constant(a), Pattern::constant(b)]),
            Pattern::tuple(vec![
                Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
                Pattern::var("z"),
            ]),
            Pattern::tuple(vec![Pattern::var("x"), Pattern::constant(b)]),
        ]
    }

    #[test]
    fn last_tuple_pattern_is_subsumed() {
        let parts = sig_abf();
        let ps = tuple_list(&parts);
        let out = is_subsumed(&parts.0, &ps[3], &ps[..3], &cfg(), &mut fresh()).unwrap();
        assert!(out.is_subsumed());
    }

    #[test]
    fn instance_of_single_pattern_is_subsumed() {
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::app(f, vec![Pattern::constant(a), Pattern::constant(b)]);
        let q = Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]);
        assert!(is_subsumed(&sig, &p, &[q], &cfg(), &mut fresh()).unwrap().is_subsumed());
    }

    #[test]
    fn uncovered_residual_is_reported() {
        let parts = sig_abf();
        let (ref sig, a, _, f) = parts;
        let ps = tuple_list(&parts);
        let whole = Pattern::tuple(vec![Pattern::var("x"), Pattern::var("y")]);
        match is_subsumed(sig, &whole, &ps[..3], &cfg(), &mut fresh()).unwrap() {
            Subsumption::Residual(nf) => {
                let expected = vec![
                    Pattern::tuple(vec![Pattern::constant(a), Pattern::constant(a)]),
                    Pattern::tuple(vec![
                        Pattern::constant(a),
                        Pattern::app(f, vec![Pattern::var("u"), Pattern::var("v")]),
                    ]),
                ];
                assert!(alpha_eq_sets(nf.summands(), &expected), "got {:?}", nf.summands());
            }
            Subsumption::Subsumed => panic!("expected a residual"),
        }
    }

    #[test]
    fn useless_indices_flags_only_the_last() {
        let parts = sig_abf();
        let ps = tuple_list(&parts);
        let useless = useless_indices(&parts.0, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(useless, BTreeSet::from([4]));
    }

    #[test]
    fn everything_after_a_variable_is_useless() {
        let (sig, a, b, _) = sig_abf();
        let ps = vec![Pattern::var("x"), Pattern::constant(a), Pattern::constant(b)];
        let useless = useless_indices(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(useless, BTreeSet::from([2, 3]));
    }

    #[test]
    fn overlapping_but_not_useless() {
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::app(f, vec![Pattern::constant(a), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::constant(b), Pattern::var("y")]),
        ];
        assert!(useless_indices(&sig, &ps, &cfg(), &mut fresh()).unwrap().is_empty());
    }

    #[test]
    fn exhaustiveness_with_witness() {
        let parts = sig_abf();
        let (ref sig, a, _, f) = parts;
        let ps = tuple_list(&parts);
        let (exhaustive, witnesses) =
            check_exhaustive(sig, &ps[..3], &cfg(), &mut fresh()).unwrap();
        assert!(!exhaustive);
        // the uncovered space: <a,a> plus <a, f(_,_)>
        let expected = vec![
            Pattern::tuple(vec![Pattern::constant(a), Pattern::constant(a)]),
            Pattern::tuple(vec![
                Pattern::constant(a),
                Pattern::app(f, vec![Pattern::var("u"), Pattern::var("v")]),
            ]),
        ];
        assert!(alpha_eq_sets(&witnesses, &expected), "got {witnesses:?}");
        // each witness instantiates to a concrete uncovered value
        let w = ground_witness(sig, &witnesses[0]).unwrap();
        assert_eq!(w, Term::tuple(vec![Term::constant(a), Term::constant(a)]));
        // adding the witnesses closes the gap
        let mut closed: Vec<Pattern> = ps[..3].to_vec();
        closed.extend(expected);
        let (exhaustive, witnesses) = check_exhaustive(sig, &closed, &cfg(), &mut fresh()).unwrap();
        assert!(exhaustive, "still uncovered: {witnesses:?}");
        assert!(witnesses.is_empty());
    }

    #[test]
    fn single_variable_is_exhaustive() {
        let (sig, _, _, _) = sig_abf();
        let (exhaustive, _) =
            check_exhaustive(&sig, &[Pattern::var("x")], &cfg(), &mut fresh()).unwrap();
        assert!(exhaustive);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let (sig, a, b, _) = sig_abf();
        let ps = vec![
            Pattern::tuple(vec![Pattern::constant(a), Pattern::constant(b)]),
            Pattern::constant(a),
        ];
        assert_eq!(
            check_exhaustive(&sig, &ps, &cfg(), &mut fresh()),
            Err(AnalysisError::ShapeMismatch)
        );
    }

    #[test]
    fn disambiguate_two_rules() {
        // [f(z,a), f(x,y)] becomes {f(z,a)} and {f(x,b), f(x,f(_,_))}
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
        ];
        let sets = disambiguate(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(alpha_eq_sets(&sets[0], &ps[..1]));
        let expected = vec![
            Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]),
            Pattern::app(
                f,
                vec![Pattern::var("x"), Pattern::app(f, vec![Pattern::var("u"), Pattern::var("v")])],
            ),
        ];
        assert!(alpha_eq_sets(&sets[1], &expected), "got {:?}", sets[1]);
    }

    #[test]
    fn disambiguate_shadowed_pattern_contributes_nothing() {
        // a pattern entirely covered by an earlier one yields the empty set
        let (sig, a, _, f) = sig_abf();
        let ps = vec![
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
        ];
        let sets = disambiguate(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert!(alpha_eq_sets(&sets[0], &ps[..1]));
        assert!(sets[1].is_empty());
    }

    #[test]
    fn disambiguation_partitions_the_matched_space() {
        let parts = sig_abf();
        let (sig, ..) = &parts;
        let ps = tuple_list(&parts)[..3].to_vec();
        let sets = disambiguate(sig, &ps, &cfg(), &mut fresh()).unwrap();
        let universe = crate::oracle::enumerate_shape(
            sig,
            &Shape::Tuple(vec![SortId(0), SortId(0)]),
            3,
        )
        .unwrap();
        for v in &universe.terms {
            // the first listed pattern that matches v, if any
            let first = ps.iter().position(|p| match_extended(p, v));
            let hits: Vec<usize> = (0..sets.len())
                .filter(|&i| sets[i].iter().any(|q| match_extended(q, v)))
                .collect();
            match first {
                Some(i) => assert_eq!(hits, vec![i], "value {v:?}"),
                None => assert!(hits.is_empty(), "value {v:?}"),
            }
        }
    }
}
