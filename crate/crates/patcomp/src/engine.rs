//! A literal small-step implementation of the reduction rules.
//!
//! [`crate::normalize`] computes normal forms by structural recursion with
//! a fixed innermost strategy. This module instead walks the pattern, finds
//! every position where some rule applies, and rewrites one chosen redex at
//! a time. Running it with different redex choices exercises confluence:
//! all choices must reach the same normal form up to renaming. It also
//! serves as an independent check of the recursive normalizer.
//!
//! The rules are implemented as printed, without the cut optimization; the
//! sorted variable expansion is honored so both engines expand the same
//! candidate sums.

use rand::Rng;

use crate::normalize::{NormalForm, NormalizeConfig, NormalizeError};
use crate::pattern::{check_linear, Pattern};
use crate::signature::Signature;
use crate::term::{FreshNamer, Position};

/// One applicable rule instance at some position.
#[derive(Debug, Clone, PartialEq, Eq)]
enum RuleApp {
    /// `_|_ + v -> v`
    DropEmptyLeft,
    /// `v + _|_ -> v`
    DropEmptyRight,
    /// `h(.., _|_, ..) -> _|_`
    EmptyArg,
    /// `h(.., v_i + w_i, ..) -> h(.., v_i, ..) + h(.., w_i, ..)`
    DistributeSum(usize),
    /// `x@_|_ -> _|_`
    EmptyAlias,
    /// `x@(v1 + v2) -> x@v1 + x@v2`
    DistributeAlias,
    /// `v \ x -> _|_`
    MinusVar,
    /// `v \ _|_ -> v`
    MinusEmpty,
    /// `w \ (v1 + v2) -> (w \ v1) \ v2`
    SplitSubtrahend,
    /// `x \ g(..) -> (sum over constructors) \ g(..)`, aliased by `x@` in
    /// the aliasing system
    ExpandVar,
    /// `_|_ \ f(..) -> _|_`
    EmptyMinuend,
    /// `(v + w) \ f(..) -> (v \ f(..)) + (w \ f(..))`
    SplitMinuend,
    /// `f(v1..vn) \ f(t1..tn) -> f(v1\t1,..,vn) + .. + f(v1,..,vn\tn)`
    SameHead,
    /// `f(..) \ g(..) -> f(..)` for distinct heads
    DiffHead,
    /// `x@v \ w -> x@(v \ w)`
    AliasMinuend,
    /// `v \ x@w -> v \ w`
    AliasSubtrahend,
}

fn applicable(p: &Pattern, with_aliases: bool) -> Vec<RuleApp> {
    let mut out = Vec::new();
    match p {
        Pattern::Plus(l, r) => {
            if matches!(**l, Pattern::Bottom) && r.is_additive() {
                out.push(RuleApp::DropEmptyLeft);
            }
            if matches!(**r, Pattern::Bottom) && l.is_additive() {
                out.push(RuleApp::DropEmptyRight);
            }
        }
        Pattern::App(_, args) => {
            if args.iter().all(Pattern::is_additive) {
                if args.iter().any(|a| matches!(a, Pattern::Bottom)) && !args.is_empty() {
                    out.push(RuleApp::EmptyArg);
                }
                for (i, a) in args.iter().enumerate() {
                    if matches!(a, Pattern::Plus(..)) {
                        out.push(RuleApp::DistributeSum(i));
                    }
                }
            }
        }
        Pattern::Alias(_, body) if with_aliases => match body.as_ref() {
            Pattern::Bottom => out.push(RuleApp::EmptyAlias),
            Pattern::Plus(l, r) if l.is_additive() && r.is_additive() => {
                out.push(RuleApp::DistributeAlias)
            }
            _ => {}
        },
        Pattern::Minus(l, r) => {
            match r.as_ref() {
                Pattern::Var(_) if l.is_additive() => out.push(RuleApp::MinusVar),
                Pattern::Bottom if l.is_additive() => out.push(RuleApp::MinusEmpty),
                Pattern::Plus(r1, r2)
                    if l.is_additive() && r1.is_additive() && r2.is_additive() =>
                {
                    out.push(RuleApp::SplitSubtrahend)
                }
                Pattern::Alias(_, w) if with_aliases && l.is_additive() && w.is_additive() => {
                    out.push(RuleApp::AliasSubtrahend)
                }
                Pattern::App(g, ts) if ts.iter().all(Pattern::is_pure_additive) => {
                    match l.as_ref() {
                        Pattern::Var(_) => out.push(RuleApp::ExpandVar),
                        Pattern::Bottom => out.push(RuleApp::EmptyMinuend),
                        Pattern::Plus(l1, l2) if l1.is_additive() && l2.is_additive() => {
                            out.push(RuleApp::SplitMinuend)
                        }
                        Pattern::Alias(_, v) if with_aliases && v.is_additive() => {
                            out.push(RuleApp::AliasMinuend)
                        }
                        Pattern::App(f, vs) if vs.iter().all(Pattern::is_additive) => {
                            if f == g {
                                out.push(RuleApp::SameHead);
                            } else {
                                out.push(RuleApp::DiffHead);
                            }
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        _ => {}
    }
    out
}

fn apply(
    sig: &Signature,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
    p: &Pattern,
    rule: &RuleApp,
    with_aliases: bool,
) -> Pattern {
    match (rule, p) {
        (RuleApp::DropEmptyLeft, Pattern::Plus(_, r)) => (**r).clone(),
        (RuleApp::DropEmptyRight, Pattern::Plus(l, _)) => (**l).clone(),
        (RuleApp::EmptyArg, Pattern::App(..)) => Pattern::Bottom,
        (RuleApp::DistributeSum(i), Pattern::App(sym, args)) => {
            let (vi, wi) = match &args[*i] {
                Pattern::Plus(v, w) => ((**v).clone(), (**w).clone()),
                _ => unreachable!("checked by applicable"),
            };
            let mut left = args.clone();
            left[*i] = vi;
            let mut right = args.clone();
            right[*i] = wi;
            Pattern::plus(Pattern::App(*sym, left), Pattern::App(*sym, right))
        }
        (RuleApp::EmptyAlias, Pattern::Alias(..)) => Pattern::Bottom,
        (RuleApp::DistributeAlias, Pattern::Alias(x, body)) => match body.as_ref() {
            Pattern::Plus(v1, v2) => Pattern::plus(
                Pattern::Alias(x.clone(), v1.clone()),
                Pattern::Alias(x.clone(), v2.clone()),
            ),
            _ => unreachable!("checked by applicable"),
        },
        (RuleApp::MinusVar, Pattern::Minus(..)) => Pattern::Bottom,
        (RuleApp::MinusEmpty, Pattern::Minus(l, _)) => (**l).clone(),
        (RuleApp::SplitSubtrahend, Pattern::Minus(w, r)) => match r.as_ref() {
            Pattern::Plus(v1, v2) => {
                Pattern::minus(Pattern::Minus(w.clone(), v1.clone()), (**v2).clone())
            }
            _ => unreachable!("checked by applicable"),
        },
        (RuleApp::ExpandVar, Pattern::Minus(l, r)) => {
            let x = match l.as_ref() {
                Pattern::Var(v) => v.clone(),
                _ => unreachable!("checked by applicable"),
            };
            let constructors = match (cfg.sorted_encoding, x.sort) {
                (true, Some(sort)) => sig.constructors_of_sort(sort),
                _ => sig.constructors(),
            };
            let mut sum = Pattern::Bottom;
            let mut first = true;
            for c in constructors {
                let args: Vec<Pattern> = sig
                    .arg_sorts(c)
                    .expect("constructor")
                    .iter()
                    .map(|&s| Pattern::Var(fresh.fresh_var(Some(s))))
                    .collect();
                let candidate = Pattern::minus(Pattern::App(c, args), (**r).clone());
                sum = if first { candidate } else { Pattern::plus(sum, candidate) };
                first = false;
            }
            if with_aliases {
                Pattern::Alias(x, Box::new(sum))
            } else {
                sum
            }
        }
        (RuleApp::EmptyMinuend, Pattern::Minus(..)) => Pattern::Bottom,
        (RuleApp::SplitMinuend, Pattern::Minus(l, r)) => match l.as_ref() {
            Pattern::Plus(v, w) => Pattern::plus(
                Pattern::Minus(v.clone(), r.clone()),
                Pattern::Minus(w.clone(), r.clone()),
            ),
            _ => unreachable!("checked by applicable"),
        },
        (RuleApp::SameHead, Pattern::Minus(l, r)) => match (l.as_ref(), r.as_ref()) {
            (Pattern::App(f, vs), Pattern::App(_, ts)) => {
                let mut sum = Pattern::Bottom;
                let mut first = true;
                for k in 0..vs.len() {
                    let mut args = vs.clone();
                    args[k] = Pattern::minus(vs[k].clone(), ts[k].clone());
                    let summand = Pattern::App(*f, args);
                    sum = if first { summand } else { Pattern::plus(sum, summand) };
                    first = false;
                }
                sum
            }
            _ => unreachable!("checked by applicable"),
        },
        (RuleApp::DiffHead, Pattern::Minus(l, _)) => (**l).clone(),
        (RuleApp::AliasMinuend, Pattern::Minus(l, r)) => match l.as_ref() {
            Pattern::Alias(x, v) => {
                Pattern::Alias(x.clone(), Box::new(Pattern::Minus(v.clone(), r.clone())))
            }
            _ => unreachable!("checked by applicable"),
        },
        (RuleApp::AliasSubtrahend, Pattern::Minus(l, r)) => match r.as_ref() {
            Pattern::Alias(_, w) => Pattern::Minus(l.clone(), w.clone()),
            _ => unreachable!("checked by applicable"),
        },
        _ => unreachable!("rule/pattern mismatch"),
    }
}

fn find_redexes(p: &Pattern, with_aliases: bool) -> Vec<(Position, RuleApp)> {
    let mut out = Vec::new();
    for pos in p.positions() {
        let sub = p.subpattern_at(&pos).expect("own position");
        for rule in applicable(sub, with_aliases) {
            out.push((pos.clone(), rule));
        }
    }
    out
}

/// Reduce to normal form, resolving the choice of redex with `pick`, which
/// receives the number of applicable redexes and returns the index to
/// rewrite.
fn normalize_with_choice(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
    with_aliases: bool,
    mut pick: impl FnMut(usize) -> usize,
) -> Result<NormalForm, NormalizeError> {
    check_linear(p).map_err(NormalizeError::NonLinear)?;
    if p.contains_anti() {
        return Err(NormalizeError::AntiPresent);
    }
    if !with_aliases && p.contains_alias() {
        return Err(NormalizeError::AliasNotSupported);
    }
    let mut cur = p.clone();
    let mut steps: u64 = 0;
    loop {
        let redexes = find_redexes(&cur, with_aliases);
        if redexes.is_empty() {
            return Ok(NormalForm::from_tree(cur));
        }
        let (pos, rule) = &redexes[pick(redexes.len())];
        let sub = cur.subpattern_at(pos).expect("redex position").clone();
        let replacement = apply(sig, cfg, fresh, &sub, rule, with_aliases);
        cur = cur.replace_at(pos, replacement).expect("redex position");
        steps += 1;
        if steps > cfg.max_steps {
            return Err(NormalizeError::FuelExhausted(steps));
        }
    }
}

/// Normal form under a uniformly random redex order.
pub fn normalize_random<R: Rng>(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
    with_aliases: bool,
    rng: &mut R,
) -> Result<NormalForm, NormalizeError> {
    normalize_with_choice(sig, p, cfg, fresh, with_aliases, |n| rng.random_range(0..n))
}

/// Normal form rewriting the first redex in position order each time.
pub fn normalize_leftmost(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
    with_aliases: bool,
) -> Result<NormalForm, NormalizeError> {
    normalize_with_choice(sig, p, cfg, fresh, with_aliases, |_| 0)
}
