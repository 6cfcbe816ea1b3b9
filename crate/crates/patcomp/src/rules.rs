//! Rewrite programs over extended patterns and their compilation to plain
//! constructor rewrite systems.
//!
//! An ordered program applies its rules with first-match priority; a set
//! program applies any rule that matches. Three transformations connect
//! them, each preserving the one-step relation over ground terms:
//!
//! * [`tr_comp`]: normalize every left-hand side, one output rule per
//!   summand, order kept (rules whose left-hand side is empty vanish);
//! * [`tr_ord`]: complement every left-hand side against the earlier rules
//!   of the same head, making the order irrelevant;
//! * [`tr_at`]: move aliases out of left-hand sides by substituting the
//!   aliased pattern into the right-hand side.
//!
//! [`tr_all`] (`tr_at` after `tr_comp`) yields an ordered plain program;
//! [`tr_order`] (`tr_at` after `tr_ord`) yields an order-independent plain
//! program. [`step_ordered`] and [`step_set`] are the reference one-step
//! interpreters the preservation claims are tested against.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::minimize::{minimum, MinimizeStats};
use crate::normalize::{eliminate_anti, normalize_aliased, NormalizeConfig, NormalizeError};
use crate::pattern::{
    canonicalize, check_linear_all, matchable_vars, matchable_vars_all, pattern_shape, Pattern,
    VarSet,
};
use crate::signature::{Shape, Signature, SymbolId};
use crate::term::{FreshNamer, Position, Substitution, Term, Var};

/// One rewrite rule: a defined symbol applied to a tuple of extended
/// patterns, and a term built from matchable variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedRule {
    pub head: SymbolId,
    pub lhs: Vec<Pattern>,
    pub rhs: Term,
    /// 1-based index of the source rule this one descends from. Compiled
    /// rules keep the index of their origin, which orders emitted sets
    /// deterministically.
    pub source_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ordered,
    Set,
}

/// A rule list or rule set together with its signature.
#[derive(Debug, Clone)]
pub struct RuleProgram {
    pub signature: Signature,
    pub mode: Mode,
    pub rules: Vec<ExtendedRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based rule index.
    pub rule: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}: {}", self.rule, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("left-hand side still contains sums or complements; normalize first")]
    NotSummandShaped,
    #[error("alias chain in left-hand side")]
    AliasChain,
}

impl RuleProgram {
    /// A fresh-name source that never collides with any name used by the
    /// program or its signature.
    pub fn fresh_namer(&self) -> FreshNamer {
        let mut namer = FreshNamer::new();
        for rule in &self.rules {
            for p in &rule.lhs {
                for v in p.vars() {
                    namer.reserve(&v);
                }
            }
            for v in rule.rhs.vars() {
                namer.reserve(&v);
            }
        }
        for c in self.signature.constructors() {
            namer.reserve(self.signature.symbol_name(c));
        }
        for d in self.signature.defined_symbols() {
            namer.reserve(self.signature.symbol_name(d));
        }
        namer
    }

    /// The left-hand side of each rule as a single pattern: the bare
    /// argument for unary heads, an argument tuple otherwise.
    pub fn lhs_patterns(&self) -> Vec<Pattern> {
        self.rules.iter().map(rule_lhs_pattern).collect()
    }

    /// True when every left-hand side is a plain constructor pattern.
    pub fn is_plain(&self) -> bool {
        self.rules.iter().all(|r| r.lhs.iter().all(Pattern::is_constructor_pattern))
    }
}

fn rule_lhs_pattern(rule: &ExtendedRule) -> Pattern {
    if rule.lhs.len() == 1 {
        rule.lhs[0].clone()
    } else {
        Pattern::tuple(rule.lhs.clone())
    }
}

/// Check well-formedness and return the program with anti-patterns
/// desugared. All violations are collected, none is fatal to the walk.
pub fn validate(prog: &RuleProgram) -> Result<RuleProgram, Vec<Violation>> {
    let sig = &prog.signature;
    let mut violations = Vec::new();
    let mut fresh = prog.fresh_namer();
    let mut rules = Vec::with_capacity(prog.rules.len());

    for (idx, rule) in prog.rules.iter().enumerate() {
        let rn = idx + 1;
        let mut bad = |message: String| violations.push(Violation { rule: rn, message });

        if !sig.is_defined(rule.head) {
            bad(format!("head symbol `{}` is not a defined symbol", sig.symbol_name(rule.head)));
        }
        let arity = sig.arity(rule.head);
        if rule.lhs.len() != arity {
            bad(format!(
                "head `{}` expects {} arguments, got {}",
                sig.symbol_name(rule.head),
                arity,
                rule.lhs.len()
            ));
        }

        for (i, p) in rule.lhs.iter().enumerate() {
            if p.contains_bottom() {
                bad(format!("argument {} contains `_|_`", i + 1));
            }
            match pattern_shape(sig, p) {
                Err(e) => bad(format!("argument {}: {}", i + 1, e)),
                Ok(Some(Shape::Tuple(_))) => {
                    bad(format!("argument {} is a tuple pattern", i + 1))
                }
                Ok(Some(Shape::Sort(s))) => {
                    if let Some(expected) = sig.arg_sorts(rule.head).and_then(|ss| ss.get(i)) {
                        if s != *expected {
                            bad(format!(
                                "argument {} has sort `{}`, expected `{}`",
                                i + 1,
                                sig.sort_name(s),
                                sig.sort_name(*expected)
                            ));
                        }
                    }
                }
                Ok(None) => {}
            }
        }

        if let Err(e) = check_linear_all(&rule.lhs) {
            bad(format!("{e}"));
        }

        // anti-patterns are sugar; the matchable-variable check runs on the
        // desugared arguments
        let lhs: Vec<Pattern> =
            rule.lhs.iter().map(|p| eliminate_anti(sig, p, &mut fresh)).collect();
        match matchable_vars_all(&lhs) {
            Ok(mv) => {
                for v in rule.rhs.vars() {
                    if !mv.contains(&v) {
                        bad(format!("unbound right-hand side variable `{v}`"));
                    }
                }
            }
            Err(e) => bad(format!("{e}")),
        }
        if let Err(e) = check_term(sig, &rule.rhs) {
            bad(format!("right-hand side: {e}"));
        }

        rules.push(ExtendedRule { lhs, ..rule.clone() });
    }

    if violations.is_empty() {
        Ok(RuleProgram { signature: prog.signature.clone(), mode: prog.mode, rules })
    } else {
        Err(violations)
    }
}

fn check_term(sig: &Signature, t: &Term) -> Result<(), String> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(sym, args) => {
            let arity = sig.arity(*sym);
            if args.len() != arity {
                return Err(format!(
                    "symbol `{}` expects {} arguments, got {}",
                    sig.symbol_name(*sym),
                    arity,
                    args.len()
                ));
            }
            for a in args {
                check_term(sig, a)?;
            }
            Ok(())
        }
    }
}

/// Normalize every left-hand side of an ordered program; each summand
/// becomes one rule at the source rule's position. A left-hand side that
/// normalizes to `_|_` contributes nothing.
pub fn tr_comp(
    prog: &RuleProgram,
    cfg: &NormalizeConfig,
    minimize_stage: bool,
    fresh: &mut FreshNamer,
) -> Result<RuleProgram, CompileError> {
    let sig = &prog.signature;
    let mut rules = Vec::new();
    for rule in &prog.rules {
        let lhs: Vec<Pattern> = rule.lhs.iter().map(|p| eliminate_anti(sig, p, fresh)).collect();
        let tuple = Pattern::tuple(lhs);
        let nf = normalize_aliased(sig, &tuple, cfg, fresh)?;
        push_summand_rules(sig, rule, nf.into_summands(), cfg, minimize_stage, fresh, &mut rules)?;
    }
    Ok(RuleProgram {
        signature: prog.signature.clone(),
        mode: Mode::Ordered,
        rules: dedup_rules(rules),
    })
}

/// Complement every left-hand side against the earlier same-head rules,
/// producing an order-independent set.
pub fn tr_ord(
    prog: &RuleProgram,
    cfg: &NormalizeConfig,
    minimize_stage: bool,
    fresh: &mut FreshNamer,
) -> Result<RuleProgram, CompileError> {
    let sig = &prog.signature;
    let mut rules = Vec::new();
    for (i, rule) in prog.rules.iter().enumerate() {
        let lhs: Vec<Pattern> = rule.lhs.iter().map(|p| eliminate_anti(sig, p, fresh)).collect();
        let minuend = Pattern::tuple(lhs);
        // earlier patterns are independent alternatives: rename their
        // variables apart to keep the whole complement linear
        let mut earlier = Vec::new();
        for prev in prog.rules[..i].iter().filter(|r| r.head == rule.head) {
            let p: Vec<Pattern> =
                prev.lhs.iter().map(|p| eliminate_anti(sig, p, fresh)).collect();
            let tuple = Pattern::tuple(p);
            let map = tuple
                .vars()
                .into_iter()
                .map(|v| (v, fresh.fresh()))
                .collect::<std::collections::HashMap<_, _>>();
            earlier.push(tuple.rename(&map));
        }
        let expr = if earlier.is_empty() {
            minuend
        } else {
            Pattern::minus(minuend, Pattern::sum(earlier))
        };
        let nf = normalize_aliased(sig, &expr, cfg, fresh)?;
        push_summand_rules(sig, rule, nf.into_summands(), cfg, minimize_stage, fresh, &mut rules)?;
    }
    Ok(RuleProgram {
        signature: prog.signature.clone(),
        mode: Mode::Set,
        rules: dedup_rules(rules),
    })
}

fn push_summand_rules(
    sig: &Signature,
    source: &ExtendedRule,
    summands: Vec<Pattern>,
    cfg: &NormalizeConfig,
    minimize_stage: bool,
    fresh: &mut FreshNamer,
    out: &mut Vec<ExtendedRule>,
) -> Result<(), CompileError> {
    let summands = if minimize_stage && summands.len() > 1 {
        // all summands of one source rule share a right-hand side, so a
        // smaller equivalent subset defines the same relation
        let (kept, _stats) = minimum(sig, &summands, cfg, fresh)?;
        kept
    } else {
        summands
    };
    for s in summands {
        let lhs = match s {
            Pattern::App(SymbolId::Tuple(_), args) => args,
            other => vec![other],
        };
        out.push(ExtendedRule {
            head: source.head,
            lhs,
            rhs: source.rhs.clone(),
            source_index: source.source_index,
        });
    }
    Ok(())
}

fn dedup_rules(rules: Vec<ExtendedRule>) -> Vec<ExtendedRule> {
    let mut kept: Vec<ExtendedRule> = Vec::new();
    let mut keys: Vec<(SymbolId, Pattern)> = Vec::new();
    for r in rules {
        // canonicalize left- and right-hand side together so shared
        // variables rename consistently
        let mut parts = r.lhs.clone();
        parts.push(term_to_pattern(&r.rhs));
        let key = (r.head, canonicalize(&Pattern::tuple(parts)));
        if !keys.contains(&key) {
            keys.push(key);
            kept.push(r);
        }
    }
    kept
}

fn term_to_pattern(t: &Term) -> Pattern {
    match t {
        Term::Var(v) => Pattern::Var(v.clone()),
        Term::App(sym, args) => Pattern::App(*sym, args.iter().map(term_to_pattern).collect()),
    }
}

fn pattern_to_term(p: &Pattern) -> Result<Term, CompileError> {
    match p {
        Pattern::Var(v) => Ok(Term::Var(v.clone())),
        Pattern::App(sym, args) => Ok(Term::App(
            *sym,
            args.iter().map(pattern_to_term).collect::<Result<_, _>>()?,
        )),
        _ => Err(CompileError::NotSummandShaped),
    }
}

/// Remove aliases from left-hand sides, innermost first: `x@q` becomes `q`
/// and `x` is replaced by `q` in the right-hand side.
pub fn tr_at(prog: &RuleProgram) -> Result<RuleProgram, CompileError> {
    let mut rules = Vec::with_capacity(prog.rules.len());
    for rule in &prog.rules {
        let mut lhs = rule.lhs.clone();
        let mut rhs = rule.rhs.clone();
        loop {
            let Some((arg_idx, pos, var, body)) = find_innermost_alias(&lhs)? else {
                break;
            };
            lhs[arg_idx] = lhs[arg_idx].replace_at(&pos, body.clone()).expect("alias position");
            let subst = Substitution::singleton(var.name.clone(), pattern_to_term(&body)?);
            rhs = subst.apply(&rhs);
        }
        for p in &lhs {
            if !p.is_constructor_pattern() {
                return Err(CompileError::NotSummandShaped);
            }
        }
        rules.push(ExtendedRule { head: rule.head, lhs, rhs, source_index: rule.source_index });
    }
    Ok(RuleProgram { signature: prog.signature.clone(), mode: prog.mode, rules })
}

/// First alias whose body contains no alias, as (argument index, position
/// within the argument, alias variable, body).
fn find_innermost_alias(
    lhs: &[Pattern],
) -> Result<Option<(usize, Position, Var, Pattern)>, CompileError> {
    for (i, arg) in lhs.iter().enumerate() {
        for pos in arg.positions() {
            if let Pattern::Alias(v, body) = arg.subpattern_at(&pos).expect("own position") {
                if !body.contains_alias() {
                    return Ok(Some((i, pos.clone(), v.clone(), (**body).clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Ordered program over plain constructor patterns: alias elimination after
/// left-hand side normalization.
pub fn tr_all(
    prog: &RuleProgram,
    cfg: &NormalizeConfig,
    minimize_stage: bool,
    fresh: &mut FreshNamer,
) -> Result<RuleProgram, CompileError> {
    tr_at(&tr_comp(prog, cfg, minimize_stage, fresh)?)
}

/// Order-independent program over plain constructor patterns: alias
/// elimination after order elimination.
pub fn tr_order(
    prog: &RuleProgram,
    cfg: &NormalizeConfig,
    minimize_stage: bool,
    fresh: &mut FreshNamer,
) -> Result<RuleProgram, CompileError> {
    tr_at(&tr_ord(prog, cfg, minimize_stage, fresh)?)
}

/// Like [`tr_ord`] but also reporting the per-rule minimization statistics.
pub fn tr_ord_with_stats(
    prog: &RuleProgram,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<(RuleProgram, Vec<MinimizeStats>), CompileError> {
    let sig = &prog.signature;
    let mut rules = Vec::new();
    let mut stats = Vec::new();
    for (i, rule) in prog.rules.iter().enumerate() {
        let lhs: Vec<Pattern> = rule.lhs.iter().map(|p| eliminate_anti(sig, p, fresh)).collect();
        let minuend = Pattern::tuple(lhs);
        let mut earlier = Vec::new();
        for prev in prog.rules[..i].iter().filter(|r| r.head == rule.head) {
            let p: Vec<Pattern> =
                prev.lhs.iter().map(|p| eliminate_anti(sig, p, fresh)).collect();
            let tuple = Pattern::tuple(p);
            let map = tuple
                .vars()
                .into_iter()
                .map(|v| (v, fresh.fresh()))
                .collect::<std::collections::HashMap<_, _>>();
            earlier.push(tuple.rename(&map));
        }
        let expr = if earlier.is_empty() {
            minuend
        } else {
            Pattern::minus(minuend, Pattern::sum(earlier))
        };
        let nf = normalize_aliased(sig, &expr, cfg, fresh)?;
        let summands = nf.into_summands();
        let (kept, st) = minimum(sig, &summands, cfg, fresh)?;
        stats.push(st);
        push_summand_rules(sig, rule, kept, cfg, false, fresh, &mut rules)?;
    }
    Ok((
        RuleProgram { signature: prog.signature.clone(), mode: Mode::Set, rules: dedup_rules(rules) },
        stats,
    ))
}

/// One step of the rewrite relation: the redex position, the 1-based index
/// of the rule that fired, and the whole rewritten term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub position: Position,
    pub rule_index: usize,
    pub result: Term,
}

/// All one-step reducts under first-match priority: at each redex, the
/// first rule of the redex's head whose pattern tuple covers the argument
/// values fires.
pub fn step_ordered(prog: &RuleProgram, t: &Term) -> Vec<Step> {
    steps(prog, t, true)
}

/// All one-step reducts ignoring rule order: every covering rule fires.
pub fn step_set(prog: &RuleProgram, t: &Term) -> Vec<Step> {
    steps(prog, t, false)
}

fn steps(prog: &RuleProgram, t: &Term, ordered: bool) -> Vec<Step> {
    let sig = &prog.signature;
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm_at(&pos).expect("own position");
        let Term::App(head, args) = sub else { continue };
        if !sig.is_defined(*head) {
            continue;
        }
        // a redex applies a defined symbol to values
        if !args.iter().all(|a| a.is_value(sig)) {
            continue;
        }
        let values = Term::tuple(args.clone());
        for (idx, rule) in prog.rules.iter().enumerate() {
            if rule.head != *head {
                continue;
            }
            let lhs_tuple = Pattern::tuple(rule.lhs.clone());
            let Some(subst) = bind(&lhs_tuple, &values) else { continue };
            let result = t.replace_at(&pos, subst.apply(&rule.rhs)).expect("redex position");
            out.push(Step { position: pos.clone(), rule_index: idx + 1, result });
            if ordered {
                // first match wins at this redex
                break;
            }
        }
    }
    out
}

/// The substitution over exactly the matchable variables witnessing that a
/// value belongs to the pattern's coverage, when it does. Free variables on
/// complement sides act as wildcards.
pub fn bind(p: &Pattern, v: &Term) -> Option<Substitution> {
    match p {
        Pattern::Var(x) => Some(Substitution::singleton(x.name.clone(), v.clone())),
        Pattern::App(f, ps) => match v {
            Term::App(g, vs) if f == g && ps.len() == vs.len() => {
                let mut acc = Substitution::new();
                for (pi, vi) in ps.iter().zip(vs) {
                    acc = acc.merge(&bind(pi, vi)?)?;
                }
                Some(acc)
            }
            _ => None,
        },
        Pattern::Plus(l, r) => {
            let keep = match matchable_vars(p) {
                Ok(VarSet::Finite(names)) => names,
                _ => return None,
            };
            let s = bind(l, v).or_else(|| bind(r, v))?;
            Some(s.restrict(keep.iter().map(String::as_str)))
        }
        Pattern::Minus(l, r) => {
            if crate::pattern::match_extended(r, v) {
                None
            } else {
                bind(l, v)
            }
        }
        Pattern::Bottom => None,
        Pattern::Alias(x, body) => {
            let s = bind(body, v)?;
            s.merge(&Substitution::singleton(x.name.clone(), v.clone()))
        }
        Pattern::Anti(_) => panic!("bind on anti-pattern; validate the program first"),
    }
}

/// Distinct result terms of a step list, for relation comparisons.
pub fn reduct_set(steps: &[Step]) -> BTreeSet<Term> {
    steps.iter().map(|s| s.result.clone()).collect()
}
