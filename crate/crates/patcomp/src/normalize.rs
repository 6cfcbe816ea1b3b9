//! Reduction of extended patterns to additive normal form.
//!
//! Two rule systems are implemented by the same engine:
//!
//! * the plain system ([`normalize_plain`]): complements are expanded into
//!   sums of constructor patterns and the variables on the left of a
//!   complement are forgotten;
//! * the aliasing system ([`normalize_aliased`]): the same reduction, but a
//!   variable complemented against a constructor pattern survives as an
//!   alias `x@(...)`, so every variable that was matchable before stays
//!   matchable in the result. Rule compilation needs this variant.
//!
//! Reduction is innermost: both children of a complement are normalized
//! before any complement rule fires at that node. The systems are
//! convergent, so the strategy only affects fresh-variable names; results
//! are unique up to renaming.

use thiserror::Error;

use crate::pattern::{alpha_eq, check_linear, pattern_shape, Pattern, PatternError};
use crate::signature::{Shape, Signature, SymbolId};
use crate::term::{FreshNamer, Var};

/// Knobs for the normalization engine.
#[derive(Debug, Clone)]
pub struct NormalizeConfig {
    /// During the same-constructor complement expansion, collapse the whole
    /// sum to the minuend as soon as one component difference comes back
    /// unchanged.
    pub cut_useless_choices: bool,
    /// Expand a complemented variable only over the constructors of its
    /// sort instead of the whole signature.
    pub sorted_encoding: bool,
    /// Safety fuel. The systems terminate, so running out signals a bug in
    /// the engine, not bad input.
    pub max_steps: u64,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig {
            cut_useless_choices: true,
            sorted_encoding: true,
            max_steps: 1_000_000,
        }
    }
}

impl NormalizeConfig {
    /// Both optimizations off; the literal rule systems.
    pub fn unoptimized() -> Self {
        NormalizeConfig {
            cut_useless_choices: false,
            sorted_encoding: false,
            ..NormalizeConfig::default()
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("anti-pattern present; run anti-pattern elimination first")]
    AntiPresent,
    #[error("aliases are not supported by the plain system; use the aliasing system")]
    AliasNotSupported,
    #[error("alias chain `x@(y@p)` is not a supported pattern shape")]
    AliasChain,
    #[error("fuel exhausted after {0} steps; this is a bug in the normalizer")]
    FuelExhausted(u64),
    #[error("input pattern is not linear: {0}")]
    NonLinear(PatternError),
}

/// The additive normal form of a pattern: a possibly empty list of
/// summands, each a constructor pattern possibly carrying variable
/// aliases. The empty list is `_|_`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    summands: Vec<Pattern>,
}

impl NormalForm {
    pub(crate) fn from_tree(p: Pattern) -> Self {
        let mut summands = Vec::new();
        flatten(p, &mut summands);
        // drop duplicate summands up to renaming
        let mut kept: Vec<Pattern> = Vec::new();
        for s in summands {
            if !kept.iter().any(|k| alpha_eq(k, &s)) {
                kept.push(s);
            }
        }
        NormalForm { summands: kept }
    }

    pub fn bottom() -> Self {
        NormalForm { summands: Vec::new() }
    }

    pub fn is_bottom(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[Pattern] {
        &self.summands
    }

    pub fn into_summands(self) -> Vec<Pattern> {
        self.summands
    }

    /// Rebuild the normal form as a single pattern (a left-associated sum,
    /// or `_|_`).
    pub fn to_pattern(&self) -> Pattern {
        Pattern::sum(self.summands.clone())
    }
}

fn flatten(p: Pattern, out: &mut Vec<Pattern>) {
    match p {
        Pattern::Bottom => {}
        Pattern::Plus(l, r) => {
            flatten(*l, out);
            flatten(*r, out);
        }
        other => out.push(other),
    }
}

/// Replace every anti-pattern `!q`, innermost first, by the complement of a
/// fresh variable: `z \ q`. When the anti-pattern is directly under an
/// alias the alias variable itself is complemented (`x@!q` becomes
/// `x \ q`), which keeps the result free of alias chains.
pub fn eliminate_anti(sig: &Signature, p: &Pattern, fresh: &mut FreshNamer) -> Pattern {
    match p {
        Pattern::Var(_) | Pattern::Bottom => p.clone(),
        Pattern::App(sym, args) => {
            Pattern::App(*sym, args.iter().map(|a| eliminate_anti(sig, a, fresh)).collect())
        }
        Pattern::Plus(l, r) => {
            Pattern::plus(eliminate_anti(sig, l, fresh), eliminate_anti(sig, r, fresh))
        }
        Pattern::Minus(l, r) => {
            Pattern::minus(eliminate_anti(sig, l, fresh), eliminate_anti(sig, r, fresh))
        }
        Pattern::Alias(v, body) => match body.as_ref() {
            Pattern::Anti(q) => {
                let q = eliminate_anti(sig, q, fresh);
                Pattern::minus(Pattern::Var(v.clone()), q)
            }
            _ => Pattern::Alias(v.clone(), Box::new(eliminate_anti(sig, body, fresh))),
        },
        Pattern::Anti(q) => {
            let q = eliminate_anti(sig, q, fresh);
            let sort = match pattern_shape(sig, &q) {
                Ok(Some(Shape::Sort(s))) => Some(s),
                _ => None,
            };
            Pattern::minus(Pattern::Var(fresh.fresh_var(sort)), q)
        }
    }
}

/// Normalize with the plain system. The input must be anti-free, alias-free
/// and linear; the result forgets complemented variables.
pub fn normalize_plain(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<NormalForm, NormalizeError> {
    Normalizer::new(sig, cfg, fresh, false).run(p)
}

/// Normalize with the aliasing system. The input must be anti-free and
/// linear; matchable variables of the input stay matchable in every
/// summand.
pub fn normalize_aliased(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<NormalForm, NormalizeError> {
    Normalizer::new(sig, cfg, fresh, true).run(p)
}

/// Like [`normalize_aliased`], additionally reporting warnings (currently:
/// variables whose sort was unknown, forcing expansion over the whole
/// signature).
pub fn normalize_aliased_with_warnings(
    sig: &Signature,
    p: &Pattern,
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<(NormalForm, Vec<String>), NormalizeError> {
    let mut n = Normalizer::new(sig, cfg, fresh, true);
    let nf = n.run(p)?;
    Ok((nf, n.warnings))
}

struct Normalizer<'a> {
    sig: &'a Signature,
    cfg: &'a NormalizeConfig,
    fresh: &'a mut FreshNamer,
    with_aliases: bool,
    steps: u64,
    warnings: Vec<String>,
}

impl<'a> Normalizer<'a> {
    fn new(
        sig: &'a Signature,
        cfg: &'a NormalizeConfig,
        fresh: &'a mut FreshNamer,
        with_aliases: bool,
    ) -> Self {
        Normalizer { sig, cfg, fresh, with_aliases, steps: 0, warnings: Vec::new() }
    }

    fn run(&mut self, p: &Pattern) -> Result<NormalForm, NormalizeError> {
        check_linear(p).map_err(NormalizeError::NonLinear)?;
        let tree = self.norm(p)?;
        Ok(NormalForm::from_tree(tree))
    }

    fn tick(&mut self) -> Result<(), NormalizeError> {
        self.steps += 1;
        if self.steps > self.cfg.max_steps {
            Err(NormalizeError::FuelExhausted(self.steps))
        } else {
            Ok(())
        }
    }

    /// Normal form of `p`: `_|_`, or a sum whose summands are (aliased)
    /// constructor patterns.
    fn norm(&mut self, p: &Pattern) -> Result<Pattern, NormalizeError> {
        match p {
            Pattern::Var(_) | Pattern::Bottom => Ok(p.clone()),
            Pattern::App(sym, args) => {
                let nargs =
                    args.iter().map(|a| self.norm(a)).collect::<Result<Vec<_>, _>>()?;
                self.rebuild_app(*sym, nargs)
            }
            Pattern::Plus(l, r) => {
                let l = self.norm(l)?;
                let r = self.norm(r)?;
                Ok(self.mk_plus(l, r))
            }
            Pattern::Minus(l, r) => {
                let l = self.norm(l)?;
                let r = self.norm(r)?;
                self.minus(l, r)
            }
            Pattern::Alias(v, body) => {
                if !self.with_aliases {
                    return Err(NormalizeError::AliasNotSupported);
                }
                let b = self.norm(body)?;
                self.mk_alias(v.clone(), b)
            }
            Pattern::Anti(_) => Err(NormalizeError::AntiPresent),
        }
    }

    /// Empty sets are neutral for the sum.
    fn mk_plus(&mut self, l: Pattern, r: Pattern) -> Pattern {
        match (l, r) {
            (Pattern::Bottom, r) => r,
            (l, Pattern::Bottom) => l,
            (l, r) => Pattern::plus(l, r),
        }
    }

    fn mk_sum(&mut self, parts: Vec<Pattern>) -> Pattern {
        let mut acc = Pattern::Bottom;
        for part in parts {
            acc = self.mk_plus(acc, part);
        }
        acc
    }

    /// An empty argument absorbs the application; sums in arguments are
    /// distributed over the constructor.
    fn rebuild_app(&mut self, sym: SymbolId, nargs: Vec<Pattern>) -> Result<Pattern, NormalizeError> {
        if nargs.iter().any(|a| matches!(a, Pattern::Bottom)) {
            self.tick()?;
            return Ok(Pattern::Bottom);
        }
        let choices: Vec<Vec<Pattern>> = nargs
            .into_iter()
            .map(|a| {
                let mut out = Vec::new();
                flatten(a, &mut out);
                out
            })
            .collect();
        let mut combos: Vec<Vec<Pattern>> = vec![Vec::new()];
        for arg_choices in &choices {
            let mut next = Vec::with_capacity(combos.len() * arg_choices.len());
            for prefix in &combos {
                for c in arg_choices {
                    let mut row = prefix.clone();
                    row.push(c.clone());
                    next.push(row);
                }
            }
            combos = next;
        }
        if combos.len() > 1 {
            self.tick()?;
        }
        let parts: Vec<Pattern> = combos.into_iter().map(|args| Pattern::App(sym, args)).collect();
        Ok(self.mk_sum(parts))
    }

    /// Aliasing `_|_` is `_|_`; an alias over a sum is a sum of aliases.
    fn mk_alias(&mut self, v: Var, body: Pattern) -> Result<Pattern, NormalizeError> {
        match body {
            Pattern::Bottom => {
                self.tick()?;
                Ok(Pattern::Bottom)
            }
            Pattern::Plus(l, r) => {
                self.tick()?;
                let l = self.mk_alias(v.clone(), *l)?;
                let r = self.mk_alias(v, *r)?;
                Ok(self.mk_plus(l, r))
            }
            Pattern::Alias(..) => Err(NormalizeError::AliasChain),
            other => Ok(Pattern::Alias(v, Box::new(other))),
        }
    }

    /// Complement of two normal forms.
    fn minus(&mut self, a: Pattern, b: Pattern) -> Result<Pattern, NormalizeError> {
        self.tick()?;
        match b {
            // subtracting nothing
            Pattern::Bottom => Ok(a),
            // a variable matches everything, nothing is left
            Pattern::Var(_) => Ok(Pattern::Bottom),
            // subtracting a union: subtract the parts one after the other
            Pattern::Plus(b1, b2) => {
                let first = self.minus(a, *b1)?;
                self.minus(first, *b2)
            }
            // an alias on the subtrahend is irrelevant
            Pattern::Alias(_, w) => self.minus(a, *w),
            Pattern::App(g, ts) => self.minus_app(a, g, ts),
            Pattern::Minus(..) | Pattern::Anti(_) => {
                unreachable!("subtrahend is a normal form")
            }
        }
    }

    /// Complement of a normal form against a single constructor pattern.
    fn minus_app(&mut self, a: Pattern, g: SymbolId, ts: Vec<Pattern>) -> Result<Pattern, NormalizeError> {
        match a {
            Pattern::Bottom => Ok(Pattern::Bottom),
            Pattern::Plus(a1, a2) => {
                self.tick()?;
                let l = self.minus_app(*a1, g, ts.clone())?;
                let r = self.minus_app(*a2, g, ts)?;
                Ok(self.mk_plus(l, r))
            }
            Pattern::Alias(x, v) => {
                // the alias tracks the minuend through the complement
                self.tick()?;
                let inner = self.minus_app(*v, g, ts)?;
                self.mk_alias(x, inner)
            }
            Pattern::Var(x) => self.expand_var(x, g, ts),
            Pattern::App(f, vs) => {
                if f == g {
                    self.same_head(f, vs, ts)
                } else {
                    // disjoint head symbols: the subtrahend removes nothing
                    self.tick()?;
                    Ok(Pattern::App(f, vs))
                }
            }
            Pattern::Minus(..) | Pattern::Anti(_) => unreachable!("minuend is a normal form"),
        }
    }

    /// A complemented variable expands into the sum of all constructors of
    /// its sort (or of the whole signature), each complemented by the
    /// subtrahend. The aliasing system wraps the expansion in `x@(...)` so
    /// the variable stays matchable.
    fn expand_var(&mut self, x: Var, g: SymbolId, ts: Vec<Pattern>) -> Result<Pattern, NormalizeError> {
        self.tick()?;
        let constructors = match (self.cfg.sorted_encoding, x.sort) {
            (true, Some(sort)) => self.sig.constructors_of_sort(sort),
            (true, None) => {
                self.warnings.push(format!(
                    "sort of variable `{}` is unknown; expanding over every constructor",
                    x.name
                ));
                self.sig.constructors()
            }
            (false, _) => self.sig.constructors(),
        };
        let mut parts = Vec::with_capacity(constructors.len());
        for c in constructors {
            let arg_sorts = self.sig.arg_sorts(c).expect("constructor").to_vec();
            let args: Vec<Pattern> = arg_sorts
                .into_iter()
                .map(|s| Pattern::Var(self.fresh.fresh_var(Some(s))))
                .collect();
            let candidate = Pattern::App(c, args);
            parts.push(self.minus_app(candidate, g, ts.clone())?);
        }
        let sum = self.mk_sum(parts);
        if self.with_aliases {
            self.mk_alias(x, sum)
        } else {
            Ok(sum)
        }
    }

    /// Complement of two patterns with the same head: one summand per
    /// argument, the argument replaced by its component difference. A
    /// constant complemented by itself is `_|_` (the empty sum).
    fn same_head(&mut self, f: SymbolId, vs: Vec<Pattern>, ts: Vec<Pattern>) -> Result<Pattern, NormalizeError> {
        self.tick()?;
        debug_assert_eq!(vs.len(), ts.len(), "same symbol, same arity");
        let mut parts = Vec::with_capacity(vs.len());
        for k in 0..vs.len() {
            let diff = self.minus(vs[k].clone(), ts[k].clone())?;
            if self.cfg.cut_useless_choices && alpha_eq(&diff, &vs[k]) {
                // this summand subsumes every other one; the whole sum is
                // just the minuend
                return Ok(Pattern::App(f, vs));
            }
            let mut args = vs.clone();
            args[k] = diff;
            parts.push(self.rebuild_app(f, args)?);
        }
        Ok(self.mk_sum(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{alpha_eq_sets, matchable_vars};
    use crate::signature::Signature;

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

    #[test]
    fn complement_of_same_head_patterns() {
        // f(x,y) \ f(z,a)  =>  f(x,b) + f(x,f(_,_))
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
        );
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        let expected = vec![
            Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]),
            Pattern::app(
                f,
                vec![
                    Pattern::var("x"),
                    Pattern::app(f, vec![Pattern::var("y1"), Pattern::var("y2")]),
                ],
            ),
        ];
        assert!(alpha_eq_sets(nf.summands(), &expected), "got {:?}", nf.summands());
    }

    #[test]
    fn complement_with_aliases_keeps_variables() {
        // f(x,y) \ f(z,a)  =>  f(x,y@b) + f(x,y@f(_,_))  under the aliasing system
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::var("z"), Pattern::constant(a)]),
        );
        let nf = normalize_aliased(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        let expected = vec![
            Pattern::app(
                f,
                vec![Pattern::var("x"), Pattern::alias(Var::new("y"), Pattern::constant(b))],
            ),
            Pattern::app(
                f,
                vec![
                    Pattern::var("x"),
                    Pattern::alias(
                        Var::new("y"),
                        Pattern::app(f, vec![Pattern::var("y1"), Pattern::var("y2")]),
                    ),
                ],
            ),
        ];
        assert!(alpha_eq_sets(nf.summands(), &expected), "got {:?}", nf.summands());
        // every matchable variable of the input stays matchable in each summand
        let mv = matchable_vars(&p).unwrap();
        for s in nf.summands() {
            assert!(mv.is_subset(&matchable_vars(s).unwrap()));
        }
    }

    #[test]
    fn tuple_complement_four_summands() {
        // <x,y> \ <b,a>  =>  <a,y>, <f(_,_),y>, <x,b>, <x,f(_,_)>
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::tuple(vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::tuple(vec![Pattern::constant(b), Pattern::constant(a)]),
        );
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        let expected = vec![
            Pattern::tuple(vec![Pattern::constant(a), Pattern::var("y")]),
            Pattern::tuple(vec![
                Pattern::app(f, vec![Pattern::var("x1"), Pattern::var("x2")]),
                Pattern::var("y"),
            ]),
            Pattern::tuple(vec![Pattern::var("x"), Pattern::constant(b)]),
            Pattern::tuple(vec![
                Pattern::var("x"),
                Pattern::app(f, vec![Pattern::var("x1"), Pattern::var("x2")]),
            ]),
        ];
        assert!(alpha_eq_sets(nf.summands(), &expected), "got {:?}", nf.summands());
    }

    #[test]
    fn subtracting_bottom_is_identity() {
        let (sig, a, _, _) = sig_abf();
        let p = Pattern::minus(Pattern::constant(a), Pattern::Bottom);
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert_eq!(nf.summands(), &[Pattern::constant(a)]);
    }

    #[test]
    fn disjoint_constants() {
        let (sig, a, b, _) = sig_abf();
        let p = Pattern::minus(Pattern::constant(a), Pattern::constant(b));
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert_eq!(nf.summands(), &[Pattern::constant(a)]);
    }

    #[test]
    fn constant_minus_itself_is_bottom() {
        let (sig, _, b, _) = sig_abf();
        let p = Pattern::minus(Pattern::constant(b), Pattern::constant(b));
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert!(nf.is_bottom());
    }

    #[test]
    fn alias_of_bottom_is_bottom() {
        let (sig, a, _, _) = sig_abf();
        let p = Pattern::alias(
            Var::new("x"),
            Pattern::minus(Pattern::constant(a), Pattern::constant(a)),
        );
        let nf = normalize_aliased(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert!(nf.is_bottom());
    }

    #[test]
    fn anti_elimination_basic() {
        // f(x,!a) => f(x, z1 \ a)
        let (sig, a, _, f) = sig_abf();
        let p = Pattern::app(f, vec![Pattern::var("x"), Pattern::anti(Pattern::constant(a))]);
        let out = eliminate_anti(&sig, &p, &mut fresh());
        let expected = Pattern::app(
            f,
            vec![
                Pattern::var("x"),
                Pattern::minus(Pattern::var("y0"), Pattern::constant(a)),
            ],
        );
        assert!(alpha_eq(&out, &expected), "got {out:?}");
    }

    #[test]
    fn anti_elimination_nested() {
        // !f(x,!a) => z2 \ f(x, z1 \ a)
        let (sig, a, _, f) = sig_abf();
        let p = Pattern::anti(Pattern::app(
            f,
            vec![Pattern::var("x"), Pattern::anti(Pattern::constant(a))],
        ));
        let out = eliminate_anti(&sig, &p, &mut fresh());
        let expected = Pattern::minus(
            Pattern::var("q2"),
            Pattern::app(
                f,
                vec![Pattern::var("x"), Pattern::minus(Pattern::var("q1"), Pattern::constant(a))],
            ),
        );
        assert!(alpha_eq(&out, &expected), "got {out:?}");
        assert!(check_linear(&out).is_ok());
    }

    #[test]
    fn anti_elimination_identity_on_anti_free() {
        let (sig, _, _, f) = sig_abf();
        let p = Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]);
        assert_eq!(eliminate_anti(&sig, &p, &mut fresh()), p);
    }

    #[test]
    fn anti_under_alias_reuses_the_alias_variable() {
        // y@!a => y \ a; no fresh variable, no alias chain downstream
        let (sig, a, _, _) = sig_abf();
        let p = Pattern::alias(Var::new("y"), Pattern::anti(Pattern::constant(a)));
        let out = eliminate_anti(&sig, &p, &mut fresh());
        assert_eq!(out, Pattern::minus(Pattern::var("y"), Pattern::constant(a)));
    }

    #[test]
    fn cut_useless_choices_collapses() {
        // f(x,a) \ f(a,b): the second component difference is unchanged, so
        // the whole complement is just f(x,a)
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(a)]),
            Pattern::app(f, vec![Pattern::constant(a), Pattern::constant(b)]),
        );
        let on = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert_eq!(on.summands(), &[Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(a)])]);
        // and the unoptimized route agrees semantically
        let off = normalize_plain(&sig, &p, &NormalizeConfig::unoptimized(), &mut fresh()).unwrap();
        let eq = crate::oracle::semantics_equal(&sig, &on.to_pattern(), &off.to_pattern(), 3).unwrap();
        assert!(eq.is_ok());
    }

    #[test]
    fn cut_does_not_fire_when_every_component_shrinks() {
        let (sig, a, b, f) = sig_abf();
        let fab = Pattern::app(f, vec![Pattern::constant(a), Pattern::constant(b)]);
        let p = Pattern::minus(fab.clone(), fab);
        let nf = normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        assert!(nf.is_bottom());
    }

    #[test]
    fn sorted_encoding_restricts_expansion() {
        let mut sig = Signature::new();
        let e = sig.add_sort("E").unwrap();
        let l = sig.add_sort("L").unwrap();
        let a = sig.add_constructor("a", vec![], e).unwrap();
        let b = sig.add_constructor("b", vec![], e).unwrap();
        let c = sig.add_constructor("c", vec![], e).unwrap();
        let nil = sig.add_constructor("nil", vec![], l).unwrap();
        let cons = sig.add_constructor("cons", vec![e, l], l).unwrap();
        // cons(z \ a, nil) with z : E  =>  cons(z@b, nil) + cons(z@c, nil)
        let p = Pattern::app(
            cons,
            vec![
                Pattern::minus(Pattern::Var(Var::sorted("z", e)), Pattern::constant(a)),
                Pattern::constant(nil),
            ],
        );
        let nf = normalize_aliased(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        let expected = vec![
            Pattern::app(
                cons,
                vec![Pattern::alias(Var::new("z"), Pattern::constant(b)), Pattern::constant(nil)],
            ),
            Pattern::app(
                cons,
                vec![Pattern::alias(Var::new("z"), Pattern::constant(c)), Pattern::constant(nil)],
            ),
        ];
        assert!(alpha_eq_sets(nf.summands(), &expected), "got {:?}", nf.summands());
        // without the optimization the ill-sorted candidates still vanish
        // against the well-sorted universe
        let cfg = NormalizeConfig { sorted_encoding: false, ..NormalizeConfig::default() };
        let nf2 = normalize_aliased(&sig, &p, &cfg, &mut fresh()).unwrap();
        let eq = crate::oracle::semantics_equal(&sig, &nf.to_pattern(), &nf2.to_pattern(), 3).unwrap();
        assert!(eq.is_ok());
    }

    #[test]
    fn alias_chain_is_rejected() {
        let (sig, a, _, _) = sig_abf();
        let p = Pattern::alias(
            Var::new("w"),
            Pattern::minus(Pattern::var("x"), Pattern::constant(a)),
        );
        assert_eq!(
            normalize_aliased(&sig, &p, &NormalizeConfig::default(), &mut fresh()),
            Err(NormalizeError::AliasChain)
        );
    }

    #[test]
    fn plain_system_rejects_aliases() {
        let (sig, a, _, _) = sig_abf();
        let p = Pattern::alias(Var::new("x"), Pattern::constant(a));
        assert_eq!(
            normalize_plain(&sig, &p, &NormalizeConfig::default(), &mut fresh()),
            Err(NormalizeError::AliasNotSupported)
        );
    }

    #[test]
    fn normal_form_shape() {
        // no sums below the top, no bottom or complement anywhere
        let (sig, a, b, f) = sig_abf();
        let p = Pattern::minus(
            Pattern::app(
                f,
                vec![
                    Pattern::plus(Pattern::constant(a), Pattern::constant(b)),
                    Pattern::var("y"),
                ],
            ),
            Pattern::app(f, vec![Pattern::constant(a), Pattern::var("w")]),
        );
        let nf = normalize_aliased(&sig, &p, &NormalizeConfig::default(), &mut fresh()).unwrap();
        for s in nf.summands() {
            assert!(s.is_aliased_constructor_pattern(), "bad summand {s:?}");
        }
    }
}
