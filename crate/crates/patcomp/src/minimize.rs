//! Minimal valid subsets of pattern sets.
//!
//! Normalization can leave redundant summands behind: patterns covered by
//! the union of the others. [`minimum`] returns a smallest subset with the
//! same coverage. The search branches on every droppable element, keeping a
//! kernel of elements that provably belong to every valid subset:
//!
//! ```text
//! minimum(P)              = minimum'(P, {})
//! minimum'({}, kernel)    = kernel
//! minimum'({q}+P, kernel) = if subsumed(q, P + kernel)
//!                           then smallest(minimum'(P, {q}+kernel), minimum'(P, kernel))
//!                           else minimum'(P, {q}+kernel)
//! ```
//!
//! where `smallest` prefers its second argument on ties, so dropping wins
//! when both branches tie. Two pre-filters shrink the search: elements
//! subsumed by a single other element can never be needed, and elements not
//! subsumed by all the others together can never be dropped (they seed the
//! kernel, cutting the branching from 2^n to 2^(n-k)).

use crate::analysis::{is_subsumed, AnalysisError};
use crate::normalize::NormalizeConfig;
use crate::pattern::Pattern;
use crate::signature::Signature;
use crate::term::FreshNamer;

/// Observability counters for one minimization run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MinimizeStats {
    pub input_size: usize,
    pub prefiltered_size: usize,
    pub kernel_seed_size: usize,
    pub output_size: usize,
    pub subsumption_calls: usize,
}

/// Which of the search-space reductions to apply. Both are semantics-free:
/// the result is the same size either way.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub prefilter_singles: bool,
    pub seed_kernel: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { prefilter_singles: true, seed_kernel: true }
    }
}

struct Minimizer<'a> {
    sig: &'a Signature,
    cfg: &'a NormalizeConfig,
    fresh: &'a mut FreshNamer,
    patterns: &'a [Pattern],
    calls: usize,
}

impl<'a> Minimizer<'a> {
    fn subsumed(&mut self, target: usize, by: &[usize]) -> Result<bool, AnalysisError> {
        self.calls += 1;
        let set: Vec<Pattern> = by.iter().map(|&i| self.patterns[i].clone()).collect();
        Ok(is_subsumed(self.sig, &self.patterns[target], &set, self.cfg, self.fresh)?
            .is_subsumed())
    }

    /// The recursion above, over indices. `remaining` and `kernel` are
    /// disjoint; the result preserves input order.
    fn search(&mut self, remaining: &[usize], kernel: Vec<usize>) -> Result<Vec<usize>, AnalysisError> {
        let Some((&q, rest)) = remaining.split_first() else {
            return Ok(kernel);
        };
        let context: Vec<usize> = rest.iter().chain(kernel.iter()).copied().collect();
        if self.subsumed(q, &context)? {
            let mut kept_kernel = kernel.clone();
            kept_kernel.push(q);
            let keep = self.search(rest, kept_kernel)?;
            let drop = self.search(rest, kernel)?;
            // strict comparison: ties go to the drop branch
            Ok(if keep.len() < drop.len() { keep } else { drop })
        } else {
            let mut kernel = kernel;
            kernel.push(q);
            self.search(rest, kernel)
        }
    }
}

/// Drop every pattern subsumed by a single other pattern. Mutually
/// subsuming patterns (equal coverage) keep their first representative.
pub fn prefilter_subsumed_by_one(
    sig: &Signature,
    patterns: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<Vec<usize>, AnalysisError> {
    let n = patterns.len();
    let mut dropped = vec![false; n];
    for j in 0..n {
        for i in 0..n {
            if i == j || dropped[i] {
                continue;
            }
            let i_covers_j =
                is_subsumed(sig, &patterns[j], &patterns[i..=i], cfg, fresh)?.is_subsumed();
            if !i_covers_j {
                continue;
            }
            let j_covers_i =
                is_subsumed(sig, &patterns[i], &patterns[j..=j], cfg, fresh)?.is_subsumed();
            if !j_covers_i || i < j {
                dropped[j] = true;
                break;
            }
        }
    }
    Ok((0..n).filter(|&j| !dropped[j]).collect())
}

/// Indices that belong to every valid subset: the elements not subsumed by
/// all the others together.
pub fn seed_kernel(
    sig: &Signature,
    patterns: &[Pattern],
    indices: &[usize],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<Vec<usize>, AnalysisError> {
    let mut kernel = Vec::new();
    for &i in indices {
        let others: Vec<Pattern> = indices
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| patterns[j].clone())
            .collect();
        if !is_subsumed(sig, &patterns[i], &others, cfg, fresh)?.is_subsumed() {
            kernel.push(i);
        }
    }
    Ok(kernel)
}

/// A smallest subset of `patterns` covering the same values, with run
/// statistics. Deterministic: elements are considered in input order and
/// the result preserves input order.
pub fn minimum(
    sig: &Signature,
    patterns: &[Pattern],
    cfg: &NormalizeConfig,
    fresh: &mut FreshNamer,
) -> Result<(Vec<Pattern>, MinimizeStats), AnalysisError> {
    minimum_with_options(sig, patterns, cfg, MinimizeOptions::default(), fresh)
}

pub fn minimum_with_options(
    sig: &Signature,
    patterns: &[Pattern],
    cfg: &NormalizeConfig,
    opts: MinimizeOptions,
    fresh: &mut FreshNamer,
) -> Result<(Vec<Pattern>, MinimizeStats), AnalysisError> {
    let mut stats = MinimizeStats { input_size: patterns.len(), ..Default::default() };
    let mut m = Minimizer { sig, cfg, fresh, patterns, calls: 0 };

    let surviving: Vec<usize> = if opts.prefilter_singles {
        let kept = prefilter_subsumed_by_one(m.sig, patterns, m.cfg, m.fresh)?;
        kept
    } else {
        (0..patterns.len()).collect()
    };
    stats.prefiltered_size = surviving.len();

    let kernel: Vec<usize> = if opts.seed_kernel {
        seed_kernel(m.sig, patterns, &surviving, m.cfg, m.fresh)?
    } else {
        Vec::new()
    };
    stats.kernel_seed_size = kernel.len();

    let remaining: Vec<usize> = surviving.iter().copied().filter(|i| !kernel.contains(i)).collect();
    let mut result = m.search(&remaining, kernel)?;
    result.sort_unstable();
    stats.subsumption_calls = m.calls;
    stats.output_size = result.len();
    Ok((result.into_iter().map(|i| patterns[i].clone()).collect(), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::alpha_eq_sets;
    use crate::signature::SymbolId;

    fn fresh() -> FreshNamer {
        let mut n = FreshNamer::new();
        n.reserve_all(["x", "y", "z", "w", "x1", "x2", "y1", "y2", "z1", "z2"]);
        n
    }

    fn cfg() -> NormalizeConfig {
        NormalizeConfig::default()
    }

    fn sig_abf() -> (Signature, SymbolId, SymbolId, SymbolId) {
        let mut sig = Signature::new();
        let a = sig.add_mono_constructor("a", 0).unwrap();
        let b = sig.add_mono_constructor("b", 0).unwrap();
        let f = sig.add_mono_constructor("f", 2).unwrap();
        (sig, a, b, f)
    }

    #[test]
    fn singleton_is_kept() {
        let (sig, a, _, _) = sig_abf();
        let (out, stats) = minimum(&sig, &[Pattern::constant(a)], &cfg(), &mut fresh()).unwrap();
        assert_eq!(out, vec![Pattern::constant(a)]);
        assert_eq!(stats.output_size, 1);
    }

    #[test]
    fn direct_instance_is_dropped() {
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::constant(a), Pattern::constant(b)]),
        ];
        let kept = prefilter_subsumed_by_one(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kept, vec![0]);
        let (out, _) = minimum(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(out, ps[..1].to_vec());
    }

    #[test]
    fn incomparable_patterns_survive_prefilter() {
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::app(f, vec![Pattern::constant(a), Pattern::var("y")]),
            Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]),
        ];
        let kept = prefilter_subsumed_by_one(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kept, vec![0, 1]);
    }

    #[test]
    fn duplicates_keep_one_survivor() {
        let (sig, _, b, f) = sig_abf();
        let p = Pattern::app(f, vec![Pattern::var("x"), Pattern::constant(b)]);
        let q = Pattern::app(f, vec![Pattern::var("w"), Pattern::constant(b)]);
        let kept = prefilter_subsumed_by_one(&sig, &[p.clone(), q], &cfg(), &mut fresh()).unwrap();
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn kernel_of_pairwise_disjoint_set_is_everything() {
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::constant(a),
            Pattern::constant(b),
            Pattern::app(f, vec![Pattern::var("x"), Pattern::var("y")]),
        ];
        let all: Vec<usize> = (0..3).collect();
        let kernel = seed_kernel(&sig, &ps, &all, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kernel, all);
    }

    #[test]
    fn kernel_keeps_the_variable() {
        let (sig, a, b, f) = sig_abf();
        let ps = vec![
            Pattern::var("x"),
            Pattern::app(f, vec![Pattern::constant(a), Pattern::constant(b)]),
        ];
        let all: Vec<usize> = (0..2).collect();
        let kernel = seed_kernel(&sig, &ps, &all, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kernel, vec![0]);
    }

    /// The six summands of `f(x,!a) \ f(b,a)` minimize to two.
    #[test]
    fn six_summands_down_to_two() {
        let (sig, a, b, f) = sig_abf();
        let fvv = |l: Pattern, r: Pattern| Pattern::app(f, vec![l, r]);
        let ps = vec![
            fvv(Pattern::constant(a), Pattern::constant(b)),
            fvv(fvv(Pattern::var("x1"), Pattern::var("x2")), Pattern::constant(b)),
            fvv(Pattern::constant(a), fvv(Pattern::var("y1"), Pattern::var("y2"))),
            fvv(
                fvv(Pattern::var("u1"), Pattern::var("u2")),
                fvv(Pattern::var("v1"), Pattern::var("v2")),
            ),
            fvv(Pattern::var("x"), Pattern::constant(b)),
            fvv(Pattern::var("y"), fvv(Pattern::var("w1"), Pattern::var("w2"))),
        ];
        let (out, stats) = minimum(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        let expected = vec![
            fvv(Pattern::var("x"), Pattern::constant(b)),
            fvv(Pattern::var("y"), fvv(Pattern::var("w1"), Pattern::var("w2"))),
        ];
        assert!(alpha_eq_sets(&out, &expected), "got {out:?}");
        assert_eq!(stats.input_size, 6);
        assert_eq!(stats.output_size, 2);
        assert!(stats.output_size <= stats.prefiltered_size);
        assert!(stats.prefiltered_size <= stats.input_size);
    }

    /// A pattern subsumed only by the union of the others is dropped.
    #[test]
    fn jointly_subsumed_pattern_is_dropped() {
        let mut sig = Signature::new();
        let a = sig.add_mono_constructor("a", 0).unwrap();
        let b = sig.add_mono_constructor("b", 0).unwrap();
        let f = sig.add_mono_constructor("f", 2).unwrap();
        let g = sig.add_mono_constructor("g", 1).unwrap();
        let fp = |l: Pattern, r: Pattern| Pattern::app(f, vec![l, r]);
        let gp = |x: Pattern| Pattern::app(g, vec![x]);
        let ps = vec![
            fp(gp(Pattern::constant(b)), fp(Pattern::var("x"), Pattern::constant(b))),
            fp(gp(Pattern::constant(b)), fp(Pattern::constant(b), Pattern::var("y"))),
            fp(gp(Pattern::var("x3")), fp(Pattern::constant(a), Pattern::constant(b))),
            fp(Pattern::var("x4"), fp(fp(Pattern::var("z1"), Pattern::var("z2")), Pattern::var("y4"))),
            fp(Pattern::var("x5"), fp(gp(Pattern::var("z5")), Pattern::var("y5"))),
        ];
        // none is subsumed by a single other
        let kept = prefilter_subsumed_by_one(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kept.len(), 5);
        // the first is subsumed by the four others together
        let all: Vec<usize> = (0..5).collect();
        let kernel = seed_kernel(&sig, &ps, &all, &cfg(), &mut fresh()).unwrap();
        assert_eq!(kernel, vec![1, 2, 3, 4]);
        let (out, stats) = minimum(&sig, &ps, &cfg(), &mut fresh()).unwrap();
        assert!(alpha_eq_sets(&out, &ps[1..]), "got {out:?}");
        assert_eq!(stats.kernel_seed_size, 4);
    }

    #[test]
    fn options_do_not_change_cardinality() {
        let (sig, a, b, f) = sig_abf();
        let fvv = |l: Pattern, r: Pattern| Pattern::app(f, vec![l, r]);
        let ps = vec![
            fvv(Pattern::constant(a), Pattern::constant(b)),
            fvv(Pattern::var("x"), Pattern::constant(b)),
            fvv(Pattern::var("y"), fvv(Pattern::var("w1"), Pattern::var("w2"))),
            fvv(Pattern::constant(a), Pattern::var("q")),
        ];
        let every = [
            MinimizeOptions { prefilter_singles: false, seed_kernel: false },
            MinimizeOptions { prefilter_singles: true, seed_kernel: false },
            MinimizeOptions { prefilter_singles: false, seed_kernel: true },
            MinimizeOptions { prefilter_singles: true, seed_kernel: true },
        ];
        let sizes: Vec<usize> = every
            .iter()
            .map(|&o| {
                minimum_with_options(&sig, &ps, &cfg(), o, &mut fresh()).unwrap().0.len()
            })
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] == w[1]), "sizes {sizes:?}");
    }
}
