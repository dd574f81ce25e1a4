//! Monomials `x^1_{n1} ⋯ x^k_{nk} 1` and their linear combinations, the
//! difference-N filtration, the elementary rewrites, and the normal-form
//! algorithm.
//!
//! A word is a sequence of modes whose vectors are basis labels; general
//! vectors are expanded by multilinearity, so words double as canonical keys.

mod json;
mod normal;
mod span;
mod steps;

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;

use num_traits::{One, Zero};

use crate::fockspace::{AlgebraBackend, Vector};
use crate::rational::{self, Rational};

pub use json::{ExpressionJson, TraceJson};
pub use normal::{is_normal, RewriteTrace, Step, StepKind, Straightener};
pub use span::{enumerate_normal_monomials, span_check, SpanReport};
pub use steps::{kill_nonnegative, replace_vector, straighten_head_pair, swap_adjacent};

/// One mode `label_index` of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode<L> {
    pub label: L,
    pub index: i64,
}

impl<L> Mode<L> {
    pub fn new(label: L, index: i64) -> Self {
        Mode { label, index }
    }
}

impl<L: fmt::Display> fmt::Display for Mode<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_({})", self.label, self.index)
    }
}

/// Modes listed left to right; the rightmost acts on the vacuum first.
pub type Word<L> = Vec<Mode<L>>;

/// A scalar multiple of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial<L> {
    pub coeff: Rational,
    pub modes: Word<L>,
}

impl<L: Clone + Ord> Monomial<L> {
    pub fn new(coeff: Rational, modes: Word<L>) -> Self {
        Monomial { coeff, modes }
    }

    pub fn word(modes: Word<L>) -> Self {
        Monomial::new(Rational::one(), modes)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Weight contributed by one mode, `wt(label) - index - 1`.
pub fn mode_weight<A: AlgebraBackend>(alg: &A, m: &Mode<A::Label>) -> i64 {
    alg.label_weight(&m.label) - m.index - 1
}

/// Total weight of the monomial's value.
pub fn word_weight<A: AlgebraBackend>(alg: &A, w: &[Mode<A::Label>]) -> i64 {
    w.iter().map(|m| mode_weight(alg, m)).sum()
}

/// Difference-N filtration level `(N-1)·length + Σ wt(label)`.
pub fn filtration_level<A: AlgebraBackend>(alg: &A, w: &[Mode<A::Label>], n_diff: usize) -> i64 {
    (n_diff as i64 - 1) * w.len() as i64 + w.iter().map(|m| alg.label_weight(&m.label)).sum::<i64>()
}

/// Finite combination of words with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expression<L: Ord> {
    terms: BTreeMap<Word<L>, Rational>,
}

impl<L: Ord> Default for Expression<L> {
    fn default() -> Self {
        Expression {
            terms: BTreeMap::new(),
        }
    }
}

impl<L: Ord + Clone> Expression<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Word<L>, Rational> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word<L>> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word<L>) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · w` without canonicalizing `w`.
    pub(crate) fn add_raw(&mut self, w: Word<L>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Expression<L>, c: &Rational) {
        for (w, x) in other {
            self.add_raw(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial<L>> + '_ {
        self.terms.iter().map(|(w, c)| Monomial::new(c.clone(), w.clone()))
    }
}

impl<'a, L: Ord> IntoIterator for &'a Expression<L> {
    type Item = (&'a Word<L>, &'a Rational);
    type IntoIter = btree_map::Iter<'a, Word<L>, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<L: Ord + fmt::Debug> fmt::Debug for Expression<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, rational::to_string(c))))
            .finish()
    }
}

/// Builds expressions while keeping only canonical words.
///
/// Canonical means: no vacuum modes (`1_{-1}` is the identity and every other
/// vacuum mode is zero), every suffix has nonnegative weight, and the
/// rightmost index is negative (`u_n 1 = 0` for `n >= 0`).
pub struct Canonicalizer<'a, A: AlgebraBackend> {
    alg: &'a A,
    vacuum: A::Label,
}

impl<'a, A: AlgebraBackend> Canonicalizer<'a, A> {
    pub fn new(alg: &'a A) -> Self {
        Canonicalizer {
            alg,
            vacuum: alg.vacuum(),
        }
    }

    /// `None` when the word is zero for structural reasons.
    pub fn canonical(&self, w: Word<A::Label>) -> Option<Word<A::Label>> {
        let mut out = Vec::with_capacity(w.len());
        for m in w {
            if m.label == self.vacuum {
                if m.index != -1 {
                    return None;
                }
            } else {
                out.push(m);
            }
        }
        if out.last().is_some_and(|m| m.index >= 0) {
            return None;
        }
        let mut suffix = 0;
        for m in out.iter().rev() {
            suffix += mode_weight(self.alg, m);
            if suffix < 0 {
                return None;
            }
        }
        Some(out)
    }

    pub fn add(&self, e: &mut Expression<A::Label>, w: Word<A::Label>, c: Rational) {
        if let Some(w) = self.canonical(w) {
            e.add_raw(w, c);
        }
    }

    /// `c · prefix · (Σ vector-mode) · suffix` expanded over the labels of `vector`.
    pub fn add_with_vector(
        &self,
        e: &mut Expression<A::Label>,
        prefix: &[Mode<A::Label>],
        vector: &Vector<A::Label>,
        index: i64,
        suffix: &[Mode<A::Label>],
        c: &Rational,
    ) {
        for (label, x) in vector {
            let mut w = Vec::with_capacity(prefix.len() + 1 + suffix.len());
            w.extend_from_slice(prefix);
            w.push(Mode::new(label.clone(), index));
            w.extend_from_slice(suffix);
            self.add(e, w, c * x);
        }
    }

    pub fn expression(&self, terms: impl IntoIterator<Item = (Word<A::Label>, Rational)>) -> Expression<A::Label> {
        let mut e = Expression::zero();
        for (w, c) in terms {
            self.add(&mut e, w, c);
        }
        e
    }
}

/// The value `Σ c · x^1_{n1} ⋯ x^k_{nk} 1` in the algebra.
pub fn evaluate<A: AlgebraBackend>(alg: &A, e: &Expression<A::Label>) -> Vector<A::Label> {
    let mut out = Vector::zero();
    for (w, c) in e {
        out.add_scaled(&evaluate_word(alg, w), c);
    }
    out
}

pub fn evaluate_word<A: AlgebraBackend>(alg: &A, w: &[Mode<A::Label>]) -> Vector<A::Label> {
    let mut v = alg.vacuum_vector();
    for m in w.iter().rev() {
        if v.is_zero() {
            break;
        }
        v = alg.mode_action(&Vector::basis(m.label.clone()), m.index, &v);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockVector, Heisenberg, Partition};
    use crate::rational::int;

    fn m(parts: &[u32], index: i64) -> Mode<Partition> {
        Mode::new(Partition::from_parts(parts), index)
    }

    #[test]
    fn filtration_examples() {
        let h = Heisenberg::new();
        assert_eq!(filtration_level(&h, &[], 4), 0);
        let w = [m(&[1], -1), m(&[1], -1)];
        assert_eq!(filtration_level(&h, &w, 1), 2);
        assert_eq!(filtration_level(&h, &w, 3), 6);
        assert_eq!(word_weight(&h, &w), 2);
    }

    #[test]
    fn evaluate_examples() {
        let h = Heisenberg::new();
        assert!(evaluate(&h, &Expression::zero()).is_zero());
        let c = Canonicalizer::new(&h);
        let e = c.expression([(vec![m(&[1], -2)], int(1))]);
        assert_eq!(evaluate(&h, &e), FockVector::basis(Partition::from_parts(&[2])));
        let e = c.expression([(vec![m(&[1], -1), m(&[1], -1)], int(1))]);
        assert_eq!(evaluate(&h, &e), FockVector::basis(Partition::from_parts(&[1, 1])));
    }

    #[test]
    fn canonical_forms() {
        let h = Heisenberg::new();
        let c = Canonicalizer::new(&h);
        let vac = Partition::vacuum();
        assert_eq!(
            c.canonical(vec![m(&[1], -1), Mode::new(vac.clone(), -1)]),
            Some(vec![m(&[1], -1)])
        );
        assert_eq!(c.canonical(vec![m(&[1], -1), Mode::new(vac, -2)]), None);
        assert_eq!(c.canonical(vec![m(&[1], 0)]), None);
        // α_2 α_{-1} 1 has negative intermediate weight
        assert_eq!(c.canonical(vec![m(&[1], 2), m(&[1], -1)]), None);
        assert!(c.canonical(vec![m(&[1], 1), m(&[1], -1)]).is_some());
    }
}
