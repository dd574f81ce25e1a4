//! The normal-form algorithm and its rewrite traces.
//!
//! A word is normal when every vector is a quotient representative and the
//! indices satisfy `n_1 < n_2 < ⋯ < n_k < 0` with `n_{i+1} - n_i >= N`. Other
//! words are rewritten by the first rule that applies:
//!
//! 1. a nonnegative index is commuted to the vacuum;
//! 2. the first non-representative vector is replaced;
//! 3. a descending head pair is swapped;
//! 4. a non-normal tail is normalized first;
//! 5. a head pair closer than `N` is straightened.
//!
//! Every word is normalized at most once per [`Straightener`]; the rewrites run
//! on an explicit stack so deep chains do not exhaust the call stack.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_traits::One;

use super::steps::{kill_nonnegative, replace_vector, straighten_head_pair, swap_adjacent};
use super::{filtration_level, word_weight, Canonicalizer, Expression, Mode, Word};
use crate::fockspace::AlgebraBackend;
use crate::subspaces::GeneratorSet;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Swap,
    KillNonneg,
    Replace,
    StraightenPair,
    TailRecursion,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Swap => "swap",
            StepKind::KillNonneg => "killNonneg",
            StepKind::Replace => "replace",
            StepKind::StraightenPair => "straightenPair",
            StepKind::TailRecursion => "tailRecursion",
        }
    }

    /// The identity the step applies.
    pub fn lemma(self) -> &'static str {
        match self {
            StepKind::Swap => "commutator rearrangement",
            StepKind::KillNonneg => "nonnegative modes vanish",
            StepKind::Replace => "quotient replacement",
            StepKind::StraightenPair => "difference-M straightening",
            StepKind::TailRecursion => "tail induction",
        }
    }
}

/// One rewrite of a single word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step<L: Ord> {
    pub kind: StepKind,
    /// The difference `M` of a straightening step.
    pub difference: Option<usize>,
    pub before: Word<L>,
    pub after: Expression<L>,
}

#[derive(Clone, Debug)]
pub struct RewriteTrace<L: Ord> {
    pub input: Expression<L>,
    pub steps: Vec<Step<L>>,
    pub output: Expression<L>,
}

pub fn is_normal<L: Ord + Clone + std::hash::Hash>(w: &[Mode<L>], gens: &GeneratorSet<L>, n_diff: usize) -> bool {
    w.iter().all(|m| m.index < 0 && gens.is_rep(&m.label))
        && w.windows(2).all(|p| p[1].index - p[0].index >= n_diff as i64)
}

enum Decision<L: Ord> {
    Normal,
    Rewrite(Step<L>),
    Tail,
}

enum Frame<L: Ord> {
    Fresh(Word<L>),
    WaitingTail(Word<L>),
    Expanding {
        word: Word<L>,
        children: Vec<(Word<L>, num_rational::BigRational)>,
        next: usize,
        acc: Expression<L>,
    },
}

/// Normalizes expressions for one difference `N` and one generator set,
/// memoizing every word it meets.
pub struct Straightener<'a, A: AlgebraBackend> {
    alg: &'a A,
    gens: &'a GeneratorSet<A::Label>,
    n_diff: usize,
    memo: HashMap<Word<A::Label>, Arc<Expression<A::Label>>>,
    steps: HashMap<Word<A::Label>, Step<A::Label>>,
}

impl<'a, A: AlgebraBackend> Straightener<'a, A> {
    pub fn new(alg: &'a A, gens: &'a GeneratorSet<A::Label>) -> Self {
        Straightener {
            alg,
            gens,
            n_diff: gens.n_diff,
            memo: HashMap::new(),
            steps: HashMap::new(),
        }
    }

    pub fn n_diff(&self) -> usize {
        self.n_diff
    }

    /// Number of words normalized so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Normal form of `e` without a trace.
    pub fn normal_form(&mut self, e: &Expression<A::Label>) -> Result<Expression<A::Label>> {
        let mut out = Expression::zero();
        for (w, c) in e {
            let nf = self.normalize(w)?;
            out.add_scaled(&nf, c);
        }
        Ok(out)
    }

    /// Normal form of `e` with the rewrite steps that produced it.
    pub fn straighten(&mut self, e: &Expression<A::Label>) -> Result<(Expression<A::Label>, RewriteTrace<A::Label>)> {
        let output = self.normal_form(e)?;
        let steps = self.collect_steps(e);
        Ok((
            output.clone(),
            RewriteTrace {
                input: e.clone(),
                steps,
                output,
            },
        ))
    }

    fn collect_steps(&self, e: &Expression<A::Label>) -> Vec<Step<A::Label>> {
        let mut seen: HashSet<&Word<A::Label>> = HashSet::new();
        let mut queue: VecDeque<Word<A::Label>> = e.words().cloned().collect();
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            let Some(step) = self.steps.get(&w) else { continue };
            if !seen.insert(&step.before) {
                continue;
            }
            if step.kind == StepKind::TailRecursion {
                queue.push_back(w[1..].to_vec());
            }
            queue.extend(step.after.words().cloned());
            out.push(step.clone());
        }
        out
    }

    fn guard(&self, w: &[Mode<A::Label>]) -> Result<()> {
        if let Some(head) = w.first() {
            let bound = -(word_weight(self.alg, w) + w.len() as i64);
            if head.index < bound {
                return Err(Error::TerminationGuardExceeded(format!(
                    "head index {} fell below {bound} in a word of length {}",
                    head.index,
                    w.len()
                )));
            }
        }
        Ok(())
    }

    fn decide(&self, w: &[Mode<A::Label>]) -> Result<Decision<A::Label>> {
        self.guard(w)?;
        if is_normal(w, self.gens, self.n_diff) {
            return Ok(Decision::Normal);
        }
        let step = |kind, difference, after| {
            Ok(Decision::Rewrite(Step {
                kind,
                difference,
                before: w.to_vec(),
                after,
            }))
        };
        if w.iter().any(|m| m.index >= 0) {
            return step(StepKind::KillNonneg, None, kill_nonnegative(self.alg, w)?);
        }
        if let Some(pos) = w.iter().position(|m| !self.gens.is_rep(&m.label)) {
            return step(StepKind::Replace, None, replace_vector(self.alg, w, pos, self.gens)?);
        }
        // from here on the word has length >= 2
        if w[0].index > w[1].index {
            return step(StepKind::Swap, None, swap_adjacent(self.alg, w, 0)?);
        }
        if !is_normal(&w[1..], self.gens, self.n_diff) {
            return Ok(Decision::Tail);
        }
        let m = (w[1].index - w[0].index + 1) as usize;
        step(
            StepKind::StraightenPair,
            Some(m),
            straighten_head_pair(self.alg, w, self.n_diff)?,
        )
    }

    /// Normal form of a single canonical word.
    pub fn normalize(&mut self, root: &Word<A::Label>) -> Result<Arc<Expression<A::Label>>> {
        if let Some(hit) = self.memo.get(root) {
            return Ok(Arc::clone(hit));
        }
        let mut in_progress: HashSet<Word<A::Label>> = HashSet::from([root.clone()]);
        let mut stack = vec![Frame::Fresh(root.clone())];
        let canon = Canonicalizer::new(self.alg);

        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Fresh(word) => match self.decide(&word)? {
                    Decision::Normal => {
                        let mut e = Expression::zero();
                        e.add_raw(word.clone(), num_rational::BigRational::one());
                        in_progress.remove(&word);
                        self.memo.insert(word, Arc::new(e));
                    }
                    Decision::Rewrite(step) => {
                        let children = step.after.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
                        self.steps.insert(word.clone(), step);
                        stack.push(Frame::Expanding {
                            word,
                            children,
                            next: 0,
                            acc: Expression::zero(),
                        });
                    }
                    Decision::Tail => {
                        let tail = word[1..].to_vec();
                        stack.push(Frame::WaitingTail(word));
                        if !self.memo.contains_key(&tail) {
                            if !in_progress.insert(tail.clone()) {
                                return Err(cycle_error(&tail));
                            }
                            stack.push(Frame::Fresh(tail));
                        }
                    }
                },
                Frame::WaitingTail(word) => {
                    let tail_nf = Arc::clone(&self.memo[&word[1..]]);
                    let head = &word[..1];
                    let mut after = Expression::zero();
                    for (t, c) in tail_nf.iter() {
                        let mut w = head.to_vec();
                        w.extend_from_slice(t);
                        canon.add(&mut after, w, c.clone());
                    }
                    let children = after.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
                    self.steps.insert(
                        word.clone(),
                        Step {
                            kind: StepKind::TailRecursion,
                            difference: None,
                            before: word.clone(),
                            after,
                        },
                    );
                    stack.push(Frame::Expanding {
                        word,
                        children,
                        next: 0,
                        acc: Expression::zero(),
                    });
                }
                Frame::Expanding {
                    word,
                    children,
                    mut next,
                    mut acc,
                } => {
                    let mut pending = None;
                    while next < children.len() {
                        let (child, c) = &children[next];
                        if let Some(nf) = self.memo.get(child) {
                            acc.add_scaled(nf, c);
                            next += 1;
                        } else {
                            if !in_progress.insert(child.clone()) {
                                return Err(cycle_error(child));
                            }
                            pending = Some(child.clone());
                            break;
                        }
                    }
                    match pending {
                        Some(child) => {
                            stack.push(Frame::Expanding {
                                word,
                                children,
                                next,
                                acc,
                            });
                            stack.push(Frame::Fresh(child));
                        }
                        None => {
                            in_progress.remove(&word);
                            self.memo.insert(word, Arc::new(acc));
                        }
                    }
                }
            }
        }
        Ok(Arc::clone(&self.memo[root]))
    }
}

fn cycle_error<L: std::fmt::Debug>(w: &[Mode<L>]) -> Error {
    Error::TerminationGuardExceeded(format!("rewriting revisited the word {w:?} before finishing it"))
}

impl<L: Ord + Clone + std::hash::Hash> RewriteTrace<L> {
    /// Applies the recorded steps to the input until none applies.
    pub fn replay(&self) -> Expression<L> {
        let rules: HashMap<&Word<L>, &Expression<L>> = self.steps.iter().map(|s| (&s.before, &s.after)).collect();
        let mut current = self.input.clone();
        loop {
            let mut changed = false;
            let mut next = Expression::zero();
            for (w, c) in &current {
                match rules.get(w) {
                    Some(after) => {
                        next.add_scaled(after, c);
                        changed = true;
                    }
                    None => next.add_raw(w.clone(), c.clone()),
                }
            }
            current = next;
            if !changed {
                return current;
            }
        }
    }

    /// Checks the per-step invariants: the filtration level never rises, the
    /// weight is conserved, rearrangement and straightening keep the index
    /// sum of same-length words and lower the head, and replaying the steps
    /// reproduces the output.
    pub fn check<A: AlgebraBackend<Label = L>>(&self, alg: &A, n_diff: usize) -> Result<()> {
        for s in &self.steps {
            let level = filtration_level(alg, &s.before, n_diff);
            let weight = word_weight(alg, &s.before);
            let index_sum: i64 = s.before.iter().map(|m| m.index).sum();
            for w in s.after.words() {
                if filtration_level(alg, w, n_diff) > level {
                    return Err(Error::assertion(format!("{} step raised the filtration level", s.kind.name())));
                }
                if word_weight(alg, w) != weight {
                    return Err(Error::assertion(format!("{} step changed the weight", s.kind.name())));
                }
                let same_length = w.len() == s.before.len();
                match s.kind {
                    StepKind::Swap | StepKind::StraightenPair if same_length => {
                        if w.iter().map(|m| m.index).sum::<i64>() != index_sum {
                            return Err(Error::assertion(format!(
                                "{} step changed the index sum",
                                s.kind.name()
                            )));
                        }
                        let lowered = match s.kind {
                            StepKind::Swap => w[0].index < s.before[0].index,
                            _ => w[0].index.min(w[1].index) < s.before[0].index,
                        };
                        if !lowered {
                            return Err(Error::assertion(format!(
                                "{} step did not lower the head index",
                                s.kind.name()
                            )));
                        }
                    }
                    _ => {}
                }
            }
        }
        if self.replay() != self.output {
            return Err(Error::assertion("replaying the trace does not reproduce the output"));
        }
        Ok(())
    }
}
