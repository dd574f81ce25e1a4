//! Single rewrite steps on one word. Each returns an expression equal in value
//! to the input word.

use num_traits::One;

use super::{word_weight, Canonicalizer, Expression, Mode};
use crate::combinatorics::binom_q;
use crate::fockspace::{mode_kills, AlgebraBackend, Vector};
use crate::rational::{self, Rational};
use crate::straightening::{straighten_pair, TermKind};
use crate::subspaces::{decompose, GeneratorSet};
use crate::{Error, Result};

fn check_position<L>(w: &[Mode<L>], pos: usize, span: usize) -> Result<()> {
    if pos + span > w.len() {
        return Err(Error::domain(format!(
            "position {pos} is out of range for a word of length {}",
            w.len()
        )));
    }
    Ok(())
}

/// Exchanges the modes at `pos` and `pos + 1` (0-based) using the commutator
/// `[u_m, v_n] = Σ_{j≥0} binom(m,j) (u_j v)_{m+n-j}`.
///
/// The corrections are one mode shorter, so they sit strictly lower in every
/// difference-N filtration.
pub fn swap_adjacent<A: AlgebraBackend>(
    alg: &A,
    w: &[Mode<A::Label>],
    pos: usize,
) -> Result<Expression<A::Label>> {
    check_position(w, pos, 2)?;
    let canon = Canonicalizer::new(alg);
    let (u, v) = (&w[pos], &w[pos + 1]);
    let (prefix, suffix) = (&w[..pos], &w[pos + 2..]);
    let mut out = Expression::zero();

    let mut swapped = w.to_vec();
    swapped.swap(pos, pos + 1);
    canon.add(&mut out, swapped, Rational::one());

    let (wt_u, wt_v) = (alg.label_weight(&u.label), alg.label_weight(&v.label));
    let mut j = 0;
    while !mode_kills(wt_u, j, wt_v) {
        let inner = alg.mode_basis(&u.label, j, &v.label);
        if !inner.is_zero() {
            let c = binom_q(u.index, j);
            canon.add_with_vector(&mut out, prefix, &inner, u.index + v.index - j, suffix, &c);
        }
        j += 1;
    }
    Ok(out)
}

/// Moves the leftmost mode with a nonnegative index to the right end, where it
/// annihilates the vacuum. Only commutator corrections survive.
pub fn kill_nonnegative<A: AlgebraBackend>(alg: &A, w: &[Mode<A::Label>]) -> Result<Expression<A::Label>> {
    let mut pos = w
        .iter()
        .position(|m| m.index >= 0)
        .ok_or_else(|| Error::domain("no mode with a nonnegative index"))?;
    let mut out = Expression::zero();
    let mut current = w.to_vec();
    while pos + 1 < current.len() {
        let step = swap_adjacent(alg, &current, pos)?;
        let mut swapped = current.clone();
        swapped.swap(pos, pos + 1);
        for (word, c) in &step {
            if *word != swapped {
                out.add_raw(word.clone(), c.clone());
            }
        }
        // a zero swapped word means the rest of the chain vanishes too
        if step.coeff(&swapped).is_one() {
            current = swapped;
            pos += 1;
        } else {
            return Ok(out);
        }
    }
    Ok(out)
}

/// Replaces the vector at `pos` by its quotient representatives plus explicit
/// `(a_{-N-1} b)_n` terms, each expanded into products by the iterate formula.
pub fn replace_vector<A: AlgebraBackend>(
    alg: &A,
    w: &[Mode<A::Label>],
    pos: usize,
    gens: &GeneratorSet<A::Label>,
) -> Result<Expression<A::Label>> {
    check_position(w, pos, 1)?;
    let canon = Canonicalizer::new(alg);
    let target = &w[pos];
    let (prefix, suffix) = (&w[..pos], &w[pos + 1..]);
    let dec = decompose(alg, &Vector::basis(target.label.clone()), gens)?;
    let mut out = Expression::zero();
    for (label, c) in &dec.rep_combo {
        let mut word = w.to_vec();
        word[pos].label = label.clone();
        canon.add(&mut out, word, c.clone());
    }

    let tail_weight = word_weight(alg, suffix);
    let inner = -(gens.n_diff as i64) - 1;
    let n = target.index;
    for (lambda, a, b) in &dec.c_terms {
        let (wt_a, wt_b) = (alg.label_weight(a), alg.label_weight(b));
        let build = |first: Mode<A::Label>, second: Mode<A::Label>| {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.extend_from_slice(prefix);
            word.push(first);
            word.push(second);
            word.extend_from_slice(suffix);
            word
        };
        let mut i = 0;
        while !mode_kills(wt_b, n + i, tail_weight) {
            let c = lambda * binom_q(inner, i) * rational::sign(i);
            canon.add(
                &mut out,
                build(Mode::new(a.clone(), inner - i), Mode::new(b.clone(), n + i)),
                c,
            );
            i += 1;
        }
        let twist = -rational::sign(inner);
        let mut i = 0;
        while !mode_kills(wt_a, i, tail_weight) {
            let c = lambda * binom_q(inner, i) * rational::sign(i) * &twist;
            canon.add(
                &mut out,
                build(Mode::new(b.clone(), inner + n - i), Mode::new(a.clone(), i)),
                c,
            );
            i += 1;
        }
    }
    Ok(out)
}

/// Rewrites the first two modes `u_{m1} v_{m2}` (with `m2 < 0` and
/// `0 <= m2 - m1 < n_diff`) by the difference-`M` straightening identity,
/// `M = m2 - m1 + 1`.
pub fn straighten_head_pair<A: AlgebraBackend>(
    alg: &A,
    w: &[Mode<A::Label>],
    n_diff: usize,
) -> Result<Expression<A::Label>> {
    check_position(w, 0, 2)?;
    let canon = Canonicalizer::new(alg);
    let (u, v) = (&w[0], &w[1]);
    let suffix = &w[2..];
    let expr = straighten_pair(
        alg,
        &Vector::basis(u.label.clone()),
        u.index,
        &Vector::basis(v.label.clone()),
        v.index,
        n_diff,
        word_weight(alg, suffix),
    )?;
    let mut out = Expression::zero();
    for t in expr.terms() {
        match &t.kind {
            TermKind::Associator { vector, index } => {
                canon.add_with_vector(&mut out, &[], vector, *index, suffix, &t.coeff);
            }
            TermKind::Product {
                left,
                left_index,
                right,
                right_index,
            } => {
                for (l, cl) in left {
                    let head = [Mode::new(l.clone(), *left_index)];
                    let c = &t.coeff * cl;
                    canon.add_with_vector(&mut out, &head, right, *right_index, suffix, &c);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockVector, Heisenberg, Partition};
    use crate::rewrite::{evaluate, evaluate_word, filtration_level, Word};
    use crate::subspaces::quotient_reps;

    fn m(parts: &[u32], index: i64) -> Mode<Partition> {
        Mode::new(Partition::from_parts(parts), index)
    }

    fn lower_filtration(h: &Heisenberg, e: &Expression<Partition>, w: &Word<Partition>, n: usize) -> bool {
        e.words().all(|x| filtration_level(h, x, n) < filtration_level(h, w, n))
    }

    #[test]
    fn swap_examples() {
        let h = Heisenberg::new();
        let w = vec![m(&[1], -1), m(&[1], -2)];
        let e = swap_adjacent(&h, &w, 0).unwrap();
        assert_eq!(evaluate(&h, &e), evaluate_word(&h, &w));
        assert_eq!(e.coeff(&vec![m(&[1], -2), m(&[1], -1)]), rational::int(1));

        // [α_1, α_{-1}] = 1 shows up as a vacuum-mode correction
        let w = vec![m(&[1], 1), m(&[1], -1)];
        let e = swap_adjacent(&h, &w, 0).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.words().next().unwrap().is_empty());
        assert_eq!(evaluate(&h, &e), h.vacuum_vector());

        let w = vec![m(&[2, 1], -3), m(&[1, 1], -2), m(&[1], -1)];
        for pos in 0..2 {
            let e = swap_adjacent(&h, &w, pos).unwrap();
            assert_eq!(evaluate(&h, &e), evaluate_word(&h, &w));
            let mut swapped = w.clone();
            swapped.swap(pos, pos + 1);
            for n in 1..=3 {
                let corrections: Vec<_> = e.words().filter(|x| **x != swapped).cloned().collect();
                assert!(corrections
                    .iter()
                    .all(|x| filtration_level(&h, x, n) < filtration_level(&h, &w, n)));
            }
        }
        assert!(swap_adjacent(&h, &w, 2).is_err());
    }

    #[test]
    fn kill_examples() {
        let h = Heisenberg::new();
        assert!(kill_nonnegative(&h, &[m(&[1], 0)]).unwrap().is_zero());
        let e = kill_nonnegative(&h, &[m(&[1], 1), m(&[1], -1)]).unwrap();
        assert_eq!(evaluate(&h, &e), h.vacuum_vector());
        assert!(kill_nonnegative(&h, &[m(&[1], -1), m(&[1], 2)]).unwrap().is_zero());
        assert!(matches!(kill_nonnegative(&h, &[m(&[1], -1)]), Err(Error::Domain(_))));

        let w = vec![m(&[2], 1), m(&[1, 1], -2), m(&[2], -3)];
        let e = kill_nonnegative(&h, &w).unwrap();
        assert_eq!(evaluate(&h, &e), evaluate_word(&h, &w));
        for n in 1..=3 {
            assert!(lower_filtration(&h, &e, &w, n));
        }
    }

    #[test]
    fn replace_examples() {
        let h = Heisenberg::new();
        let gens = quotient_reps(&h, 1, 6).unwrap();
        let w = vec![m(&[1], -1)];
        let e = replace_vector(&h, &w, 0, &gens).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&w), rational::int(1));

        let w = vec![m(&[2], -1)];
        let e = replace_vector(&h, &w, 0, &gens).unwrap();
        assert_eq!(evaluate(&h, &e), FockVector::basis(Partition::from_parts(&[2])));
        assert!(lower_filtration(&h, &e, &w, 1));

        for n in 1..=3 {
            let gens = quotient_reps(&h, n, 6).unwrap();
            let w = vec![m(&[1], -1), m(&[3, 1], -2), m(&[2], -1)];
            let e = replace_vector(&h, &w, 1, &gens).unwrap();
            assert_eq!(evaluate(&h, &e), evaluate_word(&h, &w));
            let rep_part: Vec<_> = e.words().filter(|x| x.len() == w.len()).collect();
            assert!(rep_part.iter().all(|x| gens.is_rep(&x[1].label)));
            let extra = e.words().filter(|x| x.len() != w.len());
            assert!(extra.into_iter().all(|x| filtration_level(&h, x, n) < filtration_level(&h, &w, n)));
        }
        assert!(matches!(
            replace_vector(&h, &[m(&[7], -1)], 0, &gens),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn head_pair_examples() {
        let h = Heisenberg::new();
        for n in 1..=3usize {
            for (m1, m2) in [(-1, -1), (-2, -1), (-3, -1), (-4, -3)] {
                if m2 - m1 >= n as i64 {
                    continue;
                }
                let w = vec![m(&[1], m1), m(&[2], m2), m(&[1], -1)];
                let e = straighten_head_pair(&h, &w, n).unwrap();
                assert_eq!(evaluate(&h, &e), evaluate_word(&h, &w));
                let wt = crate::rewrite::word_weight(&h, &w);
                assert!(e.words().all(|x| crate::rewrite::word_weight(&h, x) == wt));
                assert!(e
                    .words()
                    .all(|x| filtration_level(&h, x, n) <= filtration_level(&h, &w, n)));
            }
        }
    }
}
