//! Mode identities evaluated on a concrete backend: the commutator formula,
//! the associativity (iterate) formula and the `L(-1)` translation rule.
//!
//! Every sum is finite because a mode `x_j` kills weight-`t` vectors once
//! `t + wt x - j - 1 < 0`; the cut-offs below use the largest weight present.

use num_traits::Zero;

use super::{mode_degree, AlgebraBackend, Vector};
use crate::combinatorics::binom_q;
use crate::rational::{self, Rational};

/// `u_m v_n w - v_n u_m w`.
pub fn commutator_lhs<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    v: &Vector<A::Label>,
    m: i64,
    n: i64,
    w: &Vector<A::Label>,
) -> Vector<A::Label> {
    let uvw = alg.mode_action(u, m, &alg.mode_action(v, n, w));
    let vuw = alg.mode_action(v, n, &alg.mode_action(u, m, w));
    &uvw - &vuw
}

/// `Σ_{j≥0} binom(m, j) (u_j v)_{m+n-j} w`.
pub fn commutator_rhs<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    v: &Vector<A::Label>,
    m: i64,
    n: i64,
    w: &Vector<A::Label>,
) -> Vector<A::Label> {
    let mut out = Vector::zero();
    let (Some(wu), Some(wv)) = (alg.max_weight(u), alg.max_weight(v)) else {
        return out;
    };
    // u_j v = 0 once wt u + wt v - j - 1 < 0
    for j in 0..(wu + wv).max(0) {
        let c = binom_q(m, j);
        if c.is_zero() {
            continue;
        }
        let ujv = alg.mode_action(u, j, v);
        if ujv.is_zero() {
            continue;
        }
        out.add_scaled(&alg.mode_action(&ujv, m + n - j, w), &c);
    }
    out
}

pub fn check_commutator<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    v: &Vector<A::Label>,
    m: i64,
    n: i64,
    w: &Vector<A::Label>,
) -> bool {
    commutator_lhs(alg, u, v, m, n, w) == commutator_rhs(alg, u, v, m, n, w)
}

/// `(u_m v)_n w`, computing `u_m v` first as a vector.
pub fn iterate_lhs<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    m: i64,
    v: &Vector<A::Label>,
    n: i64,
    w: &Vector<A::Label>,
) -> Vector<A::Label> {
    alg.mode_action(&alg.mode_action(u, m, v), n, w)
}

/// `Σ_{i≥0} binom(m,i)(-1)^i (u_{m-i} v_{n+i} w - (-1)^m v_{m+n-i} u_i w)`.
pub fn iterate_rhs<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    m: i64,
    v: &Vector<A::Label>,
    n: i64,
    w: &Vector<A::Label>,
) -> Vector<A::Label> {
    let mut out = Vector::zero();
    let (Some(wu), Some(wv), Some(ww)) = (alg.max_weight(u), alg.max_weight(v), alg.max_weight(w))
    else {
        return out;
    };
    let mut i = 0;
    while mode_degree(wv, n + i) + ww >= 0 {
        let c = binom_q(m, i) * rational::sign(i);
        if !c.is_zero() {
            let vw = alg.mode_action(v, n + i, w);
            if !vw.is_zero() {
                out.add_scaled(&alg.mode_action(u, m - i, &vw), &c);
            }
        }
        i += 1;
    }
    let twist = -rational::sign(m);
    let mut i = 0;
    while mode_degree(wu, i) + ww >= 0 {
        let c = binom_q(m, i) * rational::sign(i) * &twist;
        if !c.is_zero() {
            let uw = alg.mode_action(u, i, w);
            if !uw.is_zero() {
                out.add_scaled(&alg.mode_action(v, m + n - i, &uw), &c);
            }
        }
        i += 1;
    }
    out
}

pub fn check_associativity<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    m: i64,
    v: &Vector<A::Label>,
    n: i64,
    w: &Vector<A::Label>,
) -> bool {
    iterate_lhs(alg, u, m, v, n, w) == iterate_rhs(alg, u, m, v, n, w)
}

/// `(L(-1)u)_n w = -n u_{n-1} w`.
pub fn check_translation<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    n: i64,
    w: &Vector<A::Label>,
) -> bool {
    let Ok(lu) = alg.sl2_action(-1, u) else {
        return false;
    };
    let lhs = alg.mode_action(&lu, n, w);
    let rhs = alg.mode_action(u, n - 1, w).scaled(&rational::int(-n));
    lhs == rhs
}

/// The three `sl(2)` brackets on `v`:
/// `[L0,L-1] = L-1`, `[L0,L1] = -L1`, `[L-1,L1] = -2 L0`.
pub fn check_sl2_brackets<A: AlgebraBackend>(alg: &A, v: &Vector<A::Label>) -> bool {
    let l = |j: i64, x: &Vector<A::Label>| alg.sl2_action(j, x).expect("valid sl(2) index");
    let bracket = |a: i64, b: i64| &l(a, &l(b, v)) - &l(b, &l(a, v));
    let two = Rational::from_integer(2.into());
    bracket(0, -1) == l(-1, v)
        && bracket(0, 1) == -&l(1, v)
        && bracket(-1, 1) == l(0, v).scaled(&-two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockVector, Heisenberg, Partition};

    fn p(parts: &[u32]) -> FockVector {
        FockVector::basis(Partition::from_parts(parts))
    }

    #[test]
    fn commutator_examples() {
        let h = Heisenberg::new();
        let vac = h.vacuum_vector();
        assert_eq!(commutator_lhs(&h, &p(&[1]), &p(&[1]), 1, -1, &vac), vac);
        assert!(check_commutator(&h, &p(&[1]), &p(&[1]), 1, -1, &vac));
        assert!(check_commutator(&h, &vac, &p(&[2, 1]), 3, -2, &p(&[1])));
        assert!(check_commutator(&h, &p(&[2]), &p(&[1]), 0, -2, &p(&[1])));
    }

    #[test]
    fn associativity_small_grid() {
        let h = Heisenberg::new();
        let vecs: Vec<FockVector> = (0..=2)
            .flat_map(|w| h.basis(w))
            .map(FockVector::basis)
            .collect();
        for u in &vecs {
            for v in &vecs {
                for w in &vecs {
                    for m in -3..=2 {
                        for n in -3..=2 {
                            assert!(check_associativity(&h, u, m, v, n, w), "{u:?} {m} {v:?} {n} {w:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translation_and_brackets() {
        let h = Heisenberg::new();
        for u in (0..=3).flat_map(|w| h.basis(w)).map(FockVector::basis) {
            assert!(check_sl2_brackets(&h, &u));
            for n in -3..=3 {
                assert!(check_translation(&h, &u, n, &p(&[2, 1])));
            }
        }
    }
}
