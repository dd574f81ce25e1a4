//! Straightening identities: products `u_{m1} v_{m2}` with close indices
//! rewritten through associator modes and products with separated or smaller
//! indices.
//!
//! Every sum here is generated from the iterate formula
//! `(u_m v)_n = Σ_i binom(m,i)(-1)^i (u_{m-i} v_{n+i} - (-1)^m v_{m+n-i} u_i)`
//! instance by instance; nothing is transcribed from a closed display.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::combinatorics::{
    binom_q, coeffs_upper_bound, coeffs_valid, s_matrix, straightening_coeffs, CoeffVector, ExactMatrix,
};
use crate::fockspace::{mode_kills, AlgebraBackend, Partition, Vector};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// `binom(m, i)(-1)^i`, the weight of the `i`-th term of the iterate formula.
fn binom_sign(m: i64, i: i64) -> Rational {
    binom_q(m, i) * rational::sign(i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: usize) -> Self {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn offset(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    fn size(self, k: usize) -> usize {
        2 * k + self.offset() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind<L: Ord> {
    /// The single mode `vector_index`.
    Associator { vector: Vector<L>, index: i64 },
    /// `left_{left_index} right_{right_index}`.
    Product {
        left: Vector<L>,
        left_index: i64,
        right: Vector<L>,
        right_index: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<L: Ord> {
    pub coeff: Rational,
    pub kind: TermKind<L>,
}

/// A finite combination of mode operators, valid on vectors of weight at most
/// `tail_weight`. Terms that annihilate every such vector have been dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorExpression<L: Ord> {
    terms: Vec<Term<L>>,
    tail_weight: i64,
}

impl<L: Ord + Clone> OperatorExpression<L> {
    pub fn new(tail_weight: i64) -> Self {
        OperatorExpression {
            terms: Vec::new(),
            tail_weight,
        }
    }

    pub fn terms(&self) -> &[Term<L>] {
        &self.terms
    }

    pub fn tail_weight(&self) -> i64 {
        self.tail_weight
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coeff: Rational, kind: TermKind<L>) {
        if !coeff.is_zero() {
            self.terms.push(Term { coeff, kind });
        }
    }

    /// Appends `scale · other`.
    pub fn extend_scaled(&mut self, other: &OperatorExpression<L>, scale: &Rational) {
        for t in &other.terms {
            self.push(&t.coeff * scale, t.kind.clone());
        }
    }

    pub fn product_terms(&self) -> impl Iterator<Item = (&Rational, i64, i64)> {
        self.terms.iter().filter_map(|t| match &t.kind {
            TermKind::Product {
                left_index,
                right_index,
                ..
            } => Some((&t.coeff, *left_index, *right_index)),
            TermKind::Associator { .. } => None,
        })
    }

    /// Evaluates the operator on `tail`.
    pub fn apply<A: AlgebraBackend<Label = L>>(&self, alg: &A, tail: &Vector<L>) -> Result<Vector<L>> {
        if let Some(w) = alg.max_weight(tail) {
            if w > self.tail_weight {
                return Err(Error::domain(format!(
                    "tail of weight {w} exceeds the truncation budget {}",
                    self.tail_weight
                )));
            }
        }
        let mut out = Vector::zero();
        for t in &self.terms {
            let v = match &t.kind {
                TermKind::Associator { vector, index } => alg.mode_action(vector, *index, tail),
                TermKind::Product {
                    left,
                    left_index,
                    right,
                    right_index,
                } => alg.mode_action(left, *left_index, &alg.mode_action(right, *right_index, tail)),
            };
            out.add_scaled(&v, &t.coeff);
        }
        Ok(out)
    }
}

/// Operator degree `wt - index - 1` summed over the modes of a term; `None`
/// when a vector is not homogeneous.
pub fn term_degree<A: AlgebraBackend>(alg: &A, kind: &TermKind<A::Label>) -> Option<i64> {
    match kind {
        TermKind::Associator { vector, index } => Some(alg.homogeneous_weight(vector)? - index - 1),
        TermKind::Product {
            left,
            left_index,
            right,
            right_index,
        } => Some(
            alg.homogeneous_weight(left)? - left_index - 1 + alg.homogeneous_weight(right)? - right_index - 1,
        ),
    }
}

/// Geometry of the `r`-th associativity instance used by a difference-`M`
/// identity centred at `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    /// `-1 - r`.
    pub inner_index: i64,
    /// `2n + r` (even) or `2n + 1 + r` (odd).
    pub outer_index: i64,
    /// Smallest left index of the extracted window, `n - k`.
    pub window_start: i64,
    pub window_len: usize,
}

impl Instance {
    pub fn new(r: usize, n: i64, k: usize, parity: Parity) -> Self {
        Instance {
            inner_index: -1 - r as i64,
            outer_index: 2 * n + parity.offset() + r as i64,
            window_start: n - k as i64,
            window_len: parity.size(k),
        }
    }

    /// Coefficient of `u_{p} v_{q}` in the first sum at summation index `i`:
    /// `binom(-1-r, i)(-1)^i`.
    fn first_coeff(&self, i: i64) -> Rational {
        binom_sign(self.inner_index, i)
    }

    /// Coefficient of `v_{q} u_i` in the second sum: `-(-1)^{-1-r} binom(-1-r,i)(-1)^i`.
    fn second_coeff(&self, i: i64) -> Rational {
        -rational::sign(self.inner_index) * binom_sign(self.inner_index, i)
    }

    fn left_index(&self, i: i64) -> i64 {
        self.inner_index - i
    }

    fn in_window(&self, p: i64) -> bool {
        p >= self.window_start && p < self.window_start + self.window_len as i64
    }
}

fn weight_of<A: AlgebraBackend>(alg: &A, v: &Vector<A::Label>) -> i64 {
    alg.max_weight(v).unwrap_or(0)
}

/// The sums `A_{r,n,k}` (the first associativity sum minus its window) and
/// `B_{r,n}` (the second sum), for the even (`A`, `B`) or odd (`A'`, `B'`)
/// family, truncated to tails of weight at most `tail_weight`.
#[allow(clippy::too_many_arguments)]
pub fn ab_sums<A: AlgebraBackend>(
    alg: &A,
    r: usize,
    n: i64,
    k: usize,
    parity: Parity,
    u: &Vector<A::Label>,
    v: &Vector<A::Label>,
    tail_weight: i64,
) -> Result<(OperatorExpression<A::Label>, OperatorExpression<A::Label>)> {
    if r >= parity.size(k) {
        return Err(Error::domain(format!(
            "r = {r} is outside 0..{} for k = {k}",
            parity.size(k)
        )));
    }
    let inst = Instance::new(r, n, k, parity);
    let (wt_u, wt_v) = (weight_of(alg, u), weight_of(alg, v));

    let mut a_sum = OperatorExpression::new(tail_weight);
    let mut i = 0;
    while !mode_kills(wt_v, inst.outer_index + i, tail_weight) {
        let p = inst.left_index(i);
        if !inst.in_window(p) {
            a_sum.push(
                inst.first_coeff(i),
                TermKind::Product {
                    left: u.clone(),
                    left_index: p,
                    right: v.clone(),
                    right_index: inst.outer_index + i,
                },
            );
        }
        i += 1;
    }

    let mut b_sum = OperatorExpression::new(tail_weight);
    let mut i = 0;
    while !mode_kills(wt_u, i, tail_weight) {
        b_sum.push(
            inst.second_coeff(i),
            TermKind::Product {
                left: v.clone(),
                left_index: inst.inner_index + inst.outer_index - i,
                right: u.clone(),
                right_index: i,
            },
        );
        i += 1;
    }
    Ok((a_sum, b_sum))
}

/// The `M` associativity instances behind the difference-`M` identity
/// centred at `n`, as a linear system in the window products.
#[derive(Clone, Debug)]
pub struct StraighteningSystem {
    pub m: usize,
    pub n: i64,
    pub k: usize,
    pub parity: Parity,
    /// Row `r`, column `j`: coefficient of the `j`-th window product in instance `r`.
    pub equations: ExactMatrix,
    pub instances: Vec<Instance>,
    pub solution: CoeffVector,
}

/// Builds the system from the iterate formula, checks its matrix against
/// `S_M(-n+k-1)` and its solution against the closed-form coefficients.
pub fn build_system(m: usize, n: i64) -> Result<StraighteningSystem> {
    if !coeffs_valid(m, n) {
        return Err(Error::domain(format!(
            "difference-{m} identity needs n <= {} (got {n})",
            coeffs_upper_bound(m)
        )));
    }
    let k = m / 2;
    let parity = Parity::of(m);
    let instances: Vec<Instance> = (0..m).map(|r| Instance::new(r, n, k, parity)).collect();

    let mut entries = vec![vec![Rational::zero(); m]; m];
    for (r, inst) in instances.iter().enumerate() {
        // window products come from i = -1 - r - p for p in the window
        for (j, entry) in entries[r].iter_mut().enumerate() {
            let p = inst.window_start + j as i64;
            let i = inst.inner_index - p;
            if i >= 0 {
                *entry = inst.first_coeff(i);
            }
        }
    }
    let equations = ExactMatrix::from_rows(entries)?;
    let param = -n + k as i64 - 1;
    if equations != s_matrix(m, param) {
        return Err(Error::assertion(format!(
            "associativity system for M={m}, n={n} differs from S_{m}({param})"
        )));
    }
    let mut e1 = vec![Rational::zero(); m];
    e1[0] = Rational::one();
    let solved = equations
        .transpose()
        .solve(&e1)?
        .ok_or_else(|| Error::assertion(format!("associativity system for M={m}, n={n} is singular")))?;
    let solution = straightening_coeffs(m, n)?;
    if solved != solution.values {
        return Err(Error::assertion(format!(
            "eliminated coefficients differ from the closed form at M={m}, n={n}"
        )));
    }
    Ok(StraighteningSystem {
        m,
        n,
        k,
        parity,
        equations,
        instances,
        solution,
    })
}

/// `u_{m1} v_{m2}` with `m2 < 0` and `0 <= m2 - m1 <= n_diff - 1`, rewritten as
/// an operator on tails of weight at most `tail_weight`.
///
/// The result holds associator modes `(u_{-1-r} v)_{T_r}` and products whose
/// smaller index is below `m1`. Like products are merged.
pub fn straighten_pair<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    m1: i64,
    v: &Vector<A::Label>,
    m2: i64,
    n_diff: usize,
    tail_weight: i64,
) -> Result<OperatorExpression<A::Label>> {
    if m2 >= 0 {
        return Err(Error::domain(format!("straightening needs m2 < 0 (got {m2})")));
    }
    let gap = m2 - m1;
    if gap < 0 || gap >= n_diff as i64 {
        return Err(Error::domain(format!(
            "indices ({m1}, {m2}) are not within difference {n_diff}"
        )));
    }
    if alg.homogeneous_weight(u).is_none() || alg.homogeneous_weight(v).is_none() {
        return Err(Error::domain("straightening needs nonzero homogeneous vectors"));
    }
    let m = (gap + 1) as usize;
    let k = m / 2;
    let sys = build_system(m, m1 + k as i64)?;

    let mut merged: BTreeMap<(u8, i64, i64), (Rational, TermKind<A::Label>)> = BTreeMap::new();
    let mut add = |key: (u8, i64, i64), c: Rational, kind: TermKind<A::Label>| {
        merged
            .entry(key)
            .and_modify(|e| e.0 += &c)
            .or_insert((c, kind));
    };
    for (r, inst) in sys.instances.iter().enumerate() {
        let c = sys.solution.get(r);
        if c.is_zero() {
            continue;
        }
        let assoc = alg.mode_action(u, inst.inner_index, v);
        add(
            (0, inst.outer_index, 0),
            c.clone(),
            TermKind::Associator {
                vector: assoc,
                index: inst.outer_index,
            },
        );
        let (a_sum, b_sum) = ab_sums(alg, r, sys.n, k, sys.parity, u, v, tail_weight)?;
        for (tag, sum) in [(1u8, &a_sum), (2u8, &b_sum)] {
            for t in sum.terms() {
                if let TermKind::Product {
                    left_index,
                    right_index,
                    ..
                } = &t.kind
                {
                    add((tag, *left_index, *right_index), -(c * &t.coeff), t.kind.clone());
                }
            }
        }
    }
    let mut out = OperatorExpression::new(tail_weight);
    for (_, (c, kind)) in merged {
        if let TermKind::Associator { vector, .. } = &kind {
            if vector.is_zero() {
                continue;
            }
        }
        out.push(c, kind);
    }
    Ok(out)
}

/// Direct evaluation of the difference-one identity's right-hand side,
/// `(u_{-1}v)_{2n+1} - Σ_{i≥1, i≠-n} u_{-i} v_{2n+i} - Σ_{i≥0} v_{2n-i} u_i`,
/// applied to `tail`.
pub fn difference_one_rhs<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    v: &Vector<A::Label>,
    n: i64,
    tail: &Vector<A::Label>,
) -> Vector<A::Label> {
    let t = weight_of(alg, tail);
    let (wt_u, wt_v) = (weight_of(alg, u), weight_of(alg, v));
    let mut out = alg.mode_action(&alg.mode_action(u, -1, v), 2 * n + 1, tail);
    let mut i = 1;
    while !mode_kills(wt_v, 2 * n + i, t) {
        if i != -n {
            let term = alg.mode_action(u, -i, &alg.mode_action(v, 2 * n + i, tail));
            out = &out - &term;
        }
        i += 1;
    }
    let mut i = 0;
    while !mode_kills(wt_u, i, t) {
        let term = alg.mode_action(v, 2 * n - i, &alg.mode_action(u, i, tail));
        out = &out - &term;
        i += 1;
    }
    out
}

struct TermJson<'a>(&'a Term<Partition>);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let t = self.0;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("coeff", &rational::to_string(&t.coeff))?;
        match &t.kind {
            TermKind::Associator { vector, index } => {
                map.serialize_entry("kind", "assoc")?;
                map.serialize_entry("vector", vector)?;
                map.serialize_entry("index", index)?;
            }
            TermKind::Product {
                left,
                left_index,
                right,
                right_index,
            } => {
                map.serialize_entry("kind", "prod")?;
                map.serialize_entry("left", left)?;
                map.serialize_entry("li", left_index)?;
                map.serialize_entry("right", right)?;
                map.serialize_entry("ri", right_index)?;
            }
        }
        map.end()
    }
}

impl Serialize for OperatorExpression<Partition> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        let terms: Vec<TermJson> = self.terms.iter().map(TermJson).collect();
        map.serialize_entry("terms", &terms)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockVector, Heisenberg};
    use crate::rational::{int, ratio};

    fn p(parts: &[u32]) -> FockVector {
        FockVector::basis(Partition::from_parts(parts))
    }

    #[test]
    fn worked_example_coefficients() {
        assert_eq!(build_system(1, -1).unwrap().solution.values, vec![int(1)]);
        for n in -8..=-1 {
            let s = build_system(2, n).unwrap();
            assert_eq!(s.solution.values, vec![int(n + 1), int(1)]);
        }
        for n in -8..=-2 {
            let s = build_system(3, n).unwrap();
            assert_eq!(s.solution.values, vec![ratio(n * n + 3 * n + 2, 2), int(n + 2), int(1)]);
        }
        assert!(matches!(build_system(2, 0), Err(Error::Domain(_))));
        assert!(matches!(build_system(3, -1), Err(Error::Domain(_))));
    }

    #[test]
    fn systems_match_s_matrix() {
        for m in 1..=6 {
            let top = coeffs_upper_bound(m);
            for n in (top - 8)..=top {
                build_system(m, n).unwrap();
            }
        }
    }

    #[test]
    fn difference_one_window() {
        let h = Heisenberg::new();
        let (u, v) = (p(&[1]), p(&[2]));
        let n = -2;
        let (a, _) = ab_sums(&h, 0, n, 0, Parity::Odd, &u, &v, 4).unwrap();
        // A'_{0,n,0} omits exactly u_n v_n
        assert!(a.product_terms().all(|(_, li, ri)| (li, ri) != (n, n)));
        let excluded = a.product_terms().filter(|(_, li, _)| *li == n).count();
        assert_eq!(excluded, 0);
        assert!(a.product_terms().any(|(_, li, _)| li == n + 1) || a.product_terms().any(|(_, li, _)| li == n - 1));
        assert!(matches!(
            ab_sums(&h, 1, n, 0, Parity::Odd, &u, &v, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn b_sum_vanishes_on_vacuum() {
        let h = Heisenberg::new();
        let (_, b) = ab_sums(&h, 0, -2, 0, Parity::Odd, &p(&[1]), &p(&[1]), 0).unwrap();
        assert!(b.apply(&h, &h.vacuum_vector()).unwrap().is_zero());
    }

    #[test]
    fn ab_matches_iterate_formula() {
        let h = Heisenberg::new();
        let (u, v) = (p(&[1]), p(&[1]));
        let (r, n, k) = (0usize, -1i64, 1usize);
        let vac = h.vacuum_vector();
        let (a, b) = ab_sums(&h, r, n, k, Parity::Even, &u, &v, 0).unwrap();
        let inst = Instance::new(r, n, k, Parity::Even);
        let lhs = h.mode_action(&h.mode_action(&u, -1, &v), inst.outer_index, &vac);
        let mut window = FockVector::zero();
        for j in 0..2 {
            let c = binom_sign(-1, -1 - (n - 1 + j));
            let term = h.mode_action(&u, n - 1 + j, &h.mode_action(&v, n - j, &vac));
            window.add_scaled(&term, &c);
        }
        let rhs = &(&window + &a.apply(&h, &vac).unwrap()) + &b.apply(&h, &vac).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn straighten_pair_examples() {
        let h = Heisenberg::new();
        let vac = h.vacuum_vector();
        let one = p(&[1]);
        let e = straighten_pair(&h, &one, -1, &one, -1, 1, 0).unwrap();
        assert_eq!(e.apply(&h, &vac).unwrap(), p(&[1, 1]));

        let e = straighten_pair(&h, &one, -3, &one, -2, 2, 3).unwrap();
        for tail in (0..=3).flat_map(Partition::all_of_weight) {
            let t = FockVector::basis(tail);
            let direct = h.mode_action(&one, -3, &h.mode_action(&one, -2, &t));
            assert_eq!(e.apply(&h, &t).unwrap(), direct);
        }
        let assoc: Vec<_> = e
            .terms()
            .iter()
            .filter_map(|t| match t.kind {
                TermKind::Associator { index, .. } => Some((index, t.coeff.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(assoc, vec![(-4, int(-1)), (-3, int(1))]);

        assert!(matches!(
            straighten_pair(&h, &one, 1, &one, 1, 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            straighten_pair(&h, &one, -4, &one, -2, 2, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            e.apply(&h, &p(&[4])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn apply_basics() {
        let h = Heisenberg::new();
        let vac = h.vacuum_vector();
        assert!(OperatorExpression::<Partition>::new(3).apply(&h, &p(&[2])).unwrap().is_zero());
        let mut e = OperatorExpression::new(0);
        e.push(
            int(1),
            TermKind::Product {
                left: p(&[1]),
                left_index: -1,
                right: p(&[1]),
                right_index: -1,
            },
        );
        assert_eq!(e.apply(&h, &vac).unwrap(), p(&[1, 1]));
        let mut e = OperatorExpression::new(0);
        let assoc = h.mode_action(&p(&[1]), -1, &p(&[1]));
        e.push(int(1), TermKind::Associator { vector: assoc.clone(), index: -1 });
        assert_eq!(e.apply(&h, &vac).unwrap(), h.mode_action(&assoc, -1, &vac));
    }

    #[test]
    fn pair_invariants_and_operator_identity() {
        let h = Heisenberg::new();
        let vecs = [p(&[1]), p(&[2]), p(&[1, 1])];
        for u in &vecs {
            for v in &vecs {
                for m2 in -4..=-1 {
                    for gap in 0..3 {
                        let m1 = m2 - gap;
                        let e = straighten_pair(&h, u, m1, v, m2, 3, 3).unwrap();
                        let deg = h.homogeneous_weight(u).unwrap() + h.homogeneous_weight(v).unwrap() - m1 - m2 - 2;
                        for t in e.terms() {
                            assert_eq!(term_degree(&h, &t.kind), Some(deg));
                        }
                        assert!(e.product_terms().all(|(_, li, ri)| li.min(ri) < m1));
                        for tail in (0..=3).flat_map(Partition::all_of_weight) {
                            let t = FockVector::basis(tail);
                            let direct = h.mode_action(u, m1, &h.mode_action(v, m2, &t));
                            assert_eq!(e.apply(&h, &t).unwrap(), direct);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn difference_one_literal_agrees() {
        let h = Heisenberg::new();
        let (u, v) = (p(&[1]), p(&[2, 1]));
        for n in -3..=-1 {
            let e = straighten_pair(&h, &u, n, &v, n, 1, 3).unwrap();
            for tail in (0..=3).flat_map(Partition::all_of_weight) {
                let t = FockVector::basis(tail);
                assert_eq!(e.apply(&h, &t).unwrap(), difference_one_rhs(&h, &u, &v, n, &t));
            }
        }
    }

    #[test]
    fn json_shape() {
        let mut e = OperatorExpression::new(0);
        e.push(
            ratio(1, 2),
            TermKind::Product {
                left: p(&[1]),
                left_index: -2,
                right: p(&[1]),
                right_index: -1,
            },
        );
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"coeff":"1/2","kind":"prod","left":{"terms":[{"partition":[1],"coeff":"1"}]},"li":-2,"right":{"terms":[{"partition":[1],"coeff":"1"}]},"ri":-1}]}"#
        );
    }
}
