use std::sync::Arc;

use dashmap::DashMap;

use super::{mode_kills, AlgebraBackend, FockVector, Partition};
use crate::combinatorics::binom_q;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// `α_m` on a Fock vector (zero-momentum sector, so `α_0 = 0`).
///
/// `m < 0` adjoins a part `|m|`; `m > 0` removes a part `m` with factor
/// `m · multiplicity(m)`.
pub fn alpha_mode(m: i64, w: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (p, c) in w {
        alpha_on_partition(m, p, c, &mut out);
    }
    out
}

fn alpha_on_partition(m: i64, p: &Partition, c: &Rational, out: &mut FockVector) {
    match m {
        0 => {}
        m if m < 0 => out.add_term(p.with_part((-m) as u32), c.clone()),
        m => {
            let mult = p.multiplicity(m as u32);
            if mult > 0 {
                let q = p.without_part(m as u32).expect("part present");
                out.add_term(q, c * rational::int(m * mult as i64));
            }
        }
    }
}

type ModeKey = (Partition, i64, Partition);

/// Rank-1 Heisenberg vertex algebra on its zero-momentum Fock space.
///
/// Modes of composite states are computed by recursion on the largest part:
/// for `u = α_{-m} u'`,
/// `u_n w = Σ_{i≥0} binom(-m,i)(-1)^i (α_{-m-i} u'_{n+i} w − (-1)^m u'_{-m+n-i} α_i w)`,
/// with both sums cut off by the grading. Results are memoized per basis triple.
#[derive(Default)]
pub struct Heisenberg {
    memo: DashMap<ModeKey, Arc<FockVector>>,
}

impl Heisenberg {
    pub fn new() -> Self {
        Self::default()
    }

    /// The conformal vector `½ α_{-1}² 1`.
    pub fn conformal_vector() -> FockVector {
        FockVector::term(Partition::from_parts(&[1, 1]), rational::ratio(1, 2))
    }

    /// Number of cached basis mode actions.
    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    fn compute(&self, u: &Partition, n: i64, w: &Partition) -> FockVector {
        if u.is_vacuum() {
            return if n == -1 { FockVector::basis(w.clone()) } else { FockVector::zero() };
        }
        if u.parts() == [1] {
            return alpha_mode(n, &FockVector::basis(w.clone()));
        }
        let (m, rest) = u.split_first().expect("non-vacuum");
        let m = m as i64;
        let (wt_rest, wt_w) = (rest.weight(), w.weight());
        let mut out = FockVector::zero();

        let mut i = 0;
        while !mode_kills(wt_rest, n + i, wt_w) {
            let c = binom_q(-m, i) * rational::sign(i);
            let inner = self.mode_basis(&rest, n + i, w);
            if !inner.is_zero() {
                out.add_scaled(&alpha_mode(-m - i, &inner), &c);
            }
            i += 1;
        }

        let twist = -rational::sign(m);
        for i in 1..=wt_w {
            let lowered = alpha_mode(i, &FockVector::basis(w.clone()));
            if lowered.is_zero() {
                continue;
            }
            let c = binom_q(-m, i) * rational::sign(i) * &twist;
            let inner = self.mode_action(&FockVector::basis(rest.clone()), -m + n - i, &lowered);
            out.add_scaled(&inner, &c);
        }
        out
    }
}

impl AlgebraBackend for Heisenberg {
    type Label = Partition;

    fn vacuum(&self) -> Partition {
        Partition::vacuum()
    }

    fn label_weight(&self, label: &Partition) -> i64 {
        label.weight()
    }

    fn basis(&self, w: i64) -> Vec<Partition> {
        Partition::all_of_weight(w)
    }

    fn graded_dim(&self, w: i64) -> usize {
        super::partition_count(w) as usize
    }

    fn mode_basis(&self, u: &Partition, n: i64, w: &Partition) -> Arc<FockVector> {
        if mode_kills(u.weight(), n, w.weight()) {
            return Arc::new(FockVector::zero());
        }
        let key = (u.clone(), n, w.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Arc::clone(hit.value());
        }
        let value = Arc::new(self.compute(u, n, w));
        Arc::clone(self.memo.entry(key).or_insert(value).value())
    }

    fn sl2_action(&self, j: i64, v: &FockVector) -> Result<FockVector> {
        if !(-1..=1).contains(&j) {
            return Err(Error::domain(format!("L({j}) is not an sl(2) generator")));
        }
        Ok(self.mode_action(&Self::conformal_vector(), j + 1, v))
    }
}
