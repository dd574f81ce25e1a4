//! Incremental reduced row echelon form over sparse exact vectors.
//!
//! Columns are basis labels; the pivot of a row is its smallest label. Every
//! row also records how it is built from the vectors that were inserted, so a
//! reduction can be read back as an explicit linear combination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::fockspace::Vector;
use crate::rational::Rational;

#[derive(Clone, Debug)]
struct Row<L: Ord> {
    pivot: L,
    vector: Vector<L>,
    /// `vector = Σ combo[id] · inserted[id]`.
    combo: BTreeMap<usize, Rational>,
}

/// Result of reducing a vector against the current span.
#[derive(Clone, Debug)]
pub struct Reduction<L: Ord> {
    /// What is left after subtracting the span component.
    pub residual: Vector<L>,
    /// `input = residual + Σ combo[id] · inserted[id]`.
    pub combo: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug)]
pub struct Echelon<L: Ord> {
    rows: Vec<Row<L>>,
    inserted: usize,
}

impl<L: Ord> Default for Echelon<L> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            inserted: 0,
        }
    }
}

impl<L: Ord + Clone> Echelon<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered through [`Echelon::insert`], independent or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn reduce(&self, v: &Vector<L>) -> Reduction<L> {
        let mut residual = v.clone();
        let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in &self.rows {
            let c = residual.coeff(&row.pivot);
            if c.is_zero() {
                continue;
            }
            residual.add_scaled(&row.vector, &-c.clone());
            for (id, x) in &row.combo {
                let e = combo.entry(*id).or_insert_with(Rational::zero);
                *e += x * &c;
            }
        }
        combo.retain(|_, x| !x.is_zero());
        Reduction { residual, combo }
    }

    pub fn contains(&self, v: &Vector<L>) -> bool {
        self.reduce(v).residual.is_zero()
    }

    /// Offers `v` under a fresh id; returns the id when `v` enlarged the span.
    pub fn insert(&mut self, v: &Vector<L>) -> Option<usize> {
        let id = self.inserted;
        self.inserted += 1;
        let Reduction { residual, combo } = self.reduce(v);
        let (pivot, lead) = match residual.leading() {
            Some((p, c)) => (p.clone(), c.clone()),
            None => return None,
        };
        // residual = v - Σ combo·inserted
        let mut row_combo: BTreeMap<usize, Rational> =
            combo.into_iter().map(|(k, x)| (k, -x)).collect();
        row_combo.insert(id, Rational::one());
        let inv = lead.recip();
        let vector = residual.scaled(&inv);
        for x in row_combo.values_mut() {
            *x *= &inv;
        }
        // keep the form reduced: clear the new pivot from the existing rows
        for row in &mut self.rows {
            let c = row.vector.coeff(&pivot);
            if c.is_zero() {
                continue;
            }
            row.vector.add_scaled(&vector, &-c.clone());
            for (k, x) in &row_combo {
                let e = row.combo.entry(*k).or_insert_with(Rational::zero);
                *e -= x * &c;
            }
            row.combo.retain(|_, x| !x.is_zero());
        }
        self.rows.push(Row {
            pivot,
            vector,
            combo: row_combo,
        });
        Some(id)
    }
}

/// Exact rank of a family of vectors.
pub fn rank<'a, L: Ord + Clone + 'a>(family: impl IntoIterator<Item = &'a Vector<L>>) -> usize {
    let mut e = Echelon::new();
    for v in family {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(terms: &[(u32, i64)]) -> Vector<u32> {
        terms.iter().map(|&(l, c)| (l, int(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let a = v(&[(0, 1), (1, 2)]);
        let b = v(&[(1, 1), (2, 1)]);
        let c = v(&[(0, 1), (1, 4), (2, 2)]); // a + 2b
        assert_eq!(rank([&a, &b, &c]), 2);
        let mut e = Echelon::new();
        assert_eq!(e.insert(&a), Some(0));
        assert_eq!(e.insert(&b), Some(1));
        assert_eq!(e.insert(&c), None);
        assert!(e.contains(&c));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn reduction_recovers_combination() {
        let a = v(&[(0, 1), (1, 2)]);
        let b = v(&[(1, 1), (2, 1)]);
        let d = v(&[(3, 1)]);
        let mut e = Echelon::new();
        e.insert(&a);
        e.insert(&b);
        e.insert(&d);
        let target = v(&[(0, 3), (1, 5), (2, -1), (3, 7)]); // 3a - b + 7d
        let r = e.reduce(&target);
        assert!(r.residual.is_zero());
        assert_eq!(r.combo.get(&0), Some(&int(3)));
        assert_eq!(r.combo.get(&1), Some(&int(-1)));
        assert_eq!(r.combo.get(&2), Some(&int(7)));
    }
}
