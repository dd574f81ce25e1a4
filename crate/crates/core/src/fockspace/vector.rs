use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::rational::{self, Rational};

/// Finite linear combination of basis labels with exact coefficients.
///
/// Zero coefficients are never stored, so the zero vector is the empty map and
/// structural equality is vector equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<L: Ord> {
    terms: BTreeMap<L, Rational>,
}

impl<L: Ord> Default for Vector<L> {
    fn default() -> Self {
        Vector {
            terms: BTreeMap::new(),
        }
    }
}

impl<L: Ord + Clone> Vector<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: L) -> Self {
        Self::term(label, Rational::from_integer(1.into()))
    }

    pub fn term(label: L, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(label, coeff);
        v
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

    pub fn coeff(&self, label: &L) -> Rational {
        self.terms.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, L, Rational> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, label: L, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector<L>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (l, x) in &other.terms {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Vector {
            terms: self.terms.iter().map(|(l, x)| (l.clone(), x * c)).collect(),
        }
    }

    /// Keeps the terms whose labels satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&L) -> bool) -> Self {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| keep(l))
                .map(|(l, x)| (l.clone(), x.clone()))
                .collect(),
        }
    }

    /// Smallest label with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&L, &Rational)> {
        self.terms.iter().next()
    }
}

impl<L: Ord + Clone> FromIterator<(L, Rational)> for Vector<L> {
    fn from_iter<I: IntoIterator<Item = (L, Rational)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (l, c) in iter {
            v.add_term(l, c);
        }
        v
    }
}

impl<'a, L: Ord> IntoIterator for &'a Vector<L> {
    type Item = (&'a L, &'a Rational);
    type IntoIter = btree_map::Iter<'a, L, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<L: Ord + Clone> Add<&Vector<L>> for &Vector<L> {
    type Output = Vector<L>;

    fn add(self, rhs: &Vector<L>) -> Vector<L> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer(1.into()));
        out
    }
}

impl<L: Ord + Clone> Sub<&Vector<L>> for &Vector<L> {
    type Output = Vector<L>;

    fn sub(self, rhs: &Vector<L>) -> Vector<L> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer((-1).into()));
        out
    }
}

impl<L: Ord + Clone> Neg for &Vector<L> {
    type Output = Vector<L>;

    fn neg(self) -> Vector<L> {
        self.scaled(&Rational::from_integer((-1).into()))
    }
}

impl<L: Ord + fmt::Debug> fmt::Debug for Vector<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{:?}", rational::to_string(c), l)?;
        }
        Ok(())
    }
}
