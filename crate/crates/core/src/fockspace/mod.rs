//! Vertex-algebra backends.
//!
//! [`AlgebraBackend`] is the contract the rest of the crate relies on: a graded
//! basis, the bilinear mode action `u_n w`, and the `sl(2)` operators. The only
//! implementation is the rank-1 Heisenberg Fock space in [`heisenberg`].

mod heisenberg;
pub mod identities;
mod partition;
mod vector;

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};
use crate::Result;

pub use heisenberg::{alpha_mode, Heisenberg};
pub use partition::{partition_count, Partition};
pub use vector::Vector;

/// A vector of the Heisenberg Fock space.
pub type FockVector = Vector<Partition>;

/// Operator degree of the mode `u_n` for `u` of weight `wt`: `wt - n - 1`.
pub fn mode_degree(wt: i64, n: i64) -> i64 {
    wt - n - 1
}

/// `u_n` annihilates every vector of weight `t` when `t + wt(u) - n - 1 < 0`.
pub fn mode_kills(wt_u: i64, n: i64, t: i64) -> bool {
    t + mode_degree(wt_u, n) < 0
}

/// An N-graded Möbius vertex algebra with a homogeneous basis.
pub trait AlgebraBackend: Send + Sync {
    type Label: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn vacuum(&self) -> Self::Label;

    fn label_weight(&self, label: &Self::Label) -> i64;

    /// Homogeneous basis of the weight-`w` piece, in a fixed order. Empty for `w < 0`.
    fn basis(&self, w: i64) -> Vec<Self::Label>;

    fn graded_dim(&self, w: i64) -> usize {
        self.basis(w).len()
    }

    /// `u_n w` on basis labels.
    fn mode_basis(&self, u: &Self::Label, n: i64, w: &Self::Label) -> Arc<Vector<Self::Label>>;

    /// `L(j)` for `j ∈ {-1, 0, 1}`.
    fn sl2_action(&self, j: i64, v: &Vector<Self::Label>) -> Result<Vector<Self::Label>>;

    fn vacuum_vector(&self) -> Vector<Self::Label> {
        Vector::basis(self.vacuum())
    }

    /// Bilinear extension of [`AlgebraBackend::mode_basis`].
    fn mode_action(
        &self,
        u: &Vector<Self::Label>,
        n: i64,
        w: &Vector<Self::Label>,
    ) -> Vector<Self::Label> {
        let mut out = Vector::zero();
        for (a, ca) in u {
            for (b, cb) in w {
                let part = self.mode_basis(a, n, b);
                if !part.is_zero() {
                    out.add_scaled(&part, &(ca * cb));
                }
            }
        }
        out
    }

    /// The common weight of all terms; `None` for the zero vector or a mixed one.
    fn homogeneous_weight(&self, v: &Vector<Self::Label>) -> Option<i64> {
        let mut weights = v.labels().map(|l| self.label_weight(l));
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    /// Largest weight among the terms of `v` (`None` when zero).
    fn max_weight(&self, v: &Vector<Self::Label>) -> Option<i64> {
        v.labels().map(|l| self.label_weight(l)).max()
    }

    /// Weight-`w` component of `v`.
    fn component(&self, v: &Vector<Self::Label>, w: i64) -> Vector<Self::Label> {
        v.filter(|l| self.label_weight(l) == w)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    partition: Partition,
    #[serde(with = "crate::rational::serde_str")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct FockJson {
    terms: Vec<TermJson>,
}

impl Serialize for Vector<Partition> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockJson {
            terms: self
                .iter()
                .map(|(p, c)| TermJson {
                    partition: p.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector<Partition> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FockJson::deserialize(d)?;
        Ok(raw.terms.into_iter().map(|t| (t.partition, t.coeff)).collect())
    }
}

/// Short human-readable rendering, e.g. `3/2*[2,1] - vac`.
pub fn render_vector<L: Ord + Clone + fmt::Display>(v: &Vector<L>) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (l, c)) in v.iter().enumerate() {
        let neg = c < &Rational::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != Rational::from_integer(1.into()) {
            out.push_str(&rational::to_string(&mag));
            out.push('*');
        }
        out.push_str(&l.to_string());
    }
    out
}
