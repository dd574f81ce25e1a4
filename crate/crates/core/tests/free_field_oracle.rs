//! Mode action checked against an independent free-field computation.
//!
//! The basis vector `[p_1, ..., p_k]` corresponds to the normally ordered
//! product of divided derivatives of the boson field, so its mode `n` is a sum
//! of normally ordered oscillator monomials. That sum is evaluated here on a
//! plain polynomial representation, sharing no code with the crate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use vsa_core::fockspace::{AlgebraBackend, Heisenberg, Partition, Vector};

type Poly = BTreeMap<Vec<u32>, BigRational>;

fn binom(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= m - i;
        den *= i + 1;
    }
    num / den
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn oscillator(j: i64, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (parts, c) in p {
        if j < 0 {
            let mut q = parts.clone();
            q.push((-j) as u32);
            *out.entry(sorted_desc(q)).or_insert_with(BigRational::zero) += c;
        } else if j > 0 {
            let mult = parts.iter().filter(|&&x| x as i64 == j).count();
            if mult == 0 {
                continue;
            }
            let mut q = parts.clone();
            let at = q.iter().position(|&x| x as i64 == j).unwrap();
            q.remove(at);
            *out.entry(q).or_insert_with(BigRational::zero) += c * BigRational::from_integer((j * mult as i64).into());
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn tuples(len: usize, lo: i64, hi: i64, sum: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return if sum == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for j in lo..=hi {
        if j == 0 {
            continue;
        }
        for mut rest in tuples(len - 1, lo, hi, sum - j) {
            rest.insert(0, j);
            out.push(rest);
        }
    }
    out
}

fn free_field_mode(u: &[u32], n: i64, w: &[u32]) -> Poly {
    let wt_u: i64 = u.iter().map(|&p| p as i64).sum();
    let wt_w: i64 = w.iter().map(|&p| p as i64).sum();
    let total = n + 1 - wt_u;
    let k = u.len() as i64;
    let lo = total - (k - 1).max(0) * wt_w - k;
    let start: Poly = [(w.to_vec(), BigRational::one())].into();
    let mut out = Poly::new();
    for js in tuples(u.len(), lo.min(-1), wt_w, total) {
        let coeff: BigInt = js.iter().zip(u).map(|(&j, &p)| binom(-j - 1, p as i64 - 1)).product();
        if coeff.is_zero() {
            continue;
        }
        let mut state = start.clone();
        for &j in js.iter().filter(|&&j| j > 0) {
            state = oscillator(j, &state);
        }
        for &j in js.iter().filter(|&&j| j < 0) {
            state = oscillator(j, &state);
        }
        for (parts, c) in state {
            *out.entry(parts).or_insert_with(BigRational::zero) += c * BigRational::from_integer(coeff.clone());
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn as_poly(v: &Vector<Partition>) -> Poly {
    v.iter().map(|(p, c)| (p.parts().to_vec(), c.clone())).collect()
}

#[test]
fn single_oscillator_examples() {
    assert_eq!(free_field_mode(&[1, 1], 1, &[1]), [(vec![1], BigRational::from_integer(2.into()))].into());
    assert_eq!(free_field_mode(&[], -1, &[2, 1]), [(vec![2, 1], BigRational::one())].into());
    assert!(free_field_mode(&[], 0, &[2, 1]).is_empty());
}

#[test]
fn mode_action_matches_free_fields() {
    let h = Heisenberg::new();
    let us: Vec<Partition> = (0..=4).flat_map(|w| h.basis(w)).collect();
    let ws: Vec<Partition> = (0..=4).flat_map(|w| h.basis(w)).collect();
    for u in &us {
        for n in -5..=5 {
            for w in &ws {
                let got = as_poly(&h.mode_action(&Vector::basis(u.clone()), n, &Vector::basis(w.clone())));
                let want = free_field_mode(u.parts(), n, w.parts());
                assert_eq!(got, want, "u={:?} n={n} w={:?}", u.parts(), w.parts());
            }
        }
    }
}
