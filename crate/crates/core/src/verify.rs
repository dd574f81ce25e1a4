//! Seeded verification suites. Each numbered criterion runs an exact check
//! over a fixed grid or a seeded random sample and reports pass/fail with
//! its wall time against a budget.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{
    check_alternating_binomial, coeffs_upper_bound, det_s_closed_form, l_matrix, pascal_matrix, s_matrix, straightening_coeffs,
};
use crate::fockspace::identities::{check_associativity, check_commutator, check_translation};
use crate::fockspace::{AlgebraBackend, FockVector, Heisenberg, Partition};
use crate::linalg::rank;
use crate::rational::{self, Rational};
use crate::rewrite::{evaluate, evaluate_word, is_normal, Canonicalizer, Expression, Mode, RewriteTrace, Straightener};
use crate::straightening::{difference_one_rhs, straighten_pair};
use crate::subspaces::{cn_basis, decompose, quotient_reps, GeneratorSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Combinatorics,
    Algebra,
    Identities,
    Rewrite,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Combinatorics => &[1, 2, 9],
            Suite::Algebra => &[3, 8, 10],
            Suite::Identities => &[4],
            Suite::Rewrite => &[5, 6, 7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combinatorics" => Ok(Suite::Combinatorics),
            "algebra" => Ok(Suite::Algebra),
            "identities" => Ok(Suite::Identities),
            "rewrite" => Ok(Suite::Rewrite),
            "all" => Ok(Suite::All),
            other => Err(Error::domain(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time; left out of JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed_secs: f64,
    #[serde(rename = "budgetSeconds")]
    pub budget_secs: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.2}s of {:.0}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_secs,
            self.budget_secs,
            self.detail
        )
    }
}

/// Largest weight used by the generator-set based criteria.
pub const DESK_WEIGHT: i64 = 10;

/// Shared state across criteria: the backend, generator sets and the traces
/// recorded by the oracle-equivalence run.
pub struct Verifier {
    seed: u64,
    alg: Heisenberg,
    gens: Mutex<BTreeMap<usize, Arc<GeneratorSet<Partition>>>>,
    traces: OnceLock<Vec<(usize, RewriteTrace<Partition>)>>,
}

impl Verifier {
    pub fn new(seed: u64) -> Self {
        Verifier {
            seed,
            alg: Heisenberg::new(),
            gens: Mutex::new(BTreeMap::new()),
            traces: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &Heisenberg {
        &self.alg
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }

    /// Generator set for difference `n` up to [`DESK_WEIGHT`], built once.
    fn gens(&self, n: usize) -> Result<Arc<GeneratorSet<Partition>>> {
        let mut map = self.gens.lock().expect("generator map lock");
        if let Some(g) = map.get(&n) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(quotient_reps(&self.alg, n, DESK_WEIGHT)?);
        map.insert(n, Arc::clone(&g));
        Ok(g)
    }

    pub fn run(&self, suite: Suite) -> Vec<CriterionReport> {
        suite.criteria().iter().map(|&id| self.run_criterion(id)).collect()
    }

    pub fn run_criterion(&self, id: u8) -> CriterionReport {
        let (name, budget, f): (&'static str, u64, fn(&Verifier) -> Result<String>) = match id {
            1 => ("matrix identities", 5, Verifier::matrices),
            2 => ("straightening coefficients", 5, Verifier::coefficients),
            3 => ("mode identities", 60, Verifier::mode_identities),
            4 => ("straightening identities as operators", 120, Verifier::operator_identities),
            5 => ("normal form oracle equivalence", 600, Verifier::oracle_equivalence),
            6 => ("spanning at desk scale", 600, Verifier::spanning),
            7 => ("filtration and weight invariants", 60, Verifier::trace_invariants),
            8 => ("subspace chain and decompositions", 60, Verifier::subspace_chain),
            9 => ("alternating binomial identity fuzz", 1, Verifier::alternating_binomial_fuzz),
            10 => ("generator counts per weight", 60, Verifier::generator_counts),
            _ => ("unknown criterion", 0, |_| Err(Error::domain("no such criterion"))),
        };
        let start = Instant::now();
        let outcome = f(self);
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget);
        let (mut passed, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(e) => (false, format!("{}: {e}", e.kind())),
        };
        if passed && elapsed > budget {
            passed = false;
            detail = format!("over time budget; {detail}");
        }
        CriterionReport {
            id,
            name,
            passed,
            detail,
            elapsed_secs: elapsed.as_secs_f64(),
            budget_secs: budget.as_secs_f64(),
        }
    }

    fn matrices(&self) -> Result<String> {
        let mut checked = 0;
        for n in 1..=8usize {
            for m in (n as i64 - 1)..=(n as i64 + 12) {
                let s = s_matrix(n, m);
                if l_matrix(n, m).mul(&s)? != pascal_matrix(n) {
                    return Err(Error::assertion(format!("L·S != P at N={n}, m={m}")));
                }
                if s.determinant()? != det_s_closed_form(n) {
                    return Err(Error::assertion(format!("det S_{n}({m}) is not the closed form")));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (N, m) pairs"))
    }

    fn coefficients(&self) -> Result<String> {
        let mut checked = 0;
        for n_diff in 1..=6usize {
            for n in -12..=coeffs_upper_bound(n_diff) {
                let c = straightening_coeffs(n_diff, n)?;
                let s = s_matrix(n_diff, c.matrix_parameter());
                let mut e1 = vec![Rational::zero(); n_diff];
                e1[0] = Rational::one();
                if s.vec_mul(&c.values)? != e1 {
                    return Err(Error::assertion(format!("c^T S != e_1 at N={n_diff}, n={n}")));
                }
                let expected = match n_diff {
                    2 => Some(vec![rational::int(n + 1), rational::int(1)]),
                    3 => Some(vec![
                        rational::ratio(n * n + 3 * n + 2, 2),
                        rational::int(n + 2),
                        rational::int(1),
                    ]),
                    _ => None,
                };
                if let Some(expected) = expected {
                    if c.values != expected {
                        return Err(Error::assertion(format!("worked example differs at N={n_diff}, n={n}")));
                    }
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (N, n) pairs"))
    }

    fn mode_identities(&self) -> Result<String> {
        let alg = &self.alg;
        let vecs: Vec<FockVector> = (0..=3).flat_map(Partition::all_of_weight).map(FockVector::basis).collect();
        let tails: Vec<FockVector> = (0..=4).flat_map(Partition::all_of_weight).map(FockVector::basis).collect();
        let failures: Vec<String> = vecs
            .par_iter()
            .flat_map_iter(|u| {
                let mut bad = Vec::new();
                for v in &vecs {
                    for m in -4..=4 {
                        for n in -4..=4 {
                            for w in &tails {
                                if !check_associativity(alg, u, m, v, n, w) {
                                    bad.push(format!("associativity u={u:?} m={m} v={v:?} n={n} w={w:?}"));
                                }
                                if !check_commutator(alg, u, v, m, n, w) {
                                    bad.push(format!("commutator u={u:?} m={m} v={v:?} n={n} w={w:?}"));
                                }
                            }
                        }
                    }
                }
                for n in -4..=4 {
                    for w in &tails {
                        if !check_translation(alg, u, n, w) {
                            bad.push(format!("translation u={u:?} n={n} w={w:?}"));
                        }
                    }
                }
                bad
            })
            .collect();
        match failures.first() {
            Some(f) => Err(Error::assertion(format!("{} failures, first: {f}", failures.len()))),
            None => Ok(format!(
                "{} vectors x {} tails x 81 index pairs",
                vecs.len(),
                tails.len()
            )),
        }
    }

    fn operator_identities(&self) -> Result<String> {
        let alg = &self.alg;
        let vecs: Vec<FockVector> = (0..=3).flat_map(Partition::all_of_weight).map(FockVector::basis).collect();
        let tails: Vec<FockVector> = (0..=5).flat_map(Partition::all_of_weight).map(FockVector::basis).collect();
        let pairs: Vec<(&FockVector, &FockVector)> =
            vecs.iter().flat_map(|u| vecs.iter().map(move |v| (u, v))).collect();
        let counts: Vec<Result<usize>> = pairs
            .par_iter()
            .map(|&(u, v)| {
                let mut checked = 0;
                for n in -6..=-1 {
                    for t in &tails {
                        let lhs = alg.mode_action(u, n, &alg.mode_action(v, n, t));
                        if difference_one_rhs(alg, u, v, n, t) != lhs {
                            return Err(Error::assertion(format!("difference-one identity u={u:?} v={v:?} n={n}")));
                        }
                        checked += 1;
                    }
                }
                for m2 in -6..=-1 {
                    for m in 1..=5i64 {
                        let m1 = m2 - m + 1;
                        let e = straighten_pair(alg, u, m1, v, m2, m as usize, 5)?;
                        for t in &tails {
                            let direct = alg.mode_action(u, m1, &alg.mode_action(v, m2, t));
                            if e.apply(alg, t)? != direct {
                                return Err(Error::assertion(format!(
                                    "difference-{m} identity u={u:?} v={v:?} ({m1}, {m2}) tail {t:?}"
                                )));
                            }
                            checked += 1;
                        }
                    }
                }
                Ok(checked)
            })
            .collect();
        let mut total = 0;
        for c in counts {
            total += c?;
        }
        Ok(format!("{total} operator applications"))
    }

    /// A random canonical word of weight at most [`DESK_WEIGHT`] and length at
    /// most 4 with a nonzero value.
    fn random_word(&self, rng: &mut ChaCha8Rng) -> Vec<Mode<Partition>> {
        let canon = Canonicalizer::new(&self.alg);
        loop {
            let len = rng.gen_range(1..=4);
            let word: Vec<Mode<Partition>> = (0..len)
                .map(|_| {
                    let wt = rng.gen_range(1..=4);
                    let label = Partition::all_of_weight(wt)
                        .choose(rng)
                        .cloned()
                        .expect("nonempty weight space");
                    Mode::new(label, rng.gen_range(-5..=2))
                })
                .collect();
            let weight = crate::rewrite::word_weight(&self.alg, &word);
            if !(0..=DESK_WEIGHT).contains(&weight) {
                continue;
            }
            match canon.canonical(word) {
                Some(w) if !w.is_empty() && !evaluate_word(&self.alg, &w).is_zero() => return w,
                _ => continue,
            }
        }
    }

    fn run_oracle(&self) -> Result<Vec<(usize, RewriteTrace<Partition>)>> {
        const PER_DIFFERENCE: usize = 70;
        let gens: Vec<(usize, Arc<GeneratorSet<Partition>>)> =
            (1..=3).map(|n| self.gens(n).map(|g| (n, g))).collect::<Result<_>>()?;
        let samples: Vec<(usize, Vec<Vec<Mode<Partition>>>)> = gens
            .iter()
            .map(|&(n, _)| {
                let mut rng = self.rng(0x5000 + n as u64);
                (n, (0..PER_DIFFERENCE).map(|_| self.random_word(&mut rng)).collect())
            })
            .collect();
        let groups: Vec<Result<Vec<(usize, RewriteTrace<Partition>)>>> = gens
            .par_iter()
            .zip(samples.par_iter())
            .map(|((n, g), (_, words))| {
                let (n, g) = (*n, &**g);
                let mut s = Straightener::new(&self.alg, g);
                let mut traces = Vec::new();
                for w in words {
                    let mut e = Expression::zero();
                    e.add_raw(w.clone(), Rational::one());
                    let (out, trace) = s.straighten(&e)?;
                    if evaluate(&self.alg, &out) != evaluate_word(&self.alg, w) {
                        return Err(Error::assertion(format!("N={n}: normal form of {w:?} changes its value")));
                    }
                    if let Some(bad) = out.words().find(|x| !is_normal(x, g, n)) {
                        return Err(Error::assertion(format!("N={n}: output word {bad:?} is not normal")));
                    }
                    traces.push((n, trace));
                }
                Ok(traces)
            })
            .collect();
        let mut all = Vec::new();
        for g in groups {
            all.extend(g?);
        }
        Ok(all)
    }

    fn traces(&self) -> Result<&Vec<(usize, RewriteTrace<Partition>)>> {
        if let Some(t) = self.traces.get() {
            return Ok(t);
        }
        let t = self.run_oracle()?;
        Ok(self.traces.get_or_init(|| t))
    }

    fn oracle_equivalence(&self) -> Result<String> {
        let traces = self.traces()?;
        let steps: usize = traces.iter().map(|(_, t)| t.steps.len()).sum();
        let mut by_weight = [0usize; DESK_WEIGHT as usize + 1];
        for (_, t) in traces {
            for w in t.input.words() {
                by_weight[crate::rewrite::word_weight(&self.alg, w) as usize] += 1;
            }
        }
        Ok(format!(
            "{} monomials for N in 1..=3 (count by weight {by_weight:?}), {steps} recorded steps, no guard events",
            traces.len()
        ))
    }

    fn trace_invariants(&self) -> Result<String> {
        let traces = self.traces()?;
        traces
            .par_iter()
            .map(|(n, t)| t.check(&self.alg, *n))
            .collect::<Result<Vec<()>>>()?;
        let steps: usize = traces.iter().map(|(_, t)| t.steps.len()).sum();
        Ok(format!("{steps} steps across {} traces", traces.len()))
    }

    fn spanning(&self) -> Result<String> {
        let mut checked = 0;
        for n in 1..=3 {
            let g = self.gens(n)?;
            for w in 0..=DESK_WEIGHT {
                let r = crate::rewrite::span_check(&self.alg, w, &g)?;
                if !r.ok {
                    return Err(Error::assertion(format!("N={n}, w={w}: rank {} < dim {}", r.rank, r.dim)));
                }
                checked += 1;
            }
        }
        let top = crate::rewrite::span_check(&self.alg, DESK_WEIGHT, &*self.gens(3)?)?;
        Ok(format!("{checked} (N, w) pairs; rank {} at w={DESK_WEIGHT}", top.rank))
    }

    fn subspace_chain(&self) -> Result<String> {
        let alg = &self.alg;
        for w in 0..=DESK_WEIGHT {
            if cn_basis(alg, 1, w)?.dim() != alg.graded_dim(w) {
                return Err(Error::assertion(format!("C_1 differs from V at weight {w}")));
            }
            for n in 1..=4 {
                let big = cn_basis(alg, n, w)?;
                let small = cn_basis(alg, n + 1, w)?;
                if rank(big.vectors.iter().chain(&small.vectors)) != big.dim() {
                    return Err(Error::assertion(format!("C_{} not inside C_{n} at weight {w}", n + 1)));
                }
            }
        }
        let vecs: Vec<FockVector> = (0..=5).flat_map(Partition::all_of_weight).map(FockVector::basis).collect();
        for n in 1..=4usize {
            for u in &vecs {
                let lu = alg.sl2_action(-1, u)?;
                for b in &vecs {
                    let lhs = alg.mode_action(&lu, -(n as i64), b);
                    let rhs = alg.mode_action(u, -(n as i64) - 1, b).scaled(&rational::int(n as i64));
                    if lhs != rhs {
                        return Err(Error::assertion(format!("translation inclusion fails for N={n}, u={u:?}")));
                    }
                }
            }
        }
        let mut samples = 0;
        for n in 1..=4 {
            let g = self.gens(n)?;
            let mut rng = self.rng(0x8000 + n as u64);
            for w in 0..=DESK_WEIGHT {
                let basis = alg.basis(w);
                for _ in 0..100 {
                    let u = random_vector(&mut rng, &basis);
                    let d = decompose(alg, &u, &g)?;
                    if d.reconstruct(alg, n) != u {
                        return Err(Error::assertion(format!("decomposition round trip fails at N={n}, w={w}")));
                    }
                    samples += 1;
                }
            }
        }
        Ok(format!("chain and C_1 = V for w <= {DESK_WEIGHT}; {samples} decompositions"))
    }

    fn alternating_binomial_fuzz(&self) -> Result<String> {
        let mut rng = self.rng(0x9000);
        for _ in 0..500 {
            let m = rng.gen_range(0..=40i64);
            let k = rng.gen_range(1..=m + 1);
            let j = rng.gen_range(1..=m + 1);
            if !check_alternating_binomial(m, k, j)? {
                return Err(Error::assertion(format!("identity fails at (m, k, j) = ({m}, {k}, {j})")));
            }
        }
        Ok("500 triples".into())
    }

    fn generator_counts(&self) -> Result<String> {
        let mut counts = Vec::new();
        for n in 1..=3 {
            let g = self.gens(n)?;
            let mut per_weight = Vec::new();
            for w in 0..=DESK_WEIGHT {
                let cn = cn_basis(&self.alg, n + 1, w)?.dim();
                let reps = g.reps(w).len();
                if reps + cn != self.alg.graded_dim(w) {
                    return Err(Error::assertion(format!("N={n}, w={w}: {reps} reps + {cn} != dim")));
                }
                per_weight.push(reps.to_string());
            }
            counts.push(format!("N={n}: [{}]", per_weight.join(",")));
        }
        Ok(counts.join("; "))
    }
}

/// A nonzero vector with small random rational coefficients on `basis`.
fn random_vector(rng: &mut ChaCha8Rng, basis: &[Partition]) -> FockVector {
    loop {
        let v: FockVector = basis
            .iter()
            .filter_map(|p| {
                rng.gen_bool(0.6)
                    .then(|| (p.clone(), rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))))
            })
            .collect();
        if !v.is_zero() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        let v = Verifier::new(0);
        for id in [1, 2, 9] {
            let r = v.run_criterion(id);
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
