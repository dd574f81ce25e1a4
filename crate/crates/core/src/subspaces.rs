//! The subspaces `C_N(V) = span{u_{-N} v}` graded by weight, quotient
//! representatives for `V / C_{N+1}(V)`, and explicit decompositions
//! `u = Σ x + Σ λ a_{-N-1} b`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fockspace::{AlgebraBackend, FockVector, Heisenberg, Partition, Vector};
use crate::linalg::Echelon;
use crate::rational::Rational;
use crate::{Error, Result};

/// An independent spanning family of `C_N(V)_w`, each vector with the pair of
/// basis labels `(a, b)` such that `vector = a_{-N} b`.
#[derive(Clone, Debug)]
pub struct CnBasis<L: Ord> {
    pub n: usize,
    pub weight: i64,
    pub vectors: Vec<Vector<L>>,
    pub witnesses: Vec<(L, L)>,
}

impl<L: Ord + Clone> CnBasis<L> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Enumerates every basis pair `(a, b)` with `wt a + wt b = w - N + 1` and
/// keeps the products `a_{-N} b` that enlarge the span.
pub fn cn_basis<A: AlgebraBackend>(alg: &A, n: usize, w: i64) -> Result<CnBasis<A::Label>> {
    if n == 0 {
        return Err(Error::domain("C_N needs N >= 1"));
    }
    let mut out = CnBasis {
        n,
        weight: w,
        vectors: Vec::new(),
        witnesses: Vec::new(),
    };
    let pair_weight = w - n as i64 + 1;
    if w < 0 || pair_weight < 0 {
        return Ok(out);
    }
    let mode = -(n as i64);
    let mut echelon = Echelon::new();
    for wa in (0..=pair_weight).rev() {
        let a_basis = alg.basis(wa);
        let b_basis = alg.basis(pair_weight - wa);
        for a in &a_basis {
            for b in &b_basis {
                let v = alg.mode_basis(a, mode, b);
                if v.is_zero() {
                    continue;
                }
                if echelon.insert(&v).is_some() {
                    out.vectors.push((*v).clone());
                    out.witnesses.push((a.clone(), b.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Data kept for one weight of a [`GeneratorSet`].
#[derive(Clone, Debug)]
pub struct WeightGenerators<L: Ord> {
    /// Basis labels chosen as representatives of `(V / C_{N+1}(V))_w`.
    pub reps: Vec<L>,
    /// `C_{N+1}(V)_w` with witnesses.
    pub cn: CnBasis<L>,
    /// Echelon form of `cn.vectors` followed by the representative candidates.
    echelon: Echelon<L>,
    /// Echelon insertion id -> representative label.
    rep_ids: HashMap<usize, L>,
}

/// Homogeneous representatives of a basis of `V / C_{N+1}(V)` up to a weight.
#[derive(Clone, Debug)]
pub struct GeneratorSet<L: Ord> {
    /// The difference `N`; the quotient is by `C_{N+1}`.
    pub n_diff: usize,
    pub max_weight: i64,
    pub per_weight: BTreeMap<i64, WeightGenerators<L>>,
    rep_set: HashSet<L>,
}

impl<L: Ord + Clone + std::hash::Hash> GeneratorSet<L> {
    pub fn reps(&self, w: i64) -> &[L] {
        self.per_weight.get(&w).map_or(&[], |g| &g.reps)
    }

    pub fn is_rep(&self, label: &L) -> bool {
        self.rep_set.contains(label)
    }

    pub fn cn_dim(&self, w: i64) -> usize {
        self.per_weight.get(&w).map_or(0, |g| g.cn.dim())
    }

    /// All representatives, weight by weight.
    pub fn all_reps(&self) -> impl Iterator<Item = &L> {
        self.per_weight.values().flat_map(|g| g.reps.iter())
    }
}

fn extend_to_basis<A: AlgebraBackend>(alg: &A, cn: CnBasis<A::Label>) -> WeightGenerators<A::Label> {
    let mut echelon = Echelon::new();
    for v in &cn.vectors {
        echelon.insert(v);
    }
    let mut reps = Vec::new();
    let mut rep_ids = HashMap::new();
    for label in alg.basis(cn.weight) {
        if let Some(id) = echelon.insert(&Vector::basis(label.clone())) {
            rep_ids.insert(id, label.clone());
            reps.push(label);
        }
    }
    WeightGenerators {
        reps,
        cn,
        echelon,
        rep_ids,
    }
}

/// Builds representatives for `V / C_{N+1}(V)` at every weight `<= max_weight`
/// by greedily extending a basis of `C_{N+1}(V)_w` with basis labels in order.
pub fn quotient_reps<A: AlgebraBackend>(
    alg: &A,
    n_diff: usize,
    max_weight: i64,
) -> Result<GeneratorSet<A::Label>> {
    if n_diff == 0 {
        return Err(Error::domain("the difference N must be positive"));
    }
    let per_weight: BTreeMap<i64, WeightGenerators<A::Label>> = (0..=max_weight.max(-1))
        .into_par_iter()
        .map(|w| cn_basis(alg, n_diff + 1, w).map(|cn| (w, extend_to_basis(alg, cn))))
        .collect::<Result<_>>()?;
    let rep_set = per_weight.values().flat_map(|g| g.reps.iter().cloned()).collect();
    Ok(GeneratorSet {
        n_diff,
        max_weight,
        per_weight,
        rep_set,
    })
}

/// `u = Σ rep_combo + Σ λ · a_{-N-1} b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<L: Ord> {
    pub rep_combo: BTreeMap<L, Rational>,
    /// `(λ, a, b)` with `a, b` basis labels.
    pub c_terms: Vec<(Rational, L, L)>,
}

impl<L: Ord + Clone> Decomposition<L> {
    /// Rebuilds the decomposed vector from its parts.
    pub fn reconstruct<A: AlgebraBackend<Label = L>>(&self, alg: &A, n_diff: usize) -> Vector<L> {
        let mut v: Vector<L> = self.rep_combo.iter().map(|(l, c)| (l.clone(), c.clone())).collect();
        let mode = -(n_diff as i64) - 1;
        for (lambda, a, b) in &self.c_terms {
            v.add_scaled(&alg.mode_basis(a, mode, b), lambda);
        }
        v
    }
}

pub fn decompose<A: AlgebraBackend>(
    alg: &A,
    u: &Vector<A::Label>,
    gens: &GeneratorSet<A::Label>,
) -> Result<Decomposition<A::Label>> {
    if u.is_zero() {
        return Err(Error::domain("cannot decompose the zero vector"));
    }
    let w = alg
        .homogeneous_weight(u)
        .ok_or_else(|| Error::domain("decompose needs a homogeneous vector"))?;
    if w > gens.max_weight {
        return Err(Error::domain(format!(
            "weight {w} exceeds the generator set bound {}",
            gens.max_weight
        )));
    }
    let g = &gens.per_weight[&w];
    let red = g.echelon.reduce(u);
    if !red.residual.is_zero() {
        return Err(Error::assertion("representatives and C-basis do not span the weight space"));
    }
    let cn_dim = g.cn.dim();
    let mut out = Decomposition {
        rep_combo: BTreeMap::new(),
        c_terms: Vec::new(),
    };
    for (id, c) in red.combo {
        if id < cn_dim {
            let (a, b) = g.cn.witnesses[id].clone();
            out.c_terms.push((c, a, b));
        } else {
            let label = g.rep_ids.get(&id).ok_or_else(|| {
                Error::assertion("reduction used a basis candidate that is not a representative")
            })?;
            out.rep_combo.insert(label.clone(), c);
        }
    }
    if &out.reconstruct(alg, gens.n_diff) != u {
        return Err(Error::assertion("decomposition does not reconstruct its input"));
    }
    Ok(out)
}

/// Format version of the generator cache file.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CnWitnessJson {
    a: FockVector,
    b: FockVector,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    reps: Vec<FockVector>,
    #[serde(rename = "cnDim")]
    cn_dim: usize,
    #[serde(rename = "cnBasis")]
    cn_basis: Vec<CnWitnessJson>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorCacheJson {
    #[serde(rename = "schemaVersion")]
    schema_version: u32,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "maxWeight")]
    max_weight: i64,
    weights: BTreeMap<String, WeightJson>,
}

fn single_label(v: &FockVector) -> Result<Partition> {
    match (v.len(), v.leading()) {
        (1, Some((p, c))) if *c == Rational::from_integer(1.into()) => Ok(p.clone()),
        _ => Err(Error::Cache("cached vectors must be single basis states".into())),
    }
}

impl GeneratorSet<Partition> {
    pub fn to_json(&self) -> Result<String> {
        let weights = self
            .per_weight
            .iter()
            .map(|(w, g)| {
                let entry = WeightJson {
                    reps: g.reps.iter().cloned().map(FockVector::basis).collect(),
                    cn_dim: g.cn.dim(),
                    cn_basis: g
                        .cn
                        .witnesses
                        .iter()
                        .map(|(a, b)| CnWitnessJson {
                            a: FockVector::basis(a.clone()),
                            b: FockVector::basis(b.clone()),
                        })
                        .collect(),
                };
                (w.to_string(), entry)
            })
            .collect();
        Ok(serde_json::to_string(&GeneratorCacheJson {
            schema_version: CACHE_SCHEMA_VERSION,
            n: self.n_diff,
            max_weight: self.max_weight,
            weights,
        })?)
    }

    /// Loads a cache, rejecting it unless `(N, maxWeight, schemaVersion)`
    /// match. C-basis vectors are recomputed from their witnesses and every
    /// stored dimension is re-checked.
    pub fn from_json(alg: &Heisenberg, json: &str, n_diff: usize, max_weight: i64) -> Result<Self> {
        let raw: GeneratorCacheJson = serde_json::from_str(json)?;
        if raw.schema_version != CACHE_SCHEMA_VERSION || raw.n != n_diff || raw.max_weight != max_weight {
            return Err(Error::Cache(format!(
                "cache header (N={}, maxWeight={}, schema={}) does not match (N={n_diff}, maxWeight={max_weight}, schema={CACHE_SCHEMA_VERSION})",
                raw.n, raw.max_weight, raw.schema_version
            )));
        }
        let mut per_weight = BTreeMap::new();
        for w in 0..=max_weight {
            let entry = raw
                .weights
                .get(&w.to_string())
                .ok_or_else(|| Error::Cache(format!("cache has no entry for weight {w}")))?;
            let mut cn = CnBasis {
                n: n_diff + 1,
                weight: w,
                vectors: Vec::new(),
                witnesses: Vec::new(),
            };
            let mut echelon = Echelon::new();
            for wit in &entry.cn_basis {
                let (a, b) = (single_label(&wit.a)?, single_label(&wit.b)?);
                let v = alg.mode_basis(&a, -(n_diff as i64) - 1, &b);
                if echelon.insert(&v).is_none() || alg.homogeneous_weight(&v) != Some(w) {
                    return Err(Error::Cache(format!("stale C-basis witness at weight {w}")));
                }
                cn.vectors.push((*v).clone());
                cn.witnesses.push((a, b));
            }
            let mut rep_ids = HashMap::new();
            let mut reps = Vec::new();
            for r in &entry.reps {
                let label = single_label(r)?;
                let id = echelon
                    .insert(r)
                    .ok_or_else(|| Error::Cache(format!("dependent representative at weight {w}")))?;
                rep_ids.insert(id, label.clone());
                reps.push(label);
            }
            if cn.dim() != entry.cn_dim || echelon.rank() != alg.graded_dim(w) {
                return Err(Error::Cache(format!("dimension mismatch at weight {w}")));
            }
            per_weight.insert(
                w,
                WeightGenerators {
                    reps,
                    cn,
                    echelon,
                    rep_ids,
                },
            );
        }
        let rep_set = per_weight.values().flat_map(|g| g.reps.iter().cloned()).collect();
        Ok(GeneratorSet {
            n_diff,
            max_weight,
            per_weight,
            rep_set,
        })
    }

    /// Reads a matching cache from `path` or builds the set and writes it there.
    pub fn load_or_build(
        alg: &Heisenberg,
        n_diff: usize,
        max_weight: i64,
        path: Option<&Path>,
    ) -> Result<Self> {
        if let Some(path) = path {
            if path.exists() {
                let text = fs::read_to_string(path)?;
                if let Ok(g) = Self::from_json(alg, &text, n_diff, max_weight) {
                    return Ok(g);
                }
            }
        }
        let g = quotient_reps(alg, n_diff, max_weight)?;
        if let Some(path) = path {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(path, g.to_json()?)?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    #[test]
    fn cn_examples() {
        let h = Heisenberg::new();
        assert_eq!(cn_basis(&h, 2, 0).unwrap().dim(), 0);
        assert_eq!(cn_basis(&h, 2, 1).unwrap().dim(), 0);
        let c = cn_basis(&h, 2, 2).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.vectors[0], FockVector::basis(p(&[2])));
        assert_eq!(c.witnesses[0], (p(&[1]), Partition::vacuum()));
        for w in 0..=6 {
            assert_eq!(cn_basis(&h, 1, w).unwrap().dim(), h.graded_dim(w));
        }
    }

    #[test]
    fn quotient_examples() {
        let h = Heisenberg::new();
        let g = quotient_reps(&h, 1, 4).unwrap();
        assert_eq!(g.reps(0), &[Partition::vacuum()]);
        assert_eq!(g.reps(1), &[p(&[1])]);
        assert_eq!(g.reps(2), &[p(&[1, 1])]);
        assert_eq!(g.cn_dim(2), 1);
        for n in 1..=3 {
            let g = quotient_reps(&h, n, 5).unwrap();
            assert_eq!(g.reps(0), &[Partition::vacuum()]);
            for w in 0..=5 {
                assert_eq!(g.reps(w).len() + g.cn_dim(w), h.graded_dim(w));
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let h = Heisenberg::new();
        let g = quotient_reps(&h, 1, 4).unwrap();
        let d = decompose(&h, &FockVector::basis(p(&[1])), &g).unwrap();
        assert_eq!(d.rep_combo, BTreeMap::from([(p(&[1]), int(1))]));
        assert!(d.c_terms.is_empty());

        let d = decompose(&h, &FockVector::basis(p(&[2])), &g).unwrap();
        assert!(d.rep_combo.is_empty());
        assert_eq!(d.c_terms, vec![(int(1), p(&[1]), Partition::vacuum())]);

        let d = decompose(&h, &FockVector::term(p(&[1]), int(3)), &g).unwrap();
        assert_eq!(d.rep_combo, BTreeMap::from([(p(&[1]), int(3))]));

        assert!(matches!(decompose(&h, &FockVector::zero(), &g), Err(Error::Domain(_))));
        let mixed = &FockVector::basis(p(&[1])) + &FockVector::basis(p(&[2]));
        assert!(matches!(decompose(&h, &mixed, &g), Err(Error::Domain(_))));
        assert!(matches!(
            decompose(&h, &FockVector::basis(p(&[5])), &g),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cache_round_trip_and_invalidation() {
        let h = Heisenberg::new();
        let g = quotient_reps(&h, 2, 5).unwrap();
        let json = g.to_json().unwrap();
        let back = GeneratorSet::from_json(&h, &json, 2, 5).unwrap();
        for w in 0..=5 {
            assert_eq!(back.reps(w), g.reps(w));
            assert_eq!(back.cn_dim(w), g.cn_dim(w));
        }
        assert!(matches!(GeneratorSet::from_json(&h, &json, 3, 5), Err(Error::Cache(_))));
        assert!(matches!(GeneratorSet::from_json(&h, &json, 2, 6), Err(Error::Cache(_))));
    }
}
