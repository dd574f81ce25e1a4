use serde::Serialize;

use super::{evaluate_word, Mode, Word};
use crate::fockspace::AlgebraBackend;
use crate::linalg::Echelon;
use crate::subspaces::GeneratorSet;
use crate::{Error, Result};

/// All normal words of total weight exactly `w`: representatives of positive
/// weight, indices `n_1 < ⋯ < n_k < 0` with gaps at least `N`.
///
/// Words are built right to left and listed in a fixed order.
pub fn enumerate_normal_monomials<L: Ord + Clone + std::hash::Hash>(w: i64, gens: &GeneratorSet<L>) -> Result<Vec<Word<L>>> {
    if w > gens.max_weight {
        return Err(Error::domain(format!(
            "weight {w} exceeds the generator set bound {}",
            gens.max_weight
        )));
    }
    let reps: Vec<(L, i64)> = (1..=w)
        .flat_map(|wt| gens.reps(wt).iter().map(move |l| (l.clone(), wt)))
        .collect();
    let mut out = Vec::new();
    let mut rev: Vec<Mode<L>> = Vec::new();
    extend(&reps, gens.n_diff as i64, w, -1, &mut rev, &mut out);
    Ok(out)
}

/// `rev` holds the word reversed; the next mode to the left must have index
/// at most `max_index` and may use `budget` more weight.
fn extend<L: Clone>(
    reps: &[(L, i64)],
    gap: i64,
    budget: i64,
    max_index: i64,
    rev: &mut Vec<Mode<L>>,
    out: &mut Vec<Word<L>>,
) {
    if budget == 0 {
        out.push(rev.iter().rev().cloned().collect());
        return;
    }
    for (label, wt) in reps {
        // contribution wt - n - 1 must fit: n >= wt - 1 - budget
        let lowest = wt - 1 - budget;
        for n in (lowest..=max_index).rev() {
            let cost = wt - n - 1;
            rev.push(Mode::new(label.clone(), n));
            extend(reps, gap, budget - cost, n - gap, rev, out);
            rev.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub rank: usize,
    pub dim: usize,
    pub ok: bool,
}

/// Rank of the evaluated normal words of weight `w` against `dim V_w`.
pub fn span_check<A: AlgebraBackend>(alg: &A, w: i64, gens: &GeneratorSet<A::Label>) -> Result<SpanReport> {
    let words = enumerate_normal_monomials(w, gens)?;
    let dim = alg.graded_dim(w);
    let mut echelon = Echelon::new();
    for word in &words {
        echelon.insert(&evaluate_word(alg, word));
        if echelon.rank() == dim {
            break;
        }
    }
    let rank = echelon.rank();
    Ok(SpanReport {
        rank,
        dim,
        ok: rank == dim,
    })
}
