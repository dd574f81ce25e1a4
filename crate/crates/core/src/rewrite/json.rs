//! JSON forms of expressions and rewrite traces.

use serde::{Deserialize, Serialize};

use super::{Expression, Mode, RewriteTrace};
use crate::fockspace::{FockVector, Partition};
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeJson {
    pub vector: FockVector,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    #[serde(with = "crate::rational::serde_str")]
    pub coeff: Rational,
    pub modes: Vec<ModeJson>,
}

/// `[{"coeff": "p/q", "modes": [{"vector": FockVector, "index": i}, ...]}, ...]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpressionJson(pub Vec<MonomialJson>);

impl From<&Expression<Partition>> for ExpressionJson {
    fn from(e: &Expression<Partition>) -> Self {
        ExpressionJson(
            e.iter()
                .map(|(w, c)| MonomialJson {
                    coeff: c.clone(),
                    modes: w
                        .iter()
                        .map(|m| ModeJson {
                            vector: FockVector::basis(m.label.clone()),
                            index: m.index,
                        })
                        .collect(),
                })
                .collect(),
        )
    }
}

impl ExpressionJson {
    /// Rebuilds the expression, expanding mode vectors by multilinearity.
    pub fn to_expression(&self) -> Result<Expression<Partition>> {
        let mut out = Expression::zero();
        for mono in &self.0 {
            let mut partial: Vec<(Vec<Mode<Partition>>, Rational)> = vec![(Vec::new(), mono.coeff.clone())];
            for m in &mono.modes {
                if m.vector.is_zero() {
                    return Err(Error::domain("mode vectors must be nonzero"));
                }
                partial = partial
                    .into_iter()
                    .flat_map(|(w, c)| {
                        m.vector.iter().map(move |(l, x)| {
                            let mut w = w.clone();
                            w.push(Mode::new(l.clone(), m.index));
                            (w, &c * x)
                        })
                    })
                    .collect();
            }
            for (w, c) in partial {
                out.add_raw(w, c);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepJson {
    pub kind: &'static str,
    pub lemma: &'static str,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub difference: Option<usize>,
    pub before: ExpressionJson,
    pub after: ExpressionJson,
}

/// `{"input": Expression, "steps": [...], "output": Expression}`
#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    pub input: ExpressionJson,
    pub steps: Vec<StepJson>,
    pub output: ExpressionJson,
}

impl From<&RewriteTrace<Partition>> for TraceJson {
    fn from(t: &RewriteTrace<Partition>) -> Self {
        TraceJson {
            input: (&t.input).into(),
            steps: t
                .steps
                .iter()
                .map(|s| {
                    let mut before = Expression::zero();
                    before.add_raw(s.before.clone(), rational::int(1));
                    StepJson {
                        kind: s.kind.name(),
                        lemma: s.kind.lemma(),
                        difference: s.difference,
                        before: (&before).into(),
                        after: (&s.after).into(),
                    }
                })
                .collect(),
            output: (&t.output).into(),
        }
    }
}
