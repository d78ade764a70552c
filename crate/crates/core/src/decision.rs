//! Decision-matrix data model shared by the ranking, dominance and metric code.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the sum of a [`WeightVector`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Sign that maps a raw value into minimization space.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Maximize => -1.0,
            Direction::Minimize => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Maximize => "max",
            Direction::Minimize => "min",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" | "maximize" | "benefit" => Ok(Direction::Maximize),
            "min" | "minimize" | "cost" => Ok(Direction::Minimize),
            other => Err(Error::Criterion(format!("unknown direction `{other}`"))),
        }
    }
}

/// A named criterion with its optimization direction and default weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub name: String,
    pub direction: Direction,
    pub weight: f64,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, direction: Direction, weight: f64) -> Self {
        Self {
            name: name.into(),
            direction,
            weight,
        }
    }

    pub fn maximize(name: impl Into<String>) -> Self {
        Self::new(name, Direction::Maximize, 0.0)
    }

    pub fn minimize(name: impl Into<String>) -> Self {
        Self::new(name, Direction::Minimize, 0.0)
    }
}

fn validate_criteria(criteria: &[CriterionSpec]) -> Result<()> {
    let mut seen = HashSet::with_capacity(criteria.len());
    for c in criteria {
        if c.name.is_empty() {
            return Err(Error::Criterion("criterion name is empty".into()));
        }
        if !seen.insert(c.name.as_str()) {
            return Err(Error::Criterion(format!("duplicate criterion `{}`", c.name)));
        }
        if !(c.weight.is_finite() && c.weight >= 0.0) {
            return Err(Error::Criterion(format!(
                "criterion `{}` has invalid weight {}",
                c.name, c.weight
            )));
        }
    }
    Ok(())
}

/// Nonnegative criterion weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Weights("no weights given".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Weights(format!("weight {w} is negative or non-finite")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::Weights(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self(weights))
    }

    /// Rescales nonnegative raw weights so they sum to one.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        if let Some(w) = raw.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Weights(format!("weight {w} is negative or non-finite")));
        }
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::Weights("weights sum to zero".into()));
        }
        Self::new(raw.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Weights("no weights given".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl std::ops::Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// An immutable M x N grid of raw performance values.
///
/// Row `i` is alternative `i`, column `j` is criterion `j`. Identifiers are
/// shared behind an `Arc` so rankings can refer to them without copying.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    alternatives: Arc<[String]>,
    criteria: Vec<CriterionSpec>,
    values: Vec<f64>,
}

impl DecisionMatrix {
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if values.len() != alternatives.len() {
            return Err(Error::Dimension(format!(
                "{} rows for {} alternatives",
                values.len(),
                alternatives.len()
            )));
        }
        let n = criteria.len();
        if let Some((i, row)) = values.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} values for {n} criteria",
                row.len()
            )));
        }
        Self::from_row_major(alternatives, criteria, values.concat())
    }

    /// Builds a matrix from a flat row-major buffer of length M * N.
    pub fn from_row_major(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let (m, n) = (alternatives.len(), criteria.len());
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if values.len() != m * n {
            return Err(Error::Dimension(format!(
                "{} values for a {m}x{n} matrix",
                values.len()
            )));
        }
        validate_criteria(&criteria)?;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                column: pos % n,
                value: values[pos],
            });
        }
        let mut seen = HashSet::with_capacity(m);
        for id in &alternatives {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateAlternative(id.clone()));
            }
        }
        Ok(Self {
            alternatives: alternatives.into(),
            criteria,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.alternatives.len()
    }

    pub fn cols(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub(crate) fn shared_alternatives(&self) -> Arc<[String]> {
        Arc::clone(&self.alternatives)
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.criteria.iter().map(|c| c.direction)
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.cols();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.cols()).copied()
    }

    /// Flat row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.cols()).map(<[f64]>::to_vec).collect()
    }

    /// Weights carried on the criteria, rescaled to sum to one. Falls back to
    /// uniform weights when every default weight is zero.
    pub fn default_weights(&self) -> WeightVector {
        let raw: Vec<f64> = self.criteria.iter().map(|c| c.weight).collect();
        WeightVector::normalized(&raw)
            .or_else(|_| WeightVector::uniform(raw.len()))
            .expect("matrix has at least one criterion")
    }

    pub fn check_weights(&self, w: &WeightVector) -> Result<()> {
        if w.len() != self.cols() {
            return Err(Error::Dimension(format!(
                "{} weights for {} criteria",
                w.len(),
                self.cols()
            )));
        }
        Ok(())
    }
}

/// Maps every column into minimization space: Minimize columns are kept,
/// Maximize columns are negated. Returned row-major, same shape as `m`.
pub fn evaluate_objectives(m: &DecisionMatrix) -> Vec<Vec<f64>> {
    let signs: Vec<f64> = m.directions().map(Direction::sign).collect();
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(&signs).map(|(v, s)| v * s).collect())
        .collect()
}

/// Flat row-major variant of [`evaluate_objectives`]. Negated zeros are
/// folded to `+0.0` so a total order on the output agrees with `<`.
pub(crate) fn objectives_flat(m: &DecisionMatrix) -> Vec<f64> {
    let signs: Vec<f64> = m.directions().map(Direction::sign).collect();
    m.values()
        .iter()
        .enumerate()
        .map(|(pos, v)| v * signs[pos % signs.len()] + 0.0)
        .collect()
}

/// Scores are ordered on a grid of this spacing, so values that differ only by
/// rounding noise count as ties and fall through to the row-index tie-break.
pub const SCORE_RESOLUTION: f64 = 1.0 / (1u64 << 40) as f64;

fn score_key(score: f64) -> f64 {
    // + 0.0 folds -0.0 into 0.0
    (score / SCORE_RESOLUTION).round() + 0.0
}

/// Whether larger or smaller scores are preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScorePolarity {
    HigherIsBetter,
    LowerIsBetter,
}

/// Alternatives ordered best first, with the score each one received.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    alternatives: Arc<[String]>,
    order: Vec<usize>,
    scores: Vec<f64>,
    polarity: ScorePolarity,
}

impl RankedList {
    /// Orders rows by score under `polarity`, ties broken by ascending row index.
    pub(crate) fn from_scores(
        alternatives: Arc<[String]>,
        scores: Vec<f64>,
        polarity: ScorePolarity,
    ) -> Self {
        debug_assert_eq!(alternatives.len(), scores.len());
        let keys: Vec<f64> = scores.iter().map(|s| score_key(*s)).collect();
        let mut order: Vec<usize> = (0..scores.len()).collect();
        let cmp = |a: &usize, b: &usize| {
            let ord = keys[*a].partial_cmp(&keys[*b]).unwrap_or(Ordering::Equal);
            match polarity {
                ScorePolarity::HigherIsBetter => ord.reverse(),
                ScorePolarity::LowerIsBetter => ord,
            }
        };
        order.sort_by(|a, b| cmp(a, b).then(a.cmp(b)));
        Self {
            alternatives,
            order,
            scores,
            polarity,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Row indices, best first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Identifiers, best first.
    pub fn ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.order.iter().map(|&i| self.alternatives[i].as_str())
    }

    /// Scores indexed by original row.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score(&self, id: &str) -> Option<f64> {
        self.alternatives
            .iter()
            .position(|a| a == id)
            .map(|i| self.scores[i])
    }

    pub fn polarity(&self) -> ScorePolarity {
        self.polarity
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    /// Row indices of the first `k` alternatives.
    pub fn top_k_indices(&self, k: usize) -> Result<&[usize]> {
        if k == 0 || k > self.len() {
            return Err(Error::SelectionSize { k, len: self.len() });
        }
        Ok(&self.order[..k])
    }
}

/// The first `k` identifiers of a ranking, order preserved.
pub fn select_top_k(r: &RankedList, k: usize) -> Result<Vec<&str>> {
    Ok(r.top_k_indices(k)?
        .iter()
        .map(|&i| r.alternatives[i].as_str())
        .collect())
}
