//! SAW, TOPSIS and VIKOR rankings and their normalization schemes.
//!
//! Every ranking is a pure function of a [`DecisionMatrix`] and a
//! [`WeightVector`]. Degenerate denominators (zero-range columns, an
//! alternative sitting on both the ideal and anti-ideal point, constant S or
//! R vectors) resolve to a constant contribution, which never reorders
//! alternatives. Ties are broken by ascending row index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decision::{DecisionMatrix, Direction, RankedList, ScorePolarity, WeightVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalizationScheme {
    MinMax,
    Vector,
}

/// Normalized performance values, row-major like the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    scheme: NormalizationScheme,
}

impl NormalizedMatrix {
    pub fn scheme(&self) -> NormalizationScheme {
        self.scheme
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.cols).copied()
    }
}

fn column_bounds(m: &DecisionMatrix) -> Vec<(f64, f64)> {
    let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); m.cols()];
    for row in m.values().chunks(m.cols()) {
        for (b, &v) in bounds.iter_mut().zip(row) {
            b.0 = b.0.min(v);
            b.1 = b.1.max(v);
        }
    }
    bounds
}

/// Benefit columns map to `(q - min) / (max - min)`, cost columns to
/// `(max - q) / (max - min)`. Constant columns map to 0.
pub fn normalize_minmax(m: &DecisionMatrix) -> NormalizedMatrix {
    let bounds = column_bounds(m);
    let dirs: Vec<Direction> = m.directions().collect();
    let n = m.cols();
    let values = m
        .values()
        .iter()
        .enumerate()
        .map(|(pos, &q)| {
            let j = pos % n;
            let (lo, hi) = bounds[j];
            let range = hi - lo;
            if range == 0.0 {
                0.0
            } else {
                match dirs[j] {
                    Direction::Maximize => (q - lo) / range,
                    Direction::Minimize => (hi - q) / range,
                }
            }
        })
        .collect();
    NormalizedMatrix {
        values,
        rows: m.rows(),
        cols: n,
        scheme: NormalizationScheme::MinMax,
    }
}

/// Divides each entry by its column's Euclidean norm. All-zero columns stay zero.
pub fn normalize_vector(m: &DecisionMatrix) -> NormalizedMatrix {
    let n = m.cols();
    let mut norms = vec![0.0f64; n];
    for row in m.values().chunks(n) {
        for (s, &v) in norms.iter_mut().zip(row) {
            *s += v * v;
        }
    }
    for s in &mut norms {
        *s = s.sqrt();
    }
    let values = m
        .values()
        .iter()
        .enumerate()
        .map(|(pos, &q)| {
            let norm = norms[pos % n];
            if norm == 0.0 {
                0.0
            } else {
                q / norm
            }
        })
        .collect();
    NormalizedMatrix {
        values,
        rows: m.rows(),
        cols: n,
        scheme: NormalizationScheme::Vector,
    }
}

/// Simple additive weighting: weighted sum of min-max normalized values,
/// higher is better.
pub fn rank_saw(m: &DecisionMatrix, w: &WeightVector) -> Result<RankedList> {
    m.check_weights(w)?;
    let norm = normalize_minmax(m);
    let scores = (0..m.rows())
        .map(|i| norm.row(i).iter().zip(w.iter()).map(|(r, w)| r * w).sum())
        .collect();
    Ok(RankedList::from_scores(
        m.shared_alternatives(),
        scores,
        ScorePolarity::HigherIsBetter,
    ))
}

/// Relative closeness to the ideal point over the weighted vector-normalized
/// matrix, higher is better.
pub fn rank_topsis(m: &DecisionMatrix, w: &WeightVector) -> Result<RankedList> {
    m.check_weights(w)?;
    let n = m.cols();
    let norm = normalize_vector(m);
    let weighted: Vec<f64> = norm
        .values
        .iter()
        .enumerate()
        .map(|(pos, r)| r * w[pos % n])
        .collect();

    let mut ideal = vec![0.0; n];
    let mut anti = vec![0.0; n];
    for (j, dir) in m.directions().enumerate() {
        let (lo, hi) = weighted
            .iter()
            .skip(j)
            .step_by(n)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        (ideal[j], anti[j]) = match dir {
            Direction::Maximize => (hi, lo),
            Direction::Minimize => (lo, hi),
        };
    }

    let scores = weighted
        .chunks(n)
        .map(|row| {
            let (mut plus, mut minus) = (0.0, 0.0);
            for j in 0..n {
                plus += (row[j] - ideal[j]).powi(2);
                minus += (row[j] - anti[j]).powi(2);
            }
            let (plus, minus) = (plus.sqrt(), minus.sqrt());
            let total = plus + minus;
            if total == 0.0 {
                0.5
            } else {
                minus / total
            }
        })
        .collect();
    Ok(RankedList::from_scores(
        m.shared_alternatives(),
        scores,
        ScorePolarity::HigherIsBetter,
    ))
}

/// Weight of the group-utility term in the VIKOR index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VikorParams {
    v: f64,
}

impl VikorParams {
    pub fn new(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Parameter(format!("VIKOR v must lie in [0, 1], got {v}")));
        }
        Ok(Self { v })
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

impl Default for VikorParams {
    fn default() -> Self {
        Self { v: 0.5 }
    }
}

/// Intermediate VIKOR quantities, indexed by row.
#[derive(Debug, Clone, PartialEq)]
pub struct VikorIndices {
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub q: Vec<f64>,
}

pub fn vikor_indices(m: &DecisionMatrix, w: &WeightVector, p: VikorParams) -> Result<VikorIndices> {
    m.check_weights(w)?;
    let n = m.cols();
    let bounds = column_bounds(m);
    let (best, worst): (Vec<f64>, Vec<f64>) = m
        .directions()
        .zip(&bounds)
        .map(|(d, &(lo, hi))| match d {
            Direction::Maximize => (hi, lo),
            Direction::Minimize => (lo, hi),
        })
        .unzip();

    let mut s = Vec::with_capacity(m.rows());
    let mut r = Vec::with_capacity(m.rows());
    for row in m.values().chunks(n) {
        let (mut sum, mut max) = (0.0f64, 0.0f64);
        for j in 0..n {
            let span = best[j] - worst[j];
            let d = if span == 0.0 {
                0.0
            } else {
                w[j] * (best[j] - row[j]) / span
            };
            sum += d;
            max = max.max(d);
        }
        s.push(sum);
        r.push(max);
    }

    let unit = |x: &[f64]| -> Vec<f64> {
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        x.iter()
            .map(|&v| if span == 0.0 { 0.0 } else { (v - lo) / span })
            .collect()
    };
    let q = unit(&s)
        .into_iter()
        .zip(unit(&r))
        .map(|(su, ru)| p.v * su + (1.0 - p.v) * ru)
        .collect();
    Ok(VikorIndices { s, r, q })
}

/// Compromise ranking by the VIKOR index Q, lower is better.
pub fn rank_vikor(m: &DecisionMatrix, w: &WeightVector, p: VikorParams) -> Result<RankedList> {
    let idx = vikor_indices(m, w, p)?;
    Ok(RankedList::from_scores(
        m.shared_alternatives(),
        idx.q,
        ScorePolarity::LowerIsBetter,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Saw,
    Topsis,
    Vikor,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Saw, Algorithm::Topsis, Algorithm::Vikor];

    pub fn rank(self, m: &DecisionMatrix, w: &WeightVector, vikor: VikorParams) -> Result<RankedList> {
        match self {
            Algorithm::Saw => rank_saw(m, w),
            Algorithm::Topsis => rank_topsis(m, w),
            Algorithm::Vikor => rank_vikor(m, w, vikor),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Saw => "SAW",
            Algorithm::Topsis => "TOPSIS",
            Algorithm::Vikor => "VIKOR",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "saw" => Ok(Algorithm::Saw),
            "topsis" => Ok(Algorithm::Topsis),
            "vikor" => Ok(Algorithm::Vikor),
            other => Err(Error::Parameter(format!("unknown algorithm `{other}`"))),
        }
    }
}
