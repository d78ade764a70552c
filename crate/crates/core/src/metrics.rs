//! Per-front ONVGR and boxplot summaries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::ParetoStratification;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontOnvgr {
    /// 1-based.
    pub front_index: usize,
    pub front_size: usize,
    pub selected_in_front: usize,
    pub onvgr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnvgrReport {
    pub per_front: Vec<FrontOnvgr>,
    pub num_fronts: usize,
}

impl OnvgrReport {
    pub fn first_front(&self) -> &FrontOnvgr {
        &self.per_front[0]
    }

    pub fn total_selected(&self) -> usize {
        self.per_front.iter().map(|f| f.selected_in_front).sum()
    }
}

/// Fraction of each front captured by `selected`: `|selected ∩ F_i| / |F_i|`.
/// Repeated identifiers count once.
pub fn onvgr_per_front<'a, I>(selected: I, strat: &ParetoStratification) -> Result<OnvgrReport>
where
    I: IntoIterator<Item = &'a str>,
{
    let lookup: HashMap<&str, usize> = strat
        .alternatives()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let rows = selected
        .into_iter()
        .map(|id| {
            lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownAlternative(id.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    onvgr_for_rows(&rows, strat)
}

/// Same as [`onvgr_per_front`] over row indices of the stratified matrix.
pub fn onvgr_for_rows(rows: &[usize], strat: &ParetoStratification) -> Result<OnvgrReport> {
    let m = strat.alternatives().len();
    let mut picked = vec![false; m];
    let mut counts = vec![0usize; strat.num_fronts()];
    for &r in rows {
        if r >= m {
            return Err(Error::UnknownAlternative(format!("row {r}")));
        }
        if !std::mem::replace(&mut picked[r], true) {
            counts[strat.front_of_row(r) - 1] += 1;
        }
    }
    let per_front = strat
        .fronts()
        .iter()
        .zip(counts)
        .enumerate()
        .map(|(f, (members, hits))| FrontOnvgr {
            front_index: f + 1,
            front_size: members.len(),
            selected_in_front: hits,
            onvgr: hits as f64 / members.len() as f64,
        })
        .collect();
    Ok(OnvgrReport {
        per_front,
        num_fronts: strat.num_fronts(),
    })
}

/// Five-number style summary with 1.5 IQR whiskers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outlier_count: usize,
    pub min: f64,
    pub max: f64,
}

/// Quantile of sorted data by linear interpolation between closest ranks
/// (position `p * (n - 1)`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn summarize(samples: &[f64]) -> Result<BoxplotSummary> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("samples must be finite".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (q1, median, q3) = (
        quantile_sorted(&sorted, 0.25),
        quantile_sorted(&sorted, 0.5),
        quantile_sorted(&sorted, 0.75),
    );
    let iqr = q3 - q1;
    let (fence_low, fence_high) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || sorted.iter().copied().filter(|x| (fence_low..=fence_high).contains(x));
    // the median always lies inside the fences, so `inside` is never empty
    let whisker_low = inside().next().unwrap_or(median);
    let whisker_high = inside().next_back().unwrap_or(median);
    let outlier_count = sorted.len() - inside().count();
    Ok(BoxplotSummary {
        n: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        median,
        q1,
        q3,
        whisker_low,
        whisker_high,
        outlier_count,
        min: sorted[0],
        max: sorted[sorted.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{CriterionSpec, DecisionMatrix};
    use crate::pareto::pareto_fronts;

    /// F1 = {a, b}, F2 = {c}, F3 = {d, e}
    fn strat() -> ParetoStratification {
        let ids = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
        let crit = vec![CriterionSpec::minimize("x"), CriterionSpec::minimize("y")];
        let rows = vec![
            vec![1.0, 2.0],
            vec![2.0, 1.0],
            vec![2.0, 2.0],
            vec![3.0, 4.0],
            vec![4.0, 3.0],
        ];
        pareto_fronts(&DecisionMatrix::new(ids, crit, rows).unwrap())
    }

    fn values(r: &OnvgrReport) -> Vec<f64> {
        r.per_front.iter().map(|f| f.onvgr).collect()
    }

    #[test]
    fn direct_count() {
        let s = strat();
        let r = onvgr_per_front(["a", "c"], &s).unwrap();
        assert_eq!(values(&r), vec![0.5, 1.0, 0.0]);
        assert_eq!(r.num_fronts, 3);
        assert_eq!(r.total_selected(), 2);
    }

    #[test]
    fn full_and_single_selection() {
        let s = strat();
        let all = onvgr_per_front(["a", "b", "c", "d", "e"], &s).unwrap();
        assert_eq!(values(&all), vec![1.0; 3]);
        let one = onvgr_per_front(["e"], &s).unwrap();
        assert_eq!(values(&one), vec![0.0, 0.0, 0.5]);
        let none = onvgr_per_front(std::iter::empty(), &s).unwrap();
        assert_eq!(values(&none), vec![0.0; 3]);
    }

    #[test]
    fn duplicates_count_once() {
        let r = onvgr_per_front(["a", "a", "a"], &strat()).unwrap();
        assert_eq!(r.first_front().selected_in_front, 1);
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(
            onvgr_per_front(["zz"], &strat()),
            Err(Error::UnknownAlternative(id)) if id == "zz"
        ));
        assert!(onvgr_for_rows(&[9], &strat()).is_err());
    }

    #[test]
    fn constant_samples() {
        let s = summarize(&[1.0; 4]).unwrap();
        assert_eq!((s.median, s.q1, s.q3, s.outlier_count), (1.0, 1.0, 1.0, 0));
        assert_eq!((s.whisker_low, s.whisker_high), (1.0, 1.0));
    }

    #[test]
    fn five_samples() {
        let s = summarize(&[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!((s.median, s.q1, s.q3), (3.0, 2.0, 4.0));
        assert_eq!((s.whisker_low, s.whisker_high, s.outlier_count), (1.0, 5.0, 0));
    }

    #[test]
    fn outlier_detected() {
        let s = summarize(&[1.0, 1.0, 1.0, 100.0]).unwrap();
        assert!(s.outlier_count >= 1);
        assert_eq!(s.whisker_high, 1.0);
        assert_eq!(s.max, 100.0);
    }

    #[test]
    fn empty_samples() {
        assert!(matches!(summarize(&[]), Err(Error::EmptySamples)));
        assert!(summarize(&[f64::NAN]).is_err());
    }
}
