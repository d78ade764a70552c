//! Pareto dominance and stratification into successive non-dominated fronts.
//!
//! Dominance is evaluated in minimization space (see
//! [`evaluate_objectives`](crate::decision::evaluate_objectives)) with exact
//! floating-point comparisons.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use crate::decision::{objectives_flat, DecisionMatrix};
use crate::error::{Error, Result};

/// Largest matrix the brute-force oracle accepts by default.
pub const ORACLE_CAP: usize = 2_000;

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one (both vectors in minimization space).
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Ordered disjoint fronts covering every alternative of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoStratification {
    alternatives: Arc<[String]>,
    fronts: Vec<Vec<usize>>,
    front_of: Vec<usize>,
}

impl ParetoStratification {
    fn from_fronts(alternatives: Arc<[String]>, mut fronts: Vec<Vec<usize>>) -> Self {
        let mut front_of = vec![usize::MAX; alternatives.len()];
        for (f, members) in fronts.iter_mut().enumerate() {
            members.sort_unstable();
            for &i in members.iter() {
                front_of[i] = f;
            }
        }
        debug_assert!(front_of.iter().all(|&f| f != usize::MAX));
        Self {
            alternatives,
            fronts,
            front_of,
        }
    }

    pub fn num_fronts(&self) -> usize {
        self.fronts.len()
    }

    /// Fronts as row indices, best front first, rows ascending within a front.
    pub fn fronts(&self) -> &[Vec<usize>] {
        &self.fronts
    }

    /// Identifiers of front `front` (1-based).
    pub fn front_ids(&self, front: usize) -> Option<Vec<&str>> {
        let members = self.fronts.get(front.checked_sub(1)?)?;
        Some(members.iter().map(|&i| self.alternatives[i].as_str()).collect())
    }

    /// 1-based front number of row `row`.
    pub fn front_of_row(&self, row: usize) -> usize {
        self.front_of[row] + 1
    }

    /// 1-based front number of every row, in row order.
    pub fn front_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.front_of.iter().map(|f| f + 1)
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    /// Map from identifier to 1-based front number.
    pub fn front_index(&self) -> HashMap<&str, usize> {
        self.alternatives
            .iter()
            .zip(self.front_indices())
            .map(|(id, f)| (id.as_str(), f))
            .collect()
    }

    /// Writes `identifier<TAB>front_index` lines in row order, after a header.
    pub fn write_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "identifier\tfront_index")?;
        for (id, f) in self.alternatives.iter().zip(self.front_indices()) {
            writeln!(out, "{id}\t{f}")?;
        }
        Ok(())
    }
}

/// Stratifies `m` into Pareto fronts.
///
/// Rows are presorted lexicographically in minimization space, so no row can
/// be dominated by one that comes after it. Each row then joins the first
/// front holding no dominator. Having a dominator in front `k` implies having
/// one in every earlier front, so the front is found by binary search.
pub fn pareto_fronts(m: &DecisionMatrix) -> ParetoStratification {
    let n = m.cols();
    let obj = objectives_flat(m);
    let point = |i: usize| &obj[i * n..(i + 1) * n];

    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by(|&a, &b| {
        point(a)
            .iter()
            .zip(point(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for &p in &order {
        let target = point(p);
        // newest members are the closest in sort order and the likeliest dominators
        let dominated_in = |front: &Vec<usize>| {
            front
                .iter()
                .rev()
                .any(|&q| dominates_unchecked(point(q), target))
        };
        let (mut lo, mut hi) = (0, fronts.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if dominated_in(&fronts[mid]) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == fronts.len() {
            fronts.push(vec![p]);
        } else {
            fronts[lo].push(p);
        }
    }
    ParetoStratification::from_fronts(m.shared_alternatives(), fronts)
}

/// Reference stratification by repeated full pairwise sweeps, capped at
/// [`ORACLE_CAP`] rows.
pub fn brute_force_fronts(m: &DecisionMatrix) -> Result<ParetoStratification> {
    brute_force_fronts_with_cap(m, ORACLE_CAP)
}

pub fn brute_force_fronts_with_cap(m: &DecisionMatrix, cap: usize) -> Result<ParetoStratification> {
    if m.rows() > cap {
        return Err(Error::OracleCap { len: m.rows(), cap });
    }
    let n = m.cols();
    let obj = objectives_flat(m);
    let point = |i: usize| &obj[i * n..(i + 1) * n];

    let mut remaining: Vec<usize> = (0..m.rows()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let (front, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| {
            !remaining
                .iter()
                .any(|&j| dominates_unchecked(point(j), point(i)))
        });
        fronts.push(front);
        remaining = rest;
    }
    Ok(ParetoStratification::from_fronts(m.shared_alternatives(), fronts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{CriterionSpec, Direction};

    fn min_matrix(points: &[&[f64]]) -> DecisionMatrix {
        let n = points[0].len();
        let ids = (0..points.len()).map(|i| format!("p{i}")).collect();
        let crit = (0..n).map(|j| CriterionSpec::minimize(format!("c{j}"))).collect();
        DecisionMatrix::new(ids, crit, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]).unwrap());
        assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]).unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
        assert!(matches!(dominates(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn five_point_example() {
        // (1,1),(1,2),(2,1),(2,2),(3,0)
        let m = min_matrix(&[&[1.0, 1.0], &[1.0, 2.0], &[2.0, 1.0], &[2.0, 2.0], &[3.0, 0.0]]);
        let expected = vec![vec![0, 4], vec![1, 2], vec![3]];
        assert_eq!(pareto_fronts(&m).fronts(), expected.as_slice());
        assert_eq!(brute_force_fronts(&m).unwrap().fronts(), expected.as_slice());
        let s = pareto_fronts(&m);
        assert_eq!(s.front_ids(1).unwrap(), vec!["p0", "p4"]);
        assert_eq!(s.front_index()["p3"], 3);
        assert_eq!(s.front_ids(4), None);
        assert_eq!(s.front_ids(0), None);
    }

    #[test]
    fn degenerate_inputs() {
        let one = min_matrix(&[&[4.0, 2.0]]);
        assert_eq!(pareto_fronts(&one).fronts(), &[vec![0]]);
        assert_eq!(brute_force_fronts(&one).unwrap().fronts(), &[vec![0]]);

        let same = min_matrix(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(pareto_fronts(&same).fronts(), &[vec![0, 1, 2]]);

        let pair = min_matrix(&[&[1.0, 3.0], &[3.0, 1.0]]);
        assert_eq!(brute_force_fronts(&pair).unwrap().fronts(), &[vec![0, 1]]);
    }

    #[test]
    fn directions_are_respected() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let crit = vec![CriterionSpec::new("battery", Direction::Maximize, 0.0)];
        let m = DecisionMatrix::new(ids, crit, vec![vec![10.0], vec![90.0]]).unwrap();
        assert_eq!(pareto_fronts(&m).fronts(), &[vec![1], vec![0]]);
    }

    #[test]
    fn oracle_cap() {
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        let m = min_matrix(&refs);
        assert!(matches!(
            brute_force_fronts_with_cap(&m, 4),
            Err(Error::OracleCap { len: 5, cap: 4 })
        ));
        assert_eq!(brute_force_fronts_with_cap(&m, 5).unwrap().num_fronts(), 5);
    }

    #[test]
    fn table_export() {
        let m = min_matrix(&[&[1.0, 2.0], &[2.0, 3.0]]);
        let mut buf = Vec::new();
        pareto_fronts(&m).write_table(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "identifier\tfront_index\np0\t1\np1\t2\n");
    }
}
