//! Seeded factorial experiment: rank a catalog under random weights, select
//! the top fraction, and score the selection against the catalog's Pareto
//! fronts.
//!
//! A *cell* is one (criteria set, selection fraction, algorithm) triple. Each
//! replication `r` of criteria set `c` draws its weights from the stream
//! seeded with `seed::derive(master_seed, [WEIGHTS_TAG, c, r])`, so every
//! algorithm and fraction of that criteria set sees the same weights.
//! Records are ordered by criteria set, fraction, algorithm, replication and
//! front, independent of how the work was scheduled.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, catalog_to_matrix, criteria_for, CatalogSpec, SensorDescription, SensorField};
use crate::decision::WeightVector;
use crate::error::{Error, Result};
use crate::mcda::{Algorithm, VikorParams};
use crate::metrics::{onvgr_for_rows, summarize, BoxplotSummary};
use crate::pareto::pareto_fronts;
use crate::seed;

pub const RESULTS_HEADER: [&str; 9] = [
    "algorithm",
    "n_criteria",
    "k_selected",
    "replication",
    "weight_vector",
    "front_index",
    "front_size",
    "selected_in_front",
    "onvgr",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriteriaSet {
    pub name: String,
    pub criteria: Vec<String>,
}

impl CriteriaSet {
    pub fn new<S: Into<String>>(name: &str, criteria: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            criteria: criteria.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatalogSource {
    File {
        path: PathBuf,
    },
    Generate(CatalogSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub master_seed: u64,
    pub replications: usize,
    pub algorithms: Vec<Algorithm>,
    pub selection_fractions: Vec<f64>,
    #[serde(default = "default_vikor_v")]
    pub vikor_v: f64,
    pub catalog: CatalogSource,
    pub criteria_sets: Vec<CriteriaSet>,
}

fn default_vikor_v() -> f64 {
    VikorParams::default().v()
}

impl Default for ExperimentPlan {
    /// Desk-scale plan: 10,000 generated sensors, all three algorithms, 1% and
    /// 10% selections, the first two and all six criteria, 100 replications.
    fn default() -> Self {
        let six: Vec<&str> = SensorField::ALL.iter().map(|f| f.name()).collect();
        Self {
            master_seed: 2016,
            replications: 100,
            algorithms: Algorithm::ALL.to_vec(),
            selection_fractions: vec![0.01, 0.10],
            vikor_v: default_vikor_v(),
            catalog: CatalogSource::Generate(CatalogSpec::new(10_000, 1)),
            criteria_sets: vec![
                CriteriaSet::new("two", six[..2].iter().copied()),
                CriteriaSet::new("six", six.iter().copied()),
            ],
        }
    }
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut text = String::new();
        File::open(path)?.read_to_string(&mut text)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Plan(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Plan(msg));
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        let mut algs = self.algorithms.clone();
        algs.sort();
        algs.dedup();
        if algs.len() != self.algorithms.len() {
            return bad("algorithms listed twice".into());
        }
        if self.selection_fractions.is_empty() {
            return bad("no selection fractions".into());
        }
        if let Some(f) = self
            .selection_fractions
            .iter()
            .find(|f| !(**f > 0.0 && **f <= 1.0))
        {
            return bad(format!("selection fraction {f} outside (0, 1]"));
        }
        if self.criteria_sets.is_empty() {
            return bad("no criteria sets".into());
        }
        for set in &self.criteria_sets {
            if !(2..=6).contains(&set.criteria.len()) {
                return bad(format!(
                    "criteria set `{}` needs 2 to 6 criteria, has {}",
                    set.name,
                    set.criteria.len()
                ));
            }
            criteria_for(&set.criteria)?;
        }
        VikorParams::new(self.vikor_v)?;
        if let CatalogSource::Generate(spec) = &self.catalog {
            spec.validate()?;
        }
        Ok(())
    }

    /// Number of selected alternatives for `fraction` of `m`.
    pub fn k_for(fraction: f64, m: usize) -> Result<usize> {
        let k = (fraction * m as f64).round() as usize;
        if k == 0 || k > m {
            return Err(Error::Plan(format!(
                "fraction {fraction} of {m} sensors selects {k}"
            )));
        }
        Ok(k)
    }

    pub fn cells(&self) -> usize {
        self.algorithms.len() * self.selection_fractions.len() * self.criteria_sets.len()
    }
}

/// Weights uniform on the simplex: independent Exp(1) draws by inverse CDF,
/// divided by their sum.
pub fn sample_weights(n_criteria: usize, rng: &mut impl RngCore) -> Result<WeightVector> {
    if n_criteria == 0 {
        return Err(Error::Weights("no criteria".into()));
    }
    let draws: Vec<f64> = (0..n_criteria)
        .map(|_| -(1.0 - seed::unit(rng)).ln())
        .collect();
    WeightVector::normalized(&draws).or_else(|_| WeightVector::uniform(n_criteria))
}

/// Weight vector for replication `replication` of criteria set `set_index`.
pub fn replication_weights(
    master_seed: u64,
    set_index: usize,
    replication: usize,
    n_criteria: usize,
) -> Result<WeightVector> {
    let s = seed::derive(
        master_seed,
        &[seed::WEIGHTS_TAG, set_index as u64, replication as u64],
    );
    sample_weights(n_criteria, &mut seed::stream(s))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub algorithm: Algorithm,
    pub n_criteria: usize,
    pub k_selected: usize,
    pub replication: usize,
    pub weight_vector: Vec<f64>,
    pub front_index: usize,
    pub front_size: usize,
    pub selected_in_front: usize,
    pub onvgr: f64,
}

/// Per-criteria-set facts about the catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaSetInfo {
    pub name: String,
    pub n_criteria: usize,
    pub num_fronts: usize,
    pub first_front_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub records: Vec<ResultRecord>,
    pub catalog_size: usize,
    pub criteria_sets: Vec<CriteriaSetInfo>,
    pub stratifications_computed: usize,
}

pub fn load_catalog_source(source: &CatalogSource) -> Result<Vec<SensorDescription>> {
    match source {
        CatalogSource::File { path } => catalog::load_catalog(path),
        CatalogSource::Generate(spec) => catalog::generate_catalog(spec),
    }
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<ResultRecord>> {
    Ok(run_experiment_detailed(plan)?.records)
}

pub fn run_experiment_detailed(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let sensors = load_catalog_source(&plan.catalog)?;
    run_on_catalog(plan, &sensors)
}

/// Runs every cell of `plan` against an already loaded catalog; the plan's
/// own catalog source is ignored.
pub fn run_on_catalog(plan: &ExperimentPlan, sensors: &[SensorDescription]) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let m = sensors.len();
    let ks = plan
        .selection_fractions
        .iter()
        .map(|&f| ExperimentPlan::k_for(f, m))
        .collect::<Result<Vec<_>>>()?;
    let vikor = VikorParams::new(plan.vikor_v)?;
    let reps = plan.replications;

    let mut records = Vec::new();
    let mut infos = Vec::with_capacity(plan.criteria_sets.len());
    let mut stratifications_computed = 0;

    for (set_index, set) in plan.criteria_sets.iter().enumerate() {
        let started = Instant::now();
        let matrix = catalog_to_matrix(sensors, &criteria_for(&set.criteria)?)?;
        let strat = pareto_fronts(&matrix);
        stratifications_computed += 1;
        let n = matrix.cols();
        log::info!(
            "criteria set `{}`: {} fronts over {m} sensors ({:.2?})",
            set.name,
            strat.num_fronts(),
            started.elapsed()
        );
        infos.push(CriteriaSetInfo {
            name: set.name.clone(),
            n_criteria: n,
            num_fronts: strat.num_fronts(),
            first_front_size: strat.fronts()[0].len(),
        });

        let weights = (0..reps)
            .map(|r| replication_weights(plan.master_seed, set_index, r, n))
            .collect::<Result<Vec<_>>>()?;

        // reports[alg][rep][fraction]; each ranking is reused for every fraction
        let mut reports = Vec::with_capacity(plan.algorithms.len());
        for &alg in &plan.algorithms {
            let started = Instant::now();
            let mut per_rep = Vec::with_capacity(reps);
            for w in &weights {
                let ranked = alg.rank(&matrix, w, vikor)?;
                let per_k = ks
                    .iter()
                    .map(|&k| onvgr_for_rows(ranked.top_k_indices(k)?, &strat))
                    .collect::<Result<Vec<_>>>()?;
                per_rep.push(per_k);
            }
            log::info!(
                "  {alg} x {reps} replications on `{}` ({:.2?})",
                set.name,
                started.elapsed()
            );
            reports.push(per_rep);
        }

        for (fi, &k) in ks.iter().enumerate() {
            for (ai, &alg) in plan.algorithms.iter().enumerate() {
                for (r, w) in weights.iter().enumerate() {
                    for front in &reports[ai][r][fi].per_front {
                        records.push(ResultRecord {
                            algorithm: alg,
                            n_criteria: n,
                            k_selected: k,
                            replication: r,
                            weight_vector: w.as_slice().to_vec(),
                            front_index: front.front_index,
                            front_size: front.front_size,
                            selected_in_front: front.selected_in_front,
                            onvgr: front.onvgr,
                        });
                    }
                }
            }
        }
    }

    Ok(ExperimentOutcome {
        records,
        catalog_size: m,
        criteria_sets: infos,
        stratifications_computed,
    })
}

/// Formats `x` as a plain decimal with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

fn join_weights(w: &[f64]) -> String {
    w.iter().map(|&x| format_sig12(x)).collect::<Vec<_>>().join(";")
}

pub fn write_results<W: Write>(records: &[ResultRecord], out: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(RESULTS_HEADER)?;
    for r in records {
        csv.write_record([
            r.algorithm.as_str().to_string(),
            r.n_criteria.to_string(),
            r.k_selected.to_string(),
            r.replication.to_string(),
            join_weights(&r.weight_vector),
            r.front_index.to_string(),
            r.front_size.to_string(),
            r.selected_in_front.to_string(),
            r.onvgr.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Writes the results table; with `summary` set, also writes the boxplot
/// table to `summary.path`.
pub fn emit_results(records: &[ResultRecord], path: impl AsRef<Path>, summary: Option<&SummaryOptions>) -> Result<()> {
    write_results(records, BufWriter::new(File::create(path)?))?;
    if let Some(opts) = summary {
        let rows = summarize_records(records, opts)?;
        write_summary(&rows, opts, BufWriter::new(File::create(&opts.path)?))?;
    }
    Ok(())
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRecord>> {
    let mut csv = csv::Reader::from_reader(input);
    let header = csv.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(Error::Results(format!("unexpected header {:?}", header)));
    }
    let mut records = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let bad = |what: &str| Error::Results(format!("line {line}: bad {what}"));
        let int = |k: usize, what: &str| field(k).parse::<usize>().map_err(|_| bad(what));
        records.push(ResultRecord {
            algorithm: field(0).parse().map_err(|_| bad("algorithm"))?,
            n_criteria: int(1, "n_criteria")?,
            k_selected: int(2, "k_selected")?,
            replication: int(3, "replication")?,
            weight_vector: field(4)
                .split(';')
                .map(|w| w.parse::<f64>().map_err(|_| bad("weight_vector")))
                .collect::<Result<_>>()?,
            front_index: int(5, "front_index")?,
            front_size: int(6, "front_size")?,
            selected_in_front: int(7, "selected_in_front")?,
            onvgr: field(8).parse().map_err(|_| bad("onvgr"))?,
        });
    }
    Ok(records)
}

pub fn load_results(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>> {
    read_results(File::open(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryOptions {
    pub path: PathBuf,
    /// Drop fronts beyond this 1-based index.
    pub front_cap: Option<usize>,
    /// Leave the outlier count and the extreme samples out of the table.
    pub suppress_outliers: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SummaryKey {
    pub algorithm: Algorithm,
    pub n_criteria: usize,
    pub k_selected: usize,
    pub front_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub key: SummaryKey,
    pub stats: BoxplotSummary,
}

/// One boxplot summary of ONVGR over replications per
/// (algorithm, n_criteria, k_selected, front_index), sorted by that key.
pub fn summarize_records(records: &[ResultRecord], opts: &SummaryOptions) -> Result<Vec<SummaryRow>> {
    let mut groups: BTreeMap<SummaryKey, Vec<f64>> = BTreeMap::new();
    for r in records {
        if opts.front_cap.is_some_and(|cap| r.front_index > cap) {
            continue;
        }
        let key = SummaryKey {
            algorithm: r.algorithm,
            n_criteria: r.n_criteria,
            k_selected: r.k_selected,
            front_index: r.front_index,
        };
        groups.entry(key).or_default().push(r.onvgr);
    }
    groups
        .into_iter()
        .map(|(key, samples)| Ok(SummaryRow { key, stats: summarize(&samples)? }))
        .collect()
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], opts: &SummaryOptions, out: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    let mut header = vec![
        "algorithm", "n_criteria", "k_selected", "front_index", "n", "mean", "median", "q1", "q3",
        "whisker_low", "whisker_high",
    ];
    if !opts.suppress_outliers {
        header.extend(["outlier_count", "min", "max"]);
    }
    csv.write_record(&header)?;
    for row in rows {
        let (k, s) = (&row.key, &row.stats);
        let mut fields = vec![
            k.algorithm.as_str().to_string(),
            k.n_criteria.to_string(),
            k.k_selected.to_string(),
            k.front_index.to_string(),
            s.n.to_string(),
            s.mean.to_string(),
            s.median.to_string(),
            s.q1.to_string(),
            s.q3.to_string(),
            s.whisker_low.to_string(),
            s.whisker_high.to_string(),
        ];
        if !opts.suppress_outliers {
            fields.extend([s.outlier_count.to_string(), s.min.to_string(), s.max.to_string()]);
        }
        csv.write_record(&fields)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub algorithm: Algorithm,
    pub n_criteria: usize,
    pub k_selected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub replications: usize,
    pub mean_first_front_onvgr: f64,
    pub mean_num_fronts: f64,
}

/// Mean first-front ONVGR and mean front count per cell.
pub fn cell_stats(records: &[ResultRecord]) -> BTreeMap<CellKey, CellStats> {
    let mut acc: BTreeMap<CellKey, (usize, f64, usize)> = BTreeMap::new();
    for r in records {
        let key = CellKey {
            algorithm: r.algorithm,
            n_criteria: r.n_criteria,
            k_selected: r.k_selected,
        };
        let e = acc.entry(key).or_default();
        if r.front_index == 1 {
            e.0 += 1;
            e.1 += r.onvgr;
        }
        e.2 += 1;
    }
    acc.into_iter()
        .map(|(k, (reps, sum, rows))| {
            let stats = CellStats {
                replications: reps,
                mean_first_front_onvgr: sum / reps as f64,
                mean_num_fronts: rows as f64 / reps as f64,
            };
            (k, stats)
        })
        .collect()
}
