use std::collections::{BTreeMap, BTreeSet};

use cotrank::catalog::{generate_catalog, save_catalog, CatalogSpec};
use cotrank::experiment::{
    emit_results, load_results, read_results, replication_weights, run_experiment,
    run_experiment_detailed, sample_weights, summarize_records, CatalogSource, CriteriaSet,
    ExperimentPlan, SummaryOptions,
};
use cotrank::{seed, Algorithm};

fn small_plan(count: usize, replications: usize) -> ExperimentPlan {
    ExperimentPlan {
        replications,
        catalog: CatalogSource::Generate(CatalogSpec::new(count, 17)),
        ..ExperimentPlan::default()
    }
}

#[test]
fn simplex_weights_have_uniform_marginal() {
    // first coordinate of a uniform point on the 1-simplex is U(0, 1)
    let mut rng = seed::stream(12345);
    let draws: Vec<f64> = (0..10_000)
        .map(|_| sample_weights(2, &mut rng).unwrap()[0])
        .collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
    let below_quarter = draws.iter().filter(|&&x| x < 0.25).count() as f64 / 10_000.0;
    assert!((below_quarter - 0.25).abs() <= 0.02, "P(w < 0.25) = {below_quarter}");
}

#[test]
fn single_cell_yields_one_record_per_front() {
    let plan = ExperimentPlan {
        algorithms: vec![Algorithm::Topsis],
        selection_fractions: vec![0.1],
        criteria_sets: vec![CriteriaSet::new("pair", ["battery", "price"])],
        ..small_plan(100, 1)
    };
    let out = run_experiment_detailed(&plan).unwrap();
    assert_eq!(out.records.len(), out.criteria_sets[0].num_fronts);
    let fronts: Vec<usize> = out.records.iter().map(|r| r.front_index).collect();
    assert_eq!(fronts, (1..=out.criteria_sets[0].num_fronts).collect::<Vec<_>>());
    let selected: usize = out.records.iter().map(|r| r.selected_in_front).sum();
    assert_eq!(selected, 10);
}

#[test]
fn record_count_and_ordering() {
    let plan = small_plan(300, 4);
    let out = run_experiment_detailed(&plan).unwrap();
    assert_eq!(out.stratifications_computed, plan.criteria_sets.len());
    let expected: usize = out
        .criteria_sets
        .iter()
        .map(|c| c.num_fronts * plan.replications * plan.algorithms.len() * plan.selection_fractions.len())
        .sum();
    assert_eq!(out.records.len(), expected);

    // grouped by criteria set, fraction, algorithm, replication, front
    let keys: Vec<_> = out
        .records
        .iter()
        .map(|r| {
            let set = usize::from(r.n_criteria == 6);
            let alg = plan.algorithms.iter().position(|a| *a == r.algorithm).unwrap();
            (set, r.k_selected, alg, r.replication, r.front_index)
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let distinct: BTreeSet<_> = keys.iter().collect();
    assert_eq!(distinct.len(), keys.len());
}

#[test]
fn algorithms_share_weights_per_replication() {
    let plan = small_plan(200, 5);
    let records = run_experiment(&plan).unwrap();
    let mut by_rep: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for r in &records {
        by_rep
            .entry((r.n_criteria, r.replication))
            .or_default()
            .insert(format!("{:?}", r.weight_vector));
    }
    assert!(by_rep.values().all(|w| w.len() == 1));
    for (set_index, set) in plan.criteria_sets.iter().enumerate() {
        let n = set.criteria.len();
        let w = replication_weights(plan.master_seed, set_index, 3, n).unwrap();
        let rec = records
            .iter()
            .find(|r| r.n_criteria == n && r.replication == 3)
            .unwrap();
        assert_eq!(rec.weight_vector, w.as_slice());
    }
}

#[test]
fn catalog_file_source_matches_generated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let spec = CatalogSpec::new(150, 17);
    save_catalog(&generate_catalog(&spec).unwrap(), &path).unwrap();
    let generated = small_plan(150, 2);
    let from_file = ExperimentPlan {
        catalog: CatalogSource::File { path },
        ..generated.clone()
    };
    assert_eq!(run_experiment(&generated).unwrap(), run_experiment(&from_file).unwrap());
}

#[test]
fn bad_plans_are_rejected() {
    let tiny = ExperimentPlan {
        selection_fractions: vec![0.001],
        ..small_plan(100, 1)
    };
    assert!(run_experiment(&tiny).is_err());
    let missing = ExperimentPlan {
        catalog: CatalogSource::File { path: "/nonexistent/catalog.jsonl".into() },
        ..small_plan(100, 1)
    };
    assert!(run_experiment(&missing).is_err());
}

#[test]
fn emission_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let records = run_experiment(&small_plan(400, 3)).unwrap();

    let one = dir.path().join("one.csv");
    emit_results(&records[..1], &one, None).unwrap();
    assert_eq!(std::fs::read_to_string(&one).unwrap().lines().count(), 2);

    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let opts = SummaryOptions {
        path: dir.path().join("summary.csv"),
        front_cap: Some(3),
        suppress_outliers: false,
    };
    emit_results(&records, &a, Some(&opts)).unwrap();
    emit_results(&records, &b, None).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(load_results(&a).unwrap().len(), records.len());

    let summary = std::fs::read_to_string(&opts.path).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,n_criteria,k_selected,front_index,n,mean,median,q1,q3,whisker_low,whisker_high,outlier_count,min,max"
    );
    for line in lines {
        let front: usize = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(front <= 3);
        assert_eq!(line.split(',').nth(4), Some("3"));
    }

    let suppressed = SummaryOptions { suppress_outliers: true, front_cap: None, ..opts };
    let rows = summarize_records(&records, &suppressed).unwrap();
    assert!(rows.iter().any(|r| r.key.front_index > 3));
}

#[test]
fn reloaded_weights_keep_twelve_digits() {
    let records = run_experiment(&small_plan(100, 2)).unwrap();
    let mut buf = Vec::new();
    cotrank::experiment::write_results(&records, &mut buf).unwrap();
    let back = read_results(buf.as_slice()).unwrap();
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.onvgr, b.onvgr);
        for (x, y) in a.weight_vector.iter().zip(&b.weight_vector) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300) * 10.0);
        }
    }
}
