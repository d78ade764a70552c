use cotrank::catalog::{
    catalog_to_matrix, criteria_for, generate_catalog, load_catalog, save_catalog, CatalogSpec,
};
use cotrank::Error;
use proptest::prelude::*;

#[test]
fn uniform_fields_at_ten_thousand() {
    let spec = CatalogSpec::new(10_000, 2024);
    let sensors = generate_catalog(&spec).unwrap();
    assert_eq!(sensors.len(), 10_000);
    let r = spec.ranges;
    let within = |x: f64, [lo, hi]: [f64; 2]| (lo..=hi).contains(&x);
    for s in &sensors {
        assert!(within(s.battery, r.battery));
        assert!(within(s.price, r.price));
        assert!(within(s.drift, r.drift));
        assert!(within(s.frequency, r.frequency));
        assert!(within(s.energy_consumption, r.energy_consumption));
        assert!(within(s.response_time, r.response_time));
        assert!(within(s.latitude, r.latitude));
        assert!(within(s.longitude, r.longitude));
    }
    // U(0, 100): sd of the mean = 100 / sqrt(12 * 10_000) ~ 0.29, so 3 sd < 1
    let mean = sensors.iter().map(|s| s.battery).sum::<f64>() / 10_000.0;
    assert!((mean - 50.0).abs() <= 3.0, "battery mean {mean}");
    assert!((mean - 50.0).abs() <= 3.0 * 100.0 / (12.0f64 * 10_000.0).sqrt());
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.jsonl");
    let sensors = generate_catalog(&CatalogSpec::new(100, 5)).unwrap();
    save_catalog(&sensors, &path).unwrap();
    assert_eq!(load_catalog(&path).unwrap(), sensors);
}

#[test]
fn load_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert!(load_catalog(&empty).is_err());

    let sensors = generate_catalog(&CatalogSpec::new(5, 5)).unwrap();
    let path = dir.path().join("neg.jsonl");
    save_catalog(&sensors, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let price = format!("\"price\":{}", sensors[2].price);
    assert!(lines[3].contains(&price));
    lines[3] = lines[3].replace(&price, "\"price\":-3.5");
    std::fs::write(&path, lines.join("\n")).unwrap();
    match load_catalog(&path) {
        Err(Error::CatalogLine { line, message, .. }) => {
            assert_eq!(line, 4);
            assert!(message.contains("price"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(load_catalog(dir.path().join("missing.jsonl")).is_err());
}

#[test]
fn matrix_preserves_sensor_order() {
    let sensors = generate_catalog(&CatalogSpec::new(25, 8)).unwrap();
    let m = catalog_to_matrix(&sensors, &criteria_for(&["drift", "frequency", "battery"]).unwrap())
        .unwrap();
    assert_eq!(m.rows(), 25);
    for (i, s) in sensors.iter().enumerate() {
        assert_eq!(m.alternatives()[i], s.id);
        assert_eq!(m.row(i), &[s.drift, s.frequency, s.battery]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generation_is_a_function_of_the_spec(count in 1usize..200, seed in any::<u64>()) {
        let spec = CatalogSpec::new(count, seed);
        let a = generate_catalog(&spec).unwrap();
        prop_assert_eq!(a.len(), count);
        prop_assert_eq!(&a, &generate_catalog(&spec).unwrap());
        for s in &a {
            prop_assert!(s.validate().is_ok());
        }
    }
}
