//! Synthetic sensor catalogs: generation, persistence and conversion to a
//! decision matrix.
//!
//! A catalog file is UTF-8 JSON Lines. Line 1 is the header
//! `{"schema":"cotrank-sensor-catalog","version":1}`; every following line is
//! one sensor object whose keys are the [`SensorDescription`] field names.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decision::{CriterionSpec, DecisionMatrix, Direction};
use crate::error::{Error, Result};
use crate::seed;

pub const SCHEMA_NAME: &str = "cotrank-sensor-catalog";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorDescription {
    pub id: String,
    /// Percent, `[0, 100]`.
    pub battery: f64,
    pub price: f64,
    pub drift: f64,
    /// Hertz.
    pub frequency: f64,
    /// Watts.
    pub energy_consumption: f64,
    /// Milliseconds.
    pub response_time: f64,
    pub latitude: f64,
    pub longitude: f64,
}

/// The six rankable sensor attributes, in the canonical constraint order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SensorField {
    Battery,
    Price,
    Drift,
    Frequency,
    EnergyConsumption,
    ResponseTime,
}

impl SensorField {
    pub const ALL: [SensorField; 6] = [
        SensorField::Battery,
        SensorField::Price,
        SensorField::Drift,
        SensorField::Frequency,
        SensorField::EnergyConsumption,
        SensorField::ResponseTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SensorField::Battery => "battery",
            SensorField::Price => "price",
            SensorField::Drift => "drift",
            SensorField::Frequency => "frequency",
            SensorField::EnergyConsumption => "energy_consumption",
            SensorField::ResponseTime => "response_time",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            SensorField::Battery | SensorField::Frequency => Direction::Maximize,
            _ => Direction::Minimize,
        }
    }

    pub fn criterion(self) -> CriterionSpec {
        CriterionSpec::new(self.name(), self.direction(), 0.0)
    }

    pub fn value(self, s: &SensorDescription) -> f64 {
        match self {
            SensorField::Battery => s.battery,
            SensorField::Price => s.price,
            SensorField::Drift => s.drift,
            SensorField::Frequency => s.frequency,
            SensorField::EnergyConsumption => s.energy_consumption,
            SensorField::ResponseTime => s.response_time,
        }
    }
}

impl fmt::Display for SensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensorField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Criterion(format!("unknown sensor criterion `{s}`")))
    }
}

/// Criterion specs for named sensor fields, directions filled in.
pub fn criteria_for<S: AsRef<str>>(names: &[S]) -> Result<Vec<CriterionSpec>> {
    names
        .iter()
        .map(|n| n.as_ref().parse::<SensorField>().map(SensorField::criterion))
        .collect()
}

/// Sampling bounds `[low, high]` for every generated field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldRanges {
    pub battery: [f64; 2],
    pub price: [f64; 2],
    pub drift: [f64; 2],
    pub frequency: [f64; 2],
    pub energy_consumption: [f64; 2],
    pub response_time: [f64; 2],
    pub latitude: [f64; 2],
    pub longitude: [f64; 2],
}

impl Default for FieldRanges {
    fn default() -> Self {
        Self {
            battery: [0.0, 100.0],
            price: [10.0, 500.0],
            drift: [0.01, 5.0],
            frequency: [0.1, 10.0],
            energy_consumption: [0.1, 5.0],
            response_time: [1.0, 1000.0],
            latitude: [-90.0, 90.0],
            longitude: [-180.0, 180.0],
        }
    }
}

#[derive(Clone, Copy)]
enum Legal {
    Closed(f64, f64),
    Positive,
    NonNegative,
}

impl Legal {
    fn contains(self, x: f64) -> bool {
        x.is_finite()
            && match self {
                Legal::Closed(lo, hi) => (lo..=hi).contains(&x),
                Legal::Positive => x > 0.0,
                Legal::NonNegative => x >= 0.0,
            }
    }
}

const LEGAL: [(&str, Legal); 8] = [
    ("battery", Legal::Closed(0.0, 100.0)),
    ("price", Legal::Positive),
    ("drift", Legal::NonNegative),
    ("frequency", Legal::Positive),
    ("energy_consumption", Legal::Positive),
    ("response_time", Legal::Positive),
    ("latitude", Legal::Closed(-90.0, 90.0)),
    ("longitude", Legal::Closed(-180.0, 180.0)),
];

impl FieldRanges {
    fn as_array(&self) -> [[f64; 2]; 8] {
        [
            self.battery,
            self.price,
            self.drift,
            self.frequency,
            self.energy_consumption,
            self.response_time,
            self.latitude,
            self.longitude,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for ((name, legal), [lo, hi]) in LEGAL.iter().zip(self.as_array()) {
            if !(lo < hi) || !legal.contains(lo) || !legal.contains(hi) {
                return Err(Error::Catalog(format!("invalid {name} range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

impl SensorDescription {
    /// Checks every field against its legal range.
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Catalog("sensor id is empty".into()));
        }
        let values = [
            self.battery,
            self.price,
            self.drift,
            self.frequency,
            self.energy_consumption,
            self.response_time,
            self.latitude,
            self.longitude,
        ];
        for ((name, legal), x) in LEGAL.iter().zip(values) {
            if !legal.contains(x) {
                return Err(Error::Catalog(format!(
                    "sensor `{}` has {name} = {x} out of range",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSpec {
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub ranges: FieldRanges,
}

impl CatalogSpec {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            ranges: FieldRanges::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Catalog("catalog count must be at least 1".into()));
        }
        self.ranges.validate()
    }
}

pub fn sensor_id(index: usize) -> String {
    format!("sensor-{index:06}")
}

/// Draws `spec.count` sensors from one ChaCha8 stream seeded with `spec.seed`.
///
/// Per sensor, fields are drawn in declaration order (battery, price, drift,
/// frequency, energy_consumption, response_time, latitude, longitude), each
/// as `low + u * (high - low)` with `u` from [`seed::unit`].
pub fn generate_catalog(spec: &CatalogSpec) -> Result<Vec<SensorDescription>> {
    spec.validate()?;
    let mut rng = seed::stream(spec.seed);
    let ranges = spec.ranges.as_array();
    let sensors = (0..spec.count)
        .map(|i| {
            let mut draw = ranges.iter().map(|&[lo, hi]| lo + seed::unit(&mut rng) * (hi - lo));
            let mut next = || draw.next().expect("eight ranges");
            SensorDescription {
                id: sensor_id(i),
                battery: next(),
                price: next(),
                drift: next(),
                frequency: next(),
                energy_consumption: next(),
                response_time: next(),
                latitude: next(),
                longitude: next(),
            }
        })
        .collect();
    Ok(sensors)
}

/// One row per sensor, one column per criterion in the given order.
/// Directions are fixed per field; a criterion whose direction disagrees is
/// rejected. Weights on the criteria are carried through as defaults.
pub fn catalog_to_matrix(
    sensors: &[SensorDescription],
    criteria: &[CriterionSpec],
) -> Result<DecisionMatrix> {
    if !(2..=6).contains(&criteria.len()) {
        return Err(Error::Criterion(format!(
            "expected between 2 and 6 sensor criteria, got {}",
            criteria.len()
        )));
    }
    let mut fields = Vec::with_capacity(criteria.len());
    let mut seen = HashSet::new();
    for c in criteria {
        let field: SensorField = c.name.parse()?;
        if !seen.insert(field) {
            return Err(Error::Criterion(format!("duplicate criterion `{}`", c.name)));
        }
        if c.direction != field.direction() {
            return Err(Error::Criterion(format!(
                "`{}` must be {}imized",
                c.name,
                field.direction()
            )));
        }
        fields.push(field);
    }
    let ids = sensors.iter().map(|s| s.id.clone()).collect();
    let values = sensors
        .iter()
        .flat_map(|s| fields.iter().map(move |f| f.value(s)))
        .collect();
    DecisionMatrix::from_row_major(ids, criteria.to_vec(), values)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    schema: String,
    version: u32,
}

pub fn write_catalog<W: Write>(sensors: &[SensorDescription], mut out: W) -> Result<()> {
    let header = Header {
        schema: SCHEMA_NAME.into(),
        version: SCHEMA_VERSION,
    };
    serde_json::to_writer(&mut out, &header).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    for s in sensors {
        serde_json::to_writer(&mut out, s).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_catalog(sensors: &[SensorDescription], path: impl AsRef<Path>) -> Result<()> {
    write_catalog(sensors, BufWriter::new(File::create(path)?))
}

/// Parses a catalog, reporting 1-based line numbers (the header is line 1)
/// against `source` in error messages.
pub fn read_catalog<R: BufRead>(input: R, source: &Path) -> Result<Vec<SensorDescription>> {
    let err = |line: usize, message: String| Error::CatalogLine {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));

    let Some((_, first)) = lines.next() else {
        return Err(err(1, "empty catalog file".into()));
    };
    let header: Header =
        serde_json::from_str(&first?).map_err(|e| err(1, format!("bad header: {e}")))?;
    if header.schema != SCHEMA_NAME || header.version != SCHEMA_VERSION {
        return Err(err(
            1,
            format!("unsupported schema {} v{}", header.schema, header.version),
        ));
    }

    let mut sensors = Vec::new();
    let mut ids = HashSet::new();
    for (no, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let s: SensorDescription =
            serde_json::from_str(&line).map_err(|e| err(no, format!("malformed record: {e}")))?;
        s.validate().map_err(|e| err(no, e.to_string()))?;
        if !ids.insert(s.id.clone()) {
            return Err(err(no, format!("duplicate sensor id `{}`", s.id)));
        }
        sensors.push(s);
    }
    if sensors.is_empty() {
        return Err(Error::Catalog(format!("{} holds no sensors", source.display())));
    }
    Ok(sensors)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<SensorDescription>> {
    let path: PathBuf = path.as_ref().into();
    read_catalog(BufReader::new(File::open(&path)?), &path)
}
