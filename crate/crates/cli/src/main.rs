//! `cotrank`: generate sensor catalogs, rank them, stratify them into Pareto
//! fronts, and run seeded ranking experiments.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cotrank::catalog::{catalog_to_matrix, criteria_for, generate_catalog, load_catalog, save_catalog};
use cotrank::experiment::{
    emit_results, load_results, run_experiment_detailed, summarize_records, write_summary,
    CatalogSource, ExperimentPlan, SummaryOptions,
};
use cotrank::pareto::{brute_force_fronts_with_cap, ORACLE_CAP};
use cotrank::{pareto_fronts, Algorithm, CatalogSpec, DecisionMatrix, SensorField, VikorParams, WeightVector};

#[derive(Parser)]
#[command(name = "cotrank", version, about = "Sensor ranking and Pareto-front benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic sensor catalog.
    Generate {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output catalog (JSON Lines).
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Rank a catalog with one algorithm under given weights.
    Rank {
        #[command(flatten)]
        input: CatalogInput,
        #[arg(long, short, default_value = "topsis")]
        algorithm: Algorithm,
        /// Comma-separated weights summing to 1, one per criterion.
        /// Defaults to equal weights.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.5)]
        vikor_v: f64,
        /// Keep only the best k alternatives.
        #[arg(long)]
        top: Option<usize>,
        /// Output CSV; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Stratify a catalog into Pareto fronts and export the front of each sensor.
    Fronts {
        #[command(flatten)]
        input: CatalogInput,
        /// Output table (tab-separated); stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check the front stratification against the brute-force oracle.
    Verify {
        /// Catalog file; a catalog is generated when omitted.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Criteria to check; every prefix of the six sensor fields with at
        /// least two members when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<String>>,
    },
    /// Run a full experiment plan.
    Experiment(ExperimentArgs),
    /// Summarize a results file into boxplot statistics.
    Summarize {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        summary: SummaryFlags,
    },
}

#[derive(Args)]
struct CatalogInput {
    #[arg(long)]
    catalog: PathBuf,
    /// Comma-separated sensor fields, e.g. battery,price.
    #[arg(long, value_delimiter = ',', default_value = "battery,price")]
    criteria: Vec<String>,
}

impl CatalogInput {
    fn matrix(&self) -> Result<DecisionMatrix> {
        let sensors = load_catalog(&self.catalog)?;
        Ok(catalog_to_matrix(&sensors, &criteria_for(&self.criteria)?)?)
    }
}

#[derive(Args)]
struct SummaryFlags {
    /// Drop fronts beyond this index from the summary.
    #[arg(long)]
    front_cap: Option<usize>,
    /// Omit outlier counts and extremes from the summary.
    #[arg(long)]
    suppress_outliers: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Plan file (TOML); the built-in desk-scale plan when omitted.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    /// Generated catalog size.
    #[arg(long, conflicts_with = "catalog")]
    count: Option<usize>,
    /// Generated catalog seed.
    #[arg(long, conflicts_with = "catalog")]
    catalog_seed: Option<u64>,
    /// Use this catalog file instead of the plan's catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Also write summary.csv.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    summary_flags: SummaryFlags,
    /// Print the resolved plan and exit.
    #[arg(long)]
    print_plan: bool,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentPlan> {
        let mut plan = match &self.plan {
            Some(path) => ExperimentPlan::load(path)
                .with_context(|| format!("loading plan {}", path.display()))?,
            None => ExperimentPlan::default(),
        };
        if let Some(s) = self.master_seed {
            plan.master_seed = s;
        }
        if let Some(r) = self.replications {
            plan.replications = r;
        }
        if let Some(path) = &self.catalog {
            plan.catalog = CatalogSource::File { path: path.clone() };
        }
        if self.count.is_some() || self.catalog_seed.is_some() {
            let CatalogSource::Generate(spec) = &mut plan.catalog else {
                bail!("--count and --catalog-seed need a generated catalog, but the plan reads a file");
            };
            spec.count = self.count.unwrap_or(spec.count);
            spec.seed = self.catalog_seed.unwrap_or(spec.seed);
        }
        plan.validate()?;
        Ok(plan)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn rank(
    input: &CatalogInput,
    algorithm: Algorithm,
    weights: Option<Vec<f64>>,
    vikor_v: f64,
    top: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let m = input.matrix()?;
    let w = match weights {
        Some(w) => WeightVector::new(w)?,
        None => WeightVector::uniform(m.cols())?,
    };
    m.check_weights(&w)?;
    let ranked = algorithm.rank(&m, &w, VikorParams::new(vikor_v)?)?;
    let k = top.unwrap_or(ranked.len());
    if k == 0 || k > ranked.len() {
        bail!("--top {k} is outside 1..={}", ranked.len());
    }
    let mut out = output(out)?;
    writeln!(out, "rank,id,score")?;
    for (pos, &row) in ranked.order().iter().take(k).enumerate() {
        writeln!(out, "{},{},{}", pos + 1, m.alternatives()[row], ranked.scores()[row])?;
    }
    out.flush()?;
    Ok(())
}

fn fronts(input: &CatalogInput, out: Option<&Path>) -> Result<()> {
    let m = input.matrix()?;
    let started = Instant::now();
    let strat = pareto_fronts(&m);
    log::info!(
        "{} sensors, {} fronts, first front {} ({:.2?})",
        m.rows(),
        strat.num_fronts(),
        strat.fronts()[0].len(),
        started.elapsed()
    );
    let mut out = output(out)?;
    strat.write_table(&mut out)?;
    out.flush()?;
    Ok(())
}

fn verify(catalog: Option<&Path>, count: usize, seed: u64, criteria: Option<Vec<String>>) -> Result<()> {
    let sensors = match catalog {
        Some(p) => load_catalog(p)?,
        None => generate_catalog(&CatalogSpec::new(count, seed))?,
    };
    if sensors.len() > ORACLE_CAP {
        bail!("{} sensors exceed the oracle cap of {ORACLE_CAP}", sensors.len());
    }
    let sets: Vec<Vec<String>> = match criteria {
        Some(c) => vec![c],
        None => (2..=SensorField::ALL.len())
            .map(|n| SensorField::ALL[..n].iter().map(|f| f.name().to_string()).collect())
            .collect(),
    };
    let mut mismatches = 0;
    for set in &sets {
        let m = catalog_to_matrix(&sensors, &criteria_for(set)?)?;
        let fast = pareto_fronts(&m);
        let ok = fast == brute_force_fronts_with_cap(&m, ORACLE_CAP)?;
        println!(
            "{} {}: {} fronts over {} sensors",
            if ok { "ok  " } else { "FAIL" },
            set.join(","),
            fast.num_fronts(),
            m.rows()
        );
        mismatches += usize::from(!ok);
    }
    if mismatches > 0 {
        bail!("{mismatches} of {} criteria sets disagree with the oracle", sets.len());
    }
    Ok(())
}

fn summary_options(path: PathBuf, flags: &SummaryFlags) -> SummaryOptions {
    SummaryOptions {
        path,
        front_cap: flags.front_cap,
        suppress_outliers: flags.suppress_outliers,
    }
}

fn experiment(args: &ExperimentArgs) -> Result<()> {
    let plan = args.resolve()?;
    let resolved = plan.to_toml()?;
    if args.print_plan {
        print!("{resolved}");
        return Ok(());
    }
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    fs::write(args.out_dir.join("plan.resolved.toml"), resolved)?;

    let started = Instant::now();
    let outcome = run_experiment_detailed(&plan)?;
    let results = args.out_dir.join("results.csv");
    let opts = args
        .summary
        .then(|| summary_options(args.out_dir.join("summary.csv"), &args.summary_flags));
    emit_results(&outcome.records, &results, opts.as_ref())?;
    log::info!(
        "{} records from {} cells written to {} ({:.2?})",
        outcome.records.len(),
        plan.cells(),
        results.display(),
        started.elapsed()
    );
    Ok(())
}

fn summarize(results: &Path, out: PathBuf, flags: &SummaryFlags) -> Result<()> {
    let records = load_results(results).with_context(|| format!("reading {}", results.display()))?;
    let opts = summary_options(out, flags);
    let rows = summarize_records(&records, &opts)?;
    let file = File::create(&opts.path).with_context(|| format!("creating {}", opts.path.display()))?;
    write_summary(&rows, &opts, BufWriter::new(file))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { count, seed, out } => {
            let sensors = generate_catalog(&CatalogSpec::new(count, seed))?;
            save_catalog(&sensors, &out)?;
            log::info!("{count} sensors written to {}", out.display());
            Ok(())
        }
        Command::Rank { input, algorithm, weights, vikor_v, top, out } => {
            rank(&input, algorithm, weights, vikor_v, top, out.as_deref())
        }
        Command::Fronts { input, out } => fronts(&input, out.as_deref()),
        Command::Verify { catalog, count, seed, criteria } => {
            verify(catalog.as_deref(), count, seed, criteria)
        }
        Command::Experiment(args) => experiment(&args),
        Command::Summarize { results, out, summary } => summarize(&results, out, &summary),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
