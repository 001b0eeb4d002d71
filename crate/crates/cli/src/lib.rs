//! Batch runner behind the `chowmot` binary.

pub mod report;
pub mod suites;

use std::path::PathBuf;
use std::time::Instant;

use chowmot::catalog::{self, CatalogItem};
use chowmot::io::{load_fibration, load_ring};
use chowmot::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub use report::{CheckLine, Report, Section, Table};
pub use suites::Suite;
use suites::{run_suite, Context, Subject};

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chowmot", version, about = "Exact checks on Chow rings, fibrations and their motives")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries with dimensions and ranks.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification suites on the given inputs.
    Verify(RunArgs),
    /// Print the motive decomposition of each input.
    Decompose(RunArgs),
    /// Lift the cellular Chow-Kunneth decomposition of the base and verify it.
    Ck(RunArgs),
    /// Run the randomized composition identities.
    Identities(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Catalog name; repeatable.
    #[arg(long = "catalog")]
    pub catalog: Vec<String>,
    /// JSON ring file; repeatable.
    #[arg(long = "ring-file")]
    pub ring_file: Vec<PathBuf>,
    /// JSON fibration file; repeatable.
    #[arg(long = "fibration-file")]
    pub fibration_file: Vec<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<Suite>,
    /// Test rings T for the checks on T × Y.
    #[arg(long, value_delimiter = ',', default_value = "point,p1,p2")]
    pub battery: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Catalog(String),
    RingFile(PathBuf),
    FibrationFile(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Catalog,
    Verify,
    Decompose,
    Ck,
    Identities,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Catalog => "catalog",
            Mode::Verify => "verify",
            Mode::Decompose => "decompose",
            Mode::Ck => "ck",
            Mode::Identities => "identities",
        }
    }
}

/// Everything a run depends on. The seed determines every randomized check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub inputs: Vec<Input>,
    pub suites: Vec<Suite>,
    pub battery: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            mode,
            inputs: Vec::new(),
            suites: vec![Suite::All],
            battery: vec!["point".into(), "p1".into(), "p2".into()],
            seed: 0,
            samples: 100,
            format: Format::Text,
        }
    }

    pub fn catalog(mut self, name: &str) -> Self {
        self.inputs.push(Input::Catalog(name.into()));
        self
    }

    pub fn suite(mut self, suite: Suite) -> Self {
        self.suites = vec![suite];
        self
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (mode, args) = match cli.command {
            Command::Catalog { format } => return RunConfig { format, ..RunConfig::new(Mode::Catalog) },
            Command::Verify(a) => (Mode::Verify, a),
            Command::Decompose(a) => (Mode::Decompose, a),
            Command::Ck(a) => (Mode::Ck, a),
            Command::Identities(a) => (Mode::Identities, a),
        };
        let mut inputs: Vec<Input> = args.catalog.into_iter().map(Input::Catalog).collect();
        inputs.extend(args.ring_file.into_iter().map(Input::RingFile));
        inputs.extend(args.fibration_file.into_iter().map(Input::FibrationFile));
        RunConfig {
            mode,
            inputs,
            suites: args.suite,
            battery: args.battery,
            seed: args.seed,
            samples: args.samples,
            format: args.format,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::UnknownName(_) => EXIT_PARSE,
        Error::RingMismatch(_) | Error::OutOfRange(_) | Error::NotHomogeneous(_) => EXIT_SUITE_FAILURE,
        _ => EXIT_VALIDATION,
    }
}

fn load(input: &Input) -> chowmot::Result<Subject> {
    Ok(match input {
        Input::Catalog(name) => Subject { label: name.clone(), item: catalog::lookup(name)? },
        Input::RingFile(path) => {
            let loaded = load_ring(path)?;
            Subject { label: path.display().to_string(), item: CatalogItem::Ring(loaded.ring) }
        }
        Input::FibrationFile(path) => {
            Subject { label: path.display().to_string(), item: CatalogItem::Model(load_fibration(path)?) }
        }
    })
}

fn input_label(input: &Input) -> String {
    match input {
        Input::Catalog(n) => n.clone(),
        Input::RingFile(p) | Input::FibrationFile(p) => p.display().to_string(),
    }
}

fn suites_for(config: &RunConfig) -> Vec<Suite> {
    let mut suites: Vec<Suite> = match config.mode {
        Mode::Catalog => Vec::new(),
        Mode::Decompose => vec![Suite::Motives],
        Mode::Ck => vec![Suite::Ck],
        Mode::Identities => vec![Suite::Identities],
        Mode::Verify if config.suites.contains(&Suite::All) => Suite::CONCRETE.to_vec(),
        Mode::Verify => config.suites.clone(),
    };
    suites.sort_by_key(|s| s.name());
    suites.dedup();
    suites
}

fn catalog_section() -> chowmot::Result<Section> {
    let mut section = Section::new("catalog", "-");
    let mut rows = Vec::new();
    for name in catalog::standard_entries() {
        let item = catalog::lookup(&name)?;
        let (kind, dim, ranks) = match &item {
            CatalogItem::Ring(r) => ("ring", r.dimension(), r.ranks()),
            CatalogItem::Model(m) => ("fibration", m.dimension(), m.ranks()),
        };
        rows.push(vec![name, item.name(), kind.into(), dim.to_string(), format!("{ranks:?}")]);
    }
    section.tables.push(Table {
        title: "entries".into(),
        header: ["name", "space", "kind", "dim", "ranks"].map(String::from).to_vec(),
        rows,
    });
    section.tables.push(Table {
        title: "name patterns".into(),
        header: vec!["pattern".into(), "meaning".into()],
        rows: catalog::entries().into_iter().map(|(p, m)| vec![p.into(), m.into()]).collect(),
    });
    Ok(section)
}

fn failed_report(config: &RunConfig, e: &Error) -> Report {
    Report {
        command: config.mode.name().into(),
        seed: config.seed,
        samples: config.samples,
        inputs: config.inputs.iter().map(input_label).collect(),
        sections: Vec::new(),
        status: exit_code(e),
        error: Some(e.to_string()),
    }
}

/// Runs the configured command and returns the report, whose `status` is the exit code.
pub fn run(config: &RunConfig) -> Report {
    match try_run(config) {
        Ok(r) => r,
        Err(e) => failed_report(config, &e),
    }
}

fn try_run(config: &RunConfig) -> chowmot::Result<Report> {
    let subjects = config.inputs.iter().map(load).collect::<chowmot::Result<Vec<_>>>()?;
    let battery = config.battery.iter().map(|n| catalog::lookup_ring(n)).collect::<chowmot::Result<Vec<_>>>()?;
    let ctx = Context { battery, seed: config.seed, samples: config.samples };

    let mut sections = Vec::new();
    if config.mode == Mode::Catalog {
        sections.push(catalog_section()?);
    }
    let mut jobs: Vec<(Suite, Option<&Subject>)> = Vec::new();
    for suite in suites_for(config) {
        if suite.is_global() {
            jobs.push((suite, None));
        } else {
            jobs.extend(subjects.iter().map(|s| (suite, Some(s))));
        }
    }
    let results: Vec<chowmot::Result<Section>> = jobs
        .par_iter()
        .map(|&(suite, subject)| {
            let start = Instant::now();
            let mut section = run_suite(suite, subject, &ctx)?;
            section.millis = start.elapsed().as_secs_f64() * 1e3;
            Ok(section)
        })
        .collect();
    for r in results {
        sections.push(r?);
    }

    let mut report = Report {
        command: config.mode.name().into(),
        seed: config.seed,
        samples: config.samples,
        inputs: config.inputs.iter().map(input_label).collect(),
        sections,
        status: EXIT_PASS,
        error: None,
    };
    if !report.passed() {
        report.status = EXIT_SUITE_FAILURE;
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_json(),
    }
}
