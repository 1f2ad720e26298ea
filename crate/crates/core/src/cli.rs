//! The `eorlicz` command line: spec ingestion, dispatch, JSON reports and
//! exit codes.
//!
//! | command    | 0                        | 1                   | 2            | 3           |
//! |------------|--------------------------|---------------------|--------------|-------------|
//! | `classify` | requested classes certified | a class refuted  | inconclusive | input error |
//! | `norm`     | finite norm              | `+∞` (not a member) |              | input error |
//! | `sobolev`  | finite norm              | `+∞`                |              | input error |
//! | `catalog`  | outcomes as expected     | unexpected dispute  | inconclusive | input error |

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::classify::{classify, CheckConfig, FunctionClass, Status};
use crate::exprlang::{compose_sources, ComposedFunction};
use crate::measure::{read_grid_csv, GridFunction, MeasureDescriptor, MeasureSpace};
use crate::norms::{self, DEFAULT_TOL};
use crate::sobolev;

pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "eorlicz", version, about = "Classify E-convex functions and compute E-Orlicz norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the spec's (phi, E) against the four classes.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Luxemburg norm of the CSV grid function over the spec's omega.
    Norm {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sobolev-type norm with derivatives up to --order.
    Sobolev {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run one fixture, or the whole catalog.
    Catalog {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// JSON input shared by `classify`, `norm` and `sobolev`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub phi: String,
    #[serde(rename = "E")]
    pub e: [String; 2],
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub omega: Option<MeasureDescriptor>,
    #[serde(default)]
    pub t_samples: Option<Vec<f64>>,
    /// Overrides for sampling and tolerances; absent fields keep defaults.
    #[serde(default)]
    pub config: Option<CheckConfig>,
    /// Classes that decide the `classify` exit code; all four when absent.
    #[serde(default)]
    pub classes: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("spec {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("spec has no omega measure")]
    NoOmega,
    #[error("no t samples: give t_samples, config.t_samples or omega")]
    NoSamples,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn compose(&self) -> Result<ComposedFunction, CliError> {
        Ok(compose_sources(&self.phi, &self.e[0], &self.e[1], self.p)?)
    }

    pub fn measure(&self) -> Result<MeasureSpace, CliError> {
        let d = self.omega.as_ref().ok_or(CliError::NoOmega)?;
        Ok(MeasureSpace::from_descriptor(d).map_err(crate::Error::from)?)
    }

    /// `t_samples`, else `config.t_samples`, else the nodes of `omega`.
    pub fn resolved_config(&self) -> Result<CheckConfig, CliError> {
        let mut cfg = self.config.clone().unwrap_or_default();
        if let Some(t) = &self.t_samples {
            cfg.t_samples = t.clone();
        }
        if cfg.t_samples.is_empty() && self.omega.is_some() {
            cfg.t_samples = self.measure()?.nodes().into_iter().map(|n| n.0).collect();
        }
        if cfg.t_samples.is_empty() {
            return Err(CliError::NoSamples);
        }
        Ok(cfg)
    }

    pub fn requested_classes(&self) -> Result<Vec<FunctionClass>, CliError> {
        match &self.classes {
            None => Ok(FunctionClass::CHAIN.to_vec()),
            Some(names) => names
                .iter()
                .map(|n| FunctionClass::from_name(n).ok_or_else(|| CliError::UnknownClass(n.clone())))
                .collect(),
        }
    }
}

fn read_data(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows = read_grid_csv(file).map_err(crate::Error::from)?;
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// Pretty JSON with a trailing newline, to `path` via a temporary file and
/// rename, or to stdout.
pub fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    match path {
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, text)?;
            fs::rename(&tmp, path)
        }
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn finish<T: Serialize>(value: &T, report: Option<&Path>, code: i32) -> i32 {
    match emit(value, report) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: writing report: {e}");
            EXIT_INPUT
        }
    }
}

fn fail(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_INPUT
}

pub fn cmd_classify(spec: &Path, report: Option<&Path>) -> i32 {
    let run = || -> Result<_, CliError> {
        let spec = SpecFile::load(spec)?;
        let classes = spec.requested_classes()?;
        let psi = spec.compose()?;
        let cfg = spec.resolved_config()?;
        let r = classify(&psi, &cfg).map_err(crate::Error::from)?;
        Ok((r, classes))
    };
    match run() {
        Ok((r, classes)) => {
            let statuses: Vec<Status> = classes.iter().map(|c| r.status(*c)).collect();
            let code = if statuses.contains(&Status::Refuted) {
                1
            } else if statuses.contains(&Status::Inconclusive) {
                2
            } else {
                0
            };
            finish(&r, report, code)
        }
        Err(e) => fail(e),
    }
}

pub fn cmd_norm(spec: &Path, data: &Path, tol: f64, report: Option<&Path>) -> i32 {
    let run = || -> Result<_, CliError> {
        let spec = SpecFile::load(spec)?;
        let psi = spec.compose()?;
        let m = spec.measure()?;
        let f = GridFunction::new(read_data(data)?).map_err(crate::Error::from)?;
        Ok(norms::luxemburg_norm(&psi, &m, &f, tol).map_err(crate::Error::from)?)
    };
    match run() {
        Ok(r) => {
            let code = if r.value.is_infinite() { 1 } else { 0 };
            finish(&r, report, code)
        }
        Err(e) => fail(e),
    }
}

pub fn cmd_sobolev(spec: &Path, data: &Path, order: usize, tol: f64, report: Option<&Path>) -> i32 {
    let run = || -> Result<_, CliError> {
        let spec = SpecFile::load(spec)?;
        let psi = spec.compose()?;
        let m = spec.measure()?;
        let f = read_data(data)?;
        Ok(sobolev::sobolev_norm(&psi, &m, &f, order, tol).map_err(crate::Error::from)?)
    };
    match run() {
        Ok(r) => {
            let code = if r.value.is_infinite() { 1 } else { 0 };
            finish(&r, report, code)
        }
        Err(e) => fail(e),
    }
}

pub fn cmd_catalog(fixture: Option<&str>, report: Option<&Path>) -> i32 {
    match fixture {
        None => match catalog::run_all() {
            Ok(r) => {
                let code = r.exit_code();
                finish(&r, report, code)
            }
            Err(e) => fail(e),
        },
        Some(name) => {
            let def = match catalog::fixture(name) {
                Ok(d) => d,
                Err(e) => return fail(e),
            };
            match catalog::run_fixture_def(&def) {
                Ok(r) => {
                    let code = if r.status == catalog::FixtureStatus::Inconclusive {
                        2
                    } else if r.as_expected(&def) {
                        0
                    } else {
                        1
                    };
                    finish(&r, report, code)
                }
                Err(e) => fail(e),
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Classify { spec, report } => cmd_classify(&spec, report.as_deref()),
        Command::Norm {
            spec,
            data,
            tol,
            report,
        } => cmd_norm(&spec, &data, tol, report.as_deref()),
        Command::Sobolev {
            spec,
            data,
            order,
            tol,
            report,
        } => cmd_sobolev(&spec, &data, order, tol, report.as_deref()),
        Command::Catalog { fixture, report } => cmd_catalog(fixture.as_deref(), report.as_deref()),
    }
}
