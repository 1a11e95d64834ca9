//! Command dispatch for the `qgrd` binary.

pub mod checks;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use qgrd::fusion::default_registry;
use qgrd::grouporacle::{enumerate_ball, haagerup_check};
use qgrd::length::{classify_growth, growth_profile, triple_set, GrowthBound, GrowthClass};
use qgrd::rdcheck::{diagnose, Outcome};
use qgrd::tlrep::JwCache;
use qgrd::transform::{tech_ao_grid, triple_string, CheckRow, TechAoSearch, CSV_SCHEMA_VERSION};
use qgrd::QgrdError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checks::{default_checks, CheckContext};
use crate::config::RunConfig;
use crate::report::{csv_records, csv_string, write_csv, write_json};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] QgrdError),
}

#[derive(Debug, Parser)]
#[command(name = "qgrd", version, about = "Rapid-decay diagnostics for discrete quantum groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    /// Largest k + n of the Temperley-Lieb checks.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Replaces the tolerance of every check.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Family parameter override such as `q=1/2`; repeatable.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the built-in families and the default configuration.
    Families,
    /// Growth profile and classification.
    Growth,
    /// Rapid-decay verdict with evidence.
    RdCheck,
    /// Block-norm grid.
    Blocks,
    /// Invariant suite with a pass/fail table.
    Verify,
}

impl Cli {
    /// The configuration file with the flags applied on top.
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.family {
            c.family = f.clone();
        }
        for kv in &self.params {
            let (key, value) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("--param {kv:?}")))?;
            let number = || value.parse::<u32>().map_err(|_| CliError::Config(format!("--param {kv:?}")));
            match key {
                "g" => c.params.g = Some(number()?),
                "n" => c.params.n = Some(number()?),
                "q" => c.params.q = Some(value.into()),
                "group" => c.params.group = Some(value.into()),
                _ => return Err(CliError::Config(format!("unknown parameter {key:?}"))),
            }
        }
        c.output.dir = self.out.clone().unwrap_or(c.output.dir);
        c.seed = self.seed.or(c.seed);
        c.radius = self.radius.unwrap_or(c.radius);
        c.budget.max_strands = self.budget.unwrap_or(c.budget.max_strands);
        c.tolerance = self.tolerance.or(c.tolerance);
        c.threads = self.threads.unwrap_or(c.threads);
        c.validate()?;
        Ok(c)
    }
}

/// Runs a command; `Ok(true)` when every requested check passed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let config = cli.resolve_config()?;
    match cli.command {
        Command::Families => families(&config),
        Command::Growth => growth(&config),
        Command::RdCheck => rd_check(&config),
        Command::Blocks => blocks(&config),
        Command::Verify => verify(&config),
    }
}

fn families(config: &RunConfig) -> Result<bool, CliError> {
    let registry = default_registry();
    println!("# families");
    for p in registry.providers() {
        let defaults = toml::to_string(&p.defaults()).map_err(|e| CliError::Io(e.to_string()))?;
        println!("{:<16} {}", p.name(), p.summary());
        for line in defaults.lines() {
            println!("{:<16}   {line}", "");
        }
    }
    println!("\n# checks");
    for c in default_checks().iter() {
        println!("{:<20} {}", c.name(), c.summary());
    }
    println!("\n# configuration (seed is required by rd-check, blocks and verify)");
    print!("{}", toml::to_string(config).map_err(|e| CliError::Io(e.to_string()))?);
    Ok(true)
}

#[derive(Serialize)]
struct GrowthReport {
    schema_version: u32,
    family: String,
    parameters: String,
    radius: u32,
    complete_through: u32,
    classification: Option<qgrd::length::GrowthFit>,
    error: Option<String>,
    certificate: Option<GrowthBound>,
}

fn growth(config: &RunConfig) -> Result<bool, CliError> {
    let ring = config.ring()?;
    let spec = config.length_spec(ring.as_ref())?;
    let profile = growth_profile(ring.as_ref(), &spec)?;
    let fit = classify_growth(&profile, config.growth.theta);
    let certificate = match &fit {
        Ok(f) => match f.class {
            GrowthClass::Polynomial { degree } => Some(GrowthBound::fit(&profile, degree)),
            _ => None,
        },
        Err(_) => None,
    };
    let certified = certificate.as_ref().map(|c| c.holds(&profile));

    let records: Vec<Vec<String>> = profile
        .buckets
        .iter()
        .map(|b| {
            let bound = certificate.as_ref().map_or(String::new(), |c| {
                let base = num_rational::BigRational::from_integer((2 + b.n).into());
                (&c.c_squared * base.pow(c.degree as i32)).to_string()
            });
            vec![b.n.to_string(), b.count.to_string(), b.weight.to_string(), b.max_dim.to_string(), bound]
        })
        .collect();
    let dir = &config.output.dir;
    let body = csv_records(&["n", "count", "weight", "max_dim", "certified_bound"], &records)?;
    write_csv(&dir.join("growth.csv"), "growth", CSV_SCHEMA_VERSION, &body)?;

    let triple_radius = config.radius.min(config.verify.triangle_radius);
    let short = qgrd::length::LengthSpec::natural(ring.as_ref(), triple_radius)?;
    let ts = triple_set(ring.as_ref(), &short)?;
    let records: Vec<Vec<String>> =
        ts.triples.iter().map(|(k, l, n)| vec![k.to_string(), l.to_string(), n.to_string()]).collect();
    write_csv(&dir.join("triples.csv"), "triples", CSV_SCHEMA_VERSION, &csv_records(&["k", "l", "n"], &records)?)?;

    let report = GrowthReport {
        schema_version: CSV_SCHEMA_VERSION,
        family: ring.family().into(),
        parameters: ring.describe(),
        radius: spec.radius(),
        complete_through: profile.complete_through,
        classification: fit.as_ref().ok().cloned(),
        error: fit.as_ref().err().map(ToString::to_string),
        certificate: certificate.clone(),
    };
    write_json(&dir.join("growth.json"), &report)?;

    match &fit {
        Ok(f) => println!("{}: {:?}", ring.describe(), f.class),
        Err(e) => println!("{}: unclassified ({e})", ring.describe()),
    }
    if let Some(c) = &certificate {
        let c2 = c.c_squared.to_f64().unwrap_or(f64::NAN);
        println!("certificate: h_n <= {c2} (2+n)^{} holds = {}", c.degree, certified == Some(true));
    }
    Ok(fit.is_ok() && certified != Some(false))
}

fn rd_check(config: &RunConfig) -> Result<bool, CliError> {
    let seed = config.require_seed("rd-check")?;
    let ring = config.ring()?;
    let spec = config.length_spec(ring.as_ref())?;
    let verdict = diagnose(ring.as_ref(), &spec, &config.rd_check, seed);
    write_json(&config.output.dir.join("verdict.json"), &verdict)?;
    let criterion = verdict.criterion.map_or("none".to_string(), |c| format!("{c:?}"));
    println!("{}: {:?} ({criterion})", verdict.parameters, verdict.outcome);
    for r in &verdict.reasons {
        println!("  note: {r}");
    }
    Ok(matches!(verdict.outcome, Outcome::CertifiedRD | Outcome::RefutedRD | Outcome::Indeterminate))
}

fn blocks(config: &RunConfig) -> Result<bool, CliError> {
    let seed = config.require_seed("blocks")?;
    let ring = config.ring()?;
    let (family, parameters) = (ring.family().to_string(), ring.describe());
    let tol = config.tolerance_or(1e-12);
    let rows: Vec<CheckRow> = match family.as_str() {
        "free-group" => {
            let r = config.blocks.max_sphere;
            let g = ring.generators().len() as u32 / 2;
            let ball = enumerate_ball(g, r, config.budget.max_labels)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            for n in 0..=r {
                for k in 0..=r {
                    for l in 0..=r {
                        let rep = haagerup_check(&ball, n, k, l, config.blocks.trials, &mut rng)?;
                        let t = triple_string(k, l, n);
                        rows.push(CheckRow::upper("block-norm", &family, &parameters, t, rep.max_ratio, 1.0, tol, seed));
                    }
                }
            }
            rows
        }
        "orthogonal-free" => {
            let strands = config.budget.max_strands;
            let n = ring.classical_dim(&qgrd::fusion::IrrLabel::Spin(1))?;
            let n = n.to_usize().ok_or_else(|| CliError::Unsupported(format!("N = {n}")))?;
            let cache = JwCache::build(n, strands, &config.budget.tl(strands))?;
            let search = TechAoSearch { restarts: config.blocks.restarts, ..Default::default() };
            let grid = tech_ao_grid(&cache, strands, &search, seed, None)?;
            let tol = config.tolerance_or(1e-6);
            grid.records
                .iter()
                .map(|r| {
                    let t = triple_string(r.k, r.l, r.n);
                    CheckRow::upper("tech-ao", &family, &parameters, t, r.ratio, 1.0, tol, r.seed)
                })
                .collect()
        }
        _ => return Err(CliError::Unsupported(format!("blocks are not available for {family}"))),
    };
    write_csv(&config.output.dir.join("blocks.csv"), "blocks", CSV_SCHEMA_VERSION, &csv_string(&rows)?)?;
    let failed = rows.iter().filter(|r| !r.ok).count();
    println!("{parameters}: {} blocks, {failed} above the bound", rows.len());
    Ok(failed == 0)
}

fn verify(config: &RunConfig) -> Result<bool, CliError> {
    let seed = config.require_seed("verify")?;
    let ring = config.ring()?;
    let registry = default_checks();
    let selected = registry.select(ring.family(), &config.verify.checks).map_err(CliError::Config)?;
    let ctx = CheckContext::new(ring.as_ref(), config, seed);
    let rows = registry.run_all(&selected, &ctx, config.threads);
    write_csv(&config.output.dir.join("verify.csv"), "verify", CSV_SCHEMA_VERSION, &csv_string(&rows)?)?;
    println!("{:<4} {:<22} {:<16} {:>14} {:>14}", "", "check", "case", "measured", "bound");
    for r in &rows {
        let mark = if r.ok { "PASS" } else { "FAIL" };
        println!("{mark:<4} {:<22} {:<16} {:>14.6e} {:>14.6e}", r.check, r.triple, r.measured, r.bound);
    }
    let failed = rows.iter().filter(|r| !r.ok).count();
    println!("{}: {} checks, {failed} failed", ring.describe(), rows.len());
    Ok(failed == 0 && !rows.is_empty())
}
