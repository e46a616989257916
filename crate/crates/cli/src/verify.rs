use std::path::PathBuf;

use anyhow::{bail, Result};
use gevregret_core::gev::ModelKind;
use gevregret_core::verify::{self, Suite, SuiteReport, VerifyOptions};
use gevregret_core::Exec;
use serde::{Deserialize, Serialize};

use crate::config::{self, AssertionFailed};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// JSON config document; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suites to run (gradients, montecarlo, hessian, bregman, reductions,
    /// fenchel) or `all`.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Model families to sweep, or `all`.
    #[arg(long, value_delimiter = ',')]
    models: Vec<String>,
    /// Monte Carlo samples per point.
    #[arg(long)]
    samples: Option<usize>,
    /// Random points per model for the deterministic sweeps.
    #[arg(long)]
    points: Option<usize>,
    /// Random points for the Monte Carlo oracle.
    #[arg(long)]
    mc_points: Option<usize>,
    /// RNG seed; GEVREGRET_SEED takes precedence.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all_names")]
    pub suites: Vec<String>,
    #[serde(default = "all_names")]
    pub models: Vec<String>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub mc_points: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_report")]
    pub out: PathBuf,
}

fn all_names() -> Vec<String> {
    vec!["all".into()]
}

fn default_report() -> PathBuf {
    config::default_out_dir().join("verify.json")
}

fn parse_list<T: Copy>(names: &[String], all: &[T], parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(all.to_vec());
    }
    names.iter().map(|n| parse(n)).collect()
}

fn resolve(a: &Args) -> Result<VerifyConfig> {
    let mut cfg: VerifyConfig = match &a.config {
        Some(p) => config::load_json(p)?,
        None => VerifyConfig {
            suites: all_names(),
            models: all_names(),
            samples: None,
            points: None,
            mc_points: None,
            seed: 0,
            out: default_report(),
        },
    };
    if !a.suites.is_empty() {
        cfg.suites = a.suites.clone();
    }
    if !a.models.is_empty() {
        cfg.models = a.models.clone();
    }
    cfg.samples = a.samples.or(cfg.samples);
    cfg.points = a.points.or(cfg.points);
    cfg.mc_points = a.mc_points.or(cfg.mc_points);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    if let Some(s) = config::env_seed()? {
        cfg.seed = s;
    }
    if let Some(o) = &a.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Report<'a> {
    seed: u64,
    passed: bool,
    suites: &'a [SuiteReport],
}

pub fn run(a: Args) -> Result<()> {
    let cfg = resolve(&a)?;
    let suites = parse_list(&cfg.suites, &Suite::ALL, |s| Ok(s.parse()?))?;
    let kinds = parse_list(&cfg.models, &ModelKind::ALL, |s| Ok(s.parse()?))?;
    let mut opts = VerifyOptions { kinds, seed: cfg.seed, exec: Exec::default(), ..VerifyOptions::default() };
    if let Some(s) = cfg.samples {
        if s < 2 {
            bail!("samples must be at least 2");
        }
        opts.samples = s;
    }
    if let Some(p) = cfg.points {
        opts.points = p;
    }
    if let Some(p) = cfg.mc_points {
        opts.mc_points = p;
    }
    let reports: Vec<SuiteReport> = suites.iter().map(|s| verify::run_suite(*s, &opts)).collect();
    for r in &reports {
        for c in &r.checks {
            let tag = if c.informational {
                "INFO"
            } else if c.passed {
                "PASS"
            } else {
                "FAIL"
            };
            println!("{tag} {:<11} {:<56} {:>12.4e} <= {:.1e}", r.suite, c.name, c.measured, c.tolerance);
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    if let Some(dir) = cfg.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        config::create_dir(dir)?;
    }
    config::write_json(&cfg.out, &Report { seed: cfg.seed, passed, suites: &reports })?;
    if !passed {
        let failed: Vec<String> = reports.iter().flat_map(|r| r.failures().map(move |c| format!("{}/{}", r.suite, c.name))).collect();
        return Err(AssertionFailed(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))).into());
    }
    Ok(())
}
