//! Config documents, shared flags, seeding and output helpers.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args as ClapArgs;
use gevregret_core::gev::{Eta, GevModel, ModelKind, ModelSpec};
use gevregret_core::learners::{BoundVariant, EtaChoice, LearnerConfig};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub const SEED_ENV: &str = "GEVREGRET_SEED";

/// A run completed but one of its checked claims did not hold.
#[derive(Debug)]
pub struct AssertionFailed(pub String);

impl fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AssertionFailed {}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

/// The seed from the environment, if set; it beats both flags and config.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map(Some).with_context(|| format!("{SEED_ENV} must be an unsigned integer, got `{s}`")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{SEED_ENV}: {e}"),
    }
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> Result<()>,
{
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().with_context(|| format!("writing {}", path.display()))
}

pub fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn parse_kind(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|e| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<BoundVariant, String> {
    s.parse::<BoundVariant>().map_err(|e| e.to_string())
}

fn parse_eta(s: &str) -> std::result::Result<EtaChoice, String> {
    if s == "optimal" {
        return Ok(EtaChoice::Optimal);
    }
    let v: f64 = s.parse().map_err(|_| format!("expected a positive number or `optimal`, got `{s}`"))?;
    Eta::new(v).map(EtaChoice::Fixed).map_err(|e| e.to_string())
}

/// Model selection: a named layout (`--model`, `--n`, `--lambda`) or a
/// model document (`--model-file`).
#[derive(ClapArgs, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Model family: mnl, nl, cnl, pcl, ogev, pdgev, gnl.
    #[arg(long, value_parser = parse_kind, conflicts_with = "model_file")]
    pub model: Option<ModelKind>,
    /// Number of alternatives for `--model`.
    #[arg(long, requires = "model")]
    pub n: Option<usize>,
    /// Nest scale(s) for `--model`; one value is broadcast to every nest.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "model")]
    pub lambda: Vec<f64>,
    /// JSON model document `{kind, n_alternatives, nests: [{lambda, alloc}]}`.
    #[arg(long)]
    pub model_file: Option<PathBuf>,
}

impl ModelArgs {
    /// The model these flags describe, if any; `default_n` fills a missing
    /// `--n`.
    pub fn resolve(&self, default_n: Option<usize>) -> Result<Option<ModelSpec>> {
        if let Some(path) = &self.model_file {
            let spec: ModelSpec = load_json(path)?;
            GevModel::from_spec(spec.clone()).with_context(|| format!("model in {}", path.display()))?;
            return Ok(Some(spec));
        }
        let Some(kind) = self.model else { return Ok(None) };
        let Some(n) = self.n.or(default_n) else { bail!("--model needs --n") };
        Ok(Some(crate::presets::build(kind, n, &self.lambda)?.to_spec()))
    }
}

/// Learner flags layered over a config's learner section.
#[derive(ClapArgs, Debug, Clone, Default)]
pub struct LearnerArgs {
    /// Learning rate: a positive number or `optimal`.
    #[arg(long, value_parser = parse_eta)]
    pub eta: Option<EtaChoice>,
    /// Constant used for tuning and the reported ratio: thm1, thm2, log_n.
    #[arg(long, value_parser = parse_variant)]
    pub bound_variant: Option<BoundVariant>,
    /// Recency window S; switches to the optimistic learner.
    #[arg(long = "recency-S", alias = "recency-s")]
    pub recency_s: Option<usize>,
    /// Drift bound B used to tune the optimistic learner.
    #[arg(long)]
    pub drift_bound: Option<f64>,
}

impl LearnerArgs {
    pub fn apply(&self, l: &mut LearnerConfig) {
        if let Some(e) = self.eta {
            l.eta = e;
        }
        if let Some(v) = self.bound_variant {
            l.bound_variant = v;
        }
        if self.recency_s.is_some() {
            l.recency_s = self.recency_s;
        }
        if self.drift_bound.is_some() {
            l.drift_bound = self.drift_bound;
        }
    }
}

/// Layers model and learner flags over an optional base learner.
pub fn merge_learner(base: Option<LearnerConfig>, model: Option<ModelSpec>, flags: &LearnerArgs) -> Option<LearnerConfig> {
    let mut l = match (base, model) {
        (Some(mut l), Some(m)) => {
            l.model = m;
            l
        }
        (Some(l), None) => l,
        (None, Some(m)) => {
            LearnerConfig { model: m, eta: EtaChoice::Optimal, bound_variant: BoundVariant::default(), recency_s: None, drift_bound: None }
        }
        (None, None) => return None,
    };
    flags.apply(&mut l);
    Some(l)
}

pub fn check_horizon(t: Option<usize>) -> Result<usize> {
    match t {
        None => bail!("missing horizon: pass --T or set \"T\" in the config"),
        Some(0) => bail!("horizon T must be at least 1"),
        Some(t) => Ok(t),
    }
}
