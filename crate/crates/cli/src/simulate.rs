use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use gevregret_core::env::{self, BoundReport, EnvSpec, RegretTrace};
use gevregret_core::gev::GevModel;
use gevregret_core::learners::{oftrl_regret_bound, LearnerConfig};
use gevregret_core::Exec;
use serde::{Deserialize, Serialize};

use crate::config::{self, AssertionFailed, LearnerArgs, ModelArgs};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// JSON config document; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    /// Environment: adversarial, iid, drift, piecewise, constant, replay.
    #[arg(long = "env")]
    env: Option<String>,
    /// Payoff bound; every payoff coordinate must satisfy |u| <= u_max.
    #[arg(long)]
    u_max: Option<f64>,
    /// Drift amplitude (drift).
    #[arg(long)]
    amplitude: Option<f64>,
    /// Drift angular frequency (drift).
    #[arg(long)]
    omega: Option<f64>,
    /// Rounds per constant segment (piecewise).
    #[arg(long)]
    segment_len: Option<usize>,
    /// Payoff vector (constant).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    payoff: Vec<f64>,
    /// Payoff file (replay).
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Horizon (rounds).
    #[arg(long = "T")]
    t: Option<usize>,
    /// RNG seed; GEVREGRET_SEED takes precedence.
    #[arg(long)]
    seed: Option<u64>,
    /// Several seeds, run concurrently with one output file set each.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub learner: LearnerConfig,
    pub env: EnvSpec,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    /// Not written back out, so saved configs do not depend on where they
    /// were saved.
    #[serde(default = "config::default_out_dir", skip_serializing)]
    pub out_dir: PathBuf,
}

impl SimulateConfig {
    pub fn seed_list(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.seed]
        } else {
            self.seeds.clone()
        }
    }
}

fn env_from_flags(kind: &str, a: &Args, u_max: f64) -> Result<EnvSpec> {
    let need = |v: Option<f64>, flag: &str| v.with_context(|| format!("--env {kind} needs --{flag}"));
    Ok(match kind {
        "adversarial" | "adaptive_adversary" => EnvSpec::AdaptiveAdversary { u_max },
        "iid" | "iid_stochastic" => EnvSpec::IidStochastic { u_max },
        "drift" | "drift_sinusoid" => {
            EnvSpec::DriftSinusoid { u_max, amplitude: need(a.amplitude, "amplitude")?, omega: need(a.omega, "omega")? }
        }
        "piecewise" | "piecewise_constant" => {
            EnvSpec::PiecewiseConstant { u_max, segment_len: a.segment_len.context("--env piecewise needs --segment-len")? }
        }
        "constant" => {
            if a.payoff.is_empty() {
                bail!("--env constant needs --payoff");
            }
            EnvSpec::Constant { u_max, payoff: a.payoff.clone() }
        }
        "replay" | "replay_file" => EnvSpec::ReplayFile { u_max, path: a.replay.clone().context("--env replay needs --replay")? },
        other => bail!("unknown environment `{other}` (adversarial, iid, drift, piecewise, constant, replay)"),
    })
}

/// The config document after layering flags and the seed override.
pub fn resolve(a: &Args) -> Result<SimulateConfig> {
    let base: Option<SimulateConfig> = a.config.as_deref().map(config::load_json).transpose()?;
    let model = a.model.resolve(None)?;
    let learner = config::merge_learner(base.as_ref().map(|c| c.learner.clone()), model, &a.learner)
        .context("no model given: pass --model/--n, --model-file or --config")?;
    let mut env = match (&a.env, &base) {
        (Some(kind), b) => {
            let u = a.u_max.or(b.as_ref().map(|c| c.env.u_max())).unwrap_or(1.0);
            env_from_flags(kind, a, u)?
        }
        (None, Some(b)) => b.env.clone(),
        (None, None) => EnvSpec::AdaptiveAdversary { u_max: 1.0 },
    };
    if let Some(u) = a.u_max {
        env.set_u_max(u);
    }
    let t = config::check_horizon(a.t.or(base.as_ref().map(|c| c.t)))?;
    let (mut seed, mut seeds) = base.as_ref().map_or((0, Vec::new()), |c| (c.seed, c.seeds.clone()));
    if let Some(s) = a.seed {
        seed = s;
        seeds.clear();
    }
    if !a.seeds.is_empty() {
        seeds = a.seeds.clone();
    }
    if let Some(s) = config::env_seed()? {
        seed = s;
        seeds.clear();
    }
    let out_dir = a.out.clone().or(base.map(|c| c.out_dir)).unwrap_or_else(config::default_out_dir);
    let mut learner = learner;
    if learner.recency_s.is_some() && learner.drift_bound.is_none() {
        learner.drift_bound = env.drift_bound().filter(|b| *b > 0.0);
    }
    Ok(SimulateConfig { learner, env, t, seed, seeds, out_dir })
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimisticReport {
    pub recency_s: usize,
    pub drift_bound: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub environment: &'static str,
    pub learner: &'static str,
    #[serde(flatten)]
    pub bounds: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimistic: Option<OptimisticReport>,
    pub observed_max_drift: f64,
    /// Whether realized regret is within the bound that applies to this
    /// learner.
    pub bound_holds: bool,
}

pub fn report(cfg: &SimulateConfig, seed: u64, trace: &RegretTrace) -> Result<RunReport> {
    let model = GevModel::from_spec(cfg.learner.model.clone())?;
    let u_max = cfg.env.u_max();
    let eta = cfg.learner.resolve_eta(&model, cfg.t, u_max)?;
    let bounds = env::bound_report(&model, eta, u_max, cfg.learner.bound_variant, trace)?;
    let optimistic = match cfg.learner.recency_s {
        None => None,
        Some(s) => {
            let b = cfg.learner.drift_bound.unwrap_or(2.0 * u_max);
            let bound = oftrl_regret_bound(&model, eta, cfg.t, s, b, cfg.learner.bound_variant)?;
            Some(OptimisticReport { recency_s: s, drift_bound: b, bound, ratio: trace.regret() / bound })
        }
    };
    let ratio = optimistic.as_ref().map_or(bounds.ratio, |o| o.ratio);
    Ok(RunReport {
        seed,
        environment: cfg.env.name(),
        learner: if optimistic.is_some() { "oftrl" } else { "ssa" },
        bounds,
        optimistic,
        observed_max_drift: trace.max_drift(),
        bound_holds: ratio <= 1.0,
    })
}

#[derive(Serialize)]
struct Summary<'a> {
    runs: Vec<SummaryRow<'a>>,
    max_ratio: f64,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    seed: u64,
    realized_regret: f64,
    ratio: f64,
    trace: &'a str,
    report: &'a str,
}

pub fn run(a: Args) -> Result<()> {
    let cfg = resolve(&a)?;
    let seeds = cfg.seed_list();
    let traces = env::run_seeds(&cfg.learner, &cfg.env, cfg.t, &seeds, Exec::default())?;
    config::create_dir(&cfg.out_dir)?;
    config::write_json(&cfg.out_dir.join("config.json"), &cfg)?;
    let single = seeds.len() == 1;
    let names: Vec<(String, String)> = seeds
        .iter()
        .map(|s| {
            if single {
                ("trace.csv".into(), "report.json".into())
            } else {
                (format!("trace_seed{s}.csv"), format!("report_seed{s}.json"))
            }
        })
        .collect();
    let mut reports = Vec::with_capacity(seeds.len());
    for ((seed, trace), (trace_name, report_name)) in seeds.iter().zip(&traces).zip(&names) {
        config::write_with(&cfg.out_dir.join(trace_name), |w| Ok(trace.write_csv(w)?))?;
        let r = report(&cfg, *seed, trace)?;
        config::write_json(&cfg.out_dir.join(report_name), &r)?;
        let ratio = r.optimistic.as_ref().map_or(r.bounds.ratio, |o| o.ratio);
        println!(
            "seed {seed}: {} {} N={} T={} eta={:.6} regret={:.6} ratio={:.6}",
            r.learner, r.bounds.model, r.bounds.n_alternatives, cfg.t, r.bounds.eta, r.bounds.realized_regret, ratio
        );
        reports.push(r);
    }
    if !single {
        let runs = reports
            .iter()
            .zip(&names)
            .map(|(r, (tn, rn))| SummaryRow {
                seed: r.seed,
                realized_regret: r.bounds.realized_regret,
                ratio: r.optimistic.as_ref().map_or(r.bounds.ratio, |o| o.ratio),
                trace: tn,
                report: rn,
            })
            .collect::<Vec<_>>();
        let max_ratio = runs.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        config::write_json(&cfg.out_dir.join("summary.json"), &Summary { runs, max_ratio })?;
    }
    let broken: Vec<u64> = reports.iter().filter(|r| !r.bound_holds).map(|r| r.seed).collect();
    if !broken.is_empty() {
        return Err(AssertionFailed(format!("realized regret exceeds the bound on seeds {broken:?}")).into());
    }
    Ok(())
}
