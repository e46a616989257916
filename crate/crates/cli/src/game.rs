use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use gevregret_core::game::{self, CceReport, GameSpec};
use gevregret_core::gev::{GevModel, ModelKind};
use gevregret_core::learners::{regret_bound, AnyLearner, BoundVariant, EtaChoice, Learner, LearnerConfig};
use gevregret_core::Exec;
use serde::{Deserialize, Serialize};

use crate::config::{self, AssertionFailed, LearnerArgs, ModelArgs};

/// Slack for comparing the equilibrium gap with regret computed along a
/// different summation path.
pub const GAP_TOL: f64 = 1e-9;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// JSON config document; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin game: matching_pennies, rps, random.
    #[arg(long, conflicts_with = "game_file")]
    builtin: Option<String>,
    /// Game document `{players, strategies, payoffs}`.
    #[arg(long)]
    game_file: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    /// Horizon (rounds).
    #[arg(long = "T")]
    t: Option<usize>,
    /// Extra horizons for the decay table.
    #[arg(long, value_delimiter = ',')]
    horizons: Vec<usize>,
    /// RNG seed; GEVREGRET_SEED takes precedence.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameSpec>,
    /// Learner shared by every player.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerConfig>,
    /// One learner per player; takes precedence over `learner`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub learners: Vec<LearnerConfig>,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub horizons: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Not written back out, so saved configs do not depend on where they
    /// were saved.
    #[serde(default = "config::default_out_dir", skip_serializing)]
    pub out_dir: PathBuf,
}

impl GameConfig {
    pub fn game(&self) -> Result<GameSpec> {
        match (&self.builtin, &self.game) {
            (Some(name), None) => Ok(GameSpec::builtin(name, self.seed)?),
            (None, Some(g)) => Ok(g.clone()),
            (Some(_), Some(_)) => bail!("give either `builtin` or `game`, not both"),
            (None, None) => bail!("no game: pass --builtin, --game-file or set `builtin`/`game` in the config"),
        }
    }

    /// Per-player learner configs; MNL with tuned `η` unless configured.
    pub fn player_learners(&self, g: &GameSpec) -> Result<Vec<LearnerConfig>> {
        if !self.learners.is_empty() {
            if self.learners.len() != g.players() {
                bail!("{} learners configured for a {}-player game", self.learners.len(), g.players());
            }
            return Ok(self.learners.clone());
        }
        let shared = match &self.learner {
            Some(l) => l.clone(),
            None => LearnerConfig::ssa(&GevModel::mnl(g.strategies())?, EtaChoice::Optimal, BoundVariant::default()),
        };
        Ok(vec![shared; g.players()])
    }

    /// Sorted distinct horizons, always including `T`.
    pub fn horizon_list(&self) -> Vec<usize> {
        let mut h = self.horizons.clone();
        h.push(self.t);
        h.sort_unstable();
        h.dedup();
        h
    }
}

pub fn resolve(a: &Args) -> Result<GameConfig> {
    let base: Option<GameConfig> = a.config.as_deref().map(config::load_json).transpose()?;
    let (mut builtin, mut game) = base.as_ref().map_or((None, None), |c| (c.builtin.clone(), c.game.clone()));
    if let Some(b) = &a.builtin {
        builtin = Some(b.clone());
        game = None;
    }
    if let Some(path) = &a.game_file {
        game = Some(config::load_json(path)?);
        builtin = None;
    }
    let mut seed = a.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(0);
    if let Some(s) = config::env_seed()? {
        seed = s;
    }
    let t = config::check_horizon(a.t.or(base.as_ref().map(|c| c.t)))?;
    let horizons = if a.horizons.is_empty() { base.as_ref().map_or(Vec::new(), |c| c.horizons.clone()) } else { a.horizons.clone() };
    if horizons.contains(&0) {
        bail!("horizons must be at least 1");
    }
    let out_dir = a.out.clone().or(base.as_ref().map(|c| c.out_dir.clone())).unwrap_or_else(config::default_out_dir);
    let mut cfg = GameConfig {
        builtin,
        game,
        learner: base.as_ref().and_then(|c| c.learner.clone()),
        learners: base.map_or(Vec::new(), |c| c.learners),
        t,
        horizons,
        seed,
        out_dir,
    };
    let g = cfg.game()?;
    let model = a.model.resolve(Some(g.strategies()))?;
    if model.is_some() {
        cfg.learners.clear();
    }
    let flags_given = model.is_some()
        || a.learner.eta.is_some()
        || a.learner.bound_variant.is_some()
        || a.learner.recency_s.is_some()
        || a.learner.drift_bound.is_some();
    if flags_given {
        if cfg.learners.is_empty() {
            let base_learner = cfg.learner.take().or_else(|| {
                GevModel::mnl(g.strategies()).ok().map(|m| LearnerConfig::ssa(&m, EtaChoice::Optimal, BoundVariant::default()))
            });
            cfg.learner = config::merge_learner(base_learner, model, &a.learner);
        } else {
            cfg.learners.iter_mut().for_each(|l| a.learner.apply(l));
        }
    }
    Ok(cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct PlayerReport {
    pub player: usize,
    pub model: ModelKind,
    pub learner: &'static str,
    pub eta: f64,
    pub regret: f64,
    /// `η φ(0) + (L / 2η) T`, valid for any fixed `η`; absent for
    /// optimistic learners.
    pub bound_thm1: Option<f64>,
    pub average_marginal: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HorizonReport {
    #[serde(rename = "T")]
    pub t: usize,
    pub delta_emp: f64,
    /// `max_p R_p^T / T`.
    pub max_regret_over_t: f64,
    /// `max_p R_p^T`, the gap as the unnormalized statement reads.
    pub max_regret: f64,
    pub players: Vec<PlayerReport>,
    pub cce: CceReport,
    pub gap_within_regret: bool,
    pub regret_within_bounds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameReport {
    pub players: usize,
    pub strategies: usize,
    pub seed: u64,
    #[serde(rename = "T")]
    pub t: usize,
    pub delta_emp: f64,
    pub max_regret_over_t: f64,
    pub max_regret: f64,
    pub decay: Vec<DecayRow>,
    pub horizons: Vec<HorizonReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    #[serde(rename = "T")]
    pub t: usize,
    pub delta_emp: f64,
    pub max_regret_over_t: f64,
}

fn build_players(cfgs: &[LearnerConfig], t: usize) -> Result<Vec<AnyLearner>> {
    cfgs.iter().map(|c| Ok(c.build(t, 1.0)?)).collect()
}

/// Plays `g` for `t` rounds; returns the per-horizon report and the run.
pub fn play(g: &GameSpec, cfgs: &[LearnerConfig], t: usize) -> Result<(HorizonReport, game::GameRun)> {
    let mut learners = build_players(cfgs, t)?;
    let run = game::run_repeated_game(g, &mut learners, t)?;
    let cce = game::cce_gap(g, &run.history())?;
    let mut players = Vec::with_capacity(g.players());
    for (p, (l, tr)) in learners.iter().zip(&run.traces).enumerate() {
        let bound_thm1 = match l {
            AnyLearner::Ssa(s) => Some(regret_bound(s.model(), s.eta(), t, 1.0, BoundVariant::Thm1)?),
            AnyLearner::Oftrl(_) => None,
        };
        players.push(PlayerReport {
            player: p,
            model: l.model().kind(),
            learner: if bound_thm1.is_some() { "ssa" } else { "oftrl" },
            eta: l.eta().get(),
            regret: tr.regret(),
            bound_thm1,
            average_marginal: run.average_marginal(p),
        });
    }
    let max_regret = run.max_regret();
    let max_regret_over_t = max_regret / t as f64;
    let report = HorizonReport {
        t,
        delta_emp: cce.delta_emp,
        max_regret_over_t,
        max_regret,
        gap_within_regret: cce.delta_emp <= max_regret_over_t.max(0.0) + GAP_TOL,
        regret_within_bounds: players.iter().all(|p| p.bound_thm1.is_none_or(|b| p.regret <= b)),
        players,
        cce,
    };
    Ok((report, run))
}

pub fn run(a: Args) -> Result<()> {
    let cfg = resolve(&a)?;
    let g = cfg.game()?;
    let cfgs = cfg.player_learners(&g)?;
    let horizons = cfg.horizon_list();
    let results = Exec::default()
        .map_slice(&horizons, |&h| play(&g, &cfgs, h))
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .context("running the repeated game")?;

    config::create_dir(&cfg.out_dir)?;
    config::write_json(&cfg.out_dir.join("config.json"), &cfg)?;
    let (main_report, main_run) = results.iter().find(|(r, _)| r.t == cfg.t).expect("T is among the horizons");
    for (p, tr) in main_run.traces.iter().enumerate() {
        config::write_with(&cfg.out_dir.join(format!("trace_player{}.csv", p + 1)), |w| Ok(tr.write_csv(w)?))?;
    }
    let decay: Vec<DecayRow> =
        results.iter().map(|(r, _)| DecayRow { t: r.t, delta_emp: r.delta_emp, max_regret_over_t: r.max_regret_over_t }).collect();
    let report = GameReport {
        players: g.players(),
        strategies: g.strategies(),
        seed: cfg.seed,
        t: cfg.t,
        delta_emp: main_report.delta_emp,
        max_regret_over_t: main_report.max_regret_over_t,
        max_regret: main_report.max_regret,
        decay,
        horizons: results.iter().map(|(r, _)| r.clone()).collect(),
    };
    config::write_json(&cfg.out_dir.join("cce_report.json"), &report)?;
    println!("{:>10}  {:>24}  {:>24}", "T", "delta_emp", "max_p R_p/T");
    for row in &report.decay {
        println!("{:>10}  {:>24.16e}  {:>24.16e}", row.t, row.delta_emp, row.max_regret_over_t);
    }

    let mut problems = Vec::new();
    for (r, _) in &results {
        if !r.gap_within_regret {
            problems.push(format!("T={}: delta_emp {} exceeds max_p R_p/T {}", r.t, r.delta_emp, r.max_regret_over_t));
        }
        if !r.regret_within_bounds {
            problems.push(format!("T={}: a player's regret exceeds its bound", r.t));
        }
    }
    if !problems.is_empty() {
        return Err(AssertionFailed(problems.join("; ")).into());
    }
    Ok(())
}
