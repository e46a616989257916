//! Payoff environments, the online decision loop and regret accounting.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gev::{Eta, GevModel, ModelKind};
use crate::learners::{regret_bound, BoundVariant, Learner, LearnerConfig};
use crate::numeric::{max_value, sup_norm, CompensatedSum};
use crate::seed::{self, StreamRng};

fn default_u_max() -> f64 {
    1.0
}

/// Serialized environment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvSpec {
    /// Independent Bernoulli payoffs: arm `j` pays `u_max` with probability
    /// `p_j`, the `p_j` drawn uniformly once per run.
    IidStochastic {
        #[serde(default = "default_u_max")]
        u_max: f64,
    },
    /// Pays `u_max` to the arm with the least probability mass.
    #[serde(alias = "adversarial")]
    AdaptiveAdversary {
        #[serde(default = "default_u_max")]
        u_max: f64,
    },
    /// `u_jt = u_max b_j + a sin(ω t + φ_j)` with `b_j ~ U[0.25, 0.75]` and
    /// phases uniform; consecutive payoffs differ by at most `a ω`.
    DriftSinusoid {
        #[serde(default = "default_u_max")]
        u_max: f64,
        amplitude: f64,
        omega: f64,
    },
    /// A fresh uniform `[0, u_max]^N` vector every `segment_len` rounds.
    PiecewiseConstant {
        #[serde(default = "default_u_max")]
        u_max: f64,
        segment_len: usize,
    },
    /// The same vector every round.
    Constant {
        #[serde(default = "default_u_max")]
        u_max: f64,
        payoff: Vec<f64>,
    },
    /// Payoffs read from a file, one comma-separated vector per line.
    ReplayFile {
        #[serde(default = "default_u_max")]
        u_max: f64,
        path: PathBuf,
    },
}

impl EnvSpec {
    pub fn u_max(&self) -> f64 {
        match self {
            EnvSpec::IidStochastic { u_max }
            | EnvSpec::AdaptiveAdversary { u_max }
            | EnvSpec::DriftSinusoid { u_max, .. }
            | EnvSpec::PiecewiseConstant { u_max, .. }
            | EnvSpec::Constant { u_max, .. }
            | EnvSpec::ReplayFile { u_max, .. } => *u_max,
        }
    }

    pub fn set_u_max(&mut self, value: f64) {
        match self {
            EnvSpec::IidStochastic { u_max }
            | EnvSpec::AdaptiveAdversary { u_max }
            | EnvSpec::DriftSinusoid { u_max, .. }
            | EnvSpec::PiecewiseConstant { u_max, .. }
            | EnvSpec::Constant { u_max, .. }
            | EnvSpec::ReplayFile { u_max, .. } => *u_max = value,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnvSpec::IidStochastic { .. } => "iid_stochastic",
            EnvSpec::AdaptiveAdversary { .. } => "adaptive_adversary",
            EnvSpec::DriftSinusoid { .. } => "drift_sinusoid",
            EnvSpec::PiecewiseConstant { .. } => "piecewise_constant",
            EnvSpec::Constant { .. } => "constant",
            EnvSpec::ReplayFile { .. } => "replay_file",
        }
    }

    /// A bound on `‖u_t − u_{t−1}‖_∞` when the environment guarantees one.
    pub fn drift_bound(&self) -> Option<f64> {
        match self {
            EnvSpec::DriftSinusoid { amplitude, omega, .. } => Some(amplitude * omega),
            EnvSpec::Constant { .. } => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
enum Source {
    Bernoulli { probs: Vec<f64> },
    Adversary,
    Drift { base: Vec<f64>, phase: Vec<f64>, amplitude: f64, omega: f64 },
    Piecewise { segment_len: usize, current: Vec<f64> },
    Constant(Vec<f64>),
    Replay(Vec<Vec<f64>>),
}

/// A seeded payoff generator for `n` alternatives.
#[derive(Clone, Debug)]
pub struct Environment {
    n: usize,
    u_max: f64,
    source: Source,
    rng: StreamRng,
}

impl Environment {
    /// Builds the environment; all of its randomness comes from the
    /// `"environment"` stream of `seed`.
    pub fn new(spec: &EnvSpec, n: usize, seed: u64) -> Result<Self> {
        let u_max = spec.u_max();
        if !(u_max.is_finite() && u_max > 0.0) {
            return Err(Error::spec(format!("u_max must be positive, got {u_max}")));
        }
        if n == 0 {
            return Err(Error::spec("environment needs at least one alternative"));
        }
        let mut rng = seed::named_rng(seed, "environment");
        let source = match spec {
            EnvSpec::IidStochastic { .. } => Source::Bernoulli { probs: (0..n).map(|_| rng.random::<f64>()).collect() },
            EnvSpec::AdaptiveAdversary { .. } => Source::Adversary,
            EnvSpec::DriftSinusoid { amplitude, omega, .. } => {
                if !(*amplitude >= 0.0 && *amplitude <= 0.25 * u_max) {
                    return Err(Error::spec(format!("drift amplitude must lie in [0, u_max/4], got {amplitude}")));
                }
                if !omega.is_finite() {
                    return Err(Error::spec("drift omega must be finite"));
                }
                let base = (0..n).map(|_| u_max * rng.random_range(0.25..=0.75)).collect();
                let phase = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
                Source::Drift { base, phase, amplitude: *amplitude, omega: *omega }
            }
            EnvSpec::PiecewiseConstant { segment_len, .. } => {
                if *segment_len == 0 {
                    return Err(Error::spec("segment_len must be at least 1"));
                }
                Source::Piecewise { segment_len: *segment_len, current: Vec::new() }
            }
            EnvSpec::Constant { payoff, .. } => {
                if payoff.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: payoff.len() });
                }
                Source::Constant(payoff.clone())
            }
            EnvSpec::ReplayFile { path, .. } => {
                let rows = read_replay(path)?;
                if let Some(row) = rows.first() {
                    if row.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: row.len() });
                    }
                }
                Source::Replay(rows)
            }
        };
        Ok(Environment { n, u_max, source, rng })
    }

    /// Replays in-memory payoff rows.
    pub fn replay(rows: Vec<Vec<f64>>, u_max: f64) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::spec("replay rows must be non-empty and of equal length"));
        }
        Ok(Environment { n, u_max, source: Source::Replay(rows), rng: seed::rng(0) })
    }

    pub fn n_alternatives(&self) -> usize {
        self.n
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Rounds available, if the environment is finite.
    pub fn horizon(&self) -> Option<usize> {
        match &self.source {
            Source::Replay(rows) => Some(rows.len()),
            _ => None,
        }
    }

    /// Payoff for round `t` (1-based), given only the distribution `x_t`
    /// already committed for that round.
    pub fn payoff(&mut self, t: usize, x_t: &[f64]) -> Result<Vec<f64>> {
        let u_max = self.u_max;
        let u = match &mut self.source {
            Source::Bernoulli { probs } => probs.iter().map(|p| if self.rng.random::<f64>() < *p { u_max } else { 0.0 }).collect(),
            Source::Adversary => adaptive_adversary_step(x_t, u_max),
            Source::Drift { base, phase, amplitude, omega } => {
                base.iter().zip(phase.iter()).map(|(b, ph)| b + *amplitude * (*omega * t as f64 + ph).sin()).collect()
            }
            Source::Piecewise { segment_len, current } => {
                if (t - 1).is_multiple_of(*segment_len) || current.is_empty() {
                    *current = (0..self.n).map(|_| u_max * self.rng.random::<f64>()).collect();
                }
                current.clone()
            }
            Source::Constant(u) => u.clone(),
            Source::Replay(rows) => rows
                .get(t - 1)
                .cloned()
                .ok_or_else(|| Error::domain(format!("replay has only {} rounds, asked for round {t}", rows.len())))?,
        };
        let norm = sup_norm(&u);
        if norm.is_nan() || norm > u_max {
            return Err(Error::BoundViolation { norm, u_max });
        }
        Ok(u)
    }
}

/// Pays `u_max` to the coordinate with the least mass (lowest index on ties).
pub fn adaptive_adversary_step(x: &[f64], u_max: f64) -> Vec<f64> {
    let mut target = 0;
    for (j, v) in x.iter().enumerate() {
        if *v < x[target] {
            target = j;
        }
    }
    let mut u = vec![0.0; x.len()];
    u[target] = u_max;
    u
}

/// Per-round record of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretTrace {
    n: usize,
    /// Row-major T×N distributions committed each round.
    xs: Vec<f64>,
    /// Row-major T×N payoff vectors.
    us: Vec<f64>,
    payoffs: Vec<f64>,
    regrets: Vec<f64>,
    theta: Vec<f64>,
    realized: f64,
}

impl RegretTrace {
    fn new(n: usize, t: usize) -> Self {
        RegretTrace {
            n,
            xs: Vec::with_capacity(n * t),
            us: Vec::with_capacity(n * t),
            payoffs: Vec::with_capacity(t),
            regrets: Vec::with_capacity(t),
            theta: vec![0.0; n],
            realized: 0.0,
        }
    }

    pub fn n_alternatives(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.payoffs.len()
    }

    pub fn x(&self, t: usize) -> &[f64] {
        &self.xs[(t - 1) * self.n..t * self.n]
    }

    pub fn u(&self, t: usize) -> &[f64] {
        &self.us[(t - 1) * self.n..t * self.n]
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// Running regret `R^t` for `t = 1..=T`.
    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }

    /// Final cumulative payoff vector `θ_T`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn realized_payoff(&self) -> f64 {
        self.realized
    }

    /// `R^T = max_j θ_jT − Σ_t ⟨u_t, x_t⟩`.
    pub fn regret(&self) -> f64 {
        self.regrets.last().copied().unwrap_or(0.0)
    }

    pub fn avg_regret(&self) -> f64 {
        self.regret() / self.rounds().max(1) as f64
    }

    /// Regret recomputed from the stored `x_t` and `u_t` alone.
    pub fn recompute_regret(&self) -> f64 {
        let mut theta = vec![0.0; self.n];
        let mut realized = CompensatedSum::new();
        for t in 1..=self.rounds() {
            let (x, u) = (self.x(t), self.u(t));
            realized.add(x.iter().zip(u).map(|(a, b)| a * b).sum());
            for (th, v) in theta.iter_mut().zip(u) {
                *th += v;
            }
        }
        max_value(&theta) - realized.value()
    }

    /// Largest `‖u_t − u_{t−1}‖_∞` over the run.
    pub fn max_drift(&self) -> f64 {
        (2..=self.rounds()).map(|t| self.u(t).iter().zip(self.u(t - 1)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(0.0, f64::max)
    }

    /// CSV with header `t,x_1..x_N,u_1..u_N,payoff,regret`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.n).map(|j| format!("x_{j}")));
        header.extend((1..=self.n).map(|j| format!("u_{j}")));
        header.push("payoff".into());
        header.push("regret".into());
        writeln!(w, "{}", header.join(","))?;
        for t in 1..=self.rounds() {
            write!(w, "{t}")?;
            for v in self.x(t).iter().chain(self.u(t)) {
                write!(w, ",{}", fmt_num(*v))?;
            }
            writeln!(w, ",{},{}", fmt_num(self.payoffs[t - 1]), fmt_num(self.regrets[t - 1]))?;
        }
        Ok(())
    }
}

/// Appends rounds to a trace, keeping the realized payoff compensated.
pub(crate) struct TraceBuilder {
    trace: RegretTrace,
    realized: CompensatedSum,
}

impl TraceBuilder {
    pub(crate) fn new(n: usize, t: usize) -> Self {
        TraceBuilder { trace: RegretTrace::new(n, t), realized: CompensatedSum::new() }
    }

    pub(crate) fn push(&mut self, x: &[f64], u: &[f64], payoff: f64) {
        let tr = &mut self.trace;
        tr.xs.extend_from_slice(x);
        tr.us.extend_from_slice(u);
        tr.payoffs.push(payoff);
        self.realized.add(payoff);
        for (th, v) in tr.theta.iter_mut().zip(u) {
            *th += v;
        }
        tr.realized = self.realized.value();
        tr.regrets.push(max_value(&tr.theta) - tr.realized);
    }

    pub(crate) fn finish(self) -> RegretTrace {
        self.trace
    }
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Drives `learner` through `t` rounds of `env`. The environment sees `x_t`
/// before emitting `u_t` and never sees `x_{t+1}` early.
pub fn run_odp<L: Learner + ?Sized>(learner: &mut L, env: &mut Environment, t: usize) -> Result<RegretTrace> {
    if t == 0 {
        return Err(Error::domain("horizon T must be at least 1"));
    }
    let n = learner.model().n_alternatives();
    if env.n_alternatives() != n {
        return Err(Error::DimensionMismatch { expected: n, got: env.n_alternatives() });
    }
    let mut trace = TraceBuilder::new(n, t);
    for round in 1..=t {
        let x = learner.current().to_vec();
        let u = env.payoff(round, &x)?;
        let payoff = learner.step(&u)?;
        trace.push(&x, &u, payoff);
    }
    Ok(trace.finish())
}

/// One independent run per seed, each with its own learner and environment.
pub fn run_seeds(learner: &LearnerConfig, env: &EnvSpec, t: usize, seeds: &[u64], exec: Exec) -> Result<Vec<RegretTrace>> {
    exec.map_slice(seeds, |&s| {
        let mut l = learner.build(t, env.u_max())?;
        let mut e = Environment::new(env, l.model().n_alternatives(), s)?;
        run_odp(&mut l, &mut e, t)
    })
    .into_iter()
    .collect()
}

/// Realized regret set against the theoretical bounds at the `η` used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub model: ModelKind,
    pub n_alternatives: usize,
    pub horizon: usize,
    pub u_max: f64,
    pub eta: f64,
    pub lipschitz: f64,
    pub bound_thm1: f64,
    pub bound_thm2: Option<f64>,
    pub bound_log_n: Option<f64>,
    pub realized_regret: f64,
    pub bound_variant: BoundVariant,
    /// `realized / bound` for `bound_variant`.
    pub ratio: f64,
}

pub fn bound_report(model: &GevModel, eta: Eta, u_max: f64, variant: BoundVariant, trace: &RegretTrace) -> Result<BoundReport> {
    if trace.n_alternatives() != model.n_alternatives() {
        return Err(Error::DimensionMismatch { expected: model.n_alternatives(), got: trace.n_alternatives() });
    }
    let t = trace.rounds();
    let bound = |v| regret_bound(model, eta, t, u_max, v);
    let chosen = bound(variant)?;
    let realized = trace.regret();
    Ok(BoundReport {
        model: model.kind(),
        n_alternatives: model.n_alternatives(),
        horizon: t,
        u_max,
        eta: eta.get(),
        lipschitz: model.lipschitz_numerator(),
        bound_thm1: bound(BoundVariant::Thm1)?,
        bound_thm2: bound(BoundVariant::Thm2).ok(),
        bound_log_n: bound(BoundVariant::LogN).ok(),
        realized_regret: realized,
        bound_variant: variant,
        ratio: realized / chosen,
    })
}

/// Parses replay text: one payoff vector per line, comma-separated.
pub fn parse_replay<R: BufRead>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|e| Error::Parse(format!("replay line {}: `{}`: {e}", idx + 1, f.trim()))))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!("replay line {} has {} values, expected {}", idx + 1, row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("replay file holds no payoff vectors".into()));
    }
    Ok(rows)
}

pub fn read_replay(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Parse(format!("cannot open replay file {}: {e}", path.display())))?;
    parse_replay(std::io::BufReader::new(file))
}

/// Writes payoff rows in the replay format, round-trip exact.
pub fn write_replay<W: Write>(mut w: W, rows: &[Vec<f64>]) -> Result<()> {
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_num(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{optimal_eta, SsaState};

    fn ssa(n: usize, eta: f64) -> SsaState {
        SsaState::new(GevModel::mnl(n).unwrap(), Eta::new(eta).unwrap(), 1.0).unwrap()
    }

    fn constant(payoff: Vec<f64>) -> EnvSpec {
        EnvSpec::Constant { u_max: 1.0, payoff }
    }

    #[test]
    fn adversary_targets_least_mass() {
        assert_eq!(adaptive_adversary_step(&[1.0 / 3.0; 3], 1.0), vec![1.0, 0.0, 0.0]);
        assert_eq!(adaptive_adversary_step(&[0.5, 0.3, 0.2], 2.0), vec![0.0, 0.0, 2.0]);
    }

    #[test]
    fn single_round_regret_is_nonnegative() {
        let mut l = ssa(3, 1.0);
        let mut e = Environment::new(&constant(vec![0.2, 0.9, 0.4]), 3, 1).unwrap();
        let tr = run_odp(&mut l, &mut e, 1).unwrap();
        assert!((tr.regret() - (0.9 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn zero_environment_has_zero_regret() {
        let mut l = ssa(4, 1.0);
        let mut e = Environment::new(&constant(vec![0.0; 4]), 4, 1).unwrap();
        assert_eq!(run_odp(&mut l, &mut e, 50).unwrap().regret(), 0.0);
    }

    #[test]
    fn uniform_learner_against_constant_arm() {
        let (n, t) = (5, 200);
        let mut l = ssa(n, 1e300);
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        let mut e = Environment::new(&constant(u), n, 1).unwrap();
        let tr = run_odp(&mut l, &mut e, t).unwrap();
        assert!((tr.regret() - t as f64 * (1.0 - 1.0 / n as f64)).abs() < 1e-9);
    }

    #[test]
    fn constant_env_respects_cor1_bound() {
        let n = 6;
        let m = GevModel::mnl(n).unwrap();
        let tune = optimal_eta(&m, 100, 1.0, BoundVariant::Thm2).unwrap();
        let mut l = SsaState::new(m, Eta::new(tune.eta).unwrap(), 1.0).unwrap();
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        let mut e = Environment::new(&constant(u), n, 1).unwrap();
        let tr = run_odp(&mut l, &mut e, 100).unwrap();
        assert!(tr.regret() <= (2.0 * (n as f64).ln() * 100.0).sqrt());
    }

    #[test]
    fn recomputed_regret_and_theta_agree() {
        let mut l = ssa(4, 3.0);
        let mut e = Environment::new(&EnvSpec::IidStochastic { u_max: 1.0 }, 4, 17).unwrap();
        let tr = run_odp(&mut l, &mut e, 500).unwrap();
        assert!((tr.recompute_regret() - tr.regret()).abs() < 1e-9);
        let mut theta = vec![0.0; 4];
        for t in 1..=500 {
            for (a, b) in theta.iter_mut().zip(tr.u(t)) {
                *a += b;
            }
        }
        assert_eq!(theta, tr.theta());
        assert_eq!(&theta[..], l.theta().as_slice());
    }

    #[test]
    fn environments_stay_in_bounds_and_are_reproducible() {
        let specs = [
            EnvSpec::IidStochastic { u_max: 0.5 },
            EnvSpec::AdaptiveAdversary { u_max: 0.5 },
            EnvSpec::DriftSinusoid { u_max: 0.5, amplitude: 0.1, omega: 0.3 },
            EnvSpec::PiecewiseConstant { u_max: 0.5, segment_len: 7 },
        ];
        for spec in &specs {
            let run = || {
                let mut l = SsaState::new(GevModel::mnl(3).unwrap(), Eta::new(2.0).unwrap(), 0.5).unwrap();
                let mut e = Environment::new(spec, 3, 99).unwrap();
                run_odp(&mut l, &mut e, 300).unwrap()
            };
            let (a, b) = (run(), run());
            assert_eq!(a, b);
            for t in 1..=300 {
                assert!(sup_norm(a.u(t)) <= 0.5);
            }
            if let Some(bound) = spec.drift_bound() {
                assert!(a.max_drift() <= bound + 1e-15);
            }
        }
    }

    #[test]
    fn out_of_bound_payoff_aborts_run() {
        let mut l = ssa(2, 1.0);
        let mut e = Environment::replay(vec![vec![0.5, 0.5], vec![2.0, 0.0]], 1.0).unwrap();
        assert!(matches!(run_odp(&mut l, &mut e, 2), Err(Error::BoundViolation { .. })));
    }

    #[test]
    fn replay_round_trip_is_bit_exact() {
        let rows = vec![vec![0.1, -1.0 / 3.0, 2e-300], vec![0.7, 1.0, 0.30000000000000004]];
        let mut buf = Vec::new();
        write_replay(&mut buf, &rows).unwrap();
        assert_eq!(parse_replay(&buf[..]).unwrap(), rows);
        assert!(parse_replay("1,2\n3\n".as_bytes()).is_err());
        assert!(parse_replay("1,x\n".as_bytes()).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let mut l = ssa(2, 1.0);
        let mut e = Environment::new(&constant(vec![1.0, 0.0]), 2, 1).unwrap();
        let tr = run_odp(&mut l, &mut e, 3).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x_1,x_2,u_1,u_2,payoff,regret");
        assert_eq!(lines.count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("1,5.0000000000000000e-1,"));
    }

    #[test]
    fn env_spec_parsing() {
        let spec: EnvSpec = serde_json::from_str(r#"{"kind":"drift_sinusoid","amplitude":0.2,"omega":0.1}"#).unwrap();
        assert!((spec.drift_bound().unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(spec.u_max(), 1.0);
        assert!(serde_json::from_str::<EnvSpec>(r#"{"kind":"adaptive_adversary","bogus":1}"#).is_err());
        assert!(Environment::new(&EnvSpec::DriftSinusoid { u_max: 1.0, amplitude: 0.5, omega: 0.1 }, 2, 0).is_err());
    }

    #[test]
    fn bound_report_rejects_mismatch() {
        let mut l = ssa(3, 1.0);
        let mut e = Environment::new(&EnvSpec::AdaptiveAdversary { u_max: 1.0 }, 3, 0).unwrap();
        let tr = run_odp(&mut l, &mut e, 10).unwrap();
        let m4 = GevModel::mnl(4).unwrap();
        assert!(bound_report(&m4, Eta::new(1.0).unwrap(), 1.0, BoundVariant::Thm2, &tr).is_err());
        let r = bound_report(l.model(), l.eta(), 1.0, BoundVariant::Thm2, &tr).unwrap();
        assert!(r.bound_thm1 > r.bound_thm2.unwrap());
    }
}
