//! Repeated normal-form games in which every player runs a surplus learner
//! on exact expected feedback, and the coarse-correlated-equilibrium gap of
//! the time-averaged play.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::env::{RegretTrace, TraceBuilder};
use crate::error::{Error, Result};
use crate::learners::{AnyLearner, Learner};
use crate::numeric::CompensatedSum;
use crate::seed;

/// Largest accepted number of strategy profiles `N^P`.
pub const MAX_PROFILES: usize = 1_000_000;

const SIMPLEX_TOL: f64 = 1e-9;

/// P players, N strategies each, utilities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    players: usize,
    strategies: usize,
    /// `payoffs[p * N^P + profile]`, profiles in row-major order with `s_1`
    /// most significant.
    payoffs: Vec<f64>,
}

impl GameSpec {
    pub fn new(players: usize, strategies: usize, payoffs: Vec<f64>) -> Result<Self> {
        if players == 0 || strategies == 0 {
            return Err(Error::spec("a game needs at least one player and one strategy"));
        }
        let profiles = profile_count(players, strategies)?;
        if payoffs.len() != players * profiles {
            return Err(Error::spec(format!(
                "payoff tensor has {} entries, expected P * N^P = {} * {} = {}",
                payoffs.len(),
                players,
                profiles,
                players * profiles
            )));
        }
        if let Some(bad) = payoffs.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(Error::spec(format!("utilities must lie in [0,1], found {bad}")));
        }
        Ok(GameSpec { players, strategies, payoffs })
    }

    /// Builds a game from a per-player utility function over profiles.
    pub fn from_fn(players: usize, strategies: usize, f: impl Fn(usize, &[usize]) -> f64) -> Result<Self> {
        let profiles = profile_count(players, strategies)?;
        let mut payoffs = Vec::with_capacity(players * profiles);
        let mut s = vec![0; players];
        for p in 0..players {
            for idx in 0..profiles {
                decode(idx, strategies, &mut s);
                payoffs.push(f(p, &s));
            }
        }
        Self::new(players, strategies, payoffs)
    }

    /// Matcher (player 1) wins on equal coins, mismatcher otherwise.
    pub fn matching_pennies() -> Self {
        Self::from_fn(2, 2, |p, s| {
            let matched = s[0] == s[1];
            if (p == 0) == matched {
                1.0
            } else {
                0.0
            }
        })
        .expect("valid builtin")
    }

    /// Rock, paper, scissors: win 1, tie ½, loss 0.
    pub fn rock_paper_scissors() -> Self {
        Self::from_fn(2, 3, |p, s| {
            let (me, other) = (s[p], s[1 - p]);
            match (3 + me - other) % 3 {
                0 => 0.5,
                1 => 1.0,
                _ => 0.0,
            }
        })
        .expect("valid builtin")
    }

    /// Uniform `[0, 1]` utilities drawn from the `"game"` stream of `seed`.
    pub fn random_game(players: usize, strategies: usize, seed: u64) -> Result<Self> {
        let profiles = profile_count(players, strategies)?;
        let mut rng = seed::named_rng(seed, "game");
        let payoffs = (0..players * profiles).map(|_| rng.random::<f64>()).collect();
        Self::new(players, strategies, payoffs)
    }

    /// Looks up a builtin by name (`matching_pennies`, `rps` /
    /// `rock_paper_scissors`, `random`).
    pub fn builtin(name: &str, seed: u64) -> Result<Self> {
        match name {
            "matching_pennies" | "mp" => Ok(Self::matching_pennies()),
            "rock_paper_scissors" | "rps" => Ok(Self::rock_paper_scissors()),
            "random" | "random_game" => Self::random_game(2, 2, seed),
            other => Err(Error::spec(format!("unknown builtin game `{other}` (matching_pennies, rps, random)"))),
        }
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn strategies(&self) -> usize {
        self.strategies
    }

    fn profiles(&self) -> usize {
        self.payoffs.len() / self.players
    }

    /// `u_p(s)` for a pure profile.
    pub fn utility(&self, p: usize, profile: &[usize]) -> f64 {
        let idx = profile.iter().fold(0, |acc, s| acc * self.strategies + s);
        self.payoffs[p * self.profiles() + idx]
    }

    fn tensor(&self, p: usize) -> &[f64] {
        let m = self.profiles();
        &self.payoffs[p * m..(p + 1) * m]
    }

    fn check_mixture(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.strategies {
            return Err(Error::DimensionMismatch { expected: self.strategies, got: x.len() });
        }
        let sum: f64 = x.iter().sum();
        if x.iter().any(|v| v.is_nan() || *v < -SIMPLEX_TOL) || (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::domain("mixed strategy is not on the simplex"));
        }
        Ok(())
    }

    /// `u_pk = E_{s_{−p} ∼ x_{−p}} u_p(k, s_{−p})`, with `opponents` listing
    /// the other players' mixtures in player order.
    pub fn expected_feedback(&self, p: usize, opponents: &[&[f64]]) -> Result<Vec<f64>> {
        if p >= self.players {
            return Err(Error::domain(format!("player {p} out of range 0..{}", self.players)));
        }
        if opponents.len() + 1 != self.players {
            return Err(Error::DimensionMismatch { expected: self.players - 1, got: opponents.len() });
        }
        for x in opponents {
            self.check_mixture(x)?;
        }
        let mut profile: Vec<&[f64]> = opponents.to_vec();
        profile.insert(p, &[]);
        Ok(self.feedback_unchecked(p, &profile))
    }

    /// Contracts every axis except `p` of player `p`'s tensor against the
    /// matching mixture, last axis first.
    fn feedback_unchecked(&self, p: usize, profile: &[&[f64]]) -> Vec<f64> {
        let n = self.strategies;
        let mut cur = self.tensor(p).to_vec();
        // After contracting axes > q, the tensor has shape N^(q+1) × N^(kept)
        // where `kept` counts retained trailing axes (0 or 1).
        let mut trailing = 1;
        for q in (0..self.players).rev() {
            if q == p {
                trailing = n;
                continue;
            }
            let x = profile[q];
            let lead = cur.len() / (n * trailing);
            let mut next = vec![0.0; lead * trailing];
            for a in 0..lead {
                for (s, w) in x.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    let src = &cur[(a * n + s) * trailing..(a * n + s + 1) * trailing];
                    for (d, v) in next[a * trailing..(a + 1) * trailing].iter_mut().zip(src) {
                        *d += w * v;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    fn feedback_all(&self, profile: &[&[f64]]) -> Vec<Vec<f64>> {
        (0..self.players).map(|p| self.feedback_unchecked(p, profile)).collect()
    }
}

fn profile_count(players: usize, strategies: usize) -> Result<usize> {
    let mut m: usize = 1;
    for _ in 0..players {
        m = m
            .checked_mul(strategies)
            .filter(|v| *v <= MAX_PROFILES)
            .ok_or_else(|| Error::spec(format!("game too large: N^P exceeds {MAX_PROFILES} profiles")))?;
    }
    Ok(m)
}

fn decode(mut idx: usize, n: usize, out: &mut [usize]) {
    for s in out.iter_mut().rev() {
        *s = idx % n;
        idx /= n;
    }
}

/// Serialized layout: `{ "players", "strategies", "payoffs": [player][s_1]…[s_P] }`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    players: usize,
    strategies: usize,
    payoffs: Value,
}

fn flatten_nested(v: &Value, depth: usize, n: usize, path: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<()> {
    let at = || {
        if path.is_empty() {
            "payoffs".to_string()
        } else {
            format!("payoffs{}", path.iter().map(|i| format!("[{i}]")).collect::<String>())
        }
    };
    if depth == 0 {
        return match v.as_f64() {
            Some(x) => {
                out.push(x);
                Ok(())
            }
            None => Err(Error::spec(format!("{} must be a number", at()))),
        };
    }
    let arr = v.as_array().ok_or_else(|| Error::spec(format!("{} must be an array", at())))?;
    if arr.len() != n {
        return Err(Error::spec(format!("dimension mismatch at {}: {} entries, expected {n}", at(), arr.len())));
    }
    for (i, child) in arr.iter().enumerate() {
        path.push(i);
        flatten_nested(child, depth - 1, n, path, out)?;
        path.pop();
    }
    Ok(())
}

impl TryFrom<GameDoc> for GameSpec {
    type Error = Error;

    fn try_from(doc: GameDoc) -> Result<Self> {
        if doc.players == 0 || doc.strategies == 0 {
            return Err(Error::spec("a game needs at least one player and one strategy"));
        }
        profile_count(doc.players, doc.strategies)?;
        let arr = doc.payoffs.as_array().ok_or_else(|| Error::spec("payoffs must be an array"))?;
        if arr.len() != doc.players {
            return Err(Error::spec(format!("dimension mismatch at payoffs: {} player tensors, expected {}", arr.len(), doc.players)));
        }
        let mut flat = Vec::new();
        for (p, tensor) in arr.iter().enumerate() {
            flatten_nested(tensor, doc.players, doc.strategies, &mut vec![p], &mut flat)?;
        }
        GameSpec::new(doc.players, doc.strategies, flat)
    }
}

fn nest(values: &[f64], depth: usize, n: usize) -> Value {
    if depth == 0 {
        return Value::from(values[0]);
    }
    let chunk = values.len() / n;
    Value::Array((0..n).map(|i| nest(&values[i * chunk..(i + 1) * chunk], depth - 1, n)).collect())
}

impl Serialize for GameSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let payoffs = Value::Array((0..self.players).map(|p| nest(self.tensor(p), self.players, self.strategies)).collect());
        GameDoc { players: self.players, strategies: self.strategies, payoffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GameSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GameSpec::try_from(GameDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Outcome of a repeated game: one regret trace per player. Round `t`'s
/// profile is `(traces[p].x(t))_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameRun {
    pub traces: Vec<RegretTrace>,
}

impl GameRun {
    pub fn rounds(&self) -> usize {
        self.traces.first().map_or(0, RegretTrace::rounds)
    }

    /// Mixed profile of every round.
    pub fn history(&self) -> Vec<Vec<Vec<f64>>> {
        (1..=self.rounds()).map(|t| self.traces.iter().map(|tr| tr.x(t).to_vec()).collect()).collect()
    }

    pub fn max_regret(&self) -> f64 {
        self.traces.iter().map(RegretTrace::regret).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Time-averaged marginal of player `p`.
    pub fn average_marginal(&self, p: usize) -> Vec<f64> {
        let tr = &self.traces[p];
        let mut avg = vec![0.0; tr.n_alternatives()];
        for t in 1..=tr.rounds() {
            for (a, x) in avg.iter_mut().zip(tr.x(t)) {
                *a += x;
            }
        }
        let tf = tr.rounds() as f64;
        avg.iter_mut().for_each(|a| *a /= tf);
        avg
    }
}

/// Synchronous play: every player commits `x_pt`, then each receives the
/// exact expected feedback against the others' round-`t` mixtures.
pub fn run_repeated_game(game: &GameSpec, learners: &mut [AnyLearner], t: usize) -> Result<GameRun> {
    if t == 0 {
        return Err(Error::domain("horizon T must be at least 1"));
    }
    if learners.len() != game.players() {
        return Err(Error::DimensionMismatch { expected: game.players(), got: learners.len() });
    }
    for l in learners.iter() {
        if l.model().n_alternatives() != game.strategies() {
            return Err(Error::DimensionMismatch { expected: game.strategies(), got: l.model().n_alternatives() });
        }
    }
    let mut recorders: Vec<TraceBuilder> = learners.iter().map(|_| TraceBuilder::new(game.strategies(), t)).collect();
    for _ in 0..t {
        let profile: Vec<Vec<f64>> = learners.iter().map(|l| l.current().to_vec()).collect();
        let refs: Vec<&[f64]> = profile.iter().map(Vec::as_slice).collect();
        let feedback = game.feedback_all(&refs);
        for ((l, rec), (x, u)) in learners.iter_mut().zip(recorders.iter_mut()).zip(profile.iter().zip(&feedback)) {
            let payoff = l.step(u)?;
            rec.push(x, u, payoff);
        }
    }
    Ok(GameRun { traces: recorders.into_iter().map(TraceBuilder::finish).collect() })
}

/// Coarse-correlated-equilibrium gap of the time-averaged play.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CceReport {
    pub horizon: usize,
    /// `E_σ[u_p(s)]` per player.
    pub expected_utility: Vec<f64>,
    /// `max_{s'} E_σ[u_p(s', s_{−p})]` per player.
    pub best_deviation: Vec<f64>,
    pub best_deviation_strategy: Vec<usize>,
    /// `max_{p, s'}` of the positive part of the deviation gain.
    pub delta_emp: f64,
    /// `T · δ_emp`, the unnormalized gap, comparable to `max_p R_p^T`.
    pub delta_unscaled: f64,
}

/// Gap of `σ = (1/T) Σ_t Π_p x_pt` from a history of mixed profiles. The
/// feedback is recomputed from the game; deviation values accumulate per
/// round so the joint distribution is never stored.
pub fn cce_gap(game: &GameSpec, history: &[Vec<Vec<f64>>]) -> Result<CceReport> {
    if history.is_empty() {
        return Err(Error::domain("cce gap needs at least one round"));
    }
    let (pn, n) = (game.players(), game.strategies());
    let mut deviation = vec![vec![0.0; n]; pn];
    let mut realized = vec![CompensatedSum::new(); pn];
    for profile in history {
        if profile.len() != pn {
            return Err(Error::DimensionMismatch { expected: pn, got: profile.len() });
        }
        for x in profile {
            game.check_mixture(x)?;
        }
        let refs: Vec<&[f64]> = profile.iter().map(Vec::as_slice).collect();
        for (p, u) in game.feedback_all(&refs).into_iter().enumerate() {
            realized[p].add(profile[p].iter().zip(&u).map(|(a, b)| a * b).sum());
            for (d, v) in deviation[p].iter_mut().zip(&u) {
                *d += v;
            }
        }
    }
    let tf = history.len() as f64;
    let mut report = CceReport {
        horizon: history.len(),
        expected_utility: Vec::with_capacity(pn),
        best_deviation: Vec::with_capacity(pn),
        best_deviation_strategy: Vec::with_capacity(pn),
        delta_emp: 0.0,
        delta_unscaled: 0.0,
    };
    for p in 0..pn {
        let (mut best_s, mut best_v) = (0, f64::NEG_INFINITY);
        for (s, v) in deviation[p].iter().enumerate() {
            if *v > best_v {
                best_s = s;
                best_v = *v;
            }
        }
        let gain = (best_v - realized[p].value()).max(0.0);
        report.expected_utility.push(realized[p].value() / tf);
        report.best_deviation.push(best_v / tf);
        report.best_deviation_strategy.push(best_s);
        report.delta_unscaled = report.delta_unscaled.max(gain);
    }
    report.delta_emp = report.delta_unscaled / tf;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::{Eta, GevModel};
    use crate::learners::SsaState;

    fn mnl_player(n: usize, eta: f64) -> AnyLearner {
        AnyLearner::Ssa(SsaState::new(GevModel::mnl(n).unwrap(), Eta::new(eta).unwrap(), 1.0).unwrap())
    }

    #[test]
    fn pure_opponent_reads_tensor() {
        let g = GameSpec::rock_paper_scissors();
        let u = g.expected_feedback(0, &[&[0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(u, vec![0.0, 0.5, 1.0]);
        let u = g.expected_feedback(1, &[&[1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(u, vec![0.5, 1.0, 0.0]);
    }

    #[test]
    fn matching_pennies_uniform_opponent() {
        let g = GameSpec::matching_pennies();
        assert_eq!(g.expected_feedback(0, &[&[0.5, 0.5]]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(g.expected_feedback(1, &[&[0.5, 0.5]]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn three_player_contraction_matches_enumeration() {
        let g = GameSpec::random_game(3, 2, 5).unwrap();
        let (a, b) = ([0.3, 0.7], [0.9, 0.1]);
        for p in 0..3 {
            let opp: [&[f64]; 2] = [&a, &b];
            let fb = g.expected_feedback(p, &opp).unwrap();
            for k in 0..2 {
                let mut brute = 0.0;
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        let mut prof = vec![s1, s2];
                        prof.insert(p, k);
                        brute += a[s1] * b[s2] * g.utility(p, &prof);
                    }
                }
                assert!((fb[k] - brute).abs() < 1e-15);
            }
            let u = [0.5, 0.5];
            let fb = g.expected_feedback(p, &[&u, &u]).unwrap();
            for k in 0..2 {
                let mut mean = 0.0;
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        let mut prof = vec![s1, s2];
                        prof.insert(p, k);
                        mean += g.utility(p, &prof) / 4.0;
                    }
                }
                assert!((fb[k] - mean).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn feedback_dimension_errors() {
        let g = GameSpec::matching_pennies();
        assert!(g.expected_feedback(0, &[&[0.5, 0.25, 0.25]]).is_err());
        assert!(g.expected_feedback(0, &[]).is_err());
        assert!(g.expected_feedback(0, &[&[0.9, 0.9]]).is_err());
    }

    #[test]
    fn zero_game_keeps_initial_distribution() {
        let g = GameSpec::from_fn(2, 3, |_, _| 0.0).unwrap();
        let mut ls = vec![mnl_player(3, 1.0), mnl_player(3, 1.0)];
        let run = run_repeated_game(&g, &mut ls, 20).unwrap();
        for tr in &run.traces {
            for t in 1..=20 {
                assert_eq!(tr.x(t), &[1.0 / 3.0; 3]);
            }
        }
    }

    #[test]
    fn symmetric_game_gives_identical_traces() {
        let g = GameSpec::rock_paper_scissors();
        let mut ls = vec![mnl_player(3, 2.0), mnl_player(3, 2.0)];
        let run = run_repeated_game(&g, &mut ls, 100).unwrap();
        assert_eq!(run.traces[0], run.traces[1]);
    }

    #[test]
    fn pure_nash_round_has_zero_gap() {
        // Coordination game: both pick 0 → each gets 1.
        let g = GameSpec::from_fn(2, 2, |_, s| if s[0] == s[1] { 1.0 } else { 0.0 }).unwrap();
        let r = cce_gap(&g, &[vec![vec![1.0, 0.0], vec![1.0, 0.0]]]).unwrap();
        assert_eq!(r.delta_emp, 0.0);
    }

    #[test]
    fn gap_matches_scaled_regret() {
        let g = GameSpec::random_game(2, 3, 8).unwrap();
        let mut ls = vec![mnl_player(3, 3.0), mnl_player(3, 5.0)];
        let run = run_repeated_game(&g, &mut ls, 300).unwrap();
        let r = cce_gap(&g, &run.history()).unwrap();
        assert!(r.delta_emp <= run.max_regret() / 300.0 + 1e-9);
        assert!((r.delta_emp - run.max_regret().max(0.0) / 300.0).abs() < 1e-9);
    }

    #[test]
    fn spec_json_round_trip_and_diagnostics() {
        let g = GameSpec::random_game(3, 2, 1).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GameSpec>(&text).unwrap(), g);
        let bad = r#"{"players":2,"strategies":2,"payoffs":[[[1,0],[0,1]],[[0,1],[1]]]}"#;
        let err = serde_json::from_str::<GameSpec>(bad).unwrap_err().to_string();
        assert!(err.contains("dimension mismatch at payoffs[1][1]"), "{err}");
        let bad = r#"{"players":2,"strategies":2,"payoffs":[[[1,0],[0,1]],[[0,1],[1,2]]]}"#;
        assert!(serde_json::from_str::<GameSpec>(bad).is_err());
        assert!(GameSpec::random_game(7, 10, 0).is_err());
    }
}
