//! Online decision rules built on a GEV surplus.
//!
//! [`SsaState`] plays `x_{t+1} = ∇φ(θ_t)`; [`OftrlState`] adds the mean of the
//! last `S` payoff vectors as an optimistic prediction, `x_{t+1} = ∇φ(θ_t + β)`.
//! The MNL helpers give the entropic-FTRL closed form and the multiplicative
//! recursive update that both coincide with SSA under MNL.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gev::{CumulativePayoff, Eta, GevModel, ModelKind, ModelSpec};
use crate::numeric::{dot, softmax, softmax_in_place, sup_norm, EULER_GAMMA};

/// Which constant plays the role of `φ(0)` when tuning `η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// `φ(0) = log G(1) + γ`.
    Thm1,
    /// `log G(1)`.
    #[default]
    Thm2,
    /// `log N`, an upper bound on `log G(1)` for every GNL model.
    LogN,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [BoundVariant::Thm1, BoundVariant::Thm2, BoundVariant::LogN];

    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::Thm1 => "thm1",
            BoundVariant::Thm2 => "thm2",
            BoundVariant::LogN => "log_n",
        }
    }

    /// The surplus-at-zero constant `c` this variant uses.
    pub fn constant(self, model: &GevModel) -> Result<f64> {
        let c = match self {
            BoundVariant::Thm1 => model.log_generator_at_ones() + EULER_GAMMA,
            BoundVariant::Thm2 => model.log_generator_at_ones(),
            BoundVariant::LogN => (model.n_alternatives() as f64).ln(),
        };
        if c > 0.0 {
            Ok(c)
        } else {
            Err(Error::Degenerate(format!(
                "{} constant is {c} for a {}-alternative {} model",
                self.name(),
                model.n_alternatives(),
                model.kind()
            )))
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound variant `{s}` (thm1, thm2, log_n)")))
    }
}

/// A tuned learning rate with the regret bound it guarantees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tuning {
    pub eta: f64,
    pub bound: f64,
    /// The constant `c` standing in for `φ(0)`.
    pub constant: f64,
    /// `2 / min λ − 1`.
    pub lipschitz: f64,
}

fn check_horizon(t: usize, u_max: f64) -> Result<()> {
    if t == 0 {
        return Err(Error::domain("horizon T must be at least 1"));
    }
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::domain(format!("u_max must be positive, got {u_max}")));
    }
    Ok(())
}

/// `η = √(L T u²/(2c))`, bound `u √(2 c L T)`.
pub fn optimal_eta(model: &GevModel, t: usize, u_max: f64, variant: BoundVariant) -> Result<Tuning> {
    check_horizon(t, u_max)?;
    let c = variant.constant(model)?;
    let l = model.lipschitz_numerator();
    let tf = t as f64;
    Ok(Tuning { eta: (l * tf * u_max * u_max / (2.0 * c)).sqrt(), bound: u_max * (2.0 * c * l * tf).sqrt(), constant: c, lipschitz: l })
}

/// Regret bound `η c + (L / 2η) T u²` for a fixed `η`.
pub fn regret_bound(model: &GevModel, eta: Eta, t: usize, u_max: f64, variant: BoundVariant) -> Result<f64> {
    check_horizon(t, u_max)?;
    let c = variant.constant(model)?;
    let l = model.lipschitz_numerator();
    Ok(eta.get() * c + l / (2.0 * eta.get()) * t as f64 * u_max * u_max)
}

/// Recency-bias tuning: `η = √(L T S² B² / (2c))`, bound `S B √(2 L T c)`,
/// with `B` bounding `‖u_t − u_{t−1}‖_∞`.
pub fn oftrl_optimal_eta(model: &GevModel, t: usize, s: usize, drift_bound: f64, variant: BoundVariant) -> Result<Tuning> {
    check_horizon(t, drift_bound)?;
    if s == 0 {
        return Err(Error::domain("recency horizon S must be at least 1"));
    }
    let c = variant.constant(model)?;
    let l = model.lipschitz_numerator();
    let (tf, sf) = (t as f64, s as f64);
    Ok(Tuning {
        eta: (l * tf * sf * sf * drift_bound * drift_bound / (2.0 * c)).sqrt(),
        bound: sf * drift_bound * (2.0 * l * tf * c).sqrt(),
        constant: c,
        lipschitz: l,
    })
}

/// Recency-bias bound `η c + (L / 2η) T S² B²` for a fixed `η`.
pub fn oftrl_regret_bound(model: &GevModel, eta: Eta, t: usize, s: usize, drift_bound: f64, variant: BoundVariant) -> Result<f64> {
    check_horizon(t, drift_bound)?;
    let c = variant.constant(model)?;
    let l = model.lipschitz_numerator();
    let sb = s as f64 * drift_bound;
    Ok(eta.get() * c + l / (2.0 * eta.get()) * t as f64 * sb * sb)
}

/// Common interface of the full-information learners.
pub trait Learner {
    fn model(&self) -> &GevModel;
    fn eta(&self) -> Eta;
    fn u_max(&self) -> f64;
    /// The distribution committed for the upcoming round.
    fn current(&self) -> &[f64];
    /// Observes `u`, returns `⟨u, x⟩` for the distribution committed before
    /// `u` was revealed, and moves to the next distribution.
    fn step(&mut self, u: &[f64]) -> Result<f64>;
    fn round(&self) -> usize;
}

fn check_payoff(u: &[f64], n: usize, u_max: f64) -> Result<()> {
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("payoff entries must be finite"));
    }
    let norm = sup_norm(u);
    if norm > u_max {
        return Err(Error::BoundViolation { norm, u_max });
    }
    Ok(())
}

/// Social Surplus Algorithm state.
#[derive(Clone, Debug)]
pub struct SsaState {
    model: GevModel,
    eta: Eta,
    u_max: f64,
    theta: CumulativePayoff,
    current_x: Vec<f64>,
}

impl SsaState {
    pub fn new(model: GevModel, eta: Eta, u_max: f64) -> Result<Self> {
        check_horizon(1, u_max)?;
        let n = model.n_alternatives();
        let theta = CumulativePayoff::zeros(n);
        let current_x = model.choice_probs(theta.as_slice(), eta);
        Ok(SsaState { model, eta, u_max, theta, current_x })
    }

    pub fn theta(&self) -> &CumulativePayoff {
        &self.theta
    }
}

impl Learner for SsaState {
    fn model(&self) -> &GevModel {
        &self.model
    }

    fn eta(&self) -> Eta {
        self.eta
    }

    fn u_max(&self) -> f64 {
        self.u_max
    }

    fn current(&self) -> &[f64] {
        &self.current_x
    }

    fn step(&mut self, u: &[f64]) -> Result<f64> {
        check_payoff(u, self.model.n_alternatives(), self.u_max)?;
        let payoff = dot(u, &self.current_x);
        self.theta.accumulate(u);
        self.model.choice_probs_into(self.theta.as_slice(), self.eta, &mut self.current_x);
        Ok(payoff)
    }

    fn round(&self) -> usize {
        self.theta.round()
    }
}

/// Optimistic FTRL with `S`-step recency bias. The buffer starts as `S` zero
/// vectors, so before round `S` the prediction averages in zeros.
#[derive(Clone, Debug)]
pub struct OftrlState {
    model: GevModel,
    eta: Eta,
    u_max: f64,
    theta: CumulativePayoff,
    buffer: VecDeque<Vec<f64>>,
    current_x: Vec<f64>,
}

impl OftrlState {
    pub fn new(model: GevModel, eta: Eta, u_max: f64, s: usize) -> Result<Self> {
        check_horizon(1, u_max)?;
        if s == 0 {
            return Err(Error::domain("recency horizon S must be at least 1"));
        }
        let n = model.n_alternatives();
        let theta = CumulativePayoff::zeros(n);
        let buffer = std::iter::repeat_n(vec![0.0; n], s).collect();
        let current_x = model.choice_probs(theta.as_slice(), eta);
        Ok(OftrlState { model, eta, u_max, theta, buffer, current_x })
    }

    pub fn horizon(&self) -> usize {
        self.buffer.len()
    }

    /// Mean of the buffered payoffs.
    pub fn predictor(&self) -> Vec<f64> {
        let n = self.model.n_alternatives();
        let s = self.buffer.len() as f64;
        let mut beta = vec![0.0; n];
        for u in &self.buffer {
            for (b, v) in beta.iter_mut().zip(u) {
                *b += v;
            }
        }
        beta.iter_mut().for_each(|b| *b /= s);
        beta
    }

    pub fn theta(&self) -> &CumulativePayoff {
        &self.theta
    }
}

impl Learner for OftrlState {
    fn model(&self) -> &GevModel {
        &self.model
    }

    fn eta(&self) -> Eta {
        self.eta
    }

    fn u_max(&self) -> f64 {
        self.u_max
    }

    fn current(&self) -> &[f64] {
        &self.current_x
    }

    fn step(&mut self, u: &[f64]) -> Result<f64> {
        check_payoff(u, self.model.n_alternatives(), self.u_max)?;
        let payoff = dot(u, &self.current_x);
        self.theta.accumulate(u);
        self.buffer.pop_front();
        self.buffer.push_back(u.to_vec());
        let optimistic: Vec<f64> = self.theta.as_slice().iter().zip(self.predictor()).map(|(t, b)| t + b).collect();
        self.model.choice_probs_into(&optimistic, self.eta, &mut self.current_x);
        Ok(payoff)
    }

    fn round(&self) -> usize {
        self.theta.round()
    }
}

/// Either learner, so runs can be configured at runtime.
#[derive(Clone, Debug)]
pub enum AnyLearner {
    Ssa(SsaState),
    Oftrl(OftrlState),
}

impl AnyLearner {
    fn inner(&self) -> &dyn Learner {
        match self {
            AnyLearner::Ssa(s) => s,
            AnyLearner::Oftrl(s) => s,
        }
    }
}

impl Learner for AnyLearner {
    fn model(&self) -> &GevModel {
        self.inner().model()
    }

    fn eta(&self) -> Eta {
        self.inner().eta()
    }

    fn u_max(&self) -> f64 {
        self.inner().u_max()
    }

    fn current(&self) -> &[f64] {
        self.inner().current()
    }

    fn step(&mut self, u: &[f64]) -> Result<f64> {
        match self {
            AnyLearner::Ssa(s) => s.step(u),
            AnyLearner::Oftrl(s) => s.step(u),
        }
    }

    fn round(&self) -> usize {
        self.inner().round()
    }
}

/// Entropic FTRL maximizer `argmax ⟨θ, x⟩ − η Σ x log x = softmax(θ/η)`.
pub fn ftrl_mnl_closed_form(theta: &[f64], eta: Eta) -> Vec<f64> {
    let scaled: Vec<f64> = theta.iter().map(|t| t / eta.get()).collect();
    softmax(&scaled)
}

const SIMPLEX_TOL: f64 = 1e-9;

/// `η Σ x_i log x_i` with `0 log 0 = 0`.
pub fn regularizer_mnl(x: &[f64], eta: Eta) -> Result<f64> {
    let sum: f64 = x.iter().sum();
    if x.iter().any(|v| !v.is_finite() || *v < -SIMPLEX_TOL) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::domain("x is not on the probability simplex"));
    }
    let neg_entropy: f64 = x.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum();
    Ok(eta.get() * neg_entropy)
}

/// Multiplicative-weights step `normalize(x ⊙ exp(u/η))`.
pub fn recursive_update_mnl(x: &[f64], u: &[f64], eta: Eta) -> Result<Vec<f64>> {
    if x.len() != u.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: u.len() });
    }
    if let Some(bad) = x.iter().find(|v| v.is_nan() || **v <= 0.0) {
        return Err(Error::domain(format!("recursive update needs an interior point, got x_j = {bad}")));
    }
    let mut logits: Vec<f64> = x.iter().zip(u).map(|(xi, ui)| xi.ln() + ui / eta.get()).collect();
    softmax_in_place(&mut logits);
    Ok(logits)
}

/// For MNL, `max_j |−log x_j − (log G(e^{θ/η}) − θ_j/η)|`. For other kinds,
/// the largest gap between the two-stage mixture and the direct gradient.
pub fn fenchel_identity_residual(model: &GevModel, theta: &[f64], eta: Eta) -> f64 {
    let x = model.choice_probs(theta, eta);
    if model.kind() == ModelKind::Mnl {
        let phi_hat = model.scaled_log_generator(theta, eta);
        x.iter().zip(theta).map(|(xj, tj)| (-xj.ln() - (phi_hat - tj / eta.get())).abs()).fold(0.0, f64::max)
    } else {
        let mix = model.two_stage(theta, eta).mixture();
        mix.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `"eta": 0.5` or `"eta": "optimal"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaChoice {
    Fixed(Eta),
    Optimal,
}

impl Serialize for EtaChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EtaChoice::Fixed(e) => s.serialize_f64(e.get()),
            EtaChoice::Optimal => s.serialize_str("optimal"),
        }
    }
}

impl<'de> Deserialize<'de> for EtaChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Eta::new(v).map(EtaChoice::Fixed).map_err(serde::de::Error::custom),
            Raw::Word(w) if w == "optimal" => Ok(EtaChoice::Optimal),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("eta must be a positive number or \"optimal\", got \"{w}\""))),
        }
    }
}

/// Serialized learner layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerConfig {
    pub model: ModelSpec,
    pub eta: EtaChoice,
    #[serde(default)]
    pub bound_variant: BoundVariant,
    #[serde(default, rename = "recency_S", skip_serializing_if = "Option::is_none")]
    pub recency_s: Option<usize>,
    /// Bound `B` on `‖u_t − u_{t−1}‖_∞` used to tune an optimistic learner;
    /// defaults to `2 u_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_bound: Option<f64>,
}

impl LearnerConfig {
    pub fn ssa(model: &GevModel, eta: EtaChoice, bound_variant: BoundVariant) -> Self {
        LearnerConfig { model: model.to_spec(), eta, bound_variant, recency_s: None, drift_bound: None }
    }

    /// Resolves `η` for a run of `t` rounds with payoffs bounded by `u_max`.
    pub fn resolve_eta(&self, model: &GevModel, t: usize, u_max: f64) -> Result<Eta> {
        match self.eta {
            EtaChoice::Fixed(e) => Ok(e),
            EtaChoice::Optimal => {
                let tuning = match self.recency_s {
                    None => optimal_eta(model, t, u_max, self.bound_variant)?,
                    Some(s) => oftrl_optimal_eta(model, t, s, self.drift_bound.unwrap_or(2.0 * u_max), self.bound_variant)?,
                };
                Eta::new(tuning.eta)
            }
        }
    }

    pub fn build(&self, t: usize, u_max: f64) -> Result<AnyLearner> {
        let model = GevModel::from_spec(self.model.clone())?;
        let eta = self.resolve_eta(&model, t, u_max)?;
        Ok(match self.recency_s {
            None => AnyLearner::Ssa(SsaState::new(model, eta, u_max)?),
            Some(s) => AnyLearner::Oftrl(OftrlState::new(model, eta, u_max, s)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::NestSpec;

    fn eta(v: f64) -> Eta {
        Eta::new(v).unwrap()
    }

    #[test]
    fn cor1_bound_values() {
        let t = optimal_eta(&GevModel::mnl(10).unwrap(), 10_000, 1.0, BoundVariant::Thm2).unwrap();
        assert!((t.bound - 214.596_602_628_934_73).abs() < 1e-9, "{}", t.bound);
        let t = optimal_eta(&GevModel::mnl(2).unwrap(), 1, 1.0, BoundVariant::Thm2).unwrap();
        assert!((t.bound - 1.177_410_022_5).abs() < 1e-9, "{}", t.bound);
    }

    #[test]
    fn half_lambda_scales_bound_by_sqrt3() {
        let nl = GevModel::nested_logit(10, &[(0..5).collect(), (5..10).collect()], &[0.5, 1.0]).unwrap();
        let mnl = GevModel::mnl(10).unwrap();
        let a = optimal_eta(&nl, 10_000, 1.0, BoundVariant::LogN).unwrap();
        let b = optimal_eta(&mnl, 10_000, 1.0, BoundVariant::LogN).unwrap();
        assert!((a.bound / b.bound - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_alternative_is_degenerate() {
        let m = GevModel::mnl(1).unwrap();
        assert!(matches!(optimal_eta(&m, 10, 1.0, BoundVariant::Thm2), Err(Error::Degenerate(_))));
        assert!(optimal_eta(&m, 10, 1.0, BoundVariant::Thm1).is_ok());
    }

    #[test]
    fn fixed_eta_bound_is_minimized_at_optimal_eta() {
        let m = GevModel::mnl(4).unwrap();
        let t = optimal_eta(&m, 500, 0.7, BoundVariant::Thm1).unwrap();
        let at = regret_bound(&m, eta(t.eta), 500, 0.7, BoundVariant::Thm1).unwrap();
        assert!((at - t.bound).abs() < 1e-9);
        assert!(regret_bound(&m, eta(t.eta * 1.1), 500, 0.7, BoundVariant::Thm1).unwrap() > at);
    }

    #[test]
    fn ssa_repeated_unit_payoff() {
        let n = 4;
        let mut s = SsaState::new(GevModel::mnl(n).unwrap(), eta(2.0), 1.0).unwrap();
        let u = [1.0, 0.0, 0.0, 0.0];
        for _ in 0..7 {
            s.step(&u).unwrap();
        }
        let e = (7.0f64 / 2.0).exp();
        assert!((s.current()[0] - e / (e + 3.0)).abs() < 1e-14);
    }

    #[test]
    fn ssa_zero_step_and_additivity() {
        let m = GevModel::nested_logit(3, &[vec![0, 1], vec![2]], &[0.4, 1.0]).unwrap();
        let mut s = SsaState::new(m.clone(), eta(1.0), 2.0).unwrap();
        let x0 = s.current().to_vec();
        assert_eq!(s.step(&[0.0; 3]).unwrap(), 0.0);
        assert_eq!(s.current(), &x0[..]);

        let mut a = SsaState::new(m.clone(), eta(1.0), 2.0).unwrap();
        a.step(&[0.5, -0.25, 1.0]).unwrap();
        a.step(&[0.5, 0.75, 0.0]).unwrap();
        let mut b = SsaState::new(m, eta(1.0), 2.0).unwrap();
        b.step(&[1.0, 0.5, 1.0]).unwrap();
        assert_eq!(a.current(), b.current());
    }

    #[test]
    fn ssa_rejects_out_of_bound_payoff() {
        let mut s = SsaState::new(GevModel::mnl(2).unwrap(), eta(1.0), 1.0).unwrap();
        assert!(matches!(s.step(&[1.5, 0.0]), Err(Error::BoundViolation { .. })));
        assert!(matches!(s.step(&[0.5]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(s.round(), 0);
    }

    #[test]
    fn oftrl_zero_stream_equals_ssa() {
        let m = GevModel::gnl(NestSpec::new(vec![vec![0.3, 0.7], vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.8]).unwrap());
        let mut o = OftrlState::new(m.clone(), eta(0.5), 1.0, 3).unwrap();
        let mut s = SsaState::new(m, eta(0.5), 1.0).unwrap();
        for _ in 0..10 {
            o.step(&[0.0; 3]).unwrap();
            s.step(&[0.0; 3]).unwrap();
            assert_eq!(o.current(), s.current());
        }
    }

    #[test]
    fn oftrl_s1_constant_stream_is_shifted_ssa() {
        let m = GevModel::mnl(3).unwrap();
        let u = [0.2, 0.9, 0.4];
        let mut o = OftrlState::new(m.clone(), eta(0.8), 1.0, 1).unwrap();
        let mut s = SsaState::new(m, eta(0.8), 1.0).unwrap();
        s.step(&u).unwrap();
        for _ in 0..20 {
            o.step(&u).unwrap();
            s.step(&u).unwrap();
            for (a, b) in o.current().iter().zip(s.current()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mnl_closed_forms() {
        let x = ftrl_mnl_closed_form(&[2f64.ln(), 0.0], eta(1.0));
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-15);
        let r = regularizer_mnl(&[2.0 / 3.0, 1.0 / 3.0], eta(1.0)).unwrap();
        let expect = (2.0 / 3.0) * (2.0f64 / 3.0).ln() + (1.0 / 3.0) * (1.0f64 / 3.0).ln();
        assert!((r - expect).abs() < 1e-15);
        assert!((r + 0.636_514_168_3).abs() < 1e-9);
        assert_eq!(regularizer_mnl(&[0.0, 1.0, 0.0], eta(1.0)).unwrap(), 0.0);
        assert!((regularizer_mnl(&[0.25; 4], eta(1.0)).unwrap() + 4f64.ln()).abs() < 1e-15);
        assert!(regularizer_mnl(&[0.5, 0.6], eta(1.0)).is_err());
    }

    #[test]
    fn recursive_update_cases() {
        let x = recursive_update_mnl(&[0.5, 0.5], &[0.3 * 2f64.ln(), 0.0], eta(0.3)).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);
        let same = recursive_update_mnl(&[0.2, 0.3, 0.5], &[0.0; 3], eta(1.0)).unwrap();
        for (a, b) in same.iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(recursive_update_mnl(&[0.0, 1.0], &[0.0, 0.0], eta(1.0)).is_err());
    }

    #[test]
    fn fenchel_residual_at_zero() {
        let m = GevModel::mnl(6).unwrap();
        assert!(fenchel_identity_residual(&m, &[0.0; 6], eta(1.0)) < 1e-12);
    }

    #[test]
    fn learner_config_parsing() {
        let doc = r#"{"model":{"kind":"mnl","n_alternatives":3,"nests":[{"lambda":1.0,"alloc":[1,1,1]}]},
                      "eta":"optimal","bound_variant":"thm1","recency_S":4}"#;
        let cfg: LearnerConfig = serde_json::from_str(doc).unwrap();
        assert_eq!(cfg.eta, EtaChoice::Optimal);
        assert_eq!(cfg.recency_s, Some(4));
        assert!(matches!(cfg.build(100, 1.0).unwrap(), AnyLearner::Oftrl(_)));
        let fixed: LearnerConfig = serde_json::from_str(&doc.replace("\"optimal\"", "0.25")).unwrap();
        assert_eq!(fixed.build(100, 1.0).unwrap().eta().get(), 0.25);
        assert!(serde_json::from_str::<LearnerConfig>(&doc.replace("\"optimal\"", "\"fast\"")).is_err());
        assert!(serde_json::from_str::<LearnerConfig>(&doc.replace("recency_S", "recency")).is_err());
    }
}
