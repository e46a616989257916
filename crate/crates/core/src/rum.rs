//! Random-utility machinery: shock samplers, perturbed-leader draws and Monte
//! Carlo estimates of choice probabilities and surplus, plus numeric checks
//! on the surplus Hessian and Bregman divergence.
//!
//! Monte Carlo work is cut into fixed-size shards, each with its own derived
//! seed. Shard results are merged in index order, so an estimate depends on
//! `(seed, n_samples)` only, never on the execution strategy.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::exec::Exec;
use crate::gev::{Eta, GevModel};
use crate::numeric::dot;
use crate::seed::{self, StreamRng};

/// Samples per Monte Carlo shard.
pub const SHARD_SIZE: usize = 1 << 16;

/// Lower clamp applied to uniforms before the Gumbel inverse CDF.
const U_FLOOR: f64 = 1e-300;

type ShockFn = dyn Fn(&mut StreamRng, &mut [f64]) + Send + Sync;

/// Shock distribution.
#[derive(Clone)]
pub enum ShockKind {
    /// Independent standard Gumbel coordinates.
    GumbelIid,
    /// User-supplied joint distribution; fills the slice with one draw.
    Custom(Arc<ShockFn>),
}

impl fmt::Debug for ShockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShockKind::GumbelIid => f.write_str("GumbelIid"),
            ShockKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl ShockKind {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&mut StreamRng, &mut [f64]) + Send + Sync + 'static,
    {
        ShockKind::Custom(Arc::new(f))
    }

    pub fn sampler(&self, seed: u64) -> ShockSampler {
        ShockSampler { kind: self.clone(), rng: seed::rng(seed) }
    }
}

/// Standard Gumbel draw by inverse CDF.
pub fn gumbel<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random::<f64>().max(U_FLOOR);
    -(-u.ln()).ln()
}

/// A shock distribution bound to its own deterministic stream.
#[derive(Debug)]
pub struct ShockSampler {
    kind: ShockKind,
    rng: StreamRng,
}

impl ShockSampler {
    pub fn gumbel(seed: u64) -> Self {
        ShockKind::GumbelIid.sampler(seed)
    }

    pub fn kind(&self) -> &ShockKind {
        &self.kind
    }

    pub fn draw(&mut self, out: &mut [f64]) {
        match &self.kind {
            ShockKind::GumbelIid => {
                for e in out.iter_mut() {
                    *e = gumbel(&mut self.rng);
                }
            }
            ShockKind::Custom(f) => f(&mut self.rng, out),
        }
    }

    pub fn rng_mut(&mut self) -> &mut StreamRng {
        &mut self.rng
    }
}

fn argmax_lowest(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// One perturbed-leader choice: `argmax_j θ_j + η ε_j`, ties to the lowest
/// index.
pub fn ftpl_choose(theta: &[f64], eta: Eta, sampler: &mut ShockSampler) -> usize {
    let mut eps = vec![0.0; theta.len()];
    ftpl_choose_with(theta, eta, sampler, &mut eps)
}

fn ftpl_choose_with(theta: &[f64], eta: Eta, sampler: &mut ShockSampler, eps: &mut [f64]) -> usize {
    sampler.draw(eps);
    argmax_lowest(theta.iter().zip(eps.iter()).map(|(t, e)| t + eta.get() * e))
}

/// Empirical choice frequencies with per-coordinate standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct McProbs {
    pub probs: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub n_samples: usize,
}

impl McProbs {
    fn from_counts(counts: &[u64], n: usize) -> Self {
        let nf = n as f64;
        let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / nf).collect();
        let std_errors = probs.iter().map(|p| (p * (1.0 - p) / nf).sqrt()).collect();
        McProbs { probs, std_errors, n_samples: n }
    }

    /// `|p̂_j − p_j| / √(p_j (1 − p_j) / n)` against reference probabilities
    /// `p_j`. The standard error is taken under the reference, so rare
    /// alternatives with no hits are not scored as exact. A degenerate
    /// reference (`p_j ∈ {0, 1}`) must be matched exactly.
    pub fn z_scores(&self, reference: &[f64]) -> Vec<f64> {
        let nf = self.n_samples as f64;
        self.probs
            .iter()
            .zip(reference)
            .map(|(p, r)| {
                let d = (p - r).abs();
                let se = (r * (1.0 - r) / nf).sqrt();
                if se > 0.0 {
                    d / se
                } else if d < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }

    pub fn max_z_score(&self, reference: &[f64]) -> f64 {
        self.z_scores(reference).into_iter().fold(0.0, f64::max)
    }
}

/// Scalar Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McScalar {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

fn shard_sizes(n: usize) -> Vec<usize> {
    let full = n / SHARD_SIZE;
    let mut sizes = vec![SHARD_SIZE; full];
    if !n.is_multiple_of(SHARD_SIZE) {
        sizes.push(n % SHARD_SIZE);
    }
    sizes
}

fn count_shards<F>(n_samples: usize, dim: usize, seed: u64, exec: Exec, shard: F) -> Vec<u64>
where
    F: Fn(&mut Vec<u64>, usize, u64) + Sync + Send,
{
    let sizes = shard_sizes(n_samples);
    let parts = exec.map(sizes.len(), |s| {
        let mut counts = vec![0u64; dim];
        shard(&mut counts, sizes[s], seed::derive_index(seed, s as u64));
        counts
    });
    let mut total = vec![0u64; dim];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    total
}

/// Perturbed-leader frequencies over `n_samples` independent draws.
pub fn mc_choice_probs(theta: &[f64], eta: Eta, kind: &ShockKind, n_samples: usize, seed: u64, exec: Exec) -> McProbs {
    assert!(n_samples >= 1, "n_samples must be positive");
    let n = theta.len();
    let counts = count_shards(n_samples, n, seed, exec, |counts, size, shard_seed| {
        let mut sampler = kind.sampler(shard_seed);
        let mut eps = vec![0.0; n];
        for _ in 0..size {
            counts[ftpl_choose_with(theta, eta, &mut sampler, &mut eps)] += 1;
        }
    });
    McProbs::from_counts(&counts, n_samples)
}

/// Two-level Gumbel-max sampler for a nested logit: pick a nest by
/// Gumbel-max over inclusive values, then an alternative within it by
/// Gumbel-max over `θ_i / (η λ_k)`.
pub fn mc_nested_choice_probs(
    model: &GevModel,
    theta: &[f64],
    eta: Eta,
    n_samples: usize,
    seed: u64,
    exec: Exec,
) -> crate::Result<McProbs> {
    if !model.is_partition() {
        return Err(crate::Error::Unsupported(format!(
            "nested Gumbel sampling needs disjoint nests, {} model has overlapping ones",
            model.kind()
        )));
    }
    assert!(n_samples >= 1, "n_samples must be positive");
    let n = model.n_alternatives();
    let inclusive = model.inclusive_values(theta, eta);
    let nests: Vec<(Vec<usize>, f64)> =
        (0..model.nests().n_nests()).map(|k| (model.nests().members(k).collect(), model.nests().lambdas()[k])).collect();
    let counts = count_shards(n_samples, n, seed, exec, |counts, size, shard_seed| {
        let mut rng = seed::rng(shard_seed);
        for _ in 0..size {
            let k = argmax_lowest(inclusive.iter().map(|v| v + gumbel(&mut rng)));
            let (members, lambda) = &nests[k];
            let scale = eta.get() * lambda;
            let pick = argmax_lowest(members.iter().map(|&i| theta[i] / scale + gumbel(&mut rng)));
            counts[members[pick]] += 1;
        }
    });
    Ok(McProbs::from_counts(&counts, n_samples))
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments { n, mean: self.mean + d * other.n / n, m2: self.m2 + other.m2 + d * d * self.n * other.n / n }
    }
}

/// Sample mean of `max_j θ_j + η ε_j`.
pub fn mc_surplus(theta: &[f64], eta: Eta, kind: &ShockKind, n_samples: usize, seed: u64, exec: Exec) -> McScalar {
    assert!(n_samples >= 1, "n_samples must be positive");
    let sizes = shard_sizes(n_samples);
    let parts = exec.map(sizes.len(), |s| {
        let mut sampler = kind.sampler(seed::derive_index(seed, s as u64));
        let mut eps = vec![0.0; theta.len()];
        let mut m = Moments::default();
        for _ in 0..sizes[s] {
            sampler.draw(&mut eps);
            let best = theta.iter().zip(&eps).map(|(t, e)| t + eta.get() * e).fold(f64::NEG_INFINITY, f64::max);
            m.push(best);
        }
        m
    });
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
    McScalar { value: m.mean, std_error: (var / m.n).sqrt(), n_samples }
}

/// Finite-difference curvature report at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianCheck {
    /// `L / η`.
    pub bound: f64,
    /// Trace of the Hessian from second differences of the surplus.
    pub trace: f64,
    /// `L/η − 2·Tr`.
    pub slack_trace: f64,
    /// `max_{u ∈ {±1}^N} uᵀHu`, the quadratic-form norm the Bregman bound
    /// needs. `None` when N is too large to enumerate sign vectors.
    pub quad_norm: Option<f64>,
    pub slack_quad: Option<f64>,
    /// Largest absolute column sum of the Hessian.
    pub max_col_abs_sum: f64,
}

const MAX_SIGN_ENUM: usize = 16;

/// Full Hessian of the surplus by central differences of the choice map.
pub fn fd_hessian(model: &GevModel, theta: &[f64], eta: Eta, step: f64) -> Vec<Vec<f64>> {
    let n = theta.len();
    let mut h = vec![vec![0.0; n]; n];
    let mut probe = theta.to_vec();
    for j in 0..n {
        probe[j] = theta[j] + step;
        let up = model.choice_probs(&probe, eta);
        probe[j] = theta[j] - step;
        let down = model.choice_probs(&probe, eta);
        probe[j] = theta[j];
        for i in 0..n {
            h[i][j] = (up[i] - down[i]) / (2.0 * step);
        }
    }
    h
}

/// Checks the trace condition `2 Tr ∇²φ(θ) ≤ L/η` by second differences of
/// the surplus, and reports the quadratic-form and column-sum norms of the
/// full finite-difference Hessian alongside.
pub fn hessian_trace_check(model: &GevModel, theta: &[f64], eta: Eta, fd_step: f64) -> HessianCheck {
    assert!(fd_step > 0.0, "fd_step must be positive");
    let n = theta.len();
    let bound = model.lipschitz_constant(eta);
    let center = model.surplus(theta, eta);
    let mut probe = theta.to_vec();
    let mut trace = 0.0;
    for j in 0..n {
        probe[j] = theta[j] + fd_step;
        let up = model.surplus(&probe, eta);
        probe[j] = theta[j] - fd_step;
        let down = model.surplus(&probe, eta);
        probe[j] = theta[j];
        trace += (up - 2.0 * center + down) / (fd_step * fd_step);
    }
    let h = fd_hessian(model, theta, eta, fd_step);
    let max_col_abs_sum = (0..n).map(|j| (0..n).map(|i| h[i][j].abs()).sum::<f64>()).fold(0.0, f64::max);
    let quad_norm = (n <= MAX_SIGN_ENUM).then(|| {
        let mut best = f64::NEG_INFINITY;
        // u_0 = +1 fixed: uᵀHu is invariant under u → −u.
        for mask in 0u32..(1u32 << (n - 1)) {
            let sign = |i: usize| if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
            let q: f64 = h.iter().enumerate().map(|(i, row)| sign(i) * row.iter().enumerate().map(|(j, v)| sign(j) * v).sum::<f64>()).sum();
            best = best.max(q);
        }
        best
    });
    HessianCheck { bound, trace, slack_trace: bound - 2.0 * trace, quad_norm, slack_quad: quad_norm.map(|q| bound - q), max_col_abs_sum }
}

/// `φ(θ + u) − φ(θ) − ⟨∇φ(θ), u⟩`.
pub fn bregman_divergence(model: &GevModel, theta_prev: &[f64], u: &[f64], eta: Eta) -> f64 {
    let next: Vec<f64> = theta_prev.iter().zip(u).map(|(t, d)| t + d).collect();
    let x = model.choice_probs(theta_prev, eta);
    model.surplus(&next, eta) - model.surplus(theta_prev, eta) - dot(&x, u)
}
