//! Closed-form GEV choice models.
//!
//! Every model is stored in generalized-nested-logit form: a nest allocation
//! matrix `α` (N×K, rows summing to one) and nest scales `λ_k ∈ (0, 1]`. The
//! generator is
//!
//! ```text
//! G(y) = Σ_k ( Σ_i (α_ik · y_i)^{1/λ_k} )^{λ_k}
//! ```
//!
//! and, with `y = exp(θ/η)`, the surplus is `η (log G(y) + γ)`; its gradient
//! gives the choice probabilities. MNL, NL, CNL, PCL, OGEV and PDGEV are
//! constructors that fill in particular allocation patterns.
//!
//! All evaluations run in log space with max subtraction, so cumulative
//! payoffs that grow linearly in the horizon never overflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, max_value, EULER_GAMMA};

/// Smallest accepted nest scale.
pub const MIN_LAMBDA: f64 = 1e-6;

/// Tolerance on `Σ_k α_ik = 1`.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Mnl,
    Nl,
    Cnl,
    Pcl,
    Ogev,
    Pdgev,
    Gnl,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] =
        [ModelKind::Mnl, ModelKind::Nl, ModelKind::Cnl, ModelKind::Pcl, ModelKind::Ogev, ModelKind::Pdgev, ModelKind::Gnl];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Mnl => "mnl",
            ModelKind::Nl => "nl",
            ModelKind::Cnl => "cnl",
            ModelKind::Pcl => "pcl",
            ModelKind::Ogev => "ogev",
            ModelKind::Pdgev => "pdgev",
            ModelKind::Gnl => "gnl",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown model kind `{s}`")))
    }
}

/// Learning-rate / accuracy parameter, strictly positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Eta(f64);

impl Eta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Eta(value))
        } else {
            Err(Error::domain(format!("eta must be positive and finite, got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Eta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Eta::new(v).map_err(serde::de::Error::custom)
    }
}

/// A payoff vector `u_t` together with the bound `u_max` it must respect.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffVector {
    values: Vec<f64>,
    u_max: f64,
}

impl PayoffVector {
    pub fn new(values: Vec<f64>, u_max: f64) -> Result<Self> {
        if u_max.is_nan() || u_max <= 0.0 {
            return Err(Error::domain(format!("u_max must be positive, got {u_max}")));
        }
        let mut norm = 0.0f64;
        for v in &values {
            if !v.is_finite() {
                return Err(Error::domain("payoff entries must be finite"));
            }
            norm = norm.max(v.abs());
        }
        if norm > u_max {
            return Err(Error::BoundViolation { norm, u_max });
        }
        Ok(PayoffVector { values, u_max })
    }

    pub fn zeros(n: usize, u_max: f64) -> Self {
        PayoffVector { values: vec![0.0; n], u_max }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Cumulative payoff `θ_t = Σ_{τ≤t} u_τ`, accumulated by plain addition in
/// round order.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativePayoff {
    theta: Vec<f64>,
    round: usize,
}

impl CumulativePayoff {
    pub fn zeros(n: usize) -> Self {
        CumulativePayoff { theta: vec![0.0; n], round: 0 }
    }

    pub fn accumulate(&mut self, u: &[f64]) {
        assert_eq!(u.len(), self.theta.len(), "payoff dimension");
        for (th, ui) in self.theta.iter_mut().zip(u) {
            *th += ui;
        }
        self.round += 1;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn round(&self) -> usize {
        self.round
    }
}

/// Allocation weights and nest scales of a generalized nested logit.
#[derive(Clone, Debug, PartialEq)]
pub struct NestSpec {
    n_alternatives: usize,
    n_nests: usize,
    /// Row-major N×K.
    alloc: Vec<f64>,
    lambdas: Vec<f64>,
}

impl NestSpec {
    /// Builds a spec from allocation rows (one row of K weights per
    /// alternative) and K nest scales.
    pub fn new(alloc_rows: Vec<Vec<f64>>, lambdas: Vec<f64>) -> Result<Self> {
        let n = alloc_rows.len();
        let k = lambdas.len();
        let mut alloc = Vec::with_capacity(n * k);
        for (i, row) in alloc_rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::spec(format!("alternative {i} has {} allocation weights, expected {k}", row.len())));
            }
            alloc.extend(row);
        }
        Self::from_flat(n, k, alloc, lambdas)
    }

    /// Builds a spec from per-nest columns `(λ_k, α_{·k})`.
    pub fn from_nests(n: usize, nests: &[(f64, Vec<f64>)]) -> Result<Self> {
        let k = nests.len();
        let mut alloc = vec![0.0; n * k];
        for (col, (_, weights)) in nests.iter().enumerate() {
            if weights.len() != n {
                return Err(Error::spec(format!("nest {col} lists {} allocation weights, expected {n}", weights.len())));
            }
            for (i, w) in weights.iter().enumerate() {
                alloc[i * k + col] = *w;
            }
        }
        Self::from_flat(n, k, alloc, nests.iter().map(|(l, _)| *l).collect())
    }

    fn from_flat(n: usize, k: usize, alloc: Vec<f64>, lambdas: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::spec("at least one alternative is required"));
        }
        if k == 0 {
            return Err(Error::spec("at least one nest is required"));
        }
        for (idx, &l) in lambdas.iter().enumerate() {
            if !(l.is_finite() && (MIN_LAMBDA..=1.0).contains(&l)) {
                return Err(Error::spec(format!("lambda out of (0,1]: nest {idx} has lambda = {l}")));
            }
        }
        for i in 0..n {
            let row = &alloc[i * k..(i + 1) * k];
            if row.iter().any(|a| !a.is_finite() || *a < 0.0) {
                return Err(Error::spec(format!("alternative {i} has a negative or non-finite allocation weight")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::spec(format!("allocation weights of alternative {i} sum to {sum}, expected 1")));
            }
        }
        for col in 0..k {
            if (0..n).all(|i| alloc[i * k + col] == 0.0) {
                return Err(Error::spec(format!("nest {col} has no members")));
            }
        }
        Ok(NestSpec { n_alternatives: n, n_nests: k, alloc, lambdas })
    }

    /// The single-nest spec with unit weights and `λ = 1` (MNL).
    pub fn degenerate(n: usize) -> Result<Self> {
        Self::from_flat(n, 1, vec![1.0; n], vec![1.0])
    }

    pub fn n_alternatives(&self) -> usize {
        self.n_alternatives
    }

    pub fn n_nests(&self) -> usize {
        self.n_nests
    }

    pub fn alloc(&self, alternative: usize, nest: usize) -> f64 {
        self.alloc[alternative * self.n_nests + nest]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn min_lambda(&self) -> f64 {
        self.lambdas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Member set `N_k = { i : α_ik > 0 }`.
    pub fn members(&self, nest: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_alternatives).filter(move |&i| self.alloc(i, nest) > 0.0)
    }

    pub fn column(&self, nest: usize) -> Vec<f64> {
        (0..self.n_alternatives).map(|i| self.alloc(i, nest)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Member {
    index: usize,
    ln_alpha: f64,
}

/// Result of the two-stage (nest, then alternative) decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoStage {
    /// Length-K nest probabilities.
    pub nest_probs: Vec<f64>,
    /// Row-major K×N conditional probabilities; row k is supported on `N_k`.
    pub cond_probs: Vec<f64>,
    pub n_alternatives: usize,
}

impl TwoStage {
    pub fn cond_row(&self, nest: usize) -> &[f64] {
        &self.cond_probs[nest * self.n_alternatives..(nest + 1) * self.n_alternatives]
    }

    /// `Σ_k P_k · P_{j|k}`.
    pub fn mixture(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_alternatives];
        for (k, pk) in self.nest_probs.iter().enumerate() {
            for (o, c) in out.iter_mut().zip(self.cond_row(k)) {
                *o += pk * c;
            }
        }
        out
    }
}

/// A concrete GEV choice model. Immutable after construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ModelSpec", into = "ModelSpec")]
pub struct GevModel {
    kind: ModelKind,
    nests: NestSpec,
    lipschitz_numerator: f64,
    members: Vec<Vec<Member>>,
}

impl PartialEq for GevModel {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.nests == other.nests
    }
}

/// Per-nest log terms for a given scaled payoff vector.
struct NestTerms {
    /// `a_ik = (ln α_ik + z_i) / λ_k`, laid out like `members`.
    a: Vec<Vec<f64>>,
    /// `ln S_k = lse_i a_ik`.
    log_s: Vec<f64>,
}

impl GevModel {
    /// Wraps a nest spec under a kind label after checking the kind's
    /// structural constraints.
    pub fn new(kind: ModelKind, nests: NestSpec) -> Result<Self> {
        validate_kind(kind, &nests)?;
        let members = (0..nests.n_nests())
            .map(|k| nests.members(k).map(|i| Member { index: i, ln_alpha: nests.alloc(i, k).ln() }).collect())
            .collect();
        let lipschitz_numerator = 2.0 / nests.min_lambda() - 1.0;
        Ok(GevModel { kind, nests, lipschitz_numerator, members })
    }

    pub fn mnl(n: usize) -> Result<Self> {
        Self::new(ModelKind::Mnl, NestSpec::degenerate(n)?)
    }

    pub fn gnl(nests: NestSpec) -> Self {
        Self::new(ModelKind::Gnl, nests).expect("every nest spec is a valid GNL")
    }

    /// Nested logit over a partition of the alternatives.
    pub fn nested_logit(n: usize, partition: &[Vec<usize>], lambdas: &[f64]) -> Result<Self> {
        if partition.len() != lambdas.len() {
            return Err(Error::spec(format!("{} nests but {} lambdas", partition.len(), lambdas.len())));
        }
        let mut owner = vec![None; n];
        for (k, nest) in partition.iter().enumerate() {
            for &i in nest {
                if i >= n {
                    return Err(Error::spec(format!("alternative {i} out of range 0..{n}")));
                }
                if owner[i].replace(k).is_some() {
                    return Err(Error::spec(format!("alternative {i} appears in more than one nest")));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::spec(format!("partition does not cover alternative {i}")));
        }
        let nests = partition
            .iter()
            .zip(lambdas)
            .map(|(nest, &l)| {
                let mut col = vec![0.0; n];
                for &i in nest {
                    col[i] = 1.0;
                }
                (l, col)
            })
            .collect::<Vec<_>>();
        Self::new(ModelKind::Nl, NestSpec::from_nests(n, &nests)?)
    }

    /// Cross-nested logit: free allocation rows, one common scale.
    pub fn cnl(alloc_rows: Vec<Vec<f64>>, lambda: f64) -> Result<Self> {
        let k = alloc_rows.first().map_or(0, Vec::len);
        Self::new(ModelKind::Cnl, NestSpec::new(alloc_rows, vec![lambda; k])?)
    }

    /// Paired combinatorial logit. One nest per ordered pair `(i, j)`, `i ≠ j`,
    /// each member weighted `1 / (2(N-1))`. `lambdas` is either a single
    /// common scale or one scale per unordered pair `i < j` in lexicographic
    /// order (shared by both orientations).
    pub fn pcl(n: usize, lambdas: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::spec("pcl needs at least two alternatives"));
        }
        let pairs = n * (n - 1) / 2;
        if lambdas.len() != 1 && lambdas.len() != pairs {
            return Err(Error::spec(format!("pcl expects 1 or {pairs} lambdas, got {}", lambdas.len())));
        }
        let pair_index = |i: usize, j: usize| {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            a * (2 * n - a - 1) / 2 + (b - a - 1)
        };
        let w = 1.0 / (2.0 * (n as f64 - 1.0));
        let mut nests = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let l = if lambdas.len() == 1 { lambdas[0] } else { lambdas[pair_index(i, j)] };
                let mut col = vec![0.0; n];
                col[i] = w;
                col[j] = w;
                nests.push((l, col));
            }
        }
        Self::new(ModelKind::Pcl, NestSpec::from_nests(n, &nests)?)
    }

    /// Ordered GEV: `N + N'` nests, nest `ℓ` holding the alternatives
    /// `ℓ - N' ..= ℓ`; alternative `i` sits in nests `i ..= i + N'` with weight
    /// `weights[m]` in nest `i + m`. `lambdas` is one common scale or one per
    /// nest.
    pub fn ogev(n: usize, n_prime: usize, weights: &[f64], lambdas: &[f64]) -> Result<Self> {
        let k = n + n_prime;
        if weights.len() != n_prime + 1 {
            return Err(Error::spec(format!("ogev expects {} overlap weights, got {}", n_prime + 1, weights.len())));
        }
        if lambdas.len() != 1 && lambdas.len() != k {
            return Err(Error::spec(format!("ogev expects 1 or {k} lambdas, got {}", lambdas.len())));
        }
        let mut rows = vec![vec![0.0; k]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (m, w) in weights.iter().enumerate() {
                row[i + m] = *w;
            }
        }
        let lambdas = if lambdas.len() == 1 { vec![lambdas[0]; k] } else { lambdas.to_vec() };
        Self::new(ModelKind::Ogev, NestSpec::new(rows, lambdas)?)
    }

    /// Uniform-overlap OGEV with a common scale.
    pub fn ogev_uniform(n: usize, n_prime: usize, lambda: f64) -> Result<Self> {
        let w = vec![1.0 / (n_prime as f64 + 1.0); n_prime + 1];
        Self::ogev(n, n_prime, &w, &[lambda])
    }

    /// Principles-of-differentiation GEV. Each attribute dimension `d`
    /// partitions the alternatives by level; every level present becomes a
    /// nest with weight `α_d` and scale `λ_d`.
    pub fn pdgev(n: usize, dims: &[AttributeDim]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::spec("pdgev needs at least one attribute dimension"));
        }
        let mut nests = Vec::new();
        for (d, dim) in dims.iter().enumerate() {
            if dim.levels.len() != n {
                return Err(Error::spec(format!("attribute dimension {d} assigns {} levels, expected {n}", dim.levels.len())));
            }
            let mut present: Vec<usize> = dim.levels.clone();
            present.sort_unstable();
            present.dedup();
            for level in present {
                let col = dim.levels.iter().map(|&l| if l == level { dim.alpha } else { 0.0 }).collect();
                nests.push((dim.lambda, col));
            }
        }
        Self::new(ModelKind::Pdgev, NestSpec::from_nests(n, &nests)?)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn nests(&self) -> &NestSpec {
        &self.nests
    }

    pub fn n_alternatives(&self) -> usize {
        self.nests.n_alternatives
    }

    /// `2 / min_k λ_k − 1`; equals one iff every scale is one.
    pub fn lipschitz_numerator(&self) -> f64 {
        self.lipschitz_numerator
    }

    /// Lipschitz constant of the choice map in θ: `(2 / min_k λ_k − 1) / η`.
    pub fn lipschitz_constant(&self, eta: Eta) -> f64 {
        self.lipschitz_numerator / eta.get()
    }

    fn nest_terms(&self, z: &[f64]) -> NestTerms {
        let mut a = Vec::with_capacity(self.members.len());
        let mut log_s = Vec::with_capacity(self.members.len());
        for (members, &lambda) in self.members.iter().zip(&self.nests.lambdas) {
            let terms: Vec<f64> = members.iter().map(|m| (m.ln_alpha + z[m.index]) / lambda).collect();
            log_s.push(log_sum_exp(terms.iter().copied()));
            a.push(terms);
        }
        NestTerms { a, log_s }
    }

    fn check_dim(&self, v: &[f64]) {
        assert_eq!(v.len(), self.n_alternatives(), "vector length must equal the number of alternatives");
    }

    /// `log G(exp(log_y))` evaluated entirely in log space.
    pub fn log_generator(&self, log_y: &[f64]) -> f64 {
        self.check_dim(log_y);
        let shift = max_value(log_y);
        let z: Vec<f64> = log_y.iter().map(|v| v - shift).collect();
        let terms = self.nest_terms(&z);
        shift + self.log_g_from_terms(&terms)
    }

    fn log_g_from_terms(&self, terms: &NestTerms) -> f64 {
        log_sum_exp(terms.log_s.iter().zip(&self.nests.lambdas).map(|(ls, l)| l * ls))
    }

    /// The generator `G(y)` for strictly positive `y`.
    pub fn generator_value(&self, y: &[f64]) -> Result<f64> {
        self.check_dim(y);
        if let Some(bad) = y.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::domain(format!("generator arguments must be positive, got {bad}")));
        }
        let log_y: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        Ok(self.log_generator(&log_y).exp())
    }

    /// `log G(1)`, the constant entering the GEV regret bound.
    pub fn log_generator_at_ones(&self) -> f64 {
        self.log_generator(&vec![0.0; self.n_alternatives()])
    }

    /// γ-free scaled surplus `log G(exp(θ/η))`.
    pub fn scaled_log_generator(&self, theta: &[f64], eta: Eta) -> f64 {
        self.check_dim(theta);
        let shift = max_value(theta);
        let z: Vec<f64> = theta.iter().map(|t| (t - shift) / eta.get()).collect();
        shift / eta.get() + self.log_g_from_terms(&self.nest_terms(&z))
    }

    /// Social surplus `η (log G(exp(θ/η)) + γ)`.
    pub fn surplus(&self, theta: &[f64], eta: Eta) -> f64 {
        eta.get() * (self.scaled_log_generator(theta, eta) + EULER_GAMMA)
    }

    /// Surplus without the Euler constant, `η log G(exp(θ/η))`.
    pub fn surplus_no_gamma(&self, theta: &[f64], eta: Eta) -> f64 {
        eta.get() * self.scaled_log_generator(theta, eta)
    }

    /// Choice probabilities `∇φ(θ)` from the gradient formula
    /// `x_j ∝ y_j G_j(y)`, with `log(y_j G_j)` assembled per nest as
    /// `(λ_k − 1) ln S_k + a_jk`.
    pub fn choice_probs(&self, theta: &[f64], eta: Eta) -> Vec<f64> {
        let mut out = vec![0.0; self.n_alternatives()];
        self.choice_probs_into(theta, eta, &mut out);
        out
    }

    pub fn choice_probs_into(&self, theta: &[f64], eta: Eta, out: &mut [f64]) {
        self.check_dim(theta);
        self.check_dim(out);
        let shift = max_value(theta);
        let z: Vec<f64> = theta.iter().map(|t| (t - shift) / eta.get()).collect();
        let terms = self.nest_terms(&z);

        // Online log-sum-exp per alternative over the nests containing it.
        let n = self.n_alternatives();
        let mut max_w = vec![f64::NEG_INFINITY; n];
        let mut contribs: Vec<Vec<f64>> = Vec::with_capacity(self.members.len());
        for (k, members) in self.members.iter().enumerate() {
            let base = (self.nests.lambdas[k] - 1.0) * terms.log_s[k];
            let row: Vec<f64> = members
                .iter()
                .zip(&terms.a[k])
                .map(|(m, a)| {
                    let w = base + a;
                    if w > max_w[m.index] {
                        max_w[m.index] = w;
                    }
                    w
                })
                .collect();
            contribs.push(row);
        }
        let mut sums = vec![0.0; n];
        for (members, row) in self.members.iter().zip(&contribs) {
            for (m, w) in members.iter().zip(row) {
                sums[m.index] += (w - max_w[m.index]).exp();
            }
        }
        for j in 0..n {
            out[j] = max_w[j] + sums[j].ln();
        }
        crate::numeric::softmax_in_place(out);
    }

    /// Nest probabilities `softmax(v)` with inclusive values
    /// `v_k = λ_k ln S_k`, and within-nest conditionals `exp(a_jk − ln S_k)`.
    pub fn two_stage(&self, theta: &[f64], eta: Eta) -> TwoStage {
        self.check_dim(theta);
        let n = self.n_alternatives();
        let shift = max_value(theta);
        let z: Vec<f64> = theta.iter().map(|t| (t - shift) / eta.get()).collect();
        let terms = self.nest_terms(&z);
        let inclusive: Vec<f64> = terms.log_s.iter().zip(&self.nests.lambdas).map(|(ls, l)| l * ls).collect();
        let nest_probs = crate::numeric::softmax(&inclusive);
        let mut cond_probs = vec![0.0; self.members.len() * n];
        for (k, members) in self.members.iter().enumerate() {
            for (m, a) in members.iter().zip(&terms.a[k]) {
                cond_probs[k * n + m.index] = (a - terms.log_s[k]).exp();
            }
        }
        TwoStage { nest_probs, cond_probs, n_alternatives: n }
    }

    /// Inclusive values `v_k` of each nest.
    pub fn inclusive_values(&self, theta: &[f64], eta: Eta) -> Vec<f64> {
        self.check_dim(theta);
        let shift = max_value(theta);
        let z: Vec<f64> = theta.iter().map(|t| (t - shift) / eta.get()).collect();
        let terms = self.nest_terms(&z);
        terms.log_s.iter().zip(&self.nests.lambdas).map(|(ls, l)| l * ls + shift / eta.get()).collect()
    }

    /// True when nests are disjoint with unit weights (NL structure, which
    /// includes MNL).
    pub fn is_partition(&self) -> bool {
        (0..self.n_alternatives()).all(|i| {
            let mut positive = (0..self.nests.n_nests).filter(|&k| self.nests.alloc(i, k) > 0.0);
            positive.next().is_some() && positive.next().is_none()
        })
    }

    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            kind: self.kind,
            n_alternatives: self.n_alternatives(),
            nests: (0..self.nests.n_nests).map(|k| NestDoc { lambda: self.nests.lambdas[k], alloc: self.nests.column(k) }).collect(),
        }
    }

    pub fn from_spec(spec: ModelSpec) -> Result<Self> {
        let nests: Vec<(f64, Vec<f64>)> = spec.nests.into_iter().map(|d| (d.lambda, d.alloc)).collect();
        Self::new(spec.kind, NestSpec::from_nests(spec.n_alternatives, &nests)?)
    }
}

fn validate_kind(kind: ModelKind, nests: &NestSpec) -> Result<()> {
    let n = nests.n_alternatives();
    let k = nests.n_nests();
    match kind {
        ModelKind::Mnl => {
            if k != 1 || nests.lambdas[0] != 1.0 {
                return Err(Error::spec("mnl must be a single nest with lambda = 1"));
            }
        }
        ModelKind::Nl => {
            for i in 0..n {
                let positive: Vec<f64> = (0..k).map(|c| nests.alloc(i, c)).filter(|a| *a > 0.0).collect();
                if positive.len() != 1 {
                    return Err(Error::spec(format!(
                        "nl nests must be mutually exclusive; alternative {i} is in {} nests",
                        positive.len()
                    )));
                }
            }
        }
        ModelKind::Cnl => {
            let first = nests.lambdas[0];
            if nests.lambdas.iter().any(|l| *l != first) {
                return Err(Error::spec("cnl requires a common lambda for all nests"));
            }
        }
        ModelKind::Pcl | ModelKind::Ogev | ModelKind::Pdgev | ModelKind::Gnl => {}
    }
    Ok(())
}

/// One attribute dimension of a PDGEV model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeDim {
    /// Attribute level of each alternative.
    pub levels: Vec<usize>,
    pub alpha: f64,
    pub lambda: f64,
}

/// Serialized model layout:
/// `{ "kind", "n_alternatives", "nests": [{ "lambda", "alloc": [...] }] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n_alternatives: usize,
    pub nests: Vec<NestDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestDoc {
    pub lambda: f64,
    /// Allocation weight of every alternative in this nest (length N).
    pub alloc: Vec<f64>,
}

impl TryFrom<ModelSpec> for GevModel {
    type Error = Error;

    fn try_from(spec: ModelSpec) -> Result<Self> {
        GevModel::from_spec(spec)
    }
}

impl From<GevModel> for ModelSpec {
    fn from(model: GevModel) -> Self {
        model.to_spec()
    }
}
