//! Named model layouts for building a model from `--model KIND --n N
//! --lambda ...` without writing a full nest spec.
//!
//! | kind  | nests |
//! |-------|-------|
//! | mnl   | one nest, λ = 1 |
//! | nl    | two halves `{0..⌈N/2⌉}`, `{⌈N/2⌉..N}`; 1 or 2 λ |
//! | cnl   | two nests, `α_i1 = (i+1)/(N+1)`; common λ |
//! | gnl   | same allocation as cnl; 1 or 2 λ |
//! | pcl   | all ordered pairs; 1 or N(N−1)/2 λ |
//! | ogev  | window width 2 (N′ = 1), uniform weights; 1 or N+1 λ |
//! | pdgev | attributes `i mod 2` and `i < N/2`, α = ½ each; 1 or 2 λ |

use anyhow::{bail, Result};
use gevregret_core::gev::{AttributeDim, GevModel, ModelKind, NestSpec};

const DEFAULT_LAMBDA: f64 = 0.5;

fn broadcast(kind: ModelKind, lambdas: &[f64], len: usize) -> Result<Vec<f64>> {
    match lambdas.len() {
        0 => Ok(vec![DEFAULT_LAMBDA; len]),
        1 => Ok(vec![lambdas[0]; len]),
        l if l == len => Ok(lambdas.to_vec()),
        l => bail!("{kind} with this size takes 1 or {len} lambda values, got {l}"),
    }
}

fn graded_alloc(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let a = (i + 1) as f64 / (n + 1) as f64;
            vec![a, 1.0 - a]
        })
        .collect()
}

pub fn build(kind: ModelKind, n: usize, lambdas: &[f64]) -> Result<GevModel> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    if kind != ModelKind::Mnl && n < 2 {
        bail!("{kind} needs at least two alternatives");
    }
    let model = match kind {
        ModelKind::Mnl => {
            if lambdas.iter().any(|l| *l != 1.0) {
                bail!("mnl has no free lambda (it is fixed at 1)");
            }
            GevModel::mnl(n)?
        }
        ModelKind::Nl => {
            let half = n.div_ceil(2);
            let parts = vec![(0..half).collect(), (half..n).collect()];
            GevModel::nested_logit(n, &parts, &broadcast(kind, lambdas, 2)?)?
        }
        ModelKind::Cnl => {
            if lambdas.len() > 1 {
                bail!("cnl takes a single common lambda");
            }
            GevModel::cnl(graded_alloc(n), broadcast(kind, lambdas, 1)?[0])?
        }
        ModelKind::Gnl => GevModel::gnl(NestSpec::new(graded_alloc(n), broadcast(kind, lambdas, 2)?)?),
        ModelKind::Pcl => GevModel::pcl(n, &broadcast(kind, lambdas, 1).or_else(|_| broadcast(kind, lambdas, n * (n - 1) / 2))?)?,
        ModelKind::Ogev => {
            let l = broadcast(kind, lambdas, n + 1)?;
            GevModel::ogev(n, 1, &[0.5, 0.5], &l)?
        }
        ModelKind::Pdgev => {
            let l = broadcast(kind, lambdas, 2)?;
            let dims = [
                AttributeDim { levels: (0..n).map(|i| i % 2).collect(), alpha: 0.5, lambda: l[0] },
                AttributeDim { levels: (0..n).map(|i| usize::from(2 * i >= n)).collect(), alpha: 0.5, lambda: l[1] },
            ];
            GevModel::pdgev(n, &dims)?
        }
    };
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_have_requested_min_lambda() {
        for kind in ModelKind::ALL {
            let lambdas: &[f64] = if kind == ModelKind::Mnl { &[] } else { &[0.5] };
            let m = build(kind, 10, lambdas).unwrap();
            assert_eq!(m.kind(), kind);
            let expect = if kind == ModelKind::Mnl { 1.0 } else { 3.0 };
            assert!((m.lipschitz_numerator() - expect).abs() < 1e-15, "{kind}");
        }
    }

    #[test]
    fn bad_lambda_is_reported() {
        let err = build(ModelKind::Nl, 4, &[1.5]).unwrap_err().to_string();
        assert!(err.contains("lambda out of (0,1]"), "{err}");
        assert!(build(ModelKind::Mnl, 4, &[0.5]).is_err());
        assert!(build(ModelKind::Nl, 4, &[0.5, 0.5, 0.5]).is_err());
    }
}
