use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use gevregret_core::gev::ModelKind;
use gevregret_core::learners::{optimal_eta, BoundVariant};
use serde::Serialize;

use crate::config;
use crate::presets;

/// Row order of the summary table.
pub const ROWS: [ModelKind; 7] =
    [ModelKind::Gnl, ModelKind::Pcl, ModelKind::Cnl, ModelKind::Ogev, ModelKind::Pdgev, ModelKind::Nl, ModelKind::Mnl];

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long = "T", default_value_t = 10_000)]
    t: usize,
    #[arg(long, default_value_t = 1.0)]
    u_max: f64,
    /// Smallest nest scale; every non-logit row uses a model whose nests all
    /// have this scale.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Restrict to these families.
    #[arg(long, value_delimiter = ',')]
    models: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the rows as JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One family at the requested size. `eta`/`bound` use `log N`; the
/// `_thm1` pair uses `φ(0) = log G(1) + γ` and the `_thm2` pair `log G(1)`
/// of the concrete layout.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub model: String,
    pub lambda_min: f64,
    /// `2 / min λ − 1`.
    pub lipschitz: f64,
    pub log_n: f64,
    pub log_g1: f64,
    pub eta: Option<f64>,
    pub bound: Option<f64>,
    pub eta_thm1: f64,
    pub bound_thm1: f64,
    pub eta_thm2: Option<f64>,
    pub bound_thm2: Option<f64>,
}

pub fn rows(kinds: &[ModelKind], n: usize, t: usize, u_max: f64, lambda: f64) -> Result<Vec<Row>> {
    kinds
        .iter()
        .map(|&kind| {
            let lambdas: &[f64] = if kind == ModelKind::Mnl { &[] } else { &[lambda] };
            let m = presets::build(kind, n, lambdas)?;
            let thm1 = optimal_eta(&m, t, u_max, BoundVariant::Thm1)?;
            let thm2 = optimal_eta(&m, t, u_max, BoundVariant::Thm2).ok();
            let log_n = optimal_eta(&m, t, u_max, BoundVariant::LogN).ok();
            Ok(Row {
                model: if kind == ModelKind::Mnl { "logit".into() } else { kind.name().into() },
                lambda_min: m.nests().min_lambda(),
                lipschitz: m.lipschitz_numerator(),
                log_n: (n as f64).ln(),
                log_g1: m.log_generator_at_ones(),
                eta: log_n.map(|x| x.eta),
                bound: log_n.map(|x| x.bound),
                eta_thm1: thm1.eta,
                bound_thm1: thm1.bound,
                eta_thm2: thm2.map(|x| x.eta),
                bound_thm2: thm2.map(|x| x.bound),
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6}"))
}

pub fn run(a: Args) -> Result<()> {
    if a.n == 0 {
        bail!("n must be at least 1");
    }
    let kinds: Vec<ModelKind> = if a.models.is_empty() || a.models.iter().any(|m| m == "all") {
        ROWS.to_vec()
    } else {
        a.models.iter().map(|m| if m == "logit" { Ok(ModelKind::Mnl) } else { Ok(m.parse::<ModelKind>()?) }).collect::<Result<_>>()?
    };
    let rows = rows(&kinds, a.n, a.t, a.u_max, a.lambda)?;
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("model,lambda_min,lipschitz,eta,bound,eta_thm1,bound_thm1,eta_thm2,bound_thm2");
            let f = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.16e}"));
            for r in &rows {
                println!(
                    "{},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{},{}",
                    r.model,
                    r.lambda_min,
                    r.lipschitz,
                    f(r.eta),
                    f(r.bound),
                    r.eta_thm1,
                    r.bound_thm1,
                    f(r.eta_thm2),
                    f(r.bound_thm2)
                );
            }
        }
        Format::Table => {
            println!("N = {}, T = {}, u_max = {}, lambda = {}", a.n, a.t, a.u_max, a.lambda);
            println!(
                "{:<7} {:>8} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
                "model", "min_lam", "2/lam-1", "eta(logN)", "bound(logN)", "eta(phi0)", "bound(phi0)", "eta(logG1)", "bound(logG1)"
            );
            for r in &rows {
                println!(
                    "{:<7} {:>8.4} {:>10.4} {:>12} {:>12} {:>12.6} {:>12.6} {:>12} {:>12}",
                    r.model,
                    r.lambda_min,
                    r.lipschitz,
                    opt(r.eta),
                    opt(r.bound),
                    r.eta_thm1,
                    r.bound_thm1,
                    opt(r.eta_thm2),
                    opt(r.bound_thm2)
                );
            }
        }
    }
    if let Some(path) = &a.out {
        config::write_json(path, &rows)?;
    }
    Ok(())
}
