//! Online learning with random-utility choice rules.
//!
//! A learner keeps the cumulative payoff vector `θ_t` and plays the gradient
//! of a social surplus function, `x_{t+1} = ∇φ(θ_t)`. For GEV models the
//! surplus and its gradient have closed forms ([`gev`]); the Monte Carlo
//! perturbed-leader view lives in [`rum`]. [`learners`] holds the update
//! rules, [`env`] the payoff environments and regret accounting, and
//! [`game`] repeated normal-form games and their CCE gap.

pub mod env;
pub mod error;
pub mod exec;
pub mod game;
pub mod gev;
pub mod learners;
pub mod numeric;
pub mod rum;
pub mod seed;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gev::{CumulativePayoff, Eta, GevModel, ModelKind, NestSpec, PayoffVector};
