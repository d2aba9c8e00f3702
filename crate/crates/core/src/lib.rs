//! Regime-switching momentum portfolio construction and dynamic allocation.
//!
//! The crate is organised around a pipeline:
//!
//! 1. [`panel`] — price/return ingestion and summary statistics.
//! 2. [`pca`] — factor decomposition of the return panel.
//! 3. [`ratios`] — empirical VaR/AVaR and tail-sensitive reward-risk ratios
//!    (Sharpe, STARR, Rachev, CVaR ratio) used to rank assets.
//! 4. [`momentum`] — formation/holding backtests of winners, losers and the
//!    long-short spread under a turnover cap.
//! 5. [`vol`] — innovation distributions (NIG) and volatility filters
//!    (ARMA-GARCH, ARFIMA-FIGARCH, GJR state recursion).
//! 6. [`regime`] — two-state Markov chain estimation, simulation and the
//!    regime-dependent market price of risk.
//! 7. [`bellman`] — finite-horizon dynamic programming on an (h, D) grid for
//!    a CRRA investor, plus forward wealth simulation.
//! 8. [`frontier`] — scenario-based mean-variance and CVaR-constrained
//!    efficient frontiers.
//!
//! All operations are pure functions over immutable inputs; anything random
//! takes an explicit seed.

pub mod bellman;
pub mod error;
pub mod fixtures;
pub mod frontier;
pub mod math;
pub mod momentum;
pub mod panel;
pub mod pca;
pub mod ratios;
pub mod regime;
pub mod rng;
pub mod vol;

pub use error::{CoreError, Result};
pub use panel::{PricePanel, ReturnPanel, SummaryStats};
pub use ratios::{ConfidenceLevel, RatioKind, RatioSpec};
pub use regime::{RegimePath, RegimePricing, TransitionMatrix};
