//! Principal-component decomposition of a return panel.
//!
//! Fits the eigendecomposition of the sample covariance matrix (optionally
//! the correlation matrix), projects returns onto the retained components,
//! and forms the one-step composite forecast as the row-wise product of a
//! score window with a weight vector.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::math;
use crate::panel::ReturnPanel;

/// Eigenstructure of the panel: per-asset means, orthonormal loading columns
/// and the associated eigenvalues in descending order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorModel {
    pub means: Vec<f64>,
    /// Per-asset scale divisors: all ones for covariance PCA, standard
    /// deviations for correlation PCA.
    pub scales: Vec<f64>,
    /// `loadings[asset][component]`, row-major, columns orthonormal.
    pub loadings: Vec<Vec<f64>>,
    /// Nonnegative, descending.
    pub eigenvalues: Vec<f64>,
    pub asset_ids: Vec<String>,
}

/// Projected factor scores, one row per panel date.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorScores {
    /// `scores[t][component]`.
    pub scores: Vec<Vec<f64>>,
    pub normalized: bool,
}

impl FactorModel {
    pub fn n_assets(&self) -> usize {
        self.means.len()
    }

    pub fn n_components(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Fit PCA on the sample covariance matrix, retaining `k` components.
///
/// Eigenvector signs are fixed deterministically: the largest-magnitude
/// entry of each column is made positive.
pub fn fit_pca(panel: &ReturnPanel, k: usize) -> Result<FactorModel> {
    fit_pca_with(panel, k, false)
}

/// Fit PCA; `use_correlation` standardizes each series first.
pub fn fit_pca_with(panel: &ReturnPanel, k: usize, use_correlation: bool) -> Result<FactorModel> {
    let n = panel.n_assets();
    let t = panel.n_dates();
    if t < 2 {
        return Err(CoreError::data("PCA needs at least two dates"));
    }
    if k == 0 || k > n {
        return Err(CoreError::invalid(format!("component count {k} outside 1..={n}")));
    }

    let means: Vec<f64> = (0..n).map(|a| math::mean(panel.series(a))).collect();
    let scales: Vec<f64> = if use_correlation {
        let s: Vec<f64> = (0..n)
            .map(|a| math::sample_variance(panel.series(a)).sqrt())
            .collect();
        if s.iter().any(|v| *v <= 0.0) {
            return Err(CoreError::numeric("correlation PCA: zero-variance series"));
        }
        s
    } else {
        vec![1.0; n]
    };

    // Sample covariance of the (centered, scaled) panel, n-1 denominator.
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let si = panel.series(i);
        for j in i..n {
            let sj = panel.series(j);
            let mut acc = 0.0;
            for time in 0..t {
                acc += (si[time] - means[i]) / scales[i] * ((sj[time] - means[j]) / scales[j]);
            }
            let c = acc / (t - 1) as f64;
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }

    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let mut eigenvalues = Vec::with_capacity(k);
    let mut loadings = vec![vec![0.0; k]; n];
    for (col, &idx) in order.iter().take(k).enumerate() {
        eigenvalues.push(eig.eigenvalues[idx].max(0.0));
        let v = eig.eigenvectors.column(idx);
        // sign convention: largest-magnitude entry positive
        let mut argmax = 0;
        for r in 1..n {
            if v[r].abs() > v[argmax].abs() {
                argmax = r;
            }
        }
        let sign = if v[argmax] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            loadings[r][col] = sign * v[r];
        }
    }

    Ok(FactorModel {
        means,
        scales,
        loadings,
        eigenvalues,
        asset_ids: panel.asset_ids().to_vec(),
    })
}

/// Per-component variance shares `λ_i / Σλ` and their cumulative sums.
pub fn explained_variance(model: &FactorModel) -> (Vec<f64>, Vec<f64>) {
    let total: f64 = model.eigenvalues.iter().sum();
    let shares: Vec<f64> = model.eigenvalues.iter().map(|l| l / total).collect();
    let mut cum = Vec::with_capacity(shares.len());
    let mut acc = 0.0;
    for s in &shares {
        acc += s;
        cum.push(acc);
    }
    (shares, cum)
}

/// Project a panel onto the model: `f_t = P'((r_t − r̄) / scale)`.
/// With `normalize` each score column is standardized to mean 0, variance 1.
pub fn project_scores(model: &FactorModel, panel: &ReturnPanel, normalize: bool) -> Result<FactorScores> {
    if panel.n_assets() != model.n_assets() || panel.asset_ids() != model.asset_ids {
        return Err(CoreError::data("panel assets do not match the fitted model"));
    }
    let k = model.n_components();
    let t = panel.n_dates();
    let mut scores = vec![vec![0.0; k]; t];
    for time in 0..t {
        for (a, (mean, scale)) in model.means.iter().zip(&model.scales).enumerate() {
            let centered = (panel.series(a)[time] - mean) / scale;
            for c in 0..k {
                scores[time][c] += model.loadings[a][c] * centered;
            }
        }
    }
    if normalize {
        for c in 0..k {
            let col: Vec<f64> = scores.iter().map(|row| row[c]).collect();
            let m = math::mean(&col);
            let sd = math::sample_variance(&col).sqrt();
            if sd <= 0.0 {
                return Err(CoreError::numeric(format!("factor {c} has zero variance; cannot normalize")));
            }
            for row in scores.iter_mut() {
                row[c] = (row[c] - m) / sd;
            }
        }
    }
    Ok(FactorScores { scores, normalized: normalize })
}

/// Returns of the synthetic factor portfolios `P' r_t` (uncentered), one
/// series per retained component. These are investable linear combinations
/// of the underlying assets and feed the momentum backtest.
pub fn factor_portfolio_returns(model: &FactorModel, panel: &ReturnPanel) -> Result<ReturnPanel> {
    if panel.n_assets() != model.n_assets() {
        return Err(CoreError::data("panel assets do not match the fitted model"));
    }
    let k = model.n_components();
    let t = panel.n_dates();
    let mut series = vec![vec![0.0; t]; k];
    for time in 0..t {
        for a in 0..model.n_assets() {
            let r = panel.series(a)[time] / model.scales[a];
            for (c, out) in series.iter_mut().enumerate() {
                out[time] += model.loadings[a][c] * r;
            }
        }
    }
    let ids: Vec<String> = (1..=k).map(|c| format!("PC{c:02}")).collect();
    ReturnPanel::new(panel.dates().to_vec(), ids, series)
}

/// Row-wise inner product of a score window with factor weights:
/// the one-period-ahead composite return series.
pub fn forecast_portfolio_return(scores_window: &[Vec<f64>], weights: &[f64]) -> Result<Vec<f64>> {
    for row in scores_window {
        if row.len() != weights.len() {
            return Err(CoreError::invalid(format!(
                "weight length {} does not match score width {}",
                weights.len(),
                row.len()
            )));
        }
    }
    Ok(scores_window
        .iter()
        .map(|row| row.iter().zip(weights).map(|(s, w)| s * w).sum())
        .collect())
}
