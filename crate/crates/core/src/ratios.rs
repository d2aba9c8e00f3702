//! Empirical tail-risk measures and reward-risk ratios.
//!
//! Everything here is distribution-free: VaR and AVaR are computed on the
//! empirical distribution of the sample, with AVaR using the exact
//! fractional-tail average (the discrete Rockafellar–Uryasev formula), so
//! positive homogeneity and translation hold exactly.
//!
//! Level convention: [`ConfidenceLevel`] carries the tail mass `γ ∈ (0, 1]`
//! that appears in `AVaR_γ = γ⁻¹ ∫₀^γ VaR_u du`. Colloquial labels such as
//! "STARR(99%)" refer to the worst `1%` tail; the `*_confidence`
//! constructors perform that mapping.

use std::fmt;
use std::io::Write;

use chrono::NaiveDate;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::math;
use crate::rng;

/// Tail probability mass in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceLevel(f64);

impl ConfidenceLevel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(CoreError::invalid(format!("confidence level {gamma} outside (0, 1]")));
        }
        Ok(Self(gamma))
    }

    pub fn gamma(self) -> f64 {
        self.0
    }
}

/// Which reward-risk ratio ranks assets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    Sharpe,
    Starr,
    Rachev,
    CvarRatio,
    CumulativeReturn,
}

/// A fully specified ranking criterion.
///
/// `level_gamma` is the lower-tail mass; `level_beta` the upper-tail mass
/// (Rachev only). With `clip_reward = false` (the ranking default) the signed
/// reward is used so that negative-mean assets still order; `clip_reward =
/// true` applies the positive part verbatim. A nonpositive risk denominator
/// maps to `+∞` rather than an error so rankings stay total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSpec {
    pub kind: RatioKind,
    pub level_beta: Option<ConfidenceLevel>,
    pub level_gamma: Option<ConfidenceLevel>,
    #[serde(default)]
    pub clip_reward: bool,
}

impl RatioSpec {
    pub fn sharpe() -> Self {
        Self { kind: RatioKind::Sharpe, level_beta: None, level_gamma: None, clip_reward: false }
    }

    pub fn cumulative_return() -> Self {
        Self { kind: RatioKind::CumulativeReturn, level_beta: None, level_gamma: None, clip_reward: false }
    }

    /// STARR with lower-tail mass `gamma`.
    pub fn starr(gamma: f64) -> Result<Self> {
        Ok(Self {
            kind: RatioKind::Starr,
            level_beta: None,
            level_gamma: Some(ConfidenceLevel::new(gamma)?),
            clip_reward: false,
        })
    }

    /// STARR labelled by confidence, e.g. `0.99` averages the worst 1%.
    pub fn starr_confidence(confidence: f64) -> Result<Self> {
        Self::starr(tail_from_confidence(confidence)?)
    }

    /// Rachev ratio with upper-tail mass `beta` and lower-tail mass `gamma`.
    pub fn rachev(beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            kind: RatioKind::Rachev,
            level_beta: Some(ConfidenceLevel::new(beta)?),
            level_gamma: Some(ConfidenceLevel::new(gamma)?),
            clip_reward: false,
        })
    }

    /// Rachev labelled by confidence, e.g. `(0.99, 0.99)` compares the top 1%
    /// of gains to the worst 1% of losses.
    pub fn rachev_confidence(beta: f64, gamma: f64) -> Result<Self> {
        Self::rachev(tail_from_confidence(beta)?, tail_from_confidence(gamma)?)
    }

    /// CVaR ratio with lower-tail mass `gamma`.
    pub fn cvar_ratio(gamma: f64) -> Result<Self> {
        Ok(Self {
            kind: RatioKind::CvarRatio,
            level_beta: None,
            level_gamma: Some(ConfidenceLevel::new(gamma)?),
            clip_reward: false,
        })
    }

    pub fn cvar_ratio_confidence(confidence: f64) -> Result<Self> {
        Self::cvar_ratio(tail_from_confidence(confidence)?)
    }

    pub fn with_clip(mut self, clip: bool) -> Self {
        self.clip_reward = clip;
        self
    }

    fn gamma(&self) -> Result<f64> {
        self.level_gamma
            .map(ConfidenceLevel::gamma)
            .ok_or_else(|| CoreError::invalid(format!("{:?} requires level_gamma", self.kind)))
    }

    /// Whether the score is invariant under positive scaling of the sample.
    pub fn is_scale_invariant(&self) -> bool {
        self.kind != RatioKind::CumulativeReturn
    }
}

fn tail_from_confidence(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(CoreError::invalid(format!("confidence {confidence} outside (0, 1)")));
    }
    Ok(1.0 - confidence)
}

impl fmt::Display for RatioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pct = |l: Option<ConfidenceLevel>| 100.0 * (1.0 - l.map(ConfidenceLevel::gamma).unwrap_or(0.0));
        match self.kind {
            RatioKind::Sharpe => write!(f, "Sharpe"),
            RatioKind::CumulativeReturn => write!(f, "CumulativeReturn"),
            RatioKind::Starr => write!(f, "STARR({:.0}%)", pct(self.level_gamma)),
            RatioKind::Rachev => {
                write!(f, "R-ratio({:.0}%,{:.0}%)", pct(self.level_beta), pct(self.level_gamma))
            }
            RatioKind::CvarRatio => write!(f, "CVaR({:.0}%)", pct(self.level_gamma)),
        }
    }
}

/// Empirical Value-at-Risk at tail mass `gamma`: the negated lower
/// `gamma`-quantile, positive for losses.
pub fn var_empirical(sample: &[f64], gamma: ConfidenceLevel) -> Result<f64> {
    math::require_finite("var_empirical", sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    // smallest k (1-based) with k/n >= gamma
    let k = ((gamma.gamma() * n as f64).ceil() as usize).clamp(1, n);
    Ok(-sorted[k - 1])
}

/// Empirical Average Value-at-Risk (expected shortfall) at tail mass `gamma`:
/// the exact average of `VaR_u` over `u ∈ (0, γ]`, i.e. the mean of the worst
/// `γ·n` losses with a fractional top slice.
pub fn avar_empirical(sample: &[f64], gamma: ConfidenceLevel) -> Result<f64> {
    math::require_finite("avar_empirical", sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mass = gamma.gamma() * n as f64;
    let whole = (mass.floor() as usize).min(n);
    let mut acc = 0.0;
    for x in &sorted[..whole] {
        acc += -x;
    }
    let frac = mass - whole as f64;
    if frac > 0.0 && whole < n {
        acc += frac * -sorted[whole];
    }
    Ok(acc / mass)
}

/// Score a return sample under a [`RatioSpec`].
pub fn ratio(sample: &[f64], spec: &RatioSpec) -> Result<f64> {
    if sample.len() < 2 {
        return Err(CoreError::data("ratio needs at least two observations"));
    }
    math::require_finite("ratio", sample)?;
    let clip = |x: f64| if spec.clip_reward { x.max(0.0) } else { x };
    match spec.kind {
        RatioKind::Sharpe => {
            let sd = math::sample_variance(sample).sqrt();
            if sd <= 0.0 {
                return Err(CoreError::numeric("Sharpe undefined: zero variance"));
            }
            Ok(clip(math::mean(sample)) / sd)
        }
        RatioKind::CumulativeReturn => {
            Ok(clip(sample.iter().fold(1.0, |acc, r| acc * (1.0 + r)) - 1.0))
        }
        RatioKind::Starr => {
            let gamma = ConfidenceLevel::new(spec.gamma()?)?;
            let risk = avar_empirical(sample, gamma)?;
            if risk <= 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok(clip(math::mean(sample)) / risk)
        }
        RatioKind::Rachev => {
            let beta = spec
                .level_beta
                .ok_or_else(|| CoreError::invalid("Rachev requires level_beta"))?;
            let gamma = ConfidenceLevel::new(spec.gamma()?)?;
            let negated: Vec<f64> = sample.iter().map(|x| -x).collect();
            let gain = avar_empirical(&negated, beta)?;
            let risk = avar_empirical(sample, gamma)?;
            if risk <= 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok(clip(gain) / risk)
        }
        RatioKind::CvarRatio => {
            let gamma = ConfidenceLevel::new(spec.gamma()?)?;
            let var = var_empirical(sample, gamma)?;
            if var <= 0.0 {
                return Ok(f64::INFINITY);
            }
            let q = -var;
            let tail: Vec<f64> = sample.iter().copied().filter(|&x| x <= q).collect();
            Ok(clip(math::mean(&tail)) / var)
        }
    }
}

/// Trailing-window scores: one per date index `t >= window - 1`, each
/// computed on the `window` observations ending at `t` (no look-ahead).
pub fn rolling_ratio(series: &[f64], spec: &RatioSpec, window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(CoreError::invalid("window must be positive"));
    }
    if series.len() < window {
        return Err(CoreError::data(format!(
            "window {window} longer than series ({})",
            series.len()
        )));
    }
    (window..=series.len())
        .map(|end| ratio(&series[end - window..end], spec))
        .collect()
}

/// Emit dated scores as CSV (`date,ratio_kind,levels,value`); infinities
/// serialize as the literal `inf`.
pub fn write_scores_csv<W: Write>(
    mut w: W,
    dates: &[NaiveDate],
    spec: &RatioSpec,
    scores: &[f64],
) -> Result<()> {
    if dates.len() != scores.len() {
        return Err(CoreError::invalid("dates/scores length mismatch"));
    }
    writeln!(w, "date,ratio_kind,level_beta,level_gamma,value")?;
    let fmt_level = |l: Option<ConfidenceLevel>| match l {
        Some(c) => format!("{}", c.gamma()),
        None => String::new(),
    };
    for (d, v) in dates.iter().zip(scores) {
        writeln!(
            w,
            "{d},{:?},{},{},{v}",
            spec.kind,
            fmt_level(spec.level_beta),
            fmt_level(spec.level_gamma)
        )?;
    }
    Ok(())
}

/// Pass/violation counts for one axiom.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct AxiomCount {
    pub checked: usize,
    pub violations: usize,
}

/// Result of the randomized axiom suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    pub spec: RatioSpec,
    pub trials: usize,
    pub monotonicity: AxiomCount,
    pub quasi_concavity: AxiomCount,
    pub scale_invariance: AxiomCount,
    pub distribution_based: AxiomCount,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.monotonicity.violations == 0
            && self.quasi_concavity.violations == 0
            && self.scale_invariance.violations == 0
            && self.distribution_based.violations == 0
    }
}

const AXIOM_SLACK: f64 = 1e-10;

/// Randomized paired-sample tests of the four reward-risk axioms:
/// monotonicity (`X ≥ Y` pointwise ⇒ score no smaller), quasi-concavity
/// (mixtures score at least the min), scale invariance under `c > 0`, and
/// permutation invariance.
pub fn axiom_suite(spec: &RatioSpec, trials: usize, seed: u64) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(CoreError::invalid("axiom suite needs at least one trial"));
    }
    let mut rng = rng::rng_from_seed(seed);
    let n = 64;
    let mut report = AxiomReport {
        spec: *spec,
        trials,
        monotonicity: AxiomCount::default(),
        quasi_concavity: AxiomCount::default(),
        scale_invariance: AxiomCount::default(),
        distribution_based: AxiomCount::default(),
    };

    let mut draw = |rng: &mut rng::Rng| -> Vec<f64> {
        let shift: f64 = rng.gen_range(-0.5..0.5);
        let scale: f64 = rng.gen_range(0.5..2.0);
        (0..n)
            .map(|_| shift + scale * rng.sample::<f64, _>(StandardNormal))
            .collect()
    };
    // Scores can legitimately hit the +inf sentinel; comparisons below are
    // consistent for those cases (inf >= x, inf == inf).
    let ge = |a: f64, b: f64| a >= b - AXIOM_SLACK * (1.0 + b.abs().min(f64::MAX / 2.0)) || (a.is_infinite() && a > 0.0);
    let eq = |a: f64, b: f64| {
        (a.is_infinite() && b.is_infinite() && a.signum() == b.signum())
            || (a - b).abs() <= AXIOM_SLACK * (1.0 + a.abs().max(b.abs()))
    };

    for _ in 0..trials {
        // Monotonicity: X = Y + U with U >= 0 pointwise.
        let y = draw(&mut rng);
        let x: Vec<f64> = y
            .iter()
            .map(|v| v + rng.sample::<f64, _>(StandardNormal).abs() * 0.3)
            .collect();
        let (sx, sy) = (ratio(&x, spec)?, ratio(&y, spec)?);
        report.monotonicity.checked += 1;
        if !ge(sx, sy) {
            report.monotonicity.violations += 1;
        }

        // Quasi-concavity: score of the mixture vs the pairwise minimum.
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let lambda: f64 = rng.gen_range(0.0..1.0);
        let mix: Vec<f64> = a
            .iter()
            .zip(&b)
            .map(|(u, v)| lambda * u + (1.0 - lambda) * v)
            .collect();
        let (sa, sb, sm) = (ratio(&a, spec)?, ratio(&b, spec)?, ratio(&mix, spec)?);
        report.quasi_concavity.checked += 1;
        if !ge(sm, sa.min(sb)) {
            report.quasi_concavity.violations += 1;
        }

        // Scale invariance under c > 0 (skipped for scale-variant kinds).
        if spec.is_scale_invariant() {
            let c: f64 = rng.gen_range(0.1f64..10.0);
            let scaled: Vec<f64> = a.iter().map(|v| c * v).collect();
            let sc = ratio(&scaled, spec)?;
            report.scale_invariance.checked += 1;
            if !eq(sc, sa) {
                report.scale_invariance.violations += 1;
            }
        }

        // Distribution-based: permutation invariance.
        let mut perm = a.clone();
        for i in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let sp = ratio(&perm, spec)?;
        report.distribution_based.checked += 1;
        if !eq(sp, sa) {
            report.distribution_based.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn level(g: f64) -> ConfidenceLevel {
        ConfidenceLevel::new(g).unwrap()
    }

    #[test]
    fn var_constant_sample() {
        let xs = vec![1.0; 10];
        assert_relative_eq!(var_empirical(&xs, level(0.3)).unwrap(), -1.0);
        assert_relative_eq!(var_empirical(&xs, level(1.0)).unwrap(), -1.0);
    }

    #[test]
    fn var_worst_point_only() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert_relative_eq!(var_empirical(&xs, level(0.2)).unwrap(), 2.0);
    }

    #[test]
    fn var_positive_homogeneity() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let doubled: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        for g in [0.1, 0.2, 0.5, 0.9] {
            let v = var_empirical(&xs, level(g)).unwrap();
            let v2 = var_empirical(&doubled, level(g)).unwrap();
            assert_relative_eq!(v2, 2.0 * v, epsilon = 1e-15);
        }
    }

    #[test]
    fn avar_two_worst_losses() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert_relative_eq!(avar_empirical(&xs, level(0.4)).unwrap(), 1.5);
    }

    #[test]
    fn avar_constant_and_full_mass() {
        let xs = vec![0.7; 6];
        assert_relative_eq!(avar_empirical(&xs, level(0.5)).unwrap(), -0.7);
        assert_relative_eq!(avar_empirical(&xs, level(1.0)).unwrap(), -0.7);
    }

    #[test]
    fn avar_homogeneity_and_translation() {
        let xs = [0.3, -1.2, 0.07, 2.4, -0.6, 0.0, 1.1];
        let g = level(0.37);
        let base = avar_empirical(&xs, g).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| 3.0 * x).collect();
        assert_relative_eq!(avar_empirical(&scaled, g).unwrap(), 3.0 * base, epsilon = 1e-14);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 0.25).collect();
        assert_relative_eq!(avar_empirical(&shifted, g).unwrap(), base - 0.25, epsilon = 1e-14);
    }

    #[test]
    fn avar_fractional_slice_matches_integral() {
        // gamma*n = 1.5: full weight on the worst point, half on the second.
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let got = avar_empirical(&xs, level(0.3)).unwrap();
        assert_relative_eq!(got, (2.0 + 0.5 * 1.0) / 1.5, epsilon = 1e-15);
    }

    #[test]
    fn sharpe_from_benchmark_moments() {
        // Affine-map a sample to the target sample mean/std, then score it.
        let raw = [0.4, -1.3, 0.2, 0.9, -0.1, 2.2, -0.7, 0.05];
        let m = math::mean(&raw);
        let s = math::sample_variance(&raw).sqrt();
        let (target_m, target_s) = (0.000445, 0.010655);
        let mapped: Vec<f64> = raw.iter().map(|x| target_m + (x - m) * target_s / s).collect();
        let score = ratio(&mapped, &RatioSpec::sharpe()).unwrap();
        assert!((score - 0.04176).abs() < 1e-5, "sharpe {score}");
    }

    #[test]
    fn sharpe_zero_variance_errors() {
        assert!(ratio(&[0.5, 0.5, 0.5], &RatioSpec::sharpe()).is_err());
    }

    #[test]
    fn rachev_symmetric_is_one() {
        let xs = [-3.0, -1.0, 0.0, 1.0, 3.0];
        let spec = RatioSpec::rachev(0.4, 0.4).unwrap();
        assert_relative_eq!(ratio(&xs, &spec).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn clipped_starr_zero_for_negative_mean() {
        let xs = [-0.5, -0.2, -0.4, 0.1, -0.3];
        let spec = RatioSpec::starr(0.2).unwrap().with_clip(true);
        assert_relative_eq!(ratio(&xs, &spec).unwrap(), 0.0);
    }

    #[test]
    fn nonpositive_risk_gives_infinity() {
        // All-gain sample: tail "losses" are negative, AVaR <= 0.
        let xs = [0.5, 0.4, 0.6, 0.8, 0.7];
        let spec = RatioSpec::starr(0.4).unwrap();
        assert!(ratio(&xs, &spec).unwrap().is_infinite());
    }

    #[test]
    fn one_point_sample_errors() {
        assert!(ratio(&[0.1], &RatioSpec::sharpe()).is_err());
    }

    #[test]
    fn rolling_full_window_is_single_score() {
        let xs = [0.4, -1.3, 0.2, 0.9, -0.1];
        let spec = RatioSpec::sharpe();
        let scores = rolling_ratio(&xs, &spec, xs.len()).unwrap();
        assert_eq!(scores.len(), 1);
        assert_relative_eq!(scores[0], ratio(&xs, &spec).unwrap());
    }

    #[test]
    fn rolling_counts_and_hand_values() {
        let xs = [1.0, 1.0, 1.0, -1.0, -1.0];
        let scores = rolling_ratio(&xs, &RatioSpec::sharpe(), 4).unwrap();
        assert_eq!(scores.len(), 2);
        // {1,1,1,-1}: mean 0.5, sample std 1.0 ; {1,1,-1,-1}: mean 0.
        assert_relative_eq!(scores[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(scores[1], 0.0, epsilon = 1e-14);

        let five = rolling_ratio(&[0.1, 0.2, -0.1, 0.3, 0.05], &RatioSpec::sharpe(), 3).unwrap();
        assert_eq!(five.len(), 3);
    }

    #[test]
    fn rolling_window_too_long_errors() {
        assert!(rolling_ratio(&[0.1, 0.2], &RatioSpec::sharpe(), 3).is_err());
    }

    #[test]
    fn axiom_suite_clipped_starr_all_pass() {
        let spec = RatioSpec::starr_confidence(0.99).unwrap().with_clip(true);
        let report = axiom_suite(&spec, 400, 7).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn axiom_suite_rachev_scale_and_distribution_pass() {
        let spec = RatioSpec::rachev_confidence(0.95, 0.95).unwrap().with_clip(true);
        let report = axiom_suite(&spec, 400, 11).unwrap();
        assert_eq!(report.scale_invariance.violations, 0);
        assert_eq!(report.distribution_based.violations, 0);
        assert_eq!(report.monotonicity.violations, 0);
        // Quasi-concavity may record counterexamples for the Rachev ratio;
        // nothing to assert either way.
    }

    #[test]
    fn identity_scaling_is_exact() {
        let xs = [0.3, -0.2, 0.15, -0.4, 0.6];
        let spec = RatioSpec::starr(0.4).unwrap();
        let a = ratio(&xs, &spec).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| 1.0 * x).collect();
        assert_eq!(a, ratio(&scaled, &spec).unwrap());
    }

    #[test]
    fn display_labels_use_confidence() {
        assert_eq!(RatioSpec::starr_confidence(0.99).unwrap().to_string(), "STARR(99%)");
        assert_eq!(
            RatioSpec::rachev_confidence(0.95, 0.95).unwrap().to_string(),
            "R-ratio(95%,95%)"
        );
        assert_eq!(RatioSpec::sharpe().to_string(), "Sharpe");
    }

    #[test]
    fn scores_csv_serializes_infinity_as_inf() {
        let spec = RatioSpec::starr(0.2).unwrap();
        let dates = vec![NaiveDate::from_ymd_opt(2021, 3, 1).unwrap()];
        let mut buf = Vec::new();
        write_scores_csv(&mut buf, &dates, &spec, &[f64::INFINITY]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(",inf"), "{text}");
    }
}
