//! Price/return panels and distribution summary statistics.
//!
//! A panel holds aligned, date-sorted series for `N` assets. Prices are
//! strictly positive levels; returns are arithmetic (`p_t / p_{t-1} - 1`),
//! which aggregate linearly under portfolio weighting.

use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::math;

/// What to do with rows containing missing or unparseable price cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    /// Drop the whole row (default).
    #[default]
    DropRow,
    /// Carry the previous observation forward. Rows before the first
    /// complete observation of an asset are dropped.
    ForwardFill,
}

/// Column mapping for [`load_price_csv`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LoadSchema {
    /// Name of the date column; default: the first column.
    pub date_column: Option<String>,
    /// Asset columns to keep; default: every non-date column.
    pub asset_columns: Option<Vec<String>>,
    /// Missing-cell policy.
    #[serde(default)]
    pub missing_policy: MissingPolicy,
}

/// Dated price levels for `N` assets, aligned and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricePanel {
    dates: Vec<NaiveDate>,
    asset_ids: Vec<String>,
    /// `prices[a][t]`, asset-major.
    prices: Vec<Vec<f64>>,
}

/// Dated arithmetic returns for `N` assets; one fewer column than prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnPanel {
    dates: Vec<NaiveDate>,
    asset_ids: Vec<String>,
    /// `returns[a][t]`, asset-major.
    returns: Vec<Vec<f64>>,
}

/// Per-series moments in the raw-kurtosis convention (normal = 3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation (n−1 denominator).
    pub std_dev: f64,
    /// Standardized third central moment.
    pub skewness: f64,
    /// Standardized fourth central moment, raw (normal = 3).
    pub kurtosis: f64,
}

impl PricePanel {
    /// Build a panel from parallel vectors; validates every invariant.
    pub fn new(dates: Vec<NaiveDate>, asset_ids: Vec<String>, prices: Vec<Vec<f64>>) -> Result<Self> {
        if asset_ids.is_empty() {
            return Err(CoreError::data("price panel needs at least one asset"));
        }
        if prices.len() != asset_ids.len() {
            return Err(CoreError::data("asset id / price series count mismatch"));
        }
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(CoreError::data(format!("duplicate date or unsorted dates: {}", w[1])));
            }
        }
        for (id, series) in asset_ids.iter().zip(&prices) {
            if series.len() != dates.len() {
                return Err(CoreError::data(format!("asset {id}: series length != date count")));
            }
            if let Some(p) = series.iter().find(|p| !p.is_finite() || **p <= 0.0) {
                return Err(CoreError::data(format!("asset {id}: non-positive price {p}")));
            }
        }
        Ok(Self { dates, asset_ids, prices })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn asset_ids(&self) -> &[String] {
        &self.asset_ids
    }

    pub fn n_assets(&self) -> usize {
        self.asset_ids.len()
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }

    pub fn series(&self, asset: usize) -> &[f64] {
        &self.prices[asset]
    }
}

impl ReturnPanel {
    /// Build a return panel; every return must exceed −1.
    pub fn new(dates: Vec<NaiveDate>, asset_ids: Vec<String>, returns: Vec<Vec<f64>>) -> Result<Self> {
        if asset_ids.is_empty() {
            return Err(CoreError::data("return panel needs at least one asset"));
        }
        if returns.len() != asset_ids.len() {
            return Err(CoreError::data("asset id / return series count mismatch"));
        }
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(CoreError::data(format!("duplicate date or unsorted dates: {}", w[1])));
            }
        }
        for (id, series) in asset_ids.iter().zip(&returns) {
            if series.len() != dates.len() {
                return Err(CoreError::data(format!("asset {id}: series length != date count")));
            }
            if let Some(r) = series.iter().find(|r| !r.is_finite() || **r <= -1.0) {
                return Err(CoreError::data(format!("asset {id}: invalid return {r}")));
            }
        }
        Ok(Self { dates, asset_ids, returns })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn asset_ids(&self) -> &[String] {
        &self.asset_ids
    }

    pub fn n_assets(&self) -> usize {
        self.asset_ids.len()
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }

    pub fn series(&self, asset: usize) -> &[f64] {
        &self.returns[asset]
    }

    /// Cross-section of returns at date index `t`.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.returns.iter().map(|s| s[t]).collect()
    }

    /// Panel restricted to date indices `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> ReturnPanel {
        ReturnPanel {
            dates: self.dates[start..end].to_vec(),
            asset_ids: self.asset_ids.clone(),
            returns: self.returns.iter().map(|s| s[start..end].to_vec()).collect(),
        }
    }

    /// Write as CSV: `date` column followed by one column per asset.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "date")?;
        for id in &self.asset_ids {
            write!(w, ",{id}")?;
        }
        writeln!(w)?;
        for (t, d) in self.dates.iter().enumerate() {
            write!(w, "{d}")?;
            for s in &self.returns {
                write!(w, ",{}", s[t])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Parse a price CSV: header row, ISO-8601 date column, numeric asset columns.
///
/// Rows with a missing or unparseable price cell are handled per
/// `schema.missing_policy`; malformed dates, non-positive prices and
/// duplicate dates are hard errors.
pub fn load_price_csv(path: &Path, schema: &LoadSchema) -> Result<PricePanel> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if headers.len() < 2 {
        return Err(CoreError::data("need a date column and at least one asset column"));
    }

    let date_col = match &schema.date_column {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CoreError::data(format!("date column '{name}' not found")))?,
        None => 0,
    };
    let asset_cols: Vec<usize> = match &schema.asset_columns {
        Some(wanted) => wanted
            .iter()
            .map(|name| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| CoreError::data(format!("asset column '{name}' not found")))
            })
            .collect::<Result<_>>()?,
        None => (0..headers.len()).filter(|&i| i != date_col).collect(),
    };
    if asset_cols.is_empty() {
        return Err(CoreError::data("no asset columns selected"));
    }
    let asset_ids: Vec<String> = asset_cols.iter().map(|&i| headers[i].clone()).collect();

    let mut rows: Vec<(NaiveDate, Vec<Option<f64>>)> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let date_str = record.get(date_col).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d")
            .map_err(|_| CoreError::data(format!("malformed date '{date_str}'")))?;
        let mut cells = Vec::with_capacity(asset_cols.len());
        for &c in &asset_cols {
            let raw = record.get(c).unwrap_or("").trim();
            if raw.is_empty() {
                cells.push(None);
            } else {
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => {
                        if v <= 0.0 {
                            return Err(CoreError::data(format!("non-positive price {v} on {date}")));
                        }
                        cells.push(Some(v));
                    }
                    _ => cells.push(None),
                }
            }
        }
        rows.push((date, cells));
    }
    if rows.is_empty() {
        return Err(CoreError::data("price file has no data rows"));
    }

    rows.sort_by_key(|(d, _)| *d);
    for w in rows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(CoreError::data(format!("duplicate date {}", w[0].0)));
        }
    }

    let n = asset_ids.len();
    let mut dates = Vec::new();
    let mut prices: Vec<Vec<f64>> = vec![Vec::new(); n];
    match schema.missing_policy {
        MissingPolicy::DropRow => {
            for (date, cells) in rows {
                if cells.iter().all(Option::is_some) {
                    dates.push(date);
                    for (a, cell) in cells.into_iter().enumerate() {
                        prices[a].push(cell.unwrap());
                    }
                }
            }
        }
        MissingPolicy::ForwardFill => {
            let mut last: Vec<Option<f64>> = vec![None; n];
            for (date, cells) in rows {
                for (a, cell) in cells.iter().enumerate() {
                    if cell.is_some() {
                        last[a] = *cell;
                    }
                }
                if last.iter().all(Option::is_some) {
                    dates.push(date);
                    for (a, v) in last.iter().enumerate() {
                        prices[a].push(v.unwrap());
                    }
                }
            }
        }
    }
    if dates.is_empty() {
        return Err(CoreError::data("no complete rows after applying missing-data policy"));
    }
    PricePanel::new(dates, asset_ids, prices)
}

/// Arithmetic returns `r_t = p_t / p_{t-1} - 1`, per asset.
///
/// The return dated `d_t` is the move from `d_{t-1}` to `d_t`; the first
/// price date is consumed.
pub fn to_arithmetic_returns(panel: &PricePanel) -> Result<ReturnPanel> {
    if panel.n_dates() < 2 {
        return Err(CoreError::data("need at least two price dates for returns"));
    }
    let dates = panel.dates()[1..].to_vec();
    let returns = panel
        .prices
        .iter()
        .map(|s| s.windows(2).map(|w| w[1] / w[0] - 1.0).collect())
        .collect();
    ReturnPanel::new(dates, panel.asset_ids.clone(), returns)
}

/// Mean, sample standard deviation and standardized third/fourth central
/// moments of a series. Kurtosis is raw (normal = 3).
pub fn summary_stats(series: &[f64]) -> Result<SummaryStats> {
    if series.len() < 4 {
        return Err(CoreError::data("summary stats need at least 4 observations"));
    }
    math::require_finite("summary_stats", series)?;
    let m = math::mean(series);
    let m2 = math::central_moment(series, 2);
    if m2 <= 0.0 {
        return Err(CoreError::numeric("zero variance: skewness/kurtosis undefined"));
    }
    let m3 = math::central_moment(series, 3);
    let m4 = math::central_moment(series, 4);
    Ok(SummaryStats {
        mean: m,
        std_dev: math::sample_variance(series).sqrt(),
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
    })
}

impl SummaryStats {
    /// CSV header matching the reporting column order.
    pub const CSV_HEADER: &'static str = "mean,std_dev,skewness,kurtosis";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.mean, self.std_dev, self.skewness, self.kurtosis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write as _;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn write_temp(content: &str) -> temppath::TempPath {
        temppath::TempPath::new(content)
    }

    // Minimal scoped temp-file helper so the crate has no tempfile dependency.
    mod temppath {
        use std::path::{Path, PathBuf};
        use std::sync::atomic::{AtomicU64, Ordering};

        static COUNTER: AtomicU64 = AtomicU64::new(0);

        pub struct TempPath(PathBuf);

        impl TempPath {
            pub fn new(content: &str) -> Self {
                let n = COUNTER.fetch_add(1, Ordering::SeqCst);
                let p = std::env::temp_dir().join(format!(
                    "rsmom-panel-test-{}-{n}.csv",
                    std::process::id()
                ));
                std::fs::write(&p, content).unwrap();
                TempPath(p)
            }

            pub fn path(&self) -> &Path {
                &self.0
            }
        }

        impl Drop for TempPath {
            fn drop(&mut self) {
                let _ = std::fs::remove_file(&self.0);
            }
        }
    }

    #[test]
    fn loads_well_formed_file() {
        let f = write_temp("date,A,B\n2020-01-01,100,50\n2020-01-02,110,49\n2020-01-03,105,51\n");
        let panel = load_price_csv(f.path(), &LoadSchema::default()).unwrap();
        assert_eq!(panel.n_dates(), 3);
        assert_eq!(panel.n_assets(), 2);
        assert_eq!(panel.series(0), &[100.0, 110.0, 105.0]);
    }

    #[test]
    fn duplicate_date_rejected() {
        let f = write_temp("date,A\n2020-01-01,100\n2020-01-01,101\n");
        let err = load_price_csv(f.path(), &LoadSchema::default()).unwrap_err();
        assert!(err.to_string().contains("duplicate date"), "{err}");
    }

    #[test]
    fn malformed_date_rejected() {
        let f = write_temp("date,A\n01/02/2020,100\n");
        let err = load_price_csv(f.path(), &LoadSchema::default()).unwrap_err();
        assert!(err.to_string().contains("malformed date"), "{err}");
    }

    #[test]
    fn nonpositive_price_rejected() {
        let f = write_temp("date,A\n2020-01-01,100\n2020-01-02,-3\n");
        let err = load_price_csv(f.path(), &LoadSchema::default()).unwrap_err();
        assert!(err.to_string().contains("non-positive price"), "{err}");
    }

    #[test]
    fn drop_row_policy_shrinks_panel() {
        let f = write_temp("date,A,B\n2020-01-01,100,50\n2020-01-02,,49\n2020-01-03,105,51\n");
        let panel = load_price_csv(f.path(), &LoadSchema::default()).unwrap();
        assert_eq!(panel.n_dates(), 2);
        assert_eq!(panel.series(0), &[100.0, 105.0]);
    }

    #[test]
    fn forward_fill_policy_fills_gap() {
        let f = write_temp("date,A,B\n2020-01-01,100,50\n2020-01-02,,49\n2020-01-03,105,51\n");
        let schema = LoadSchema { missing_policy: MissingPolicy::ForwardFill, ..Default::default() };
        let panel = load_price_csv(f.path(), &schema).unwrap();
        assert_eq!(panel.n_dates(), 3);
        assert_eq!(panel.series(0), &[100.0, 100.0, 105.0]);
    }

    #[test]
    fn returns_match_definition() {
        let panel = PricePanel::new(
            vec![date("2020-01-01"), date("2020-01-02")],
            vec!["A".into()],
            vec![vec![100.0, 110.0]],
        )
        .unwrap();
        let r = to_arithmetic_returns(&panel).unwrap();
        assert_eq!(r.n_dates(), 1);
        assert_relative_eq!(r.series(0)[0], 0.10, epsilon = 1e-15);
    }

    #[test]
    fn constant_prices_zero_returns() {
        let panel = PricePanel::new(
            vec![date("2020-01-01"), date("2020-01-02"), date("2020-01-03")],
            vec!["A".into()],
            vec![vec![50.0, 50.0, 50.0]],
        )
        .unwrap();
        let r = to_arithmetic_returns(&panel).unwrap();
        assert_eq!(r.series(0), &[0.0, 0.0]);
    }

    #[test]
    fn down_then_up_returns() {
        let panel = PricePanel::new(
            vec![date("2020-01-01"), date("2020-01-02"), date("2020-01-03")],
            vec!["A".into()],
            vec![vec![100.0, 80.0, 100.0]],
        )
        .unwrap();
        let r = to_arithmetic_returns(&panel).unwrap();
        assert_relative_eq!(r.series(0)[0], -0.20, epsilon = 1e-15);
        assert_relative_eq!(r.series(0)[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn single_date_errors() {
        let panel = PricePanel::new(vec![date("2020-01-01")], vec!["A".into()], vec![vec![1.0]]).unwrap();
        assert!(to_arithmetic_returns(&panel).is_err());
    }

    #[test]
    fn symmetric_sample_zero_skew() {
        let s = summary_stats(&[-1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(s.skewness, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn two_point_sample_kurtosis_one() {
        let s = summary_stats(&[-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert_relative_eq!(s.kurtosis, 1.0, epsilon = 1e-14);
        assert_relative_eq!(s.mean, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn normal_draws_kurtosis_near_three() {
        use rand::Rng as _;
        use rand_distr::StandardNormal;
        let mut rng = crate::rng::rng_from_seed(11);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let s = summary_stats(&xs).unwrap();
        assert!((s.kurtosis - 3.0).abs() < 0.1, "kurtosis {}", s.kurtosis);
    }

    #[test]
    fn too_short_and_degenerate_error() {
        assert!(summary_stats(&[1.0, 2.0, 3.0]).is_err());
        assert!(summary_stats(&[2.0, 2.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn compounding_reconstructs_prices() {
        let panel = PricePanel::new(
            vec![date("2020-01-01"), date("2020-01-02"), date("2020-01-03"), date("2020-01-06")],
            vec!["A".into()],
            vec![vec![100.0, 93.5, 101.25, 99.875]],
        )
        .unwrap();
        let r = to_arithmetic_returns(&panel).unwrap();
        let mut p = panel.series(0)[0];
        for (t, ret) in r.series(0).iter().enumerate() {
            p *= 1.0 + ret;
            let target = panel.series(0)[t + 1];
            assert!((p - target).abs() / target < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip_writes_header_and_rows() {
        let panel = ReturnPanel::new(
            vec![date("2020-01-02"), date("2020-01-03")],
            vec!["A".into(), "B".into()],
            vec![vec![0.1, -0.2], vec![0.0, 0.05]],
        )
        .unwrap();
        let mut buf = Vec::new();
        panel.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "date,A,B");
        assert_eq!(lines.next().unwrap(), "2020-01-02,0.1,0");
        let _ = writeln!(std::io::sink(), "{text}");
    }
}
