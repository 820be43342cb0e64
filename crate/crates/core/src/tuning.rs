//! Cross-validated grid search over the superlevel threshold and the
//! overlap threshold.
//!
//! The detector has no trained state: every fold is scored by running the
//! detector once over all tuning years and restricting the metric to the
//! fold's years. The folds therefore only shape the averaging, not the fit.

use alloc::format;
use alloc::vec::Vec;

use crate::calendar::Date;
use crate::detection::{tracking_candidates, Connectivity, Linkage, DEFAULT_MIN_DAYS};
use crate::error::{invalid_arg, Error, Result};
use crate::evaluation::{Confusion, DailyLabels, DateWindow};
use crate::grid::DailyFieldSeries;
use crate::par;

/// Quantity maximized per fold.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Objective {
    #[default]
    F1,
    /// `-|precision - recall|`.
    PrecisionRecallBalance,
}

impl Objective {
    fn evaluate(self, confusion: &Confusion) -> f64 {
        let report = confusion.report();
        match self {
            Objective::F1 => report.f1,
            Objective::PrecisionRecallBalance => -(report.precision - report.recall).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneConfig {
    pub lambda_grid: Vec<f64>,
    pub overlap_grid: Vec<f64>,
    pub n_folds: usize,
    pub min_days: usize,
    pub connectivity: Connectivity,
    pub window: DateWindow,
    pub objective: Objective,
}

impl Default for TuneConfig {
    /// `lambda` in 1.0, 1.1, ..., 2.0 and `C` in 5, 6, ..., 40 with five folds.
    fn default() -> Self {
        TuneConfig {
            lambda_grid: grid_range(1.0, 2.0, 0.1).unwrap(),
            overlap_grid: grid_range(5.0, 40.0, 1.0).unwrap(),
            n_folds: 5,
            min_days: DEFAULT_MIN_DAYS,
            connectivity: Connectivity::Four,
            window: DateWindow::Jja,
            objective: Objective::F1,
        }
    }
}

/// Inclusive arithmetic range `start, start + step, ..., end`, with each
/// value rounded to 9 decimals so that e.g. `1.0:2.0:0.1` yields exactly
/// the literals `1.1`, `1.2`, ...
pub fn grid_range(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(invalid_arg!("bad grid range {start}:{end}:{step}"));
    }
    let n = libm::floor((end - start) / step + 1e-9) as usize + 1;
    Ok((0..n).map(|i| libm::round((start + i as f64 * step) * 1e9) / 1e9).collect())
}

/// Objective values of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScore {
    pub lambda: f64,
    pub overlap: f64,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub best_lambda: f64,
    pub best_overlap: f64,
    pub best_mean: f64,
    /// Every grid point, ordered by lambda then C.
    pub surface: Vec<GridScore>,
    /// (year, fold) for every tuning year.
    pub folds: Vec<(i32, usize)>,
}

/// The chronologically first `ceil(Y / 2)` years.
pub fn tuning_years(years: &[i32]) -> &[i32] {
    &years[..years.len().div_ceil(2)]
}

/// Contiguous blocks of years; the first `len % k` folds hold one extra year.
pub fn assign_folds(years: &[i32], n_folds: usize) -> Result<Vec<(i32, usize)>> {
    if n_folds == 0 || n_folds > years.len() {
        return Err(invalid_arg!("{n_folds} folds for {} tuning years", years.len()));
    }
    let base = years.len() / n_folds;
    let extra = years.len() % n_folds;
    let mut out = Vec::with_capacity(years.len());
    let mut it = years.iter();
    for fold in 0..n_folds {
        let size = base + usize::from(fold < extra);
        out.extend(it.by_ref().take(size).map(|&y| (y, fold)));
    }
    Ok(out)
}

/// Grid search maximizing the mean per-fold objective.
///
/// Ties go to the smaller lambda, then the smaller C.
pub fn tune(series: &DailyFieldSeries, truth: &DailyLabels, config: &TuneConfig) -> Result<TuneResult> {
    if config.lambda_grid.is_empty() || config.overlap_grid.is_empty() {
        return Err(invalid_arg!("parameter grids must not be empty"));
    }
    if config.lambda_grid.iter().chain(&config.overlap_grid).any(|v| !v.is_finite()) {
        return Err(invalid_arg!("parameter grids must be finite"));
    }
    let years = series.years();
    let tuning = tuning_years(&years);
    let folds = assign_folds(tuning, config.n_folds)?;
    let last_year = *tuning.last().unwrap();
    let subset = series.filter_dates(|d| d.year() <= last_year);

    // Fold of each scored date, and its truth label.
    let scored: Vec<Option<(usize, bool)>> = subset
        .dates()
        .iter()
        .map(|&d| {
            if !config.window.contains(d) {
                return Ok(None);
            }
            let fold = folds.iter().find(|(y, _)| *y == d.year()).map(|(_, f)| *f).unwrap();
            let t = truth.get(d).ok_or_else(|| Error::Alignment(format!("no ground truth for {d}")))?;
            Ok(Some((fold, t)))
        })
        .collect::<Result<_>>()?;

    let per_lambda = par::map_range(config.lambda_grid.len(), |li| -> Result<Vec<GridScore>> {
        let lambda = config.lambda_grid[li];
        let candidates = tracking_candidates(&subset, lambda, config.connectivity)?;
        config
            .overlap_grid
            .iter()
            .map(|&overlap| {
                let blocked = candidates.blocked_days(Linkage::WeightedOverlap(overlap), config.min_days)?;
                let mut per_fold = alloc::vec![Confusion::default(); config.n_folds];
                for (s, p) in scored.iter().zip(blocked) {
                    if let Some((fold, t)) = s {
                        per_fold[*fold].add(p, *t);
                    }
                }
                let fold_scores: Vec<f64> = per_fold.iter().map(|c| config.objective.evaluate(c)).collect();
                let mean = fold_scores.iter().sum::<f64>() / fold_scores.len() as f64;
                Ok(GridScore { lambda, overlap, fold_scores, mean })
            })
            .collect()
    });
    let mut surface = Vec::with_capacity(config.lambda_grid.len() * config.overlap_grid.len());
    for scores in per_lambda {
        surface.extend(scores?);
    }
    surface.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.overlap.total_cmp(&b.overlap)));

    let best = surface.iter().reduce(|best, s| if s.mean > best.mean { s } else { best }).expect("grids are non-empty");
    Ok(TuneResult { best_lambda: best.lambda, best_overlap: best.overlap, best_mean: best.mean, folds, surface })
}

/// Dates of `series` belonging to `fold` of a tuning result.
pub fn fold_dates(series: &DailyFieldSeries, result: &TuneResult, fold: usize) -> Vec<Date> {
    series.dates().iter().copied().filter(|d| result.folds.iter().any(|&(y, f)| f == fold && y == d.year())).collect()
}
