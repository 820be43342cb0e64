//! Dole–Gordon style blocking index with a variable threshold.
//!
//! A cell is a candidate when its anomaly (meters) reaches
//! `max(floor, sigma_multiplier * smoothed_std)`. Candidate regions are
//! linked across days when they share at least one cell and must persist for
//! the usual minimum number of days.

use alloc::format;
use alloc::vec::Vec;

use crate::climatology::SeasonalCycle;
use crate::detection::{
    components_of_mask, label_blocking, Connectivity, Detection, Linkage, TrackingCandidates, DEFAULT_MIN_DAYS,
};
use crate::error::{invalid_arg, Error, Result};
use crate::evaluation::{DailyLabels, DateWindow};
use crate::grid::DailyFieldSeries;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dg83Config {
    pub sigma_multiplier: f64,
    /// Minimum threshold in meters.
    pub floor: f64,
    pub min_days: usize,
    pub min_overlap_cells: usize,
    /// Scale anomalies by `sin 45° / sin(lat)` before thresholding.
    pub latitude_rescale: bool,
    pub connectivity: Connectivity,
}

impl Default for Dg83Config {
    fn default() -> Self {
        Dg83Config {
            sigma_multiplier: 1.5,
            floor: 100.0,
            min_days: DEFAULT_MIN_DAYS,
            min_overlap_cells: 1,
            latitude_rescale: false,
            connectivity: Connectivity::Four,
        }
    }
}

impl Dg83Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_multiplier > 0.0) || !(self.floor > 0.0) || self.min_days == 0 || self.min_overlap_cells == 0 {
            return Err(invalid_arg!("DG83 parameters must all be positive"));
        }
        Ok(())
    }

    /// Anomaly threshold (meters) for a cell with smoothed std `std`.
    pub fn threshold(&self, std: f64) -> f64 {
        let scaled = self.sigma_multiplier * std;
        if scaled > self.floor {
            scaled
        } else {
            self.floor
        }
    }
}

/// Runs the DG83 index on detrended anomalies in meters.
pub fn dg83_detect(anomalies: &DailyFieldSeries, cycle: &SeasonalCycle, config: &Dg83Config) -> Result<Detection> {
    config.validate()?;
    if anomalies.grid() != cycle.grid() || anomalies.calendar() != cycle.calendar() {
        return Err(Error::ShapeMismatch("anomalies and climatology differ in grid or calendar".into()));
    }
    let grid = anomalies.grid();
    let shape = grid.shape();
    let calendar = anomalies.calendar();
    let row_scale: Vec<f64> = if config.latitude_rescale {
        let sin45 = libm::sin(45f64.to_radians());
        grid.lat()
            .iter()
            .map(|&lat| {
                if lat > 0.0 {
                    Ok(sin45 / libm::sin(lat.to_radians()))
                } else {
                    Err(invalid_arg!("latitude rescaling needs latitudes north of the equator, got {lat}"))
                }
            })
            .collect::<Result<_>>()?
    } else {
        alloc::vec![1.0; shape.n_lat]
    };

    let days = par::map_range(anomalies.n_dates(), |t| {
        let date = anomalies.dates()[t];
        let doy = calendar.day_of_year(date);
        let mask: Vec<bool> = anomalies
            .day(t)
            .iter()
            .enumerate()
            .map(|(cell, &v)| v * row_scale[cell / shape.n_lon] >= config.threshold(cycle.smoothed_std.at(doy, cell)))
            .collect();
        (date, components_of_mask(&mask, grid, date, config.connectivity))
    });
    let graph =
        TrackingCandidates::new(days, calendar, grid)?.into_graph(Linkage::SharedCells(config.min_overlap_cells))?;
    let labels = label_blocking(&graph, config.min_days);
    Ok(Detection { labels, graph })
}

/// Who got a day right, for one ground-truth class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutcomeSplit {
    pub only_ours_correct: usize,
    pub only_dg83_correct: usize,
    pub both_correct: usize,
    pub both_incorrect: usize,
}

impl OutcomeSplit {
    pub fn total(&self) -> usize {
        self.only_ours_correct + self.only_dg83_correct + self.both_correct + self.both_incorrect
    }

    fn add(&mut self, ours_correct: bool, dg83_correct: bool) {
        match (ours_correct, dg83_correct) {
            (true, true) => self.both_correct += 1,
            (true, false) => self.only_ours_correct += 1,
            (false, true) => self.only_dg83_correct += 1,
            (false, false) => self.both_incorrect += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DisagreementCounts {
    /// Days the ground truth marks blocked.
    pub blocked: OutcomeSplit,
    /// Days the ground truth marks not blocked.
    pub not_blocked: OutcomeSplit,
}

/// Splits the dates inside `window` by which method matched the truth.
pub fn disagreement_table(
    ours: &DailyLabels,
    dg83: &DailyLabels,
    truth: &DailyLabels,
    window: &DateWindow,
) -> Result<DisagreementCounts> {
    if !ours.dates().eq(dg83.dates()) {
        return Err(Error::Alignment("the two detections cover different dates".into()));
    }
    let mut counts = DisagreementCounts::default();
    for ((date, a), (_, b)) in ours.iter().zip(dg83.iter()) {
        if !window.contains(date) {
            continue;
        }
        let t = truth.get(date).ok_or_else(|| Error::Alignment(format!("no ground truth for {date}")))?;
        let split = if t { &mut counts.blocked } else { &mut counts.not_blocked };
        split.add(a == t, b == t);
    }
    Ok(counts)
}
