use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::calendar::Date;
use crate::cells::CellSet;
use crate::error::{Error, Result};
use crate::grid::GridShape;

/// Number of days each cell was covered by a footprint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyMap {
    shape: GridShape,
    counts: Vec<u32>,
    n_days: usize,
}

impl FrequencyMap {
    /// An all-zero map over `n_days` ensemble days.
    pub fn empty(shape: GridShape, n_days: usize) -> Self {
        FrequencyMap { shape, counts: vec![0; shape.n_cells()], n_days }
    }

    pub fn from_counts(shape: GridShape, counts: Vec<u32>, n_days: usize) -> Result<Self> {
        if counts.len() != shape.n_cells() {
            return Err(Error::ShapeMismatch(format!("{} counts for {} cells", counts.len(), shape.n_cells())));
        }
        if let Some(&c) = counts.iter().find(|&&c| c as usize > n_days) {
            return Err(Error::InvalidArgument(format!("count {c} exceeds {n_days} ensemble days")));
        }
        Ok(FrequencyMap { shape, counts, n_days })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    /// Counts in `[lat][lon]` order.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.counts[self.shape.index(row, col)]
    }

    /// Days in the ensemble; the denominator of [`FrequencyMap::fractions`].
    pub fn n_days(&self) -> usize {
        self.n_days
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Counts as a fraction of the ensemble days (all zero for an empty ensemble).
    pub fn fractions(&self) -> Vec<f64> {
        let n = self.n_days as f64;
        self.counts.iter().map(|&c| if self.n_days == 0 { 0.0 } else { f64::from(c) / n }).collect()
    }
}

/// Per-cell count of distinct dates whose footprints cover the cell.
///
/// Overlapping footprints on one date count once. The ensemble size is the
/// number of distinct dates given; use [`frequency_map_over`] to count
/// footprint-free days too.
pub fn frequency_map<'a>(
    shape: GridShape,
    footprints: impl IntoIterator<Item = (Date, &'a CellSet)>,
) -> Result<FrequencyMap> {
    let by_date = group_by_date(shape, footprints)?;
    let n_days = by_date.len();
    Ok(accumulate(shape, by_date, n_days))
}

/// Like [`frequency_map`], over an ensemble of `n_days` days (at least the
/// number of distinct footprint dates).
pub fn frequency_map_over<'a>(
    shape: GridShape,
    n_days: usize,
    footprints: impl IntoIterator<Item = (Date, &'a CellSet)>,
) -> Result<FrequencyMap> {
    let by_date = group_by_date(shape, footprints)?;
    if by_date.len() > n_days {
        return Err(Error::InvalidArgument(format!(
            "footprints on {} dates but only {n_days} ensemble days",
            by_date.len()
        )));
    }
    Ok(accumulate(shape, by_date, n_days))
}

fn group_by_date<'a>(
    shape: GridShape,
    footprints: impl IntoIterator<Item = (Date, &'a CellSet)>,
) -> Result<BTreeMap<Date, CellSet>> {
    let mut by_date: BTreeMap<Date, CellSet> = BTreeMap::new();
    for (date, cells) in footprints {
        if cells.max_cell().is_some_and(|c| c >= shape.n_cells()) {
            return Err(Error::ShapeMismatch(format!("footprint on {date} lies outside the grid")));
        }
        let entry = by_date.entry(date).or_default();
        *entry = entry.union(cells);
    }
    Ok(by_date)
}

fn accumulate(shape: GridShape, by_date: BTreeMap<Date, CellSet>, n_days: usize) -> FrequencyMap {
    let mut map = FrequencyMap::empty(shape, n_days);
    for cells in by_date.values() {
        for c in cells.iter() {
            map.counts[c] += 1;
        }
    }
    map
}
