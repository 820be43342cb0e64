use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::depth::{contour_boxplot, ContourBoxplot};
use super::ensemble::{ContourEnsemble, EnsembleKind, Member};
use super::frequency::{frequency_map_over, FrequencyMap};
use super::trace::{trace_rings, Ring};
use crate::calendar::{CalendarKind, Date, MonthDay};
use crate::detection::{Component, ComponentId};
use crate::error::{Error, Result};
use crate::evaluation::DateWindow;
use crate::grid::GridShape;

/// One calendar day of a temporal stack.
#[derive(Debug, Clone, PartialEq)]
pub struct StackSlice {
    pub day: MonthDay,
    /// Median member of the day's ensemble, if it had a boxplot.
    pub median: Option<ComponentId>,
    /// Outline of the median region.
    pub median_rings: Vec<Ring>,
    pub frequency: FrequencyMap,
}

/// Daily medians and frequency slices along a gap-free run of calendar days.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalStack {
    shape: GridShape,
    slices: Vec<StackSlice>,
}

impl TemporalStack {
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn slices(&self) -> &[StackSlice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn days(&self) -> Vec<MonthDay> {
        self.slices.iter().map(|s| s.day).collect()
    }
}

/// Stacks daily boxplots and frequency maps in calendar order.
///
/// The stack runs from the earliest to the latest day present in either
/// map; days missing from `boxplots` have no median and days missing from
/// `frequencies` get an all-zero slice.
pub fn build_stacks(
    shape: GridShape,
    calendar: CalendarKind,
    boxplots: &BTreeMap<MonthDay, ContourBoxplot>,
    frequencies: &BTreeMap<MonthDay, FrequencyMap>,
) -> Result<TemporalStack> {
    if let Some((day, _)) = boxplots.iter().find(|(_, b)| b.shape != shape) {
        return Err(Error::ShapeMismatch(format!("boxplot for {day} is on a different grid")));
    }
    if let Some((day, _)) = frequencies.iter().find(|(_, f)| f.shape() != shape) {
        return Err(Error::ShapeMismatch(format!("frequency map for {day} is on a different grid")));
    }
    if let Some(day) = boxplots.keys().chain(frequencies.keys()).find(|d| !calendar.has_month_day(**d)) {
        return Err(Error::InvalidDate(format!("{day} does not exist in the {calendar} calendar")));
    }
    let first = boxplots.keys().chain(frequencies.keys()).min().copied();
    let last = boxplots.keys().chain(frequencies.keys()).max().copied();
    let (Some(first), Some(last)) = (first, last) else {
        return Ok(TemporalStack { shape, slices: Vec::new() });
    };

    let mut slices = Vec::new();
    let mut day = first;
    loop {
        let boxplot = boxplots.get(&day);
        slices.push(StackSlice {
            day,
            median: boxplot.map(|b| b.median),
            median_rings: boxplot.map(|b| trace_rings(&b.median_region, shape)).unwrap_or_default(),
            frequency: frequencies.get(&day).cloned().unwrap_or_else(|| FrequencyMap::empty(shape, 0)),
        });
        if day == last {
            break;
        }
        day = calendar.succ_month_day(day);
    }
    Ok(TemporalStack { shape, slices })
}

/// Builds one daily ensemble per calendar day of `window` from footprints
/// detected on `dates`, and stacks their boxplots and frequency maps.
///
/// Days with fewer than three footprints get no median. The frequency
/// denominator of a day is the number of `dates` falling on it.
pub fn seasonal_stack(
    shape: GridShape,
    calendar: CalendarKind,
    dates: &[Date],
    footprints: &[&Component],
    window: &DateWindow,
    epsilons: &[f64],
) -> Result<TemporalStack> {
    let mut ensemble_days: BTreeMap<MonthDay, usize> = BTreeMap::new();
    for d in dates.iter().filter(|d| window.contains(**d)) {
        *ensemble_days.entry(d.month_day()).or_default() += 1;
    }
    let mut by_day: BTreeMap<MonthDay, Vec<&Component>> = BTreeMap::new();
    for c in footprints.iter().filter(|c| window.contains(c.id.date)) {
        by_day.entry(c.id.date.month_day()).or_default().push(c);
    }
    if let Some(day) = by_day.keys().find(|d| !ensemble_days.contains_key(d)) {
        return Err(Error::Alignment(format!("footprints on {day} but no such date in the series")));
    }

    let mut boxplots = BTreeMap::new();
    let mut frequencies = BTreeMap::new();
    for (&day, &n_days) in &ensemble_days {
        let members = by_day.get(&day).map(Vec::as_slice).unwrap_or_default();
        frequencies.insert(day, frequency_map_over(shape, n_days, members.iter().map(|c| (c.id.date, &c.cells)))?);
        if members.len() >= 3 {
            let ensemble =
                ContourEnsemble::new(shape, EnsembleKind::Daily, members.iter().map(|c| Member::from(*c)).collect())?;
            boxplots.insert(day, contour_boxplot(&ensemble, epsilons)?);
        }
    }
    build_stacks(shape, calendar, &boxplots, &frequencies)
}
