//! Superlevel-set tracking and the persistence rule.
//!
//! Each day's field is thresholded at `lambda`; connected regions of the
//! superlevel set become nodes. Nodes on consecutive days are linked when
//! their latitude-weighted overlap reaches `C`. A component is a blocking
//! footprint when some chain of links through it spans at least `min_days`
//! days; a day is blocked when it holds at least one footprint.

mod components;
mod graph;
mod labels;

pub use components::{
    components_of_mask, extract_components, superlevel_set, weighted_overlap, Component, ComponentId, Connectivity,
};
pub use graph::{build_trajectory_graph, Edge, Link, Linkage, TrackingCandidates, TrajectoryGraph};
pub use labels::{chain_lengths, label_blocking, longest_chain_through, BlockingLabels};

use alloc::vec::Vec;

use crate::calendar::CalendarKind;
use crate::error::{invalid_arg, Result};
use crate::grid::DailyFieldSeries;
use crate::par;

pub const DEFAULT_MIN_DAYS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectParams {
    /// Superlevel threshold on the normalized field.
    pub lambda: f64,
    /// Minimum latitude-weighted overlap `C` between consecutive days.
    pub min_overlap: f64,
    pub min_days: usize,
    pub connectivity: Connectivity,
}

impl DetectParams {
    /// Tuned defaults: (1.2, 31) for reanalysis-style Gregorian inputs,
    /// (1.0, 31) for 360-day model output.
    pub fn for_calendar(calendar: CalendarKind) -> Self {
        let lambda = match calendar {
            CalendarKind::Gregorian365 => 1.2,
            CalendarKind::Fixed360 => 1.0,
        };
        DetectParams { lambda, min_overlap: 31.0, min_days: DEFAULT_MIN_DAYS, connectivity: Connectivity::Four }
    }
}

/// Labels plus the graph they were derived from.
#[derive(Debug, Clone)]
pub struct Detection {
    pub labels: BlockingLabels,
    pub graph: TrajectoryGraph,
}

impl Detection {
    /// The positive components (blocking footprints) in date order.
    pub fn footprints(&self) -> Vec<&Component> {
        let mut out = Vec::new();
        for d in 0..self.graph.dates().len() {
            let ids = self.labels.footprints(d);
            out.extend(self.graph.day_nodes(d).map(|n| &self.graph.nodes()[n]).filter(|c| ids.contains(&c.id)));
        }
        out
    }
}

/// Per-day components of a normalized series at threshold `lambda`.
pub fn components_by_day(
    series: &DailyFieldSeries,
    lambda: f64,
    connectivity: Connectivity,
) -> Result<Vec<(crate::calendar::Date, Vec<Component>)>> {
    if lambda.is_nan() {
        return Err(invalid_arg!("threshold is NaN"));
    }
    let grid = series.grid();
    let per_day = par::map_range(series.n_dates(), |t| {
        let date = series.dates()[t];
        let mask = superlevel_set(series.day(t), lambda);
        (date, components_of_mask(&mask, grid, date, connectivity))
    });
    Ok(per_day)
}

/// Components and overlap candidates at threshold `lambda`, reusable for any `C`.
pub fn tracking_candidates(
    series: &DailyFieldSeries,
    lambda: f64,
    connectivity: Connectivity,
) -> Result<TrackingCandidates> {
    TrackingCandidates::new(components_by_day(series, lambda, connectivity)?, series.calendar(), series.grid())
}

/// Extracts, tracks and labels blocking events in a normalized series.
pub fn detect(series: &DailyFieldSeries, params: &DetectParams) -> Result<Detection> {
    let graph = tracking_candidates(series, params.lambda, params.connectivity)?
        .into_graph(Linkage::WeightedOverlap(params.min_overlap))?;
    let labels = label_blocking(&graph, params.min_days);
    Ok(Detection { labels, graph })
}
