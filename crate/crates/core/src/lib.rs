//! Detection, tracking and ensemble summaries of atmospheric blocking
//! events in daily gridded 500 hPa geopotential height.
//!
//! The pipeline runs
//! [`climatology::preprocess`] (seasonal cycle, anomalies, detrending,
//! normalization), then [`detection::detect`] on the normalized field, then
//! [`evaluation::score`] against labelled days or [`uncertainty`] summaries
//! of the detected footprints. [`baseline::dg83_detect`] is the classic
//! fixed-threshold index for comparison and [`tuning::tune`] searches the
//! two detection thresholds by cross-validation.
//!
//! Builds without `std`; the `parallel` feature spreads per-day and
//! per-parameter work over a rayon pool with identical results.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod baseline;
pub mod calendar;
pub mod cells;
pub mod climatology;
pub mod detection;
pub mod error;
pub mod evaluation;
pub mod grid;
mod par;
pub mod tuning;
pub mod uncertainty;

pub use calendar::{CalendarKind, Date, MonthDay};
pub use cells::CellSet;
pub use error::{Error, Result};
pub use grid::{DailyFieldSeries, GridShape, LatLonGrid};
