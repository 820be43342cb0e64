//! Seasonal climatology and anomaly normalization.
//!
//! The raw field is reduced to a per-cell, per-day-of-year mean and standard
//! deviation across years, both smoothed by keeping the mean plus the first
//! few Fourier harmonics of the annual cycle. Daily anomalies relative to the
//! smoothed mean are linearly detrended and divided by the smoothed standard
//! deviation, floored at a fixed value.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::calendar::CalendarKind;
use crate::error::{invalid_arg, Error, Result};
use crate::grid::{DailyFieldSeries, LatLonGrid};
use crate::par;

pub const DEFAULT_HARMONICS: usize = 6;
/// Lower bound on the normalization divisor, in meters.
pub const DEFAULT_STD_FLOOR: f64 = 100.0;

/// Precomputed cosine/sine tables for truncated Fourier reconstruction of a
/// periodic series of fixed length.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    len: usize,
    harmonics: usize,
    // [harmonic - 1][t]
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierBasis {
    pub fn new(len: usize, harmonics: usize) -> Result<Self> {
        if len == 0 {
            return Err(invalid_arg!("cannot smooth an empty cycle"));
        }
        if 2 * harmonics >= len {
            return Err(invalid_arg!("{harmonics} harmonics need a cycle longer than {}", 2 * harmonics));
        }
        let mut cos = Vec::with_capacity(harmonics * len);
        let mut sin = Vec::with_capacity(harmonics * len);
        for k in 1..=harmonics {
            for t in 0..len {
                // Reduce k*t modulo len first so the angle stays in [0, 2pi).
                let angle = 2.0 * PI * ((k * t) % len) as f64 / len as f64;
                cos.push(libm::cos(angle));
                sin.push(libm::sin(angle));
            }
        }
        Ok(FourierBasis { len, harmonics, cos, sin })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn harmonics(&self) -> usize {
        self.harmonics
    }

    /// Writes the truncated reconstruction of `values` into `out`.
    pub fn smooth_into(&self, values: &[f64], out: &mut [f64]) {
        assert_eq!(values.len(), self.len);
        assert_eq!(out.len(), self.len);
        let n = self.len as f64;
        let mean = values.iter().sum::<f64>() / n;
        out.fill(mean);
        for k in 0..self.harmonics {
            let cos = &self.cos[k * self.len..(k + 1) * self.len];
            let sin = &self.sin[k * self.len..(k + 1) * self.len];
            let mut a = 0.0;
            let mut b = 0.0;
            for t in 0..self.len {
                a += values[t] * cos[t];
                b += values[t] * sin[t];
            }
            a *= 2.0 / n;
            b *= 2.0 / n;
            for t in 0..self.len {
                out[t] += a * cos[t] + b * sin[t];
            }
        }
    }

    pub fn smooth(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        self.smooth_into(values, &mut out);
        out
    }
}

/// Keeps the mean and harmonics `1..=n_harmonics` of a periodic series.
pub fn fourier_smooth(values: &[f64], n_harmonics: usize) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid_arg!("cycle values must be finite"));
    }
    Ok(FourierBasis::new(values.len(), n_harmonics)?.smooth(values))
}

/// One value per grid cell and day of the climatological cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleField {
    cycle_len: usize,
    n_cells: usize,
    // [cell][doy]
    values: Vec<f64>,
}

impl CycleField {
    /// `values` are laid out cell-major: `values[cell * cycle_len + doy]`.
    pub fn new(cycle_len: usize, n_cells: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != cycle_len * n_cells {
            return Err(Error::ShapeMismatch(format!(
                "{} cycle values for {n_cells} cells x {cycle_len} days",
                values.len()
            )));
        }
        Ok(CycleField { cycle_len, n_cells, values })
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn at(&self, doy: usize, cell: usize) -> f64 {
        self.values[cell * self.cycle_len + doy]
    }

    /// The annual cycle of one cell.
    pub fn cell(&self, cell: usize) -> &[f64] {
        &self.values[cell * self.cycle_len..(cell + 1) * self.cycle_len]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn smoothed(&self, basis: &FourierBasis) -> CycleField {
        let cells = par::map_range(self.n_cells, |cell| basis.smooth(self.cell(cell)));
        CycleField { cycle_len: self.cycle_len, n_cells: self.n_cells, values: cells.concat() }
    }
}

/// Per-cell, per-day-of-year statistics across years.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyStats {
    pub mean: CycleField,
    /// Population standard deviation (divides by the sample count).
    pub std: CycleField,
    /// Number of years contributing to each day of year (minimum over cells).
    pub samples: Vec<u32>,
}

/// Long-term daily mean and standard deviation of `series`.
///
/// Gregorian Feb 29 values are left out. Every day of the cycle must be seen
/// in at least two different years. NaN values are skipped.
pub fn long_term_daily_stats(series: &DailyFieldSeries) -> Result<DailyStats> {
    let calendar = series.calendar();
    let len = calendar.cycle_len();
    let n_cells = series.grid().n_cells();

    let mut by_doy: Vec<Vec<usize>> = vec![Vec::new(); len];
    for (t, date) in series.dates().iter().enumerate() {
        if calendar == CalendarKind::Gregorian365 && date.month() == 2 && date.day() == 29 {
            continue;
        }
        by_doy[calendar.day_of_year(*date)].push(t);
    }
    if let Some(doy) = by_doy.iter().position(|ts| ts.len() < 2) {
        return Err(Error::InsufficientData(format!(
            "day {} of the cycle is covered by {} year(s); at least 2 full years are needed",
            calendar.month_day_of_cycle(doy),
            by_doy[doy].len()
        )));
    }

    let per_cell = par::map_range(n_cells, |cell| {
        let mut mean = vec![0.0; len];
        let mut std = vec![0.0; len];
        let mut count = vec![0u32; len];
        for (doy, ts) in by_doy.iter().enumerate() {
            let mut sum = 0.0;
            let mut n = 0u32;
            for &t in ts {
                let v = series.day(t)[cell];
                if !v.is_nan() {
                    sum += v;
                    n += 1;
                }
            }
            let m = if n > 0 { sum / f64::from(n) } else { f64::NAN };
            let mut ss = 0.0;
            for &t in ts {
                let v = series.day(t)[cell];
                if !v.is_nan() {
                    ss += (v - m) * (v - m);
                }
            }
            mean[doy] = m;
            std[doy] = if n > 0 { libm::sqrt(ss / f64::from(n)) } else { f64::NAN };
            count[doy] = n;
        }
        (mean, std, count)
    });

    let mut samples = vec![u32::MAX; len];
    let mut mean = Vec::with_capacity(len * n_cells);
    let mut std = Vec::with_capacity(len * n_cells);
    for (cell, (m, s, c)) in per_cell.into_iter().enumerate() {
        if let Some(doy) = c.iter().position(|&n| n == 0) {
            return Err(Error::InsufficientData(format!(
                "cell {cell} has no valid values on day {} of the cycle",
                calendar.month_day_of_cycle(doy)
            )));
        }
        for (acc, n) in samples.iter_mut().zip(&c) {
            *acc = (*acc).min(*n);
        }
        mean.extend(m);
        std.extend(s);
    }
    Ok(DailyStats { mean: CycleField::new(len, n_cells, mean)?, std: CycleField::new(len, n_cells, std)?, samples })
}

/// Raw and smoothed seasonal cycles of the mean and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalCycle {
    grid: LatLonGrid,
    calendar: CalendarKind,
    pub raw_mean: CycleField,
    pub smoothed_mean: CycleField,
    pub raw_std: CycleField,
    pub smoothed_std: CycleField,
}

impl SeasonalCycle {
    /// Fits the climatology of a raw series.
    pub fn fit(series: &DailyFieldSeries, harmonics: usize) -> Result<Self> {
        let basis = FourierBasis::new(series.calendar().cycle_len(), harmonics)?;
        let stats = long_term_daily_stats(series)?;
        Ok(SeasonalCycle {
            grid: series.grid().clone(),
            calendar: series.calendar(),
            smoothed_mean: stats.mean.smoothed(&basis),
            smoothed_std: stats.std.smoothed(&basis),
            raw_mean: stats.mean,
            raw_std: stats.std,
        })
    }

    /// A cycle whose smoothed fields are given directly; the raw fields are
    /// set equal to them.
    pub fn from_smoothed(grid: LatLonGrid, calendar: CalendarKind, mean: CycleField, std: CycleField) -> Result<Self> {
        for field in [&mean, &std] {
            if field.cycle_len != calendar.cycle_len() || field.n_cells != grid.n_cells() {
                return Err(Error::ShapeMismatch("cycle field does not match grid and calendar".into()));
            }
        }
        if std.values.iter().any(|&s| s < 0.0) {
            return Err(invalid_arg!("standard deviations must be non-negative"));
        }
        Ok(SeasonalCycle {
            grid,
            calendar,
            raw_mean: mean.clone(),
            smoothed_mean: mean,
            raw_std: std.clone(),
            smoothed_std: std,
        })
    }

    pub fn grid(&self) -> &LatLonGrid {
        &self.grid
    }

    pub fn calendar(&self) -> CalendarKind {
        self.calendar
    }

    fn check_compatible(&self, series: &DailyFieldSeries) -> Result<()> {
        if series.grid() != &self.grid {
            return Err(Error::ShapeMismatch("series and climatology grids differ".into()));
        }
        if series.calendar() != self.calendar {
            return Err(Error::ShapeMismatch(format!(
                "series calendar {} does not match climatology calendar {}",
                series.calendar(),
                self.calendar
            )));
        }
        Ok(())
    }
}

/// Subtracts the smoothed long-term daily mean from every field.
pub fn anomaly(series: &DailyFieldSeries, cycle: &SeasonalCycle) -> Result<DailyFieldSeries> {
    cycle.check_compatible(series)?;
    let calendar = series.calendar();
    let mut values = series.values().to_vec();
    let n = series.grid().n_cells();
    for (t, date) in series.dates().iter().enumerate() {
        let doy = calendar.day_of_year(*date);
        for (cell, v) in values[t * n..(t + 1) * n].iter_mut().enumerate() {
            *v -= cycle.smoothed_mean.at(doy, cell);
        }
    }
    series.with_values(values)
}

/// Removes the least-squares line (slope and intercept) fitted per cell
/// against the time index of the series.
pub fn detrend_linear(series: &DailyFieldSeries) -> Result<DailyFieldSeries> {
    let n_t = series.n_dates();
    if n_t < 2 {
        return Err(Error::InsufficientData("detrending needs at least 2 time steps".into()));
    }
    let n = series.grid().n_cells();
    let columns = par::map_range(n, |cell| {
        let column: Vec<f64> = (0..n_t).map(|t| series.day(t)[cell]).collect();
        detrend_column(&column)
    });
    let mut values = vec![0.0; n_t * n];
    for (cell, column) in columns.into_iter().enumerate() {
        for (t, v) in column.into_iter().enumerate() {
            values[t * n + cell] = v;
        }
    }
    series.with_values(values)
}

fn detrend_column(column: &[f64]) -> Vec<f64> {
    let valid = || column.iter().enumerate().filter(|(_, v)| !v.is_nan());
    let count = valid().count();
    if count == 0 {
        return column.to_vec();
    }
    let t_mean = valid().map(|(t, _)| t as f64).sum::<f64>() / count as f64;
    let v_mean = valid().map(|(_, v)| *v).sum::<f64>() / count as f64;
    let mut stt = 0.0;
    let mut stv = 0.0;
    for (t, v) in valid() {
        let dt = t as f64 - t_mean;
        stt += dt * dt;
        stv += dt * (v - v_mean);
    }
    let slope = if stt > 0.0 { stv / stt } else { 0.0 };
    column.iter().enumerate().map(|(t, v)| v - (v_mean + slope * (t as f64 - t_mean))).collect()
}

/// The divisor used for a cell with smoothed standard deviation `std`.
#[inline]
pub fn normalization_divisor(std: f64, floor: f64) -> f64 {
    if std > floor {
        std
    } else {
        floor
    }
}

/// Divides anomalies by `max(floor, smoothed_std)` of their cell and day of year.
pub fn normalize(series: &DailyFieldSeries, cycle: &SeasonalCycle, floor: f64) -> Result<DailyFieldSeries> {
    if !(floor >= 0.0) {
        return Err(invalid_arg!("normalization floor must be non-negative, got {floor}"));
    }
    cycle.check_compatible(series)?;
    let calendar = series.calendar();
    let mut values = series.values().to_vec();
    let n = series.grid().n_cells();
    for (t, date) in series.dates().iter().enumerate() {
        let doy = calendar.day_of_year(*date);
        for (cell, v) in values[t * n..(t + 1) * n].iter_mut().enumerate() {
            *v /= normalization_divisor(cycle.smoothed_std.at(doy, cell), floor);
        }
    }
    series.with_values(values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessConfig {
    pub harmonics: usize,
    pub floor: f64,
    pub detrend: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig { harmonics: DEFAULT_HARMONICS, floor: DEFAULT_STD_FLOOR, detrend: true }
    }
}

/// Outputs of [`preprocess`].
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub cycle: SeasonalCycle,
    /// Detrended anomalies in the input units (meters).
    pub anomalies: DailyFieldSeries,
    /// Dimensionless normalized anomalies.
    pub normalized: DailyFieldSeries,
}

/// Climatology, anomaly, detrend and normalization in that order.
pub fn preprocess(raw: &DailyFieldSeries, config: &PreprocessConfig) -> Result<Preprocessed> {
    let cycle = SeasonalCycle::fit(raw, config.harmonics)?;
    let mut anomalies = anomaly(raw, &cycle)?;
    if config.detrend {
        anomalies = detrend_linear(&anomalies)?;
    }
    let normalized = normalize(&anomalies, &cycle, config.floor)?;
    Ok(Preprocessed { cycle, anomalies, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::Date;

    fn harmonic(len: usize, k: usize, amp: f64, phase: f64) -> Vec<f64> {
        (0..len).map(|t| amp * libm::cos(2.0 * PI * (k * t) as f64 / len as f64 + phase)).collect()
    }

    fn daily_dates(calendar: CalendarKind, from: Date, n: usize) -> Vec<Date> {
        let mut out = Vec::with_capacity(n);
        let mut d = from;
        for _ in 0..n {
            out.push(d);
            d = calendar.succ(d);
        }
        out
    }

    fn point_grid() -> LatLonGrid {
        LatLonGrid::new(vec![50.0], vec![10.0]).unwrap()
    }

    #[test]
    fn smoothing_keeps_constants() {
        let out = fourier_smooth(&[42.0; 365], 6).unwrap();
        assert!(out.iter().all(|v| (v - 42.0).abs() < 1e-9));
    }

    #[test]
    fn smoothing_keeps_low_harmonics_and_drops_high() {
        for len in [365, 360] {
            let third = harmonic(len, 3, 80.0, 0.4);
            let out = fourier_smooth(&third, 6).unwrap();
            for (a, b) in out.iter().zip(&third) {
                assert!((a - b).abs() <= 1e-9 * 80.0);
            }
            let seventh = harmonic(len, 7, 80.0, 1.1);
            let out = fourier_smooth(&seventh, 6).unwrap();
            assert!(out.iter().all(|v| v.abs() <= 1e-9 * 80.0));
        }
    }

    #[test]
    fn smoothing_rejects_too_many_harmonics() {
        assert!(fourier_smooth(&[0.0; 12], 6).is_err());
        assert!(fourier_smooth(&[0.0; 13], 6).is_ok());
    }

    #[test]
    fn ltdm_of_two_years() {
        let cal = CalendarKind::Gregorian365;
        let dates = daily_dates(cal, cal.date(2001, 1, 1).unwrap(), 730);
        let series =
            DailyFieldSeries::from_fn(point_grid(), cal, dates, |t, _, _| if t < 365 { 10.0 } else { 30.0 }).unwrap();
        let stats = long_term_daily_stats(&series).unwrap();
        assert!(stats.mean.cell(0).iter().all(|&m| m == 20.0));
        assert!(stats.std.cell(0).iter().all(|&s| s == 10.0));
        assert!(stats.samples.iter().all(|&n| n == 2));
    }

    #[test]
    fn ltdm_constant_and_leap_day() {
        let cal = CalendarKind::Gregorian365;
        // 2003-2004 includes 2004-02-29, which must not enter the statistics.
        let dates = daily_dates(cal, cal.date(2003, 1, 1).unwrap(), 731);
        let series = DailyFieldSeries::from_fn(point_grid(), cal, dates.clone(), |t, _, _| {
            if dates[t].month() == 2 && dates[t].day() == 29 {
                1.0e6
            } else {
                500.0
            }
        })
        .unwrap();
        let cycle = SeasonalCycle::fit(&series, 6).unwrap();
        assert!(cycle.raw_mean.cell(0).iter().all(|&m| m == 500.0));
        assert!(cycle.raw_std.cell(0).iter().all(|&s| s == 0.0));
    }

    #[test]
    fn ltdm_needs_two_years() {
        let cal = CalendarKind::Fixed360;
        let dates = daily_dates(cal, cal.date(2001, 1, 1).unwrap(), 540);
        let series = DailyFieldSeries::from_fn(point_grid(), cal, dates, |_, _, _| 1.0).unwrap();
        assert!(matches!(long_term_daily_stats(&series), Err(Error::InsufficientData(_))));
    }

    fn synthetic_cycle(cal: CalendarKind, mean: f64, std: f64) -> SeasonalCycle {
        let len = cal.cycle_len();
        SeasonalCycle::from_smoothed(
            point_grid(),
            cal,
            CycleField::new(len, 1, vec![mean; len]).unwrap(),
            CycleField::new(len, 1, vec![std; len]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn anomaly_of_offset_field() {
        let cal = CalendarKind::Gregorian365;
        let dates = daily_dates(cal, cal.date(2004, 2, 27).unwrap(), 4);
        let cycle = synthetic_cycle(cal, 5500.0, 80.0);
        let series = DailyFieldSeries::from_fn(point_grid(), cal, dates, |_, _, _| 5620.0).unwrap();
        let anom = anomaly(&series, &cycle).unwrap();
        assert!(anom.values().iter().all(|&v| v == 120.0));
    }

    #[test]
    fn feb_29_anomaly_uses_feb_28_mean() {
        let cal = CalendarKind::Gregorian365;
        let len = cal.cycle_len();
        let feb28 = cal.day_of_year(cal.date(2004, 2, 28).unwrap());
        let mean: Vec<f64> = (0..len).map(|d| d as f64).collect();
        let cycle = SeasonalCycle::from_smoothed(
            point_grid(),
            cal,
            CycleField::new(len, 1, mean).unwrap(),
            CycleField::new(len, 1, vec![1.0; len]).unwrap(),
        )
        .unwrap();
        let series =
            DailyFieldSeries::new(point_grid(), cal, vec![cal.date(2004, 2, 29).unwrap()], vec![100.0]).unwrap();
        let anom = anomaly(&series, &cycle).unwrap();
        assert_eq!(anom.values()[0], 100.0 - feb28 as f64);
    }

    #[test]
    fn anomaly_rejects_other_grid() {
        let cal = CalendarKind::Gregorian365;
        let cycle = synthetic_cycle(cal, 0.0, 1.0);
        let grid = LatLonGrid::new(vec![40.0], vec![10.0]).unwrap();
        let series = DailyFieldSeries::new(grid, cal, vec![cal.date(2000, 1, 1).unwrap()], vec![1.0]).unwrap();
        assert!(matches!(anomaly(&series, &cycle), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn detrend_exact_line() {
        let cal = CalendarKind::Gregorian365;
        let dates = daily_dates(cal, cal.date(2000, 1, 1).unwrap(), 50);
        let series = DailyFieldSeries::from_fn(point_grid(), cal, dates, |t, _, _| 3.0 * t as f64 + 5.0).unwrap();
        let out = detrend_linear(&series).unwrap();
        assert!(out.values().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn detrend_constant_removes_mean() {
        let cal = CalendarKind::Gregorian365;
        let dates = daily_dates(cal, cal.date(2000, 1, 1).unwrap(), 10);
        let series = DailyFieldSeries::from_fn(point_grid(), cal, dates, |_, _, _| 7.5).unwrap();
        let out = detrend_linear(&series).unwrap();
        assert!(out.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn detrend_single_step_fails() {
        let cal = CalendarKind::Gregorian365;
        let series = DailyFieldSeries::new(point_grid(), cal, vec![cal.date(2000, 1, 1).unwrap()], vec![1.0]).unwrap();
        assert!(matches!(detrend_linear(&series), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn normalize_examples() {
        let cal = CalendarKind::Gregorian365;
        let date = vec![cal.date(2000, 6, 1).unwrap()];
        let run = |anom: f64, std: f64| {
            let series = DailyFieldSeries::new(point_grid(), cal, date.clone(), vec![anom]).unwrap();
            normalize(&series, &synthetic_cycle(cal, 0.0, std), 100.0).unwrap().values()[0]
        };
        assert_eq!(run(150.0, 50.0), 1.5);
        assert_eq!(run(300.0, 200.0), 1.5);
        assert_eq!(run(0.0, 37.0), 0.0);
        let series = DailyFieldSeries::new(point_grid(), cal, date, vec![1.0]).unwrap();
        assert!(normalize(&series, &synthetic_cycle(cal, 0.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn divisor_floor() {
        for std in [0.0, 50.0, 99.999] {
            assert_eq!(normalization_divisor(std, 100.0), 100.0);
        }
        assert_eq!(normalization_divisor(100.001, 100.0), 100.001);
    }
}
