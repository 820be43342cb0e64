//! Latitude/longitude grids and daily field series.

use alloc::format;
use alloc::vec::Vec;

use crate::calendar::{CalendarKind, Date};
use crate::error::{invalid_arg, Error, Result};

/// Row and column counts of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub n_lat: usize,
    pub n_lon: usize,
}

impl GridShape {
    pub fn new(n_lat: usize, n_lon: usize) -> Self {
        GridShape { n_lat, n_lon }
    }

    pub fn n_cells(self) -> usize {
        self.n_lat * self.n_lon
    }

    /// Row-major linear index of a cell.
    #[inline]
    pub fn index(self, row: usize, col: usize) -> usize {
        row * self.n_lon + col
    }

    #[inline]
    pub fn row_col(self, index: usize) -> (usize, usize) {
        (index / self.n_lon, index % self.n_lon)
    }
}

/// A rectilinear grid of cell centers.
///
/// Both coordinate axes are strictly monotone (either direction). Longitudes
/// form one continuous window; there is no periodic wrap.
#[derive(Debug, Clone, PartialEq)]
pub struct LatLonGrid {
    lat: Vec<f64>,
    lon: Vec<f64>,
}

impl LatLonGrid {
    pub fn new(lat: Vec<f64>, lon: Vec<f64>) -> Result<Self> {
        if lat.is_empty() || lon.is_empty() {
            return Err(invalid_arg!("grid needs at least one latitude and one longitude"));
        }
        if lat.iter().any(|v| !v.is_finite() || v.abs() > 90.0) {
            return Err(invalid_arg!("latitudes must be finite and within [-90, 90]"));
        }
        if lon.iter().any(|v| !v.is_finite()) {
            return Err(invalid_arg!("longitudes must be finite"));
        }
        if !strictly_monotone(&lat) || !strictly_monotone(&lon) {
            return Err(invalid_arg!("grid coordinates must be strictly monotone"));
        }
        Ok(LatLonGrid { lat, lon })
    }

    /// A regular grid starting at (`lat0`, `lon0`) with the given steps.
    pub fn regular(lat0: f64, dlat: f64, n_lat: usize, lon0: f64, dlon: f64, n_lon: usize) -> Result<Self> {
        let lat = (0..n_lat).map(|i| lat0 + dlat * i as f64).collect();
        let lon = (0..n_lon).map(|j| lon0 + dlon * j as f64).collect();
        LatLonGrid::new(lat, lon)
    }

    pub fn shape(&self) -> GridShape {
        GridShape::new(self.lat.len(), self.lon.len())
    }

    pub fn n_lat(&self) -> usize {
        self.lat.len()
    }

    pub fn n_lon(&self) -> usize {
        self.lon.len()
    }

    pub fn n_cells(&self) -> usize {
        self.lat.len() * self.lon.len()
    }

    pub fn lat(&self) -> &[f64] {
        &self.lat
    }

    pub fn lon(&self) -> &[f64] {
        &self.lon
    }

    /// `cos(lat)` per row.
    pub fn row_weights(&self) -> Vec<f64> {
        self.lat.iter().map(|&lat| cos_deg(lat).max(0.0)).collect()
    }

    /// Latitudes of the n_lat + 1 cell edges along the row axis.
    pub fn lat_edges(&self) -> Vec<f64> {
        axis_edges(&self.lat)
    }

    /// Longitudes of the n_lon + 1 cell edges along the column axis.
    pub fn lon_edges(&self) -> Vec<f64> {
        axis_edges(&self.lon)
    }
}

fn strictly_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0]) || v.windows(2).all(|w| w[1] < w[0])
}

// Edges sit halfway between neighbouring centers; the outer edges mirror the
// first/last spacing. A singleton axis gets a 1 degree wide cell.
fn axis_edges(centers: &[f64]) -> Vec<f64> {
    let n = centers.len();
    if n == 1 {
        return alloc::vec![centers[0] - 0.5, centers[0] + 0.5];
    }
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(centers[0] - 0.5 * (centers[1] - centers[0]));
    for w in centers.windows(2) {
        edges.push(0.5 * (w[0] + w[1]));
    }
    edges.push(centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2]));
    edges
}

fn cos_deg(deg: f64) -> f64 {
    libm::cos(deg.to_radians())
}

/// Area weight of a grid cell at latitude `lat` (degrees): `cos(lat)`.
pub fn latitude_weight(lat: f64) -> Result<f64> {
    if !(lat.abs() <= 90.0) {
        return Err(invalid_arg!("latitude {lat} outside [-90, 90]"));
    }
    Ok(cos_deg(lat).max(0.0))
}

/// A time-ordered stack of 2D fields on one grid.
///
/// Values are stored row-major as `[date][lat][lon]`. NaN marks missing data;
/// infinities are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyFieldSeries {
    grid: LatLonGrid,
    calendar: CalendarKind,
    dates: Vec<Date>,
    values: Vec<f64>,
}

impl DailyFieldSeries {
    pub fn new(grid: LatLonGrid, calendar: CalendarKind, dates: Vec<Date>, values: Vec<f64>) -> Result<Self> {
        if values.len() != dates.len() * grid.n_cells() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} dates on a {}x{} grid",
                values.len(),
                dates.len(),
                grid.n_lat(),
                grid.n_lon()
            )));
        }
        if let Some(bad) = dates.iter().find(|d| !calendar.is_valid(**d)) {
            return Err(Error::InvalidDate(format!("{bad} does not exist in the {calendar} calendar")));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(invalid_arg!("dates must be strictly increasing ({} then {})", w[0], w[1]));
        }
        if values.iter().any(|v| v.is_infinite()) {
            return Err(invalid_arg!("field values must be finite or NaN"));
        }
        Ok(DailyFieldSeries { grid, calendar, dates, values })
    }

    /// Builds a series by evaluating `f(date_index, row, col)`.
    pub fn from_fn(
        grid: LatLonGrid,
        calendar: CalendarKind,
        dates: Vec<Date>,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let shape = grid.shape();
        let mut values = Vec::with_capacity(dates.len() * shape.n_cells());
        for t in 0..dates.len() {
            for r in 0..shape.n_lat {
                for c in 0..shape.n_lon {
                    values.push(f(t, r, c));
                }
            }
        }
        DailyFieldSeries::new(grid, calendar, dates, values)
    }

    pub fn grid(&self) -> &LatLonGrid {
        &self.grid
    }

    pub fn shape(&self) -> GridShape {
        self.grid.shape()
    }

    pub fn calendar(&self) -> CalendarKind {
        self.calendar
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The 2D field of date index `t`.
    pub fn day(&self, t: usize) -> &[f64] {
        let n = self.grid.n_cells();
        &self.values[t * n..(t + 1) * n]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same grid, calendar and dates with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        DailyFieldSeries::new(self.grid.clone(), self.calendar, self.dates.clone(), values)
    }

    /// Distinct years, ascending.
    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.dates.iter().map(|d| d.year()).collect();
        years.dedup();
        years
    }

    /// Keeps only the dates for which `keep` returns true.
    pub fn filter_dates(&self, mut keep: impl FnMut(Date) -> bool) -> Self {
        let n = self.grid.n_cells();
        let mut dates = Vec::new();
        let mut values = Vec::new();
        for (t, &d) in self.dates.iter().enumerate() {
            if keep(d) {
                dates.push(d);
                values.extend_from_slice(&self.values[t * n..(t + 1) * n]);
            }
        }
        DailyFieldSeries { grid: self.grid.clone(), calendar: self.calendar, dates, values }
    }
}

/// Block-averages each field by `factor_lat` x `factor_lon`.
///
/// Blocks are aligned to the grid origin (first row/column); trailing rows or
/// columns that do not fill a block are dropped. Output coordinates are the
/// means of the block's centers.
pub fn block_average(series: &DailyFieldSeries, factor_lat: usize, factor_lon: usize) -> Result<DailyFieldSeries> {
    if factor_lat == 0 || factor_lon == 0 {
        return Err(invalid_arg!("block factors must be positive"));
    }
    let shape = series.shape();
    let (out_lat, out_lon) = (shape.n_lat / factor_lat, shape.n_lon / factor_lon);
    if out_lat == 0 || out_lon == 0 {
        return Err(invalid_arg!("block {factor_lat}x{factor_lon} larger than grid {}x{}", shape.n_lat, shape.n_lon));
    }
    if !shape.n_lat.is_multiple_of(factor_lat) || !shape.n_lon.is_multiple_of(factor_lon) {
        log::warn!(
            "block average drops {} trailing rows and {} trailing columns",
            shape.n_lat % factor_lat,
            shape.n_lon % factor_lon
        );
    }

    let block_means = |centers: &[f64], factor: usize, n: usize| -> Vec<f64> {
        (0..n).map(|b| centers[b * factor..(b + 1) * factor].iter().sum::<f64>() / factor as f64).collect()
    };
    let grid = LatLonGrid::new(
        block_means(series.grid.lat(), factor_lat, out_lat),
        block_means(series.grid.lon(), factor_lon, out_lon),
    )?;

    let count = (factor_lat * factor_lon) as f64;
    let mut values = Vec::with_capacity(series.n_dates() * out_lat * out_lon);
    for t in 0..series.n_dates() {
        let day = series.day(t);
        for br in 0..out_lat {
            for bc in 0..out_lon {
                let mut sum = 0.0;
                for r in br * factor_lat..(br + 1) * factor_lat {
                    for c in bc * factor_lon..(bc + 1) * factor_lon {
                        sum += day[shape.index(r, c)];
                    }
                }
                values.push(sum / count);
            }
        }
    }
    DailyFieldSeries::new(grid, series.calendar, series.dates.clone(), values)
}

/// Keeps the cells whose centers lie in the closed window
/// `[lat_min, lat_max] x [lon_min, lon_max]`.
pub fn crop_domain(
    series: &DailyFieldSeries,
    lat_min: f64,
    lat_max: f64,
    lon_min: f64,
    lon_max: f64,
) -> Result<DailyFieldSeries> {
    if !(lat_min <= lat_max) || !(lon_min <= lon_max) {
        return Err(invalid_arg!("crop window bounds are inverted or not numbers"));
    }
    let rows: Vec<usize> =
        (0..series.grid.n_lat()).filter(|&r| (lat_min..=lat_max).contains(&series.grid.lat[r])).collect();
    let cols: Vec<usize> =
        (0..series.grid.n_lon()).filter(|&c| (lon_min..=lon_max).contains(&series.grid.lon[c])).collect();
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let grid = LatLonGrid::new(
        rows.iter().map(|&r| series.grid.lat[r]).collect(),
        cols.iter().map(|&c| series.grid.lon[c]).collect(),
    )?;
    let shape = series.shape();
    let mut values = Vec::with_capacity(series.n_dates() * rows.len() * cols.len());
    for t in 0..series.n_dates() {
        let day = series.day(t);
        for &r in &rows {
            values.extend(cols.iter().map(|&c| day[shape.index(r, c)]));
        }
    }
    DailyFieldSeries::new(grid, series.calendar, series.dates.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn one_day(grid: LatLonGrid, values: Vec<f64>) -> DailyFieldSeries {
        let date = CalendarKind::Gregorian365.date(2000, 1, 1).unwrap();
        DailyFieldSeries::new(grid, CalendarKind::Gregorian365, vec![date], values).unwrap()
    }

    #[test]
    fn block_average_constant_field() {
        let grid = LatLonGrid::regular(40.0, 1.0, 4, 0.0, 1.0, 4).unwrap();
        let out = block_average(&one_day(grid, vec![7.0; 16]), 2, 2).unwrap();
        assert_eq!(out.shape(), GridShape::new(2, 2));
        assert!(out.values().iter().all(|&v| v == 7.0));
        assert_eq!(out.grid().lat(), &[40.5, 42.5]);
    }

    #[test]
    fn block_average_two_by_two() {
        let grid = LatLonGrid::regular(10.0, 1.0, 2, 0.0, 1.0, 2).unwrap();
        let out = block_average(&one_day(grid, vec![1.0, 2.0, 3.0, 4.0]), 2, 2).unwrap();
        assert_eq!(out.values(), &[2.5]);
    }

    #[test]
    fn block_average_quarter_degree_to_one_degree() {
        let grid = LatLonGrid::regular(75.0, -0.25, 8, -10.0, 0.25, 12).unwrap();
        let out = block_average(&one_day(grid, vec![0.0; 96]), 4, 4).unwrap();
        assert_eq!(out.shape(), GridShape::new(2, 3));
        let lat = out.grid().lat();
        let lon = out.grid().lon();
        assert!((lat[0] - lat[1] - 1.0).abs() < 1e-12);
        assert!((lon[1] - lon[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn block_average_drops_remainder_and_rejects_zero() {
        let grid = LatLonGrid::regular(0.0, 1.0, 5, 0.0, 1.0, 3).unwrap();
        let series = one_day(grid, (0..15).map(f64::from).collect());
        let out = block_average(&series, 2, 1).unwrap();
        assert_eq!(out.shape(), GridShape::new(2, 3));
        assert_eq!(out.day(0)[0], 1.5);
        assert!(matches!(block_average(&series, 0, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn crop_global_grid_to_europe() {
        let grid = LatLonGrid::regular(90.0, -1.0, 181, -180.0, 1.0, 360).unwrap();
        let series = one_day(grid, vec![0.0; 181 * 360]);
        let out = crop_domain(&series, 30.0, 75.0, -10.0, 40.0).unwrap();
        assert_eq!(out.shape(), GridShape::new(46, 51));
        assert_eq!(out.grid().lat()[0], 75.0);
        assert_eq!(*out.grid().lon().last().unwrap(), 40.0);
    }

    #[test]
    fn crop_to_full_bounds_is_identity() {
        let grid = LatLonGrid::regular(30.0, 1.0, 3, 0.0, 2.0, 4).unwrap();
        let series = one_day(grid, (0..12).map(f64::from).collect());
        assert_eq!(crop_domain(&series, 30.0, 32.0, 0.0, 6.0).unwrap(), series);
    }

    #[test]
    fn crop_outside_is_empty_domain() {
        let grid = LatLonGrid::regular(30.0, 1.0, 3, 0.0, 1.0, 3).unwrap();
        let series = one_day(grid, vec![0.0; 9]);
        assert_eq!(crop_domain(&series, -40.0, -30.0, 0.0, 2.0), Err(Error::EmptyDomain));
    }

    #[test]
    fn latitude_weights() {
        assert_eq!(latitude_weight(0.0).unwrap(), 1.0);
        assert!(latitude_weight(90.0).unwrap().abs() < 1e-12);
        assert!((latitude_weight(60.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(latitude_weight(90.5).is_err());
        assert!(latitude_weight(f64::NAN).is_err());
    }

    #[test]
    fn series_rejects_bad_dates() {
        let grid = LatLonGrid::regular(0.0, 1.0, 1, 0.0, 1.0, 1).unwrap();
        let d1 = CalendarKind::Gregorian365.date(2000, 1, 2).unwrap();
        let d0 = CalendarKind::Gregorian365.date(2000, 1, 1).unwrap();
        assert!(DailyFieldSeries::new(grid.clone(), CalendarKind::Gregorian365, vec![d1, d0], vec![0.0; 2]).is_err());
        let may31: Date = "2000-05-31".parse().unwrap();
        assert!(DailyFieldSeries::new(grid, CalendarKind::Fixed360, vec![may31], vec![0.0]).is_err());
    }

    #[test]
    fn cell_edges() {
        let grid = LatLonGrid::regular(50.0, -1.0, 3, 0.0, 2.0, 2).unwrap();
        assert_eq!(grid.lat_edges(), vec![50.5, 49.5, 48.5, 47.5]);
        assert_eq!(grid.lon_edges(), vec![-1.0, 1.0, 3.0]);
    }
}
