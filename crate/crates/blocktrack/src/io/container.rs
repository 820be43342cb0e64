//! Gridded daily series: a JSON header next to a raw little-endian `f32`
//! payload laid out `[date][lat][lon]`.

use std::fs;
use std::path::{Path, PathBuf};

use blocktrack_core::{CalendarKind, DailyFieldSeries, Date, LatLonGrid};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const ELEMENT_TYPE: &str = "f32le";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainerHeader {
    pub format_version: u32,
    pub variable: String,
    pub units: String,
    pub element_type: String,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub offset: f64,
    pub n_dates: usize,
    pub n_lat: usize,
    pub n_lon: usize,
    pub lat: Vec<f64>,
    pub lon: Vec<f64>,
    #[serde(with = "super::calendar_name")]
    pub calendar: CalendarKind,
    pub dates: Vec<String>,
    /// Payload file name, relative to the header.
    pub payload: String,
    pub crc32: u32,
}

fn one() -> f64 {
    1.0
}

/// A series with its variable metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSeries {
    pub variable: String,
    pub units: String,
    pub series: DailyFieldSeries,
}

impl GridSeries {
    pub fn new(variable: impl Into<String>, units: impl Into<String>, series: DailyFieldSeries) -> Self {
        GridSeries { variable: variable.into(), units: units.into(), series }
    }
}

/// Payload path used by [`write_series`] for a header at `header`.
pub fn payload_path(header: &Path) -> PathBuf {
    header.with_extension("bin")
}

/// Reads a header and its payload, checking length and checksum.
pub fn read_series(path: &Path) -> Result<GridSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let header: ContainerHeader = serde_json::from_str(&text).map_err(|e| Error::header(path, e.to_string()))?;
    check_header(path, &header)?;

    let payload_file = path.parent().unwrap_or(Path::new(".")).join(&header.payload);
    let bytes = fs::read(&payload_file).map_err(|e| Error::io(&payload_file, e))?;
    let expected = 4 * header.n_dates * header.n_lat * header.n_lon;
    if bytes.len() != expected {
        return Err(Error::corrupt(
            &payload_file,
            format!("payload is {} bytes, header implies {expected}", bytes.len()),
        ));
    }
    let crc = crc32fast::hash(&bytes);
    if crc != header.crc32 {
        return Err(Error::corrupt(
            &payload_file,
            format!("checksum {crc:08x} does not match header {:08x}", header.crc32),
        ));
    }

    let grid =
        LatLonGrid::new(header.lat.clone(), header.lon.clone()).map_err(|e| Error::header(path, e.to_string()))?;
    let dates = header
        .dates
        .iter()
        .map(|s| header.calendar.parse_date(s))
        .collect::<std::result::Result<Vec<Date>, _>>()
        .map_err(|e| Error::header(path, e.to_string()))?;
    let (scale, offset) = (header.scale, header.offset);
    let values = bytes
        .chunks_exact(4)
        .map(|b| f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])) * scale + offset)
        .collect();
    let series = DailyFieldSeries::new(grid, header.calendar, dates, values).map_err(|e| match e {
        blocktrack_core::Error::InvalidArgument(m) => Error::corrupt(&payload_file, m),
        other => Error::header(path, other.to_string()),
    })?;
    Ok(GridSeries { variable: header.variable, units: header.units, series })
}

fn check_header(path: &Path, h: &ContainerHeader) -> Result<()> {
    if h.format_version != FORMAT_VERSION {
        return Err(Error::header(path, format!("unsupported format_version {}", h.format_version)));
    }
    if h.element_type != ELEMENT_TYPE {
        return Err(Error::header(path, format!("unsupported element_type {}", h.element_type)));
    }
    if h.lat.len() != h.n_lat || h.lon.len() != h.n_lon || h.dates.len() != h.n_dates {
        return Err(Error::header(
            path,
            format!(
                "declared dims {}x{}x{} disagree with {} dates, {} lat, {} lon",
                h.n_dates,
                h.n_lat,
                h.n_lon,
                h.dates.len(),
                h.lat.len(),
                h.lon.len()
            ),
        ));
    }
    if !(h.scale.is_finite() && h.offset.is_finite()) || h.scale == 0.0 {
        return Err(Error::header(path, "scale must be finite and non-zero, offset finite"));
    }
    let name = Path::new(&h.payload);
    if name.components().count() != 1 || name.file_name().is_none() {
        return Err(Error::header(path, format!("payload '{}' must be a plain file name", h.payload)));
    }
    Ok(())
}

/// Header describing `series` for a payload with checksum `crc32`.
pub fn header_for(series: &GridSeries, payload: &str, crc32: u32) -> ContainerHeader {
    let s = &series.series;
    ContainerHeader {
        format_version: FORMAT_VERSION,
        variable: series.variable.clone(),
        units: series.units.clone(),
        element_type: ELEMENT_TYPE.into(),
        scale: 1.0,
        offset: 0.0,
        n_dates: s.n_dates(),
        n_lat: s.grid().n_lat(),
        n_lon: s.grid().n_lon(),
        lat: s.grid().lat().to_vec(),
        lon: s.grid().lon().to_vec(),
        calendar: s.calendar(),
        dates: s.dates().iter().map(Date::to_string).collect(),
        payload: payload.into(),
        crc32,
    }
}

/// Payload bytes of `series` (values rounded to `f32`).
pub fn encode_payload(series: &DailyFieldSeries) -> Vec<u8> {
    series.values().iter().flat_map(|&v| (v as f32).to_le_bytes()).collect()
}

/// Writes the header to `path` and the payload next to it.
pub fn write_series(series: &GridSeries, path: &Path) -> Result<()> {
    let payload = encode_payload(&series.series);
    let payload_file = payload_path(path);
    let name = payload_file.file_name().and_then(|n| n.to_str()).ok_or_else(|| Error::header(path, "bad file name"))?;
    let header = header_for(series, name, crc32fast::hash(&payload));
    let mut text = serde_json::to_string_pretty(&header).expect("header serializes");
    text.push('\n');
    fs::write(&payload_file, &payload).map_err(|e| Error::io(&payload_file, e))?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
