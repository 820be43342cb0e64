//! Detected footprints with the grid and dates they came from.

use std::path::Path;

use blocktrack_core::detection::{Component, ComponentId, Detection};
use blocktrack_core::{CalendarKind, CellSet, Date, LatLonGrid};
use serde::{Deserialize, Serialize};

use super::{read_text, write_text};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct FootprintFile {
    format_version: u32,
    #[serde(with = "super::calendar_name")]
    calendar: CalendarKind,
    lat: Vec<f64>,
    lon: Vec<f64>,
    /// Every date the detector scanned, blocked or not.
    dates: Vec<String>,
    footprints: Vec<FootprintRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FootprintRecord {
    date: String,
    index: u32,
    cells: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FootprintSet {
    pub grid: LatLonGrid,
    pub calendar: CalendarKind,
    pub dates: Vec<Date>,
    pub footprints: Vec<Component>,
}

impl FootprintSet {
    pub fn from_detection(detection: &Detection, grid: &LatLonGrid, calendar: CalendarKind) -> Self {
        FootprintSet {
            grid: grid.clone(),
            calendar,
            dates: detection.labels.dates().to_vec(),
            footprints: detection.footprints().into_iter().cloned().collect(),
        }
    }

    pub fn refs(&self) -> Vec<&Component> {
        self.footprints.iter().collect()
    }
}

pub fn write_footprints(set: &FootprintSet, path: &Path) -> Result<()> {
    let file = FootprintFile {
        format_version: FORMAT_VERSION,
        calendar: set.calendar,
        lat: set.grid.lat().to_vec(),
        lon: set.grid.lon().to_vec(),
        dates: set.dates.iter().map(Date::to_string).collect(),
        footprints: set
            .footprints
            .iter()
            .map(|c| FootprintRecord {
                date: c.id.date.to_string(),
                index: c.id.index,
                cells: c.cells.as_slice().to_vec(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&file).expect("footprints serialize");
    text.push('\n');
    write_text(path, &text)
}

pub fn read_footprints(path: &Path) -> Result<FootprintSet> {
    let file: FootprintFile =
        serde_json::from_str(&read_text(path)?).map_err(|e| Error::header(path, e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::header(path, format!("unsupported format_version {}", file.format_version)));
    }
    let bad = |e: blocktrack_core::Error| Error::parse(path, e);
    let grid = LatLonGrid::new(file.lat, file.lon).map_err(bad)?;
    let parse = |s: &str| file.calendar.parse_date(s).map_err(bad);
    let dates = file.dates.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
    let footprints = file
        .footprints
        .iter()
        .map(|r| {
            let id = ComponentId { date: parse(&r.date)?, index: r.index };
            let cells: CellSet = r.cells.iter().map(|&c| c as usize).collect();
            Component::from_cells(id, cells, &grid).map_err(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FootprintSet { grid, calendar: file.calendar, dates, footprints })
}
