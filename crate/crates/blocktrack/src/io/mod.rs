//! File formats read and written by the command-line tool.

pub mod container;
pub mod footprints;
pub mod frequency;
pub mod geojson;
pub mod labels;
pub mod tables;
pub mod vti;

pub use container::{read_series, write_series, GridSeries};

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Calendars are stored by name in every header.
pub(crate) mod calendar_name {
    use blocktrack_core::CalendarKind;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(cal: &CalendarKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(cal.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CalendarKind, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(de::Error::custom)
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
