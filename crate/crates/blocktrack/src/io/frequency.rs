//! Frequency heatmaps as CSV: a header row of longitudes, then one row per
//! latitude starting with the latitude value.

use std::path::Path;

use blocktrack_core::uncertainty::FrequencyMap;
use blocktrack_core::LatLonGrid;

use crate::error::{Error, Result};

pub fn write_frequency_csv(map: &FrequencyMap, grid: &LatLonGrid, path: &Path) -> Result<()> {
    if map.shape() != grid.shape() {
        return Err(blocktrack_core::Error::ShapeMismatch("frequency map and grid differ".into()).into());
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::parse(path, e))?;
    let mut write = || -> csv::Result<()> {
        let mut header = vec!["lat".to_string()];
        header.extend(grid.lon().iter().map(|v| v.to_string()));
        w.write_record(&header)?;
        for (r, lat) in grid.lat().iter().enumerate() {
            let mut row = vec![lat.to_string()];
            row.extend((0..grid.n_lon()).map(|c| map.get(r, c).to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    };
    write().map_err(|e| Error::parse(path, e))
}

/// Parsed table: (lon header, lat column, counts by row).
pub type FrequencyTable = (Vec<f64>, Vec<f64>, Vec<Vec<u32>>);

pub fn read_frequency_csv(path: &Path) -> Result<FrequencyTable> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::parse(path, e))?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::parse(path, format!("'{s}': {e}")));
    let headers = r.headers().map_err(|e| Error::parse(path, e))?.clone();
    let lon = headers.iter().skip(1).map(num).collect::<Result<Vec<_>>>()?;
    let mut lat = Vec::new();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::parse(path, e))?;
        lat.push(num(&record[0])?);
        rows.push(
            record
                .iter()
                .skip(1)
                .map(|s| s.trim().parse::<u32>().map_err(|e| Error::parse(path, format!("'{s}': {e}"))))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((lon, lat, rows))
}
