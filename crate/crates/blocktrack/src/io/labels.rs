//! Daily label tables: `date,label[,footprints]` with labels 0 or 1.
//!
//! Ground-truth tables need only the first two columns; detector output
//! adds the indices of each day's footprints, `;`-separated.

use std::path::Path;

use blocktrack_core::detection::BlockingLabels;
use blocktrack_core::evaluation::DailyLabels;
use blocktrack_core::Date;

use crate::error::{Error, Result};

pub fn write_labels(labels: &BlockingLabels, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::parse(path, e))?;
    let mut write = || -> csv::Result<()> {
        w.write_record(["date", "label", "footprints"])?;
        for (i, (date, blocked)) in labels.iter().enumerate() {
            let ids: Vec<String> = labels.footprints(i).iter().map(|id| id.index.to_string()).collect();
            w.write_record([date.to_string(), u8::from(blocked).to_string(), ids.join(";")])?;
        }
        w.flush()?;
        Ok(())
    };
    write().map_err(|e| Error::parse(path, e))
}

pub fn read_labels(path: &Path) -> Result<DailyLabels> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => Error::io(path, std::io::Error::other(e.to_string())),
        _ => Error::parse(path, e),
    })?;
    let headers = r.headers().map_err(|e| Error::parse(path, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::parse(path, format!("missing '{name}' column")))
    };
    let (date_col, label_col) = (column("date")?, column("label")?);

    let mut labels = DailyLabels::new();
    for (row, record) in r.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e))?;
        let line = row + 2;
        let field = |i: usize| record.get(i).ok_or_else(|| Error::parse(path, format!("line {line}: missing field")));
        let date: Date = field(date_col)?.parse().map_err(|e| Error::parse(path, format!("line {line}: {e}")))?;
        let label = match field(label_col)? {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(path, format!("line {line}: label '{other}' is not 0 or 1"))),
        };
        if labels.insert(date, label).is_some() {
            return Err(Error::parse(path, format!("line {line}: duplicate date {date}")));
        }
    }
    Ok(labels)
}
