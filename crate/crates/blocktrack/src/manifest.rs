//! Run manifests: resolved parameters, input checksums and stage timings,
//! written next to each output as `<output>.manifest.json`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::write_text;

#[derive(Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub crc32: String,
}

#[derive(Debug, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<String>,
    pub timings: Vec<StageTiming>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            params: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        self.params.insert(name.into(), serde_json::to_value(value).expect("parameter serializes"));
    }

    /// Records the CRC-32 of an input file, plus its payload for containers.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.add_input(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            let payload = crate::io::container::payload_path(path);
            if payload.exists() {
                self.add_input(&payload)?;
            }
        }
        Ok(())
    }

    fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.inputs
            .push(InputRecord { path: path.display().to_string(), crc32: format!("{:08x}", crc32fast::hash(&bytes)) });
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Runs `f` and records its wall-clock time under `stage`.
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming { stage: stage.into(), seconds: start.elapsed().as_secs_f64() });
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_text(path, &text)
    }
}

/// `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name: OsString = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
