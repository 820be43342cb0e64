//! Synthetic inputs and helpers for driving the `blocktrack` binary.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use blocktrack::io::{write_series, GridSeries};
use blocktrack_core::{CalendarKind, DailyFieldSeries, Date, LatLonGrid};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const BIN: &str = env!("CARGO_BIN_EXE_blocktrack");

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn blocktrack(args: &[&str]) -> Output {
    let out = Command::new(BIN).args(args).env_remove("BLOCKTRACK_THREADS").output().expect("binary runs");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs the binary and panics with its stderr on failure.
pub fn ok(args: &[&str]) -> Output {
    let out = blocktrack(args);
    assert_eq!(out.code, 0, "blocktrack {args:?} failed:\n{}", out.stderr);
    out
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Four 360-day years of raw heights on a 12 x 16 grid: a seasonal cycle,
/// noise, a high parked over roughly the same spot for nine July days each
/// year and a fast mover in August.
pub fn raw_heights() -> DailyFieldSeries {
    let cal = CalendarKind::Fixed360;
    let grid = LatLonGrid::regular(70.0, -2.0, 12, -20.0, 2.0, 16).unwrap();
    let dates: Vec<Date> = (1990..1994)
        .flat_map(|y| (1..=12).flat_map(move |m| (1..=30).map(move |d| cal.date(y, m, d).unwrap())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let noise: Vec<f64> = (0..dates.len() * grid.n_cells()).map(|_| rng.gen_range(-25.0..25.0)).collect();
    let n_cells = grid.n_cells();
    let n_lon = grid.n_lon();
    let ds = dates.clone();
    DailyFieldSeries::from_fn(grid, cal, dates, move |t, r, c| {
        let d = ds[t];
        let doy = t % 360;
        let mut v = 5600.0 - 120.0 * (TAU * doy as f64 / 360.0).cos() - 4.0 * r as f64;
        v += noise[t * n_cells + r * n_lon + c];
        let k = (d.year() - 1990) as f64;
        let bump = |cr: f64, cc: f64, amp: f64, radius: f64| {
            let d2 = (r as f64 - cr).powi(2) + (c as f64 - cc).powi(2);
            amp * (-d2 / (2.0 * radius * radius)).exp()
        };
        if d.month() == 7 && (10..=18).contains(&d.day()) {
            v += bump(5.0 + 0.3 * k, 7.0 + 0.5 * k, 320.0, 3.0);
        }
        if d.month() == 8 && (5..=12).contains(&d.day()) {
            let age = (d.day() - 5) as f64;
            v += bump(4.0, 2.0 + 2.5 * age, 280.0, 1.8);
        }
        v
    })
    .unwrap()
}

pub fn write_raw(dir: &Path) -> PathBuf {
    let path = dir.join("z500.json");
    write_series(&GridSeries::new("z500", "m", raw_heights()), &path).unwrap();
    path
}

/// Every command of the tool on the synthetic input, with `threads`
/// workers. Returns the bytes of every output except manifests, keyed by
/// file name.
pub fn run_pipeline(dir: &Path, threads: usize) -> BTreeMap<String, Vec<u8>> {
    let raw = write_raw(dir);
    let p = |name: &str| dir.join(name);
    let t = threads.to_string();
    let th = ["--threads", t.as_str()];
    let run = |args: &[&str]| ok(&[&th[..], args].concat());

    run(&["preprocess", "--input", s(&raw), "--out", s(&p("z.json")), "--anomalies", s(&p("anom.json"))]);
    run(&["detect", "--input", s(&p("z.json")), "--out", s(&p("ours.csv")), "--lambda", "1.0", "--min-overlap", "8"]);
    run(&["dg83", "--input", s(&raw), "--out", s(&p("dg83.csv"))]);
    run(&[
        "evaluate",
        "--pred",
        s(&p("ours.csv")),
        "--truth",
        s(&p("dg83.csv")),
        "--out",
        s(&p("eval.csv")),
        "--breakdown",
        s(&p("days.csv")),
        "--calendar",
        "360_day",
    ]);
    run(&[
        "tune",
        "--input",
        s(&p("z.json")),
        "--truth",
        s(&p("dg83.csv")),
        "--out",
        s(&p("surface.csv")),
        "--lambda-grid",
        "0.8:1.6:0.2",
        "--C-grid",
        "4,8,16",
        "--folds",
        "2",
    ]);
    run(&["boxplot", "--input", s(&p("ours.footprints.json")), "--out", s(&p("box.geojson"))]);
    run(&["freqmap", "--input", s(&p("ours.footprints.json")), "--out", s(&p("freq.csv"))]);
    run(&["stack", "--input", s(&p("ours.footprints.json")), "--out", s(&p("stack.vti"))]);
    run(&[
        "compare",
        "--pred",
        s(&p("ours.csv")),
        "--reference",
        s(&p("dg83.csv")),
        "--out",
        s(&p("monthly.csv")),
        "--truth",
        s(&p("dg83.csv")),
        "--disagreement",
        s(&p("disagree.csv")),
    ]);

    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if !name.ends_with(".manifest.json") {
            out.insert(name, fs::read(&path).unwrap());
        }
    }
    out
}
