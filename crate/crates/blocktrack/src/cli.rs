//! The `blocktrack` command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blocktrack_core::baseline::{dg83_detect, disagreement_table, Dg83Config};
use blocktrack_core::climatology::{preprocess, PreprocessConfig, DEFAULT_HARMONICS, DEFAULT_STD_FLOOR};
use blocktrack_core::detection::{detect, Connectivity, DetectParams, DEFAULT_MIN_DAYS};
use blocktrack_core::evaluation::{monthly_agreement, score, temporal_breakdown, DailyLabels, DateWindow};
use blocktrack_core::grid::{block_average, crop_domain};
use blocktrack_core::tuning::{grid_range, tune, Objective, TuneConfig};
use blocktrack_core::uncertainty::{
    contour_boxplot, default_epsilon_grid, frequency_map_over, seasonal_stack, ContourEnsemble, EnsembleSelector,
};
use blocktrack_core::CalendarKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{resolve, Config};
use crate::error::{Error, Result};
use crate::io::footprints::{read_footprints, write_footprints, FootprintSet};
use crate::io::frequency::write_frequency_csv;
use crate::io::geojson::{boxplot_collection, median_stack_collection, write_geojson};
use crate::io::labels::{read_labels, write_labels};
use crate::io::tables::{write_breakdown, write_disagreement, write_reports, write_surface};
use crate::io::vti::write_volume_vti;
use crate::io::{read_series, write_series, GridSeries};
use crate::manifest::{manifest_path, Manifest};

pub const EXIT_DATA_ERROR: u8 = 3;
pub const THREADS_ENV: &str = "BLOCKTRACK_THREADS";

#[derive(Debug, Parser)]
#[command(name = "blocktrack", version, about = "Detect, track and summarize atmospheric blocking events")]
pub struct Cli {
    /// Worker threads (falls back to BLOCKTRACK_THREADS, the config file, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the seasonal cycle and write normalized anomalies.
    Preprocess(PreprocessArgs),
    /// Track superlevel sets of a normalized series and label blocked days.
    Detect(DetectArgs),
    /// Run the fixed-threshold DG83 index on raw heights.
    Dg83(Dg83Args),
    /// Score predicted labels against ground truth.
    Evaluate(EvaluateArgs),
    /// Cross-validated grid search over lambda and C.
    Tune(TuneArgs),
    /// Contour boxplot of one footprint ensemble as GeoJSON.
    Boxplot(BoxplotArgs),
    /// Per-cell count of blocked days.
    Freqmap(FreqmapArgs),
    /// Daily medians and frequency slices stacked over a season.
    Stack(StackArgs),
    /// Month-by-month agreement of two label streams.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Raw geopotential height container (header .json).
    #[arg(long)]
    pub input: PathBuf,
    /// Normalized anomaly container to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the detrended anomalies in meters.
    #[arg(long)]
    pub anomalies: Option<PathBuf>,
    #[command(flatten)]
    pub climatology: ClimatologyArgs,
    /// Average LATxLON blocks of cells first, e.g. `2x2`.
    #[arg(long, value_parser = parse_block)]
    pub block: Option<(usize, usize)>,
    /// Keep cells inside LAT_MIN:LAT_MAX:LON_MIN:LON_MAX (degrees).
    #[arg(long, value_parser = parse_crop, allow_hyphen_values = true)]
    pub crop: Option<[f64; 4]>,
}

#[derive(Debug, Args)]
pub struct ClimatologyArgs {
    /// Fourier harmonics kept in the seasonal cycle.
    #[arg(long)]
    pub harmonics: Option<usize>,
    /// Lower bound of the normalization divisor, meters.
    #[arg(long)]
    pub floor: Option<f64>,
    /// Skip removing the linear trend.
    #[arg(long)]
    pub no_detrend: bool,
}

#[derive(Debug, Args)]
pub struct TrackingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Minimum latitude-weighted overlap C between consecutive days.
    #[arg(long)]
    pub min_overlap: Option<f64>,
    #[arg(long)]
    pub min_days: Option<usize>,
    #[arg(long, value_parser = parse_connectivity)]
    pub connectivity: Option<Connectivity>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Normalized anomaly container.
    #[arg(long)]
    pub input: PathBuf,
    /// Labels CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Footprints JSON to write (default: next to the labels).
    #[arg(long)]
    pub footprints: Option<PathBuf>,
    #[command(flatten)]
    pub tracking: TrackingArgs,
}

#[derive(Debug, Args)]
pub struct Dg83Args {
    /// Raw geopotential height container.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub footprints: Option<PathBuf>,
    /// Threshold in standard deviations.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    pub climatology: ClimatologyArgs,
    #[arg(long)]
    pub min_days: Option<usize>,
    #[arg(long)]
    pub min_overlap_cells: Option<usize>,
    /// Scale anomalies by sin 45 / sin(lat) before thresholding.
    #[arg(long)]
    pub latitude_rescale: bool,
    #[arg(long, value_parser = parse_connectivity)]
    pub connectivity: Option<Connectivity>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Report CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<DateWindow>,
    /// Also write per-calendar-day outcome counts.
    #[arg(long)]
    pub breakdown: Option<PathBuf>,
    /// Calendar of the labels, used to flag absent days in the breakdown.
    #[arg(long, value_parser = parse_calendar)]
    pub calendar: Option<CalendarKind>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// Normalized anomaly container.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Score surface CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// START:END:STEP or a comma list.
    #[arg(long, value_parser = parse_value_grid)]
    pub lambda_grid: Option<ValueGrid>,
    #[arg(long = "C-grid", alias = "c-grid", value_parser = parse_value_grid)]
    pub c_grid: Option<ValueGrid>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub min_days: Option<usize>,
    #[arg(long, value_parser = parse_connectivity)]
    pub connectivity: Option<Connectivity>,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<DateWindow>,
    /// `f1` or `balance` (smallest |precision - recall|).
    #[arg(long, value_parser = parse_objective)]
    pub objective: Option<Objective>,
}

#[derive(Debug, Args)]
pub struct BoxplotArgs {
    /// Footprints JSON written by `detect` or `dg83`.
    #[arg(long)]
    pub input: PathBuf,
    /// `daily:MM-DD`, `monthly:MM` or `seasonal[:WINDOW]`.
    #[arg(long, value_parser = parse_ensemble)]
    pub ensemble: Option<EnsembleSelector>,
    #[arg(long, value_parser = parse_value_grid)]
    pub epsilon_grid: Option<ValueGrid>,
    /// GeoJSON to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FreqmapArgs {
    /// Footprints JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Frequency CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<DateWindow>,
}

#[derive(Debug, Args)]
pub struct StackArgs {
    /// Footprints JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Frequency volume (.vti) to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Median stack GeoJSON (default: next to the volume).
    #[arg(long)]
    pub medians: Option<PathBuf>,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<DateWindow>,
    #[arg(long, value_parser = parse_value_grid)]
    pub epsilon_grid: Option<ValueGrid>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Labels CSV of the method under test.
    #[arg(long)]
    pub pred: PathBuf,
    /// Labels CSV treated as the reference (e.g. DG83 output).
    #[arg(long)]
    pub reference: PathBuf,
    /// Monthly agreement CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Ground truth; adds a disagreement table.
    #[arg(long, requires = "disagreement")]
    pub truth: Option<PathBuf>,
    #[arg(long, requires = "truth")]
    pub disagreement: Option<PathBuf>,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<DateWindow>,
}

fn parse_block(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("'{s}' is not LATxLON"))?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("'{v}': {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_crop(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| format!("'{s}' is not LAT_MIN:LAT_MAX:LON_MIN:LON_MAX"))
}

fn parse_connectivity(s: &str) -> std::result::Result<Connectivity, String> {
    s.parse().map_err(|e: blocktrack_core::Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<DateWindow, String> {
    s.parse().map_err(|e: blocktrack_core::Error| e.to_string())
}

fn parse_calendar(s: &str) -> std::result::Result<CalendarKind, String> {
    s.parse().map_err(|e: blocktrack_core::Error| e.to_string())
}

fn parse_ensemble(s: &str) -> std::result::Result<EnsembleSelector, String> {
    s.parse().map_err(|e: blocktrack_core::Error| e.to_string())
}

fn parse_objective(s: &str) -> std::result::Result<Objective, String> {
    match s {
        "f1" => Ok(Objective::F1),
        "balance" => Ok(Objective::PrecisionRecallBalance),
        _ => Err(format!("objective '{s}' is not f1 or balance")),
    }
}

/// A list of parameter values given as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueGrid(pub Vec<f64>);

fn parse_value_grid(s: &str) -> std::result::Result<ValueGrid, String> {
    parse_grid(s).map(ValueGrid)
}

/// `START:END:STEP` (inclusive) or comma-separated values.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, c] => grid_range(num(a)?, num(b)?, num(c)?).map_err(|e| e.to_string()),
        [single] => single.split(',').map(num).collect(),
        _ => Err(format!("'{s}' is neither START:END:STEP nor a comma list")),
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::F1 => "f1",
        Objective::PrecisionRecallBalance => "balance",
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Parses arguments, runs the command and maps errors to exit codes:
/// 2 for usage errors, 3 for data errors.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA_ERROR)
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let env_threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| Error::Config(format!("{THREADS_ENV}: {e}")))?),
        Err(_) => None,
    };
    let threads = cli.threads.or(env_threads).or(config.threads);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| dispatch(cli.command, &config))
}

fn dispatch(command: Command, config: &Config) -> Result<()> {
    match command {
        Command::Preprocess(a) => cmd_preprocess(a, config),
        Command::Detect(a) => cmd_detect(a, config),
        Command::Dg83(a) => cmd_dg83(a, config),
        Command::Evaluate(a) => cmd_evaluate(a, config),
        Command::Tune(a) => cmd_tune(a, config),
        Command::Boxplot(a) => cmd_boxplot(a, config),
        Command::Freqmap(a) => cmd_freqmap(a, config),
        Command::Stack(a) => cmd_stack(a, config),
        Command::Compare(a) => cmd_compare(a, config),
    }
}

fn window_of(flag: Option<DateWindow>, config: &Config) -> Result<DateWindow> {
    resolve(flag, config.window.as_deref(), "window", str::parse::<DateWindow>, DateWindow::default)
}

fn epsilons_of(flag: Option<ValueGrid>, config: &Config) -> Result<Vec<f64>> {
    resolve(flag.map(|g| g.0), config.epsilon_grid.as_deref(), "epsilon_grid", parse_grid, default_epsilon_grid)
}

fn connectivity_of(flag: Option<Connectivity>, config: &Config) -> Result<Connectivity> {
    resolve(flag, config.connectivity.as_deref(), "connectivity", parse_connectivity, Connectivity::default)
}

fn climatology_of(a: &ClimatologyArgs, config: &Config) -> PreprocessConfig {
    PreprocessConfig {
        harmonics: a.harmonics.or(config.harmonics).unwrap_or(DEFAULT_HARMONICS),
        floor: a.floor.or(config.floor).unwrap_or(DEFAULT_STD_FLOOR),
        detrend: !a.no_detrend && config.detrend.unwrap_or(true),
    }
}

fn record_climatology(m: &mut Manifest, c: &PreprocessConfig) {
    m.param("harmonics", c.harmonics);
    m.param("floor", c.floor);
    m.param("detrend", c.detrend);
}

fn cmd_preprocess(a: PreprocessArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("preprocess");
    let clim = climatology_of(&a.climatology, config);
    record_climatology(&mut m, &clim);
    m.param("block", a.block);
    m.param("crop", a.crop);
    m.input(&a.input)?;

    let raw = m.time("read", || read_series(&a.input))?;
    let mut series = raw.series;
    if let Some((fl, fo)) = a.block {
        series = m.time("block_average", || block_average(&series, fl, fo))?;
    }
    if let Some([lat0, lat1, lon0, lon1]) = a.crop {
        series = m.time("crop", || crop_domain(&series, lat0, lat1, lon0, lon1))?;
    }
    let out = m.time("preprocess", || preprocess(&series, &clim))?;
    m.time("write", || -> Result<()> {
        write_series(&GridSeries::new(raw.variable.clone(), "1", out.normalized), &a.out)?;
        if let Some(p) = &a.anomalies {
            write_series(&GridSeries::new(raw.variable.clone(), raw.units.clone(), out.anomalies), p)?;
        }
        Ok(())
    })?;
    m.output(&a.out);
    if let Some(p) = &a.anomalies {
        m.output(p);
    }
    m.write(&manifest_path(&a.out))
}

fn cmd_detect(a: DetectArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("detect");
    m.input(&a.input)?;
    let input = m.time("read", || read_series(&a.input))?;
    let series = input.series;
    let defaults = DetectParams::for_calendar(series.calendar());
    let t = &a.tracking;
    let params = DetectParams {
        lambda: t.lambda.or(config.lambda).unwrap_or(defaults.lambda),
        min_overlap: t.min_overlap.or(config.min_overlap).unwrap_or(defaults.min_overlap),
        min_days: t.min_days.or(config.min_days).unwrap_or(defaults.min_days),
        connectivity: connectivity_of(t.connectivity, config)?,
    };
    m.param("lambda", params.lambda);
    m.param("min_overlap", params.min_overlap);
    m.param("min_days", params.min_days);
    m.param("connectivity", params.connectivity.to_string());

    let detection = m.time("detect", || detect(&series, &params))?;
    let fp_path = a.footprints.clone().unwrap_or_else(|| sibling(&a.out, ".footprints.json"));
    m.time("write", || -> Result<()> {
        write_labels(&detection.labels, &a.out)?;
        write_footprints(&FootprintSet::from_detection(&detection, series.grid(), series.calendar()), &fp_path)
    })?;
    log::info!("{} of {} days blocked", detection.labels.n_blocked(), series.n_dates());
    m.output(&a.out);
    m.output(&fp_path);
    m.write(&manifest_path(&a.out))
}

fn cmd_dg83(a: Dg83Args, config: &Config) -> Result<()> {
    let mut m = Manifest::new("dg83");
    let clim = climatology_of(&a.climatology, config);
    let defaults = Dg83Config::default();
    let cfg = Dg83Config {
        sigma_multiplier: a.sigma.or(config.sigma).unwrap_or(defaults.sigma_multiplier),
        floor: clim.floor,
        min_days: a.min_days.or(config.min_days).unwrap_or(defaults.min_days),
        min_overlap_cells: a.min_overlap_cells.or(config.min_overlap_cells).unwrap_or(defaults.min_overlap_cells),
        latitude_rescale: a.latitude_rescale || config.latitude_rescale.unwrap_or(false),
        connectivity: connectivity_of(a.connectivity, config)?,
    };
    record_climatology(&mut m, &clim);
    m.param("sigma", cfg.sigma_multiplier);
    m.param("min_days", cfg.min_days);
    m.param("min_overlap_cells", cfg.min_overlap_cells);
    m.param("latitude_rescale", cfg.latitude_rescale);
    m.param("connectivity", cfg.connectivity.to_string());
    m.input(&a.input)?;

    let raw = m.time("read", || read_series(&a.input))?.series;
    let pre = m.time("preprocess", || preprocess(&raw, &clim))?;
    let detection = m.time("dg83", || dg83_detect(&pre.anomalies, &pre.cycle, &cfg))?;
    let fp_path = a.footprints.clone().unwrap_or_else(|| sibling(&a.out, ".footprints.json"));
    m.time("write", || -> Result<()> {
        write_labels(&detection.labels, &a.out)?;
        write_footprints(&FootprintSet::from_detection(&detection, raw.grid(), raw.calendar()), &fp_path)
    })?;
    m.output(&a.out);
    m.output(&fp_path);
    m.write(&manifest_path(&a.out))
}

fn cmd_evaluate(a: EvaluateArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("evaluate");
    let window = window_of(a.window, config)?;
    m.param("window", window.to_string());
    m.input(&a.pred)?;
    m.input(&a.truth)?;
    let (pred, truth) = m.time("read", || -> Result<(DailyLabels, DailyLabels)> {
        Ok((read_labels(&a.pred)?, read_labels(&a.truth)?))
    })?;
    let report = m.time("score", || score(&pred, &truth, &window))?;
    write_reports(&[(window.to_string(), report)], &a.out)?;
    m.output(&a.out);
    if let Some(path) = &a.breakdown {
        let calendar =
            resolve(a.calendar, config.calendar.as_deref(), "calendar", parse_calendar, || CalendarKind::Gregorian365)?;
        m.param("calendar", calendar.name());
        let rows = m.time("breakdown", || temporal_breakdown(&pred, &truth, &window, calendar))?;
        write_breakdown(&rows, path)?;
        m.output(path);
    }
    println!(
        "accuracy {:.4} precision {:.4} recall {:.4} f1 {:.4} over {} days",
        report.accuracy,
        report.precision,
        report.recall,
        report.f1,
        report.confusion.total()
    );
    m.write(&manifest_path(&a.out))
}

fn cmd_tune(a: TuneArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("tune");
    let defaults = TuneConfig::default();
    let cfg = TuneConfig {
        lambda_grid: resolve(
            a.lambda_grid.map(|g| g.0),
            config.lambda_grid.as_deref(),
            "lambda_grid",
            parse_grid,
            || defaults.lambda_grid.clone(),
        )?,
        overlap_grid: resolve(a.c_grid.map(|g| g.0), config.c_grid.as_deref(), "c_grid", parse_grid, || {
            defaults.overlap_grid.clone()
        })?,
        n_folds: a.folds.or(config.folds).unwrap_or(defaults.n_folds),
        min_days: a.min_days.or(config.min_days).unwrap_or(DEFAULT_MIN_DAYS),
        connectivity: connectivity_of(a.connectivity, config)?,
        window: window_of(a.window, config)?,
        objective: resolve(a.objective, config.objective.as_deref(), "objective", parse_objective, || Objective::F1)?,
    };
    m.param("lambda_grid", &cfg.lambda_grid);
    m.param("c_grid", &cfg.overlap_grid);
    m.param("folds", cfg.n_folds);
    m.param("min_days", cfg.min_days);
    m.param("connectivity", cfg.connectivity.to_string());
    m.param("window", cfg.window.to_string());
    m.param("objective", objective_name(cfg.objective));
    m.input(&a.input)?;
    m.input(&a.truth)?;

    let series = m.time("read", || read_series(&a.input))?.series;
    let truth = read_labels(&a.truth)?;
    let result = m.time("tune", || tune(&series, &truth, &cfg))?;
    write_surface(&result, &a.out)?;
    m.param("best_lambda", result.best_lambda);
    m.param("best_min_overlap", result.best_overlap);
    m.param("best_mean", result.best_mean);
    m.param("fold_years", &result.folds);
    println!("best lambda {} C {} mean score {:.4}", result.best_lambda, result.best_overlap, result.best_mean);
    m.output(&a.out);
    m.write(&manifest_path(&a.out))
}

fn cmd_boxplot(a: BoxplotArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("boxplot");
    let selector = resolve(a.ensemble, config.ensemble.as_deref(), "ensemble", parse_ensemble, || {
        EnsembleSelector::Seasonal(DateWindow::Jja)
    })?;
    let epsilons = epsilons_of(a.epsilon_grid, config)?;
    m.param("ensemble", selector.to_string());
    m.param("epsilon_grid", &epsilons);
    m.input(&a.input)?;
    let set = m.time("read", || read_footprints(&a.input))?;
    let ensemble = ContourEnsemble::select(set.grid.shape(), &set.footprints, &selector)?;
    let boxplot = m.time("boxplot", || contour_boxplot(&ensemble, &epsilons))?;
    m.param("epsilon_used", boxplot.epsilon);
    m.param("median", boxplot.median.to_string());
    m.param("members", ensemble.len());
    write_geojson(&boxplot_collection(&boxplot, &ensemble, &set.grid), &a.out)?;
    m.output(&a.out);
    m.write(&manifest_path(&a.out))
}

fn cmd_freqmap(a: FreqmapArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("freqmap");
    let window = window_of(a.window, config)?;
    m.param("window", window.to_string());
    m.input(&a.input)?;
    let set = m.time("read", || read_footprints(&a.input))?;
    let n_days = set.dates.iter().filter(|d| window.contains(**d)).count();
    let map = m.time("frequency", || {
        frequency_map_over(
            set.grid.shape(),
            n_days,
            set.footprints.iter().filter(|c| window.contains(c.id.date)).map(|c| (c.id.date, &c.cells)),
        )
    })?;
    write_frequency_csv(&map, &set.grid, &a.out)?;
    m.param("ensemble_days", n_days);
    m.output(&a.out);
    m.write(&manifest_path(&a.out))
}

fn cmd_stack(a: StackArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("stack");
    let window = window_of(a.window, config)?;
    let epsilons = epsilons_of(a.epsilon_grid, config)?;
    m.param("window", window.to_string());
    m.param("epsilon_grid", &epsilons);
    m.input(&a.input)?;
    let set = m.time("read", || read_footprints(&a.input))?;
    let stack = m.time("stack", || {
        seasonal_stack(set.grid.shape(), set.calendar, &set.dates, &set.refs(), &window, &epsilons)
    })?;
    let medians = a.medians.clone().unwrap_or_else(|| sibling(&a.out, ".medians.geojson"));
    write_volume_vti(&stack, &set.grid, &a.out)?;
    write_geojson(&median_stack_collection(&stack, &set.grid), &medians)?;
    m.param("slices", stack.len());
    m.output(&a.out);
    m.output(&medians);
    m.write(&manifest_path(&a.out))
}

fn cmd_compare(a: CompareArgs, config: &Config) -> Result<()> {
    let mut m = Manifest::new("compare");
    let window = window_of(a.window, config)?;
    m.param("window", window.to_string());
    m.input(&a.pred)?;
    m.input(&a.reference)?;
    let pred = read_labels(&a.pred)?;
    let reference = read_labels(&a.reference)?;
    let months = m.time("monthly_agreement", || monthly_agreement(&pred, &reference))?;
    let rows: Vec<(String, _)> = months.into_iter().map(|(month, r)| (format!("{month:02}"), r)).collect();
    write_reports(&rows, &a.out)?;
    m.output(&a.out);
    if let (Some(truth_path), Some(out)) = (&a.truth, &a.disagreement) {
        m.input(truth_path)?;
        let truth = read_labels(truth_path)?;
        let table = m.time("disagreement", || disagreement_table(&pred, &reference, &truth, &window))?;
        write_disagreement(&table, out)?;
        m.output(out);
    }
    m.write(&manifest_path(&a.out))
}
