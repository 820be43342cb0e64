//! CSV tables: metric reports, per-day breakdowns, tuning surfaces.

use std::path::Path;

use blocktrack_core::baseline::{DisagreementCounts, OutcomeSplit};
use blocktrack_core::evaluation::{BreakdownRow, EvalReport};
use blocktrack_core::tuning::TuneResult;

use crate::error::{Error, Result};

fn write_rows(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::parse(path, e))?;
    let write = || -> csv::Result<()> {
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    };
    write().map_err(|e| Error::parse(path, e))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// One row per labelled report.
pub fn write_reports(rows: &[(String, EvalReport)], path: &Path) -> Result<()> {
    let header = strings(&[
        "scope",
        "tp",
        "tn",
        "fp",
        "fn",
        "accuracy",
        "precision",
        "recall",
        "f1",
        "prevalence_pred",
        "prevalence_truth",
    ]);
    write_rows(
        path,
        &header,
        rows.iter().map(|(scope, r)| {
            let c = r.confusion;
            vec![
                scope.clone(),
                c.tp.to_string(),
                c.tn.to_string(),
                c.fp.to_string(),
                c.fn_.to_string(),
                r.accuracy.to_string(),
                r.precision.to_string(),
                r.recall.to_string(),
                r.f1.to_string(),
                r.prevalence_pred.to_string(),
                r.prevalence_truth.to_string(),
            ]
        }),
    )
}

pub fn write_breakdown(rows: &[BreakdownRow], path: &Path) -> Result<()> {
    write_rows(
        path,
        &strings(&["day", "present", "tn", "tp", "fp", "fn"]),
        rows.iter().map(|r| {
            let c = r.counts;
            vec![
                r.day.to_string(),
                u8::from(r.present).to_string(),
                c.tn.to_string(),
                c.tp.to_string(),
                c.fp.to_string(),
                c.fn_.to_string(),
            ]
        }),
    )
}

/// Every grid point with its mean and per-fold scores.
pub fn write_surface(result: &TuneResult, path: &Path) -> Result<()> {
    let n_folds = result.surface.first().map_or(0, |s| s.fold_scores.len());
    let mut header = strings(&["lambda", "min_overlap", "mean"]);
    header.extend((0..n_folds).map(|k| format!("fold_{k}")));
    write_rows(
        path,
        &header,
        result.surface.iter().map(|s| {
            let mut row = vec![s.lambda.to_string(), s.overlap.to_string(), s.mean.to_string()];
            row.extend(s.fold_scores.iter().map(f64::to_string));
            row
        }),
    )
}

pub fn write_disagreement(counts: &DisagreementCounts, path: &Path) -> Result<()> {
    let row = |truth: &str, s: &OutcomeSplit| {
        vec![
            truth.to_string(),
            s.only_ours_correct.to_string(),
            s.only_dg83_correct.to_string(),
            s.both_correct.to_string(),
            s.both_incorrect.to_string(),
        ]
    };
    write_rows(
        path,
        &strings(&["truth", "only_ours_correct", "only_dg83_correct", "both_correct", "both_incorrect"]),
        [row("blocked", &counts.blocked), row("not_blocked", &counts.not_blocked)],
    )
}
