//! Confusion metrics for daily label streams.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::calendar::{CalendarKind, Date, MonthDay};
use crate::detection::BlockingLabels;
use crate::error::{Error, Result};

/// A binary label per date.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DailyLabels(BTreeMap<Date, bool>);

impl DailyLabels {
    pub fn new() -> Self {
        DailyLabels(BTreeMap::new())
    }

    pub fn insert(&mut self, date: Date, label: bool) -> Option<bool> {
        self.0.insert(date, label)
    }

    pub fn get(&self, date: Date) -> Option<bool> {
        self.0.get(&date).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Date, bool)> + '_ {
        self.0.iter().map(|(d, l)| (*d, *l))
    }

    pub fn dates(&self) -> impl Iterator<Item = Date> + '_ {
        self.0.keys().copied()
    }

    /// Fraction of positive dates inside `window`.
    pub fn prevalence(&self, window: &DateWindow) -> f64 {
        let (pos, n) = self
            .iter()
            .filter(|(d, _)| window.contains(*d))
            .fold((0usize, 0usize), |(p, n), (_, l)| (p + usize::from(l), n + 1));
        ratio(pos, n)
    }
}

impl FromIterator<(Date, bool)> for DailyLabels {
    fn from_iter<I: IntoIterator<Item = (Date, bool)>>(iter: I) -> Self {
        DailyLabels(iter.into_iter().collect())
    }
}

impl From<&BlockingLabels> for DailyLabels {
    fn from(labels: &BlockingLabels) -> Self {
        labels.iter().collect()
    }
}

/// Which dates are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DateWindow {
    All,
    /// June, July and August.
    #[default]
    Jja,
    /// Inclusive range of days of the year. Wraps over the new year when
    /// `start > end`.
    Days {
        start: MonthDay,
        end: MonthDay,
    },
}

impl DateWindow {
    pub fn contains(&self, date: Date) -> bool {
        self.contains_month_day(date.month_day())
    }

    pub fn contains_month_day(&self, md: MonthDay) -> bool {
        match *self {
            DateWindow::All => true,
            DateWindow::Jja => (6..=8).contains(&md.month),
            DateWindow::Days { start, end } => {
                if start <= end {
                    start <= md && md <= end
                } else {
                    md >= start || md <= end
                }
            }
        }
    }
}

impl FromStr for DateWindow {
    type Err = Error;

    /// `all`, `jja`, or `custom:MM-DD:MM-DD`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(DateWindow::All),
            "jja" => Ok(DateWindow::Jja),
            other => {
                let rest = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown window '{s}'")))?;
                let (start, end) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidArgument(format!("window '{s}' needs custom:START:END")))?;
                Ok(DateWindow::Days { start: start.parse()?, end: end.parse()? })
            }
        }
    }
}

impl fmt::Display for DateWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DateWindow::All => f.write_str("all"),
            DateWindow::Jja => f.write_str("jja"),
            DateWindow::Days { start, end } => write!(f, "custom:{start}:{end}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, truth: bool) {
        match (predicted, truth) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn report(&self) -> EvalReport {
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        EvalReport {
            confusion: *self,
            accuracy: ratio(self.tp + self.tn, self.total()),
            precision,
            recall,
            f1,
            prevalence_pred: ratio(self.tp + self.fp, self.total()),
            prevalence_truth: ratio(self.tp + self.fn_, self.total()),
        }
    }
}

impl core::ops::AddAssign for Confusion {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.tn += rhs.tn;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

// Zero denominators give 0.
fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub prevalence_pred: f64,
    pub prevalence_truth: f64,
}

/// Pairs every prediction date inside `window` with its truth label.
fn aligned<'a>(
    pred: &'a DailyLabels,
    truth: &'a DailyLabels,
    window: &'a DateWindow,
) -> impl Iterator<Item = Result<(Date, bool, bool)>> + 'a {
    pred.iter().filter(|(d, _)| window.contains(*d)).map(move |(d, p)| {
        truth.get(d).map(|t| (d, p, t)).ok_or_else(|| Error::Alignment(format!("no ground truth for {d}")))
    })
}

/// Confusion metrics of `pred` against `truth` over the dates of `pred`
/// inside `window`.
pub fn score(pred: &DailyLabels, truth: &DailyLabels, window: &DateWindow) -> Result<EvalReport> {
    let mut confusion = Confusion::default();
    for item in aligned(pred, truth, window) {
        let (_, p, t) = item?;
        confusion.add(p, t);
    }
    Ok(confusion.report())
}

/// Per-month metrics of `a` treating `b` as the reference. Both streams
/// must cover the same dates.
pub fn monthly_agreement(a: &DailyLabels, b: &DailyLabels) -> Result<BTreeMap<u8, EvalReport>> {
    if a.len() != b.len() || a.dates().zip(b.dates()).any(|(x, y)| x != y) {
        return Err(Error::Alignment("the two label streams cover different dates".into()));
    }
    let mut months: BTreeMap<u8, Confusion> = BTreeMap::new();
    for ((d, pa), (_, pb)) in a.iter().zip(b.iter()) {
        months.entry(d.month()).or_default().add(pa, pb);
    }
    Ok(months.into_iter().map(|(m, c)| (m, c.report())).collect())
}

/// Outcome counts of one calendar day aggregated over years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BreakdownRow {
    pub day: MonthDay,
    /// Whether the calendar has this day at all (360-day calendars lack
    /// May 31, for instance).
    pub present: bool,
    pub counts: Confusion,
}

/// Per-calendar-day TN/TP/FP/FN counts across years.
///
/// Rows cover every month-day of the window that exists in either calendar,
/// so 360-day outputs line up with Gregorian ones; days the calendar lacks
/// are flagged absent with zero counts.
pub fn temporal_breakdown(
    pred: &DailyLabels,
    truth: &DailyLabels,
    window: &DateWindow,
    calendar: CalendarKind,
) -> Result<Vec<BreakdownRow>> {
    let mut counts: BTreeMap<MonthDay, Confusion> = BTreeMap::new();
    for item in aligned(pred, truth, window) {
        let (d, p, t) = item?;
        counts.entry(d.month_day()).or_default().add(p, t);
    }
    let mut rows = Vec::new();
    for month in 1..=12u8 {
        for day in 1..=31u8 {
            let md = MonthDay::new(month, day);
            let exists_somewhere =
                CalendarKind::Gregorian365.has_month_day(md) || CalendarKind::Fixed360.has_month_day(md);
            if !exists_somewhere || !window.contains_month_day(md) {
                continue;
            }
            rows.push(BreakdownRow {
                day: md,
                present: calendar.has_month_day(md),
                counts: counts.get(&md).copied().unwrap_or_default(),
            });
        }
    }
    Ok(rows)
}
