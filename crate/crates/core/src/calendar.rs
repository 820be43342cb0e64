//! Calendar dates for daily series.
//!
//! Two calendars are supported: the proleptic Gregorian calendar, whose
//! seasonal cycle is indexed on 365 days (Feb 29 shares the Feb 28 slot), and
//! the 360-day model calendar made of twelve 30-day months.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

const CUMULATIVE_DAYS: [u16; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];
const MONTH_LENGTHS: [u8; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CalendarKind {
    Gregorian365,
    Fixed360,
}

impl CalendarKind {
    /// Length of the climatological cycle (365 or 360 days).
    pub fn cycle_len(self) -> usize {
        match self {
            CalendarKind::Gregorian365 => 365,
            CalendarKind::Fixed360 => 360,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CalendarKind::Gregorian365 => "gregorian365",
            CalendarKind::Fixed360 => "fixed360",
        }
    }

    pub fn days_in_month(self, year: i32, month: u8) -> u8 {
        match self {
            CalendarKind::Fixed360 => 30,
            CalendarKind::Gregorian365 => {
                if month == 2 && is_leap_year(year) {
                    29
                } else {
                    MONTH_LENGTHS[usize::from(month - 1)]
                }
            }
        }
    }

    pub fn is_valid(self, date: Date) -> bool {
        (1..=12).contains(&date.month) && date.day >= 1 && date.day <= self.days_in_month(date.year, date.month)
    }

    /// Builds a date, rejecting days that do not exist in this calendar.
    pub fn date(self, year: i32, month: u8, day: u8) -> Result<Date> {
        let date = Date { year, month, day };
        if self.is_valid(date) {
            Ok(date)
        } else {
            Err(Error::InvalidDate(format!("{date} does not exist in the {} calendar", self.name())))
        }
    }

    pub fn parse_date(self, s: &str) -> Result<Date> {
        let date: Date = s.parse()?;
        self.date(date.year, date.month, date.day)
    }

    /// Index of `date` in the climatological cycle, in `[0, cycle_len)`.
    ///
    /// Gregorian Feb 29 maps onto the Feb 28 index.
    pub fn day_of_year(self, date: Date) -> usize {
        match self {
            CalendarKind::Fixed360 => usize::from(date.month - 1) * 30 + usize::from(date.day - 1),
            CalendarKind::Gregorian365 => {
                let day = if date.month == 2 && date.day == 29 { 28 } else { date.day };
                usize::from(CUMULATIVE_DAYS[usize::from(date.month - 1)]) + usize::from(day - 1)
            }
        }
    }

    /// The month and day occupying cycle slot `doy` (non-leap for Gregorian).
    pub fn month_day_of_cycle(self, doy: usize) -> MonthDay {
        assert!(doy < self.cycle_len(), "cycle index {doy} out of range");
        match self {
            CalendarKind::Fixed360 => MonthDay { month: (doy / 30) as u8 + 1, day: (doy % 30) as u8 + 1 },
            CalendarKind::Gregorian365 => {
                let month = CUMULATIVE_DAYS.iter().rposition(|&c| usize::from(c) <= doy).unwrap();
                MonthDay { month: month as u8 + 1, day: (doy - usize::from(CUMULATIVE_DAYS[month])) as u8 + 1 }
            }
        }
    }

    /// The next calendar day.
    pub fn succ(self, date: Date) -> Date {
        if date.day < self.days_in_month(date.year, date.month) {
            Date { day: date.day + 1, ..date }
        } else if date.month < 12 {
            Date { month: date.month + 1, day: 1, ..date }
        } else {
            Date { year: date.year + 1, month: 1, day: 1 }
        }
    }

    /// The day following `md` in a year without leap day.
    pub fn succ_month_day(self, md: MonthDay) -> MonthDay {
        let next = self.succ(Date { year: 1, month: md.month, day: md.day });
        next.month_day()
    }

    /// Whether `md` is a day of this calendar in at least some year.
    pub fn has_month_day(self, md: MonthDay) -> bool {
        // Year 2000 is a Gregorian leap year.
        self.is_valid(Date { year: 2000, month: md.month, day: md.day })
    }
}

impl fmt::Display for CalendarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CalendarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gregorian365" | "gregorian" | "standard" => Ok(CalendarKind::Gregorian365),
            "fixed360" | "360_day" | "360day" => Ok(CalendarKind::Fixed360),
            _ => Err(Error::InvalidArgument(format!("unknown calendar '{s}'"))),
        }
    }
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

/// A calendar date. Ordering is chronological.
///
/// A `Date` on its own only guarantees `1 <= month <= 12` and `1 <= day <= 31`;
/// validity against a particular calendar is checked by [`CalendarKind::date`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Date {
    year: i32,
    month: u8,
    day: u8,
}

impl Date {
    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u8 {
        self.month
    }

    pub fn day(self) -> u8 {
        self.day
    }

    pub fn month_day(self) -> MonthDay {
        MonthDay { month: self.month, day: self.day }
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

impl FromStr for Date {
    type Err = Error;

    /// Parses `YYYY-MM-DD` without checking it against a calendar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDate(format!("'{s}' is not a YYYY-MM-DD date"));
        let s = s.trim();
        let (rest, day) = s.rsplit_once('-').ok_or_else(bad)?;
        let (year, month) = rest.rsplit_once('-').ok_or_else(bad)?;
        if year.is_empty() || month.len() != 2 || day.len() != 2 {
            return Err(bad());
        }
        let year: i32 = year.parse().map_err(|_| bad())?;
        let month: u8 = month.parse().map_err(|_| bad())?;
        let day: u8 = day.parse().map_err(|_| bad())?;
        if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
            return Err(bad());
        }
        Ok(Date { year, month, day })
    }
}

/// A day of the year without the year, e.g. `06-05`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonthDay {
    pub month: u8,
    pub day: u8,
}

impl MonthDay {
    pub const fn new(month: u8, day: u8) -> Self {
        MonthDay { month, day }
    }
}

impl fmt::Display for MonthDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}-{:02}", self.month, self.day)
    }
}

impl FromStr for MonthDay {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDate(format!("'{s}' is not a MM-DD day"));
        let (m, d) = s.trim().split_once('-').ok_or_else(bad)?;
        let month: u8 = m.parse().map_err(|_| bad())?;
        let day: u8 = d.parse().map_err(|_| bad())?;
        if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
            return Err(bad());
        }
        Ok(MonthDay { month, day })
    }
}
