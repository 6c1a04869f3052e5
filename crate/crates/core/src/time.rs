//! Calendar months and half-open time windows, all in UTC.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, TimeZone, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A calendar month in UTC, e.g. `2016-06`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    pub year: i32,
    pub month: u32,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Self {
        assert!((1..=12).contains(&month), "month out of range: {month}");
        Month { year, month }
    }

    pub fn of(ts: DateTime<Utc>) -> Self {
        Month {
            year: ts.year(),
            month: ts.month(),
        }
    }

    /// The month immediately after this one.
    pub fn next(self) -> Self {
        if self.month == 12 {
            Month::new(self.year + 1, 1)
        } else {
            Month::new(self.year, self.month + 1)
        }
    }

    /// Midnight UTC on the first day of the month.
    pub fn start(self) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(self.year, self.month, 1, 0, 0, 0)
            .single()
            .expect("first of month is always a valid instant")
    }

    /// The window covering exactly this month.
    pub fn window(self) -> TimeWindow {
        TimeWindow::new(self.start(), self.next().start()).expect("month start < next month start")
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::invalid_parameter("month", format!("expected YYYY-MM, got {s:?}")))?;
        let year: i32 = y
            .parse()
            .map_err(|_| Error::invalid_parameter("month", format!("bad year in {s:?}")))?;
        let month: u32 = m
            .parse()
            .map_err(|_| Error::invalid_parameter("month", format!("bad month in {s:?}")))?;
        if !(1..=12).contains(&month) {
            return Err(Error::invalid_parameter("month", format!("month out of range in {s:?}")));
        }
        Ok(Month { year, month })
    }
}

impl Serialize for Month {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A half-open interval `[start, end)` of UTC instants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self> {
        if start >= end {
            return Err(Error::invalid_parameter(
                "window",
                format!("start {start} is not before end {end}"),
            ));
        }
        Ok(TimeWindow { start, end })
    }

    /// Start inclusive, end exclusive.
    pub fn contains(&self, ts: DateTime<Utc>) -> bool {
        self.start <= ts && ts < self.end
    }
}

/// Parse an ISO-8601 timestamp. Naive timestamps and bare dates are read as UTC.
pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>> {
    if let Ok(ts) = DateTime::parse_from_rfc3339(s) {
        return Ok(ts.with_timezone(&Utc));
    }
    if let Ok(naive) = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S") {
        return Ok(Utc.from_utc_datetime(&naive));
    }
    if let Ok(naive) = NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S") {
        return Ok(Utc.from_utc_datetime(&naive));
    }
    if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        let naive = date.and_hms_opt(0, 0, 0).expect("midnight is valid");
        return Ok(Utc.from_utc_datetime(&naive));
    }
    Err(Error::invalid_parameter(
        "timestamp",
        format!("unparseable timestamp {s:?}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn month_ordering_and_display() {
        let a = Month::new(2016, 12);
        let b = a.next();
        assert_eq!(b, Month::new(2017, 1));
        assert!(a < b);
        assert_eq!(a.to_string(), "2016-12");
        assert_eq!("2016-12".parse::<Month>().unwrap(), a);
    }

    #[test]
    fn window_is_half_open() {
        let w = Month::new(2016, 1).window();
        assert!(w.contains(parse_timestamp("2016-01-01T00:00:00Z").unwrap()));
        assert!(w.contains(parse_timestamp("2016-01-31T23:59:59Z").unwrap()));
        assert!(!w.contains(parse_timestamp("2016-02-01T00:00:00Z").unwrap()));
    }

    #[test]
    fn window_rejects_inverted_bounds() {
        let t = parse_timestamp("2016-01-01").unwrap();
        assert!(TimeWindow::new(t, t).is_err());
    }

    #[test]
    fn naive_timestamps_read_as_utc() {
        let a = parse_timestamp("2016-06-23T07:00:00").unwrap();
        let b = parse_timestamp("2016-06-23T07:00:00Z").unwrap();
        assert_eq!(a, b);
        let d = parse_timestamp("2016-06-23").unwrap();
        assert_eq!(d, parse_timestamp("2016-06-23T00:00:00Z").unwrap());
    }

    #[test]
    fn offset_timestamps_normalize_to_utc() {
        let a = parse_timestamp("2016-06-23T02:00:00+02:00").unwrap();
        assert_eq!(a, parse_timestamp("2016-06-23T00:00:00Z").unwrap());
    }
}
