//! Readers for the three source layouts.
//!
//! All three go through the `csv` crate for quoting and line endings; the
//! row interpretation is done here. Values may carry thousands separators
//! (`"26,835"`), which only survive tokenizing inside quoted fields.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::series::{AnnualSeries, Unit};

struct Row {
    line: u64,
    fields: Vec<String>,
}

fn rows(input: &[u8]) -> Result<Vec<Row>> {
    let input = input.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(input);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = Vec::new();
    for record in reader.byte_records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut fields = Vec::with_capacity(record.len());
        for (i, raw) in record.iter().enumerate() {
            let field = std::str::from_utf8(raw).map_err(|_| Error::Parse {
                line,
                column: i + 1,
                message: "invalid UTF-8".into(),
            })?;
            fields.push(field.to_string());
        }
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        out.push(Row { line, fields });
    }
    Ok(out)
}

/// Parses a decimal that may contain thousands separators.
pub(crate) fn parse_number(field: &str) -> Option<f64> {
    let cleaned: String = field.chars().filter(|&c| c != ',' && c != ' ').collect();
    if cleaned.is_empty() || !cleaned.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_year(field: &str) -> Option<i32> {
    if field.is_empty() || field.len() > 6 || !field.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}

fn field_error(line: u64, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn insert(obs: &mut BTreeMap<i32, f64>, year: i32, value: f64, line: u64) -> Result<()> {
    if obs.insert(year, value).is_some() {
        return Err(Error::Duplicate { year, line });
    }
    Ok(())
}

/// Reads `year,value` rows. A first row whose leading field is not numeric
/// is taken as a header; extra columns are ignored.
pub fn parse_generic_year_value(
    input: impl AsRef<[u8]>,
    name: &str,
    unit: Unit,
) -> Result<AnnualSeries> {
    let rows = rows(input.as_ref())?;
    let mut obs = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let first = row.fields[0].as_str();
        if i == 0 && parse_number(first).is_none() {
            continue;
        }
        let year = parse_year(first)
            .ok_or_else(|| field_error(row.line, 1, format!("`{first}` is not a year")))?;
        let raw = row
            .fields
            .get(1)
            .ok_or_else(|| field_error(row.line, 2, "missing value"))?;
        let value = parse_number(raw)
            .ok_or_else(|| field_error(row.line, 2, format!("`{raw}` is not a number")))?;
        insert(&mut obs, year, value, row.line)?;
    }
    if obs.is_empty() {
        return Err(Error::EmptySeries(Some(name.to_string())));
    }
    AnnualSeries::new(name, unit, obs)
}

/// Reads an ONS time-series CSV export.
///
/// Only rows keyed by a bare four-digit year are kept; the metadata block
/// and quarterly (`2000 Q1`) or monthly (`2000 JAN`) rows are skipped.
pub fn parse_ons_timeseries(input: impl AsRef<[u8]>, name: &str, unit: Unit) -> Result<AnnualSeries> {
    let rows = rows(input.as_ref())?;
    let mut obs = BTreeMap::new();
    for row in &rows {
        let key = row.fields[0].as_str();
        if key.len() != 4 || !key.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        let year: i32 = key.parse().expect("four ascii digits");
        let raw = row
            .fields
            .get(1)
            .ok_or_else(|| field_error(row.line, 2, "missing value"))?;
        let value = parse_number(raw)
            .ok_or_else(|| field_error(row.line, 2, format!("`{raw}` is not a number")))?;
        insert(&mut obs, year, value, row.line)?;
    }
    if obs.is_empty() {
        return Err(Error::EmptySeries(Some(name.to_string())));
    }
    AnnualSeries::new(name, unit, obs)
}

fn find_column(header: &[String], candidates: &[&str]) -> Option<usize> {
    candidates
        .iter()
        .find_map(|c| header.iter().position(|h| h == c))
        .or_else(|| {
            candidates
                .iter()
                .find_map(|c| header.iter().position(|h| h.eq_ignore_ascii_case(c)))
        })
}

/// Reads a long-format OECD extract and keeps the rows for `country`.
///
/// Exact-case header names win over case-insensitive matches, so a file
/// with both `COUNTRY` (code) and `Country` (label) picks the code column.
pub fn parse_oecd_long(
    input: impl AsRef<[u8]>,
    country: &str,
    name: &str,
    unit: Unit,
) -> Result<AnnualSeries> {
    let rows = rows(input.as_ref())?;
    let (header, body) = rows
        .split_first()
        .ok_or_else(|| Error::Schema("empty file, expected a header row".into()))?;
    let col = |candidates: &[&str], what: &str| {
        find_column(&header.fields, candidates)
            .ok_or_else(|| Error::Schema(format!("no {what} column (looked for {candidates:?})")))
    };
    let loc = col(&["LOCATION", "COUNTRY"], "location")?;
    let time = col(&["TIME", "YEAR"], "time")?;
    let val = col(&["VALUE", "Value"], "value")?;

    let mut seen = HashSet::new();
    let mut obs = BTreeMap::new();
    for row in body {
        let get = |i: usize| {
            row.fields
                .get(i)
                .map(String::as_str)
                .ok_or_else(|| field_error(row.line, i + 1, "missing field"))
        };
        let code = get(loc)?;
        let year_raw = get(time)?;
        let year = parse_year(year_raw)
            .ok_or_else(|| field_error(row.line, time + 1, format!("`{year_raw}` is not a year")))?;
        if !seen.insert((code.to_ascii_uppercase(), year)) {
            return Err(Error::Duplicate {
                year,
                line: row.line,
            });
        }
        if !code.eq_ignore_ascii_case(country) {
            continue;
        }
        let raw = get(val)?;
        let value = parse_number(raw)
            .ok_or_else(|| field_error(row.line, val + 1, format!("`{raw}` is not a number")))?;
        obs.insert(year, value);
    }
    if obs.is_empty() {
        return Err(Error::EmptySeries(Some(country.to_string())));
    }
    AnnualSeries::new(name, unit, obs)
}

/// Writes a series as `year,value` rows with a header, values in shortest
/// round-trip form.
pub fn emit_generic(series: &AnnualSeries) -> String {
    let mut out = String::from("year,value\n");
    for (y, v) in series.iter() {
        writeln!(out, "{y},{v}").unwrap();
    }
    out
}
