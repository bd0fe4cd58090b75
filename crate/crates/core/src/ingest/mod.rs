//! Source-file ingestion and dataset assembly.

mod manifest;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use manifest::{Manifest, SourceRecord, MANIFEST_FILE};
pub use parse::{emit_generic, parse_generic_year_value, parse_oecd_long, parse_ons_timeseries};

use crate::error::{Error, Result};
use crate::ie::{cumulate_growth, rebase};
use crate::series::{AnnualSeries, Unit};

/// What a series stands for in the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Gdp,
    Cpi,
    GdpPerCapita,
    Productivity,
    Wages,
    Investment,
    Population,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::Gdp,
        Role::Cpi,
        Role::GdpPerCapita,
        Role::Productivity,
        Role::Wages,
        Role::Investment,
        Role::Population,
    ];

    /// GDP and productivity sources publish annual percent changes; the
    /// rest are levels.
    pub fn default_unit(self) -> Unit {
        match self {
            Role::Gdp | Role::Productivity => Unit::PercentChangePerAnnum,
            Role::Cpi => Unit::Index,
            Role::Population => Unit::PopulationCount,
            Role::GdpPerCapita | Role::Wages | Role::Investment => Unit::CurrencyLevel,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Gdp => "gdp",
            Role::Cpi => "cpi",
            Role::GdpPerCapita => "gdp_per_capita",
            Role::Productivity => "productivity",
            Role::Wages => "wages",
            Role::Investment => "investment",
            Role::Population => "population",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown role `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    GenericYearValue,
    OnsTimeseries,
    OecdLong,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "generic" | "generic_year_value" => Format::GenericYearValue,
            "ons" | "ons_timeseries" => Format::OnsTimeseries,
            "oecd" | "oecd_long" => Format::OecdLong,
            other => return Err(Error::Argument(format!("unknown format `{other}`"))),
        })
    }
}

/// One source file and how to read it.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub id: String,
    pub role: Role,
    pub path: PathBuf,
    pub format: Format,
    pub unit: Unit,
    pub base_year: i32,
    /// Multiplier applied to level values after parsing (e.g. 1000 for
    /// population published in thousands).
    pub scale: f64,
    /// Country code kept from OECD long-format files.
    pub country: String,
}

impl SeriesSpec {
    pub fn new(id: impl Into<String>, role: Role, path: impl Into<PathBuf>, format: Format, base_year: i32) -> Self {
        Self {
            id: id.into(),
            role,
            path: path.into(),
            format,
            unit: role.default_unit(),
            base_year,
            scale: 1.0,
            country: "GBR".into(),
        }
    }
}

/// Parses `bytes` according to `format`, naming the series `name`.
pub fn parse_series(bytes: &[u8], format: Format, name: &str, unit: Unit, country: &str) -> Result<AnnualSeries> {
    match format {
        Format::GenericYearValue => parse_generic_year_value(bytes, name, unit),
        Format::OnsTimeseries => parse_ons_timeseries(bytes, name, unit),
        Format::OecdLong => parse_oecd_long(bytes, country, name, unit),
    }
}

/// Reads and parses one spec's file without any normalization.
pub fn read_series(spec: &SeriesSpec) -> Result<AnnualSeries> {
    let bytes = std::fs::read(&spec.path).map_err(|e| Error::io(&spec.path, e))?;
    let series = parse_series(&bytes, spec.format, spec.role.as_str(), spec.unit, &spec.country)?;
    if spec.scale == 1.0 {
        Ok(series)
    } else if spec.unit.is_level() {
        series.scaled(spec.scale)
    } else {
        Err(Error::Config(format!(
            "{}: scale applies to level series only",
            spec.id
        )))
    }
}

/// Inclusive year range shared by every series in a [`Dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::Config(format!("year range {start}-{end} is empty")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Normalized series by role: every series is an index equal to 1 at the
/// base year and covers `coverage` with no gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub base_year: i32,
    pub coverage: YearRange,
    pub series: BTreeMap<Role, AnnualSeries>,
}

impl Dataset {
    pub fn get(&self, role: Role) -> Option<&AnnualSeries> {
        self.series.get(&role)
    }

    pub fn require(&self, role: Role) -> Result<&AnnualSeries> {
        self.get(role)
            .ok_or_else(|| Error::Config(format!("dataset has no {role} series")))
    }
}

/// An ingest failure, tagged with the role whose file caused it.
#[derive(Debug)]
pub struct DatasetError {
    pub role: Option<Role>,
    pub error: Error,
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            Some(role) => write!(f, "{role}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for DatasetError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

fn tagged(role: Role) -> impl FnOnce(Error) -> DatasetError {
    move |error| DatasetError {
        role: Some(role),
        error,
    }
}

/// Trims `series` to `range`, cumulates or rebases it to `base_year`, and
/// checks that every year of the range is present.
pub fn normalize(series: &AnnualSeries, role: Role, range: YearRange, base_year: i32) -> Result<AnnualSeries> {
    let trimmed = series.restrict(range.start, range.end);
    let expected: Box<dyn Iterator<Item = i32>> = if series.unit().is_level() {
        Box::new(range.years())
    } else {
        // The first year's own change is never used by the index.
        Box::new(range.start + 1..=range.end)
    };
    let missing: Vec<i32> = expected.filter(|y| trimmed.get(*y).is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::Gap {
            what: role.to_string(),
            years: missing,
        });
    }
    let index = if series.unit().is_level() {
        rebase(&trimmed, base_year)?
    } else {
        cumulate_growth(&trimmed, base_year)?
    };
    let missing: Vec<i32> = range.years().filter(|y| index.get(*y).is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::Gap {
            what: role.to_string(),
            years: missing,
        });
    }
    Ok(index.restrict(range.start, range.end))
}

/// Parses every spec, normalizes it to an index at its base year and checks
/// coverage of `range`. `required` lists roles that must be present.
pub fn assemble_dataset(
    specs: &[SeriesSpec],
    range: YearRange,
    required: &[Role],
) -> std::result::Result<Dataset, DatasetError> {
    let config_err = |role: Option<Role>, msg: String| DatasetError {
        role,
        error: Error::Config(msg),
    };
    let mut by_role: BTreeMap<Role, &SeriesSpec> = BTreeMap::new();
    for spec in specs {
        if by_role.insert(spec.role, spec).is_some() {
            return Err(config_err(Some(spec.role), format!("role {} given more than once", spec.role)));
        }
    }
    for &role in required {
        if !by_role.contains_key(&role) {
            return Err(config_err(Some(role), format!("no series configured for required role {role}")));
        }
    }
    let base_year = match specs.first() {
        Some(s) => s.base_year,
        None => return Err(config_err(None, "no series configured".into())),
    };
    if let Some(s) = specs.iter().find(|s| s.base_year != base_year) {
        return Err(config_err(Some(s.role), format!("base year {} differs from {base_year}", s.base_year)));
    }
    if !range.contains(base_year) {
        return Err(config_err(None, format!("base year {base_year} outside {}-{}", range.start, range.end)));
    }

    let mut series = BTreeMap::new();
    for (&role, spec) in &by_role {
        let raw = read_series(spec).map_err(tagged(role))?;
        let normalized = normalize(&raw, role, range, base_year).map_err(tagged(role))?;
        series.insert(role, normalized);
    }
    Ok(Dataset {
        base_year,
        coverage: range,
        series,
    })
}
