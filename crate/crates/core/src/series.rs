//! Annual series, their IE-space counterparts and phase windows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the numbers in an [`AnnualSeries`] measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Index,
    /// Percentages: 2.1 means 2.1% growth on the previous year.
    PercentChangePerAnnum,
    CurrencyLevel,
    PopulationCount,
}

impl Unit {
    /// Level kinds can be rebased and IE-transformed; percent changes cannot.
    pub fn is_level(self) -> bool {
        !matches!(self, Unit::PercentChangePerAnnum)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Index => "index",
            Unit::PercentChangePerAnnum => "percent_change_per_annum",
            Unit::CurrencyLevel => "currency_level",
            Unit::PopulationCount => "population_count",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "index" => Unit::Index,
            "percent_change_per_annum" | "percent" => Unit::PercentChangePerAnnum,
            "currency_level" | "currency" => Unit::CurrencyLevel,
            "population_count" | "population" => Unit::PopulationCount,
            other => return Err(Error::Argument(format!("unknown unit `{other}`"))),
        })
    }
}

/// Named annual observations, keyed by Gregorian year.
///
/// The map keeps years strictly increasing. Construction checks that every
/// value is finite, that level kinds are strictly positive and that
/// percent changes stay above -100.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnualSeries {
    name: String,
    unit: Unit,
    observations: BTreeMap<i32, f64>,
}

impl AnnualSeries {
    pub fn new(
        name: impl Into<String>,
        unit: Unit,
        observations: BTreeMap<i32, f64>,
    ) -> Result<Self> {
        let name = name.into();
        for (&year, &value) in &observations {
            if !value.is_finite() {
                return Err(Error::Domain(format!(
                    "{name}: non-finite value {value} in {year}"
                )));
            }
            match unit {
                Unit::PercentChangePerAnnum if value <= -100.0 => {
                    return Err(Error::Domain(format!(
                        "{name}: percent change {value} in {year} is not above -100"
                    )))
                }
                u if u.is_level() && value <= 0.0 => {
                    return Err(Error::Domain(format!(
                        "{name}: non-positive level {value} in {year}"
                    )))
                }
                _ => {}
            }
        }
        Ok(Self {
            name,
            unit,
            observations,
        })
    }

    pub fn from_pairs(
        name: impl Into<String>,
        unit: Unit,
        pairs: impl IntoIterator<Item = (i32, f64)>,
    ) -> Result<Self> {
        let name = name.into();
        let mut observations = BTreeMap::new();
        for (year, value) in pairs {
            if observations.insert(year, value).is_some() {
                return Err(Error::Argument(format!("{name}: year {year} given twice")));
            }
        }
        Self::new(name, unit, observations)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn observations(&self) -> &BTreeMap<i32, f64> {
        &self.observations
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.observations.get(&year).copied()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.observations.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.observations.keys().next_back().copied()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.observations.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.observations.iter().map(|(&y, &v)| (y, v))
    }

    /// Years inside `[first, last]` that have no observation.
    pub fn missing_years(&self) -> Vec<i32> {
        match (self.first_year(), self.last_year()) {
            (Some(a), Some(b)) => (a..=b)
                .filter(|y| !self.observations.contains_key(y))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Keeps only observations with `from <= year <= to`.
    pub fn restrict(&self, from: i32, to: i32) -> Self {
        Self {
            name: self.name.clone(),
            unit: self.unit,
            observations: self
                .observations
                .range(from..=to)
                .map(|(&y, &v)| (y, v))
                .collect(),
        }
    }

    /// Multiplies every value by `factor`; only meaningful for level kinds.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Argument(format!("scale factor {factor} must be positive")));
        }
        if !self.unit.is_level() {
            return Err(Error::Argument(format!(
                "{}: cannot scale a percent-change series",
                self.name
            )));
        }
        Ok(Self {
            name: self.name.clone(),
            unit: self.unit,
            observations: self
                .observations
                .iter()
                .map(|(&y, &v)| (y, v * factor))
                .collect(),
        })
    }
}

/// A series in IE space: natural log of each value relative to the base year.
#[derive(Debug, Clone, PartialEq)]
pub struct IESeries {
    name: String,
    base_year: i32,
    points: BTreeMap<i32, f64>,
}

impl IESeries {
    /// Validates finiteness and that the base-year point is present and exactly 0.
    pub fn new(name: impl Into<String>, base_year: i32, points: BTreeMap<i32, f64>) -> Result<Self> {
        let name = name.into();
        match points.get(&base_year) {
            Some(&v) if v == 0.0 => {}
            Some(&v) => {
                return Err(Error::Domain(format!(
                    "{name}: IE value at base year {base_year} is {v}, expected 0"
                )))
            }
            None => {
                return Err(Error::Argument(format!(
                    "{name}: base year {base_year} has no IE point"
                )))
            }
        }
        Self::predicted(name, base_year, points)
    }

    /// A model-generated IE series. Only finiteness is checked; the base-year
    /// point may be absent or carry a fitted offset.
    pub fn predicted(
        name: impl Into<String>,
        base_year: i32,
        points: BTreeMap<i32, f64>,
    ) -> Result<Self> {
        let name = name.into();
        if let Some((y, v)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("{name}: non-finite IE value {v} in {y}")));
        }
        Ok(Self {
            name,
            base_year,
            points,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    pub fn points(&self) -> &BTreeMap<i32, f64> {
        &self.points
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.points.get(&year).copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.points.iter().map(|(&y, &v)| (y, v))
    }
}

/// An inclusive window of years.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    pub label: String,
    #[serde(rename = "start")]
    pub start_year: i32,
    #[serde(rename = "end")]
    pub end_year: i32,
}

impl Phase {
    pub fn new(label: impl Into<String>, start_year: i32, end_year: i32) -> Result<Self> {
        let label = label.into();
        if start_year > end_year {
            return Err(Error::Argument(format!(
                "phase {label}: start {start_year} is after end {end_year}"
            )));
        }
        Ok(Self {
            label,
            start_year,
            end_year,
        })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.start_year..=self.end_year
    }

    pub fn span(&self) -> usize {
        (self.end_year - self.start_year + 1) as usize
    }

    pub fn overlaps(&self, other: &Phase) -> bool {
        self.start_year <= other.end_year && other.start_year <= self.end_year
    }

    /// The three-phase split used throughout the UK analysis.
    pub fn uk_default() -> Vec<Phase> {
        vec![
            Phase::new("P1", 2000, 2007).unwrap(),
            Phase::new("P2", 2008, 2013).unwrap(),
            Phase::new("P3", 2014, 2019).unwrap(),
        ]
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}-{})", self.label, self.start_year, self.end_year)
    }
}
