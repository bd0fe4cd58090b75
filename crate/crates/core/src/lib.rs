//! Information-entropy (IE) growth analysis for annual macroeconomic series.
//!
//! Level series are taken relative to a base year and logged, so an
//! exponential process becomes a straight line whose slope is the rate
//! constant λ, with annual growth `r = exp(λ) - 1`. On top of that sit
//! phase-window least-squares fits, cross-series elasticities, and a chained
//! investment → productivity → GDP-per-capita → GDP predictor.
//!
//! - [`series`]: `AnnualSeries`, `IESeries`, `Phase`
//! - [`ie`]: IE transform, rebasing, growth cumulation, λ ↔ r
//! - [`regress`]: line, growth and elasticity fits
//! - [`chain`]: chained predictor and accuracy score
//! - [`ingest`]: source-file parsers and dataset assembly
//! - [`config`], [`report`], [`pipeline`]: the batch analysis
//! - [`oracle`]: synthetic generators and a reference OLS for tests

pub mod chain;
pub mod config;
pub mod error;
pub mod ie;
pub mod ingest;
pub mod oracle;
pub mod pipeline;
pub mod regress;
pub mod report;
pub mod series;

pub use error::{Error, ErrorKind, Result};
pub use series::{AnnualSeries, IESeries, Phase, Unit};
