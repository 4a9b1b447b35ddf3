//! Numerical toolkit for Riesz–Fejér type inequalities on the unit disk.
//!
//! - [`model`]: finite harmonic/analytic series, Blaschke factors, seeded corpora.
//! - [`quadrature`]: adaptive integration on diameters and circles.
//! - [`special`]: sharp constants, AGM elliptic integral, `arctanh`.
//! - [`checkers`]: one checker per inequality, verdicts with error budgets.
//! - [`extremal`]: the sharpness families, the rectangle map and the p > 2 explorer.
//! - [`report`]: CSV/JSON emission for reports and sweeps.

pub mod checkers;
pub mod extremal;
pub mod model;
pub mod quadrature;
pub mod report;
pub mod special;

pub use model::{AnalyticSeries, DiskFunction, HarmonicPair, HarmonicSeries, C64};
pub use quadrature::{IntegralEstimate, QuadratureConfig, QuadratureError};
