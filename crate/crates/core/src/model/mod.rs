//! Function representations on the closed unit disk.
//!
//! Everything that the quadrature and the checkers consume goes through
//! [`DiskFunction`]. Finite coefficient models ([`HarmonicSeries`],
//! [`AnalyticSeries`]) have exact boundary values; closed-form families
//! living in [`crate::extremal`] implement the same trait.

mod blaschke;
mod corpus;
mod series;

pub use blaschke::{BlaschkeProduct, FiniteBlaschke};
pub use corpus::{generate_corpus, CorpusItem, CorpusKind, CorpusSpec};
pub use series::{AnalyticSeries, HarmonicSeries};

use num_complex::Complex64;
use thiserror::Error;

/// Double precision complex number used throughout the crate.
pub type C64 = Complex64;

/// Slack allowed on the closed-disk domain check.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("point {re}+{im}i lies outside the closed unit disk (|z| = {modulus})")]
    DomainViolation { re: f64, im: f64, modulus: f64 },
    #[error("Blaschke zero {re}+{im}i is not inside the open unit disk")]
    ZeroOutsideDisk { re: f64, im: f64 },
    #[error("rotation factor must be unimodular, got modulus {0}")]
    NotUnimodular(f64),
    #[error("invalid corpus spec: {0}")]
    InvalidCorpus(String),
    #[error("analytic series cannot carry co-analytic coefficients")]
    NotAnalytic,
}

/// A boundary peak of width `width` (radians) centred at `center`.
///
/// The circle integrator grades its mesh geometrically toward `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPeak {
    pub center: f64,
    pub width: f64,
}

/// A complex-valued function on the closed unit disk.
pub trait DiskFunction: Send + Sync {
    /// Value at `z`; callers keep `|z| <= 1`.
    fn value(&self, z: C64) -> C64;

    /// Boundary value at `e^{iθ}`.
    fn boundary_value(&self, theta: f64) -> C64 {
        self.value(C64::from_polar(1.0, theta))
    }

    /// `|f(e^{iθ})|^p`. Families with a closed-form boundary density override this.
    fn boundary_abs_pow(&self, theta: f64, p: f64) -> f64 {
        self.boundary_value(theta).norm().powf(p)
    }

    fn is_analytic(&self) -> bool {
        false
    }

    fn boundary_peak(&self) -> Option<BoundaryPeak> {
        None
    }
}

/// A harmonic function `f = h + conj(g)` whose two analytic parts are
/// separately evaluable.
pub trait HarmonicPair: DiskFunction {
    /// `h(z)`
    fn analytic_part(&self, z: C64) -> C64;
    /// `g(z)`
    fn coanalytic_part(&self, z: C64) -> C64;
}

impl<T: DiskFunction + ?Sized> DiskFunction for &T {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn boundary_value(&self, theta: f64) -> C64 {
        (**self).boundary_value(theta)
    }
    fn boundary_abs_pow(&self, theta: f64, p: f64) -> f64 {
        (**self).boundary_abs_pow(theta, p)
    }
    fn is_analytic(&self) -> bool {
        (**self).is_analytic()
    }
    fn boundary_peak(&self) -> Option<BoundaryPeak> {
        (**self).boundary_peak()
    }
}

/// Unit-modulus point `e^{iθ}` with `θ` reduced to `[0, 2π)`.
pub(crate) fn unit(theta: f64) -> C64 {
    C64::from_polar(1.0, theta.rem_euclid(std::f64::consts::TAU))
}

pub(crate) fn check_domain(z: C64) -> Result<(), ModelError> {
    let modulus = z.norm();
    if modulus > 1.0 + DOMAIN_SLACK || !modulus.is_finite() {
        return Err(ModelError::DomainViolation {
            re: z.re,
            im: z.im,
            modulus,
        });
    }
    Ok(())
}
