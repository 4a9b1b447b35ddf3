//! Adaptive integration on diameters and circles.
//!
//! Every routine returns an [`IntegralEstimate`] carrying a value, an
//! absolute error estimate and the number of integrand evaluations. A run
//! that exhausts its subdivision budget is reported as
//! [`QuadratureError::NonConvergence`] with the best estimate attached; it
//! is never silently accepted.

mod kronrod;
mod periodic;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BoundaryPeak, DiskFunction, HarmonicSeries, C64};

pub use periodic::trapezoid_circle;

/// Environment variable overriding the default tolerances: `rel` or `abs,rel`.
pub const TOLERANCE_ENV: &str = "FEJER_QUAD_TOL";

/// Default Riesz–Zygmund sup grid; `r = 1` is exact for finite series.
pub const RZ_GRID: [f64; 4] = [0.5, 0.9, 0.99, 1.0];

/// Half-width of the tanh-sinh parameter interval. At `t = 5` the
/// Jacobian is below `1e-100`.
const TANH_SINH_SPAN: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// `(left, right)` endpoint singularity flags for segment integrals.
    pub singular_endpoints: (bool, bool),
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            singular_endpoints: (false, false),
        }
    }
}

impl QuadratureConfig {
    /// Defaults, overridden by `FEJER_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self, QuadratureError> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(s) => Self::default().with_tolerance_spec(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Parse `rel` or `abs,rel`. A single value `v` sets `rel_tol = v`, `abs_tol = v / 10`.
    pub fn with_tolerance_spec(self, spec: &str) -> Result<Self, QuadratureError> {
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| QuadratureError::InvalidConfig(format!("bad tolerance `{s}`")))
        };
        let (abs_tol, rel_tol) = match spec.split_once(',') {
            Some((a, r)) => (parse(a)?, parse(r)?),
            None => {
                let v = parse(spec)?;
                (v / 10.0, v)
            }
        };
        let cfg = QuadratureConfig {
            abs_tol,
            rel_tol,
            ..self
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = |v: f64| v >= 0.0 && v.is_finite();
        if !ok(self.abs_tol) || !ok(self.rel_tol) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(QuadratureError::InvalidConfig(format!(
                "tolerances must be >= 0 with one strictly positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidConfig("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// The same config with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            max_subdivisions: self.max_subdivisions * 4,
            ..*self
        }
    }

    pub fn with_singular_endpoints(self, left: bool, right: bool) -> Self {
        QuadratureConfig {
            singular_endpoints: (left, right),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Estimated absolute error.
    pub err: f64,
    pub evaluations: usize,
}

impl IntegralEstimate {
    pub fn exact(value: f64) -> Self {
        IntegralEstimate {
            value,
            err: 0.0,
            evaluations: 0,
        }
    }

    pub fn plus(self, other: IntegralEstimate) -> Self {
        IntegralEstimate {
            value: self.value + other.value,
            err: self.err + other.err,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        IntegralEstimate {
            value: self.value * c,
            err: self.err * c.abs(),
            evaluations: self.evaluations,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature did not converge: best {} ± {}", best.value, best.err)]
    NonConvergence { best: IntegralEstimate },
    #[error("invalid interval [{x0}, {x1}]")]
    InvalidInterval { x0: f64, x1: f64 },
    #[error("integrand is not finite at {x}")]
    NonFinite { x: f64 },
    #[error("exponent p must be > 0, got {0}")]
    InvalidExponent(f64),
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
}

impl QuadratureError {
    /// The best available estimate for a non-converged run.
    pub fn best(&self) -> Option<IntegralEstimate> {
        match self {
            QuadratureError::NonConvergence { best } => Some(*best),
            _ => None,
        }
    }
}

/// A node on `[x0, x1]` together with its exact distances to both ends.
///
/// Near a singular endpoint `x` itself rounds to the endpoint; integrands
/// with endpoint singularities should use `from_left`/`from_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPoint {
    pub x: f64,
    pub from_left: f64,
    pub from_right: f64,
}

/// `∫_{x0}^{x1} g(x) dx`.
pub fn integrate_segment<G: Fn(f64) -> f64>(
    g: G,
    x0: f64,
    x1: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    integrate_segment_with_offsets(|pt| g(pt.x), x0, x1, cfg)
}

/// `∫_{x0}^{x1} g dx` with the integrand seeing endpoint distances.
///
/// With either singular-endpoint flag set the interval is mapped through
/// `x = c + h·tanh(π/2·sinh t)`, which clusters nodes double-exponentially
/// at both ends so inverse-square-root singularities integrate to full
/// accuracy.
pub fn integrate_segment_with_offsets<G: Fn(SegmentPoint) -> f64>(
    g: G,
    x0: f64,
    x1: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    cfg.validate()?;
    if !(x0 < x1) || !x0.is_finite() || !x1.is_finite() {
        return Err(QuadratureError::InvalidInterval { x0, x1 });
    }
    let (left, right) = cfg.singular_endpoints;
    if !left && !right {
        return kronrod::adaptive(
            |x| {
                g(SegmentPoint {
                    x,
                    from_left: x - x0,
                    from_right: x1 - x,
                })
            },
            &[x0, x1],
            cfg,
        );
    }
    let half = 0.5 * (x1 - x0);
    let transformed = |t: f64| {
        let v = FRAC_PI_2 * t.sinh();
        let sech = 1.0 / v.cosh();
        let weight = half * FRAC_PI_2 * t.cosh() * sech * sech;
        if weight == 0.0 {
            return 0.0;
        }
        let from_left = 2.0 * half / (1.0 + (-2.0 * v).exp());
        let from_right = 2.0 * half / (1.0 + (2.0 * v).exp());
        if from_left == 0.0 || from_right == 0.0 {
            return 0.0;
        }
        let x = if v < 0.0 { x0 + from_left } else { x1 - from_right };
        weight
            * g(SegmentPoint {
                x,
                from_left,
                from_right,
            })
    };
    let s = TANH_SINH_SPAN;
    let breaks: Vec<f64> = (0..=8).map(|j| -s + j as f64 * s / 4.0).collect();
    kronrod::adaptive(transformed, &breaks, cfg)
}

/// Adaptive integration over an explicit partition.
pub fn integrate_partition<G: Fn(f64) -> f64>(
    g: G,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    cfg.validate()?;
    kronrod::adaptive(g, breakpoints, cfg)
}

/// `∫_0^{2π} g(θ) dθ` for a 2π-periodic `g`.
///
/// Doubling trapezoid rule; when the doubling sequence stalls (sharp
/// features, kinks) the run continues with adaptive Gauss–Kronrod.
pub fn integrate_circle<G: Fn(f64) -> f64>(g: G, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadratureError> {
    cfg.validate()?;
    match periodic::doubling_trapezoid(&g, cfg)? {
        periodic::Outcome::Converged(est) => Ok(est),
        periodic::Outcome::Stalled { evaluations } => {
            let breaks: Vec<f64> = (0..=32).map(|j| j as f64 * TAU / 32.0).collect();
            kronrod::adaptive(&g, &breaks, cfg)
                .map(|e| IntegralEstimate {
                    evaluations: e.evaluations + evaluations,
                    ..e
                })
                .map_err(|e| add_evaluations(e, evaluations))
        }
    }
}

fn add_evaluations(e: QuadratureError, n: usize) -> QuadratureError {
    match e {
        QuadratureError::NonConvergence { best } => QuadratureError::NonConvergence {
            best: IntegralEstimate {
                evaluations: best.evaluations + n,
                ..best
            },
        },
        other => other,
    }
}

/// Breakpoints `center ± width·2^k` on `[center − π, center + π]`.
pub fn graded_breakpoints(peak: BoundaryPeak) -> Vec<f64> {
    let width = peak.width.max(f64::MIN_POSITIVE);
    let mut offsets = Vec::new();
    let mut d = width;
    while d < PI {
        offsets.push(d);
        d *= 2.0;
    }
    let mut pts: Vec<f64> = offsets.iter().rev().map(|d| peak.center - d).collect();
    pts.insert(0, peak.center - PI);
    pts.push(peak.center);
    pts.extend(offsets.iter().map(|d| peak.center + d));
    pts.push(peak.center + PI);
    pts
}

/// Periodic integral with a mesh graded geometrically toward a known peak.
pub fn integrate_circle_peaked<G: Fn(f64) -> f64>(
    g: G,
    peak: BoundaryPeak,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    cfg.validate()?;
    kronrod::adaptive(g, &graded_breakpoints(peak), cfg)
}

fn check_exponent(p: f64) -> Result<(), QuadratureError> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(QuadratureError::InvalidExponent(p))
    }
}

/// `∫_{-1}^{1} |f(x e^{it})|^p dx`.
pub fn diameter_integral<F: DiskFunction + ?Sized>(
    f: &F,
    t: f64,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    check_exponent(p)?;
    let e = C64::from_polar(1.0, t);
    integrate_segment(|x| f.value(e * x).norm().powf(p), -1.0, 1.0, cfg)
}

/// `∫_0^{2π} |f(e^{iθ})|^p dθ`, using the family's boundary density when it has one.
pub fn circle_integral<F: DiskFunction + ?Sized>(
    f: &F,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    check_exponent(p)?;
    let g = |th: f64| f.boundary_abs_pow(th, p);
    match f.boundary_peak() {
        Some(peak) => integrate_circle_peaked(g, peak, cfg),
        None => integrate_circle(g, cfg),
    }
}

/// Both sides of the Riesz–Zygmund inequality for a finite series.
///
/// `lhs` is the length of the image of the diameter at angle `t`, split
/// into its two radii; `rhs` is the largest `∫|∂_θ f(ρe^{iθ})| dθ` over
/// the grid.
pub fn riesz_zygmund_sides(
    f: &HarmonicSeries,
    t: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, IntegralEstimate), QuadratureError> {
    if grid.is_empty() || grid.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(QuadratureError::InvalidConfig("radius grid must be nonempty within (0, 1]".into()));
    }
    let ray = |angle: f64| integrate_segment(|r| f.radial_derivative(r, angle).norm(), 0.0, 1.0, cfg);
    let lhs = ray(t)?.plus(ray(t + PI)?);
    let mut best: Option<IntegralEstimate> = None;
    let mut evaluations = 0;
    for &rho in grid {
        let est = integrate_circle(|th| f.angular_derivative(rho, th).norm(), cfg)?;
        evaluations += est.evaluations;
        if best.is_none_or(|b| est.value > b.value) {
            best = Some(est);
        }
    }
    let rhs = IntegralEstimate {
        evaluations,
        ..best.expect("grid is nonempty")
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AnalyticSeries;

    #[test]
    fn constant_on_segment() {
        let est = integrate_segment(|_| 1.0, -1.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn arcsine_with_singular_endpoints() {
        let cfg = QuadratureConfig::default().with_singular_endpoints(true, true);
        let est = integrate_segment_with_offsets(
            |pt| 1.0 / (pt.from_left * pt.from_right).sqrt(),
            -1.0,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!((est.value - PI).abs() < 1e-10, "{est:?}");
    }

    #[test]
    fn extremal_diameter_integrand() {
        let est = integrate_segment(|x| (1.0 + 0.5 * x) / (1.0 - 0.5 * x), -1.0, 1.0, &QuadratureConfig::default()).unwrap();
        let closed = 4.0 * 3f64.ln() - 2.0;
        assert!((est.value - closed).abs() < 1e-12);
        assert!((est.value - 2.394_449).abs() < 1e-6);
    }

    #[test]
    fn circle_examples() {
        let cfg = QuadratureConfig::default();
        let one = integrate_circle(|_| 1.0, &cfg).unwrap();
        assert!((one.value - TAU).abs() < 1e-14);
        let c2 = integrate_circle(|t: f64| t.cos().powi(2), &cfg).unwrap();
        assert!((c2.value - PI).abs() < 1e-12);
    }

    #[test]
    fn circle_falls_back_on_kinks() {
        let cfg = QuadratureConfig::default();
        let est = integrate_circle(|t: f64| t.sin().abs(), &cfg).unwrap();
        assert!((est.value - 4.0).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn diameter_examples() {
        let cfg = QuadratureConfig::default();
        let one = HarmonicSeries::constant(C64::new(1.0, 0.0));
        assert!((diameter_integral(&one, 0.7, 2.0, &cfg).unwrap().value - 2.0).abs() < 1e-14);
        let f = HarmonicSeries::z_plus_zbar();
        assert!((diameter_integral(&f, 0.0, 2.0, &cfg).unwrap().value - 8.0 / 3.0).abs() < 1e-13);
        assert!(diameter_integral(&f, FRAC_PI_2, 2.0, &cfg).unwrap().value.abs() < 1e-28);
        assert!(matches!(
            diameter_integral(&f, 0.0, 0.0, &cfg),
            Err(QuadratureError::InvalidExponent(_))
        ));
    }

    #[test]
    fn circle_integral_examples() {
        let cfg = QuadratureConfig::default();
        let z = AnalyticSeries::identity();
        assert!((circle_integral(&z, 2.0, &cfg).unwrap().value - TAU).abs() < 1e-13);
        let f = HarmonicSeries::z_plus_zbar();
        assert!((circle_integral(&f, 2.0, &cfg).unwrap().value - 2.0 * TAU).abs() < 1e-13);
    }

    #[test]
    fn riesz_zygmund_examples() {
        let cfg = QuadratureConfig::default();
        let z = AnalyticSeries::identity().to_harmonic();
        let (lhs, rhs) = riesz_zygmund_sides(&z, 0.3, &RZ_GRID, &cfg).unwrap();
        assert!((lhs.value - 2.0).abs() < 1e-13);
        assert!((rhs.value - TAU).abs() < 1e-12);
        let k = HarmonicSeries::constant(C64::new(0.4, 0.1));
        let (lhs, rhs) = riesz_zygmund_sides(&k, 0.0, &RZ_GRID, &cfg).unwrap();
        assert_eq!((lhs.value, rhs.value), (0.0, 0.0));
        assert!(riesz_zygmund_sides(&k, 0.0, &[], &cfg).is_err());
    }

    #[test]
    fn tolerance_spec_parsing() {
        let cfg = QuadratureConfig::default().with_tolerance_spec("1e-8").unwrap();
        assert_eq!((cfg.abs_tol, cfg.rel_tol), (1e-9, 1e-8));
        let cfg = QuadratureConfig::default().with_tolerance_spec("1e-12, 1e-9").unwrap();
        assert_eq!((cfg.abs_tol, cfg.rel_tol), (1e-12, 1e-9));
        assert!(QuadratureConfig::default().with_tolerance_spec("0,0").is_err());
        assert!(QuadratureConfig::default().with_tolerance_spec("abc").is_err());
    }

    #[test]
    fn graded_mesh_is_sorted() {
        let pts = graded_breakpoints(BoundaryPeak {
            center: 0.0,
            width: 1e-4,
        });
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts[0], -PI);
        assert_eq!(*pts.last().unwrap(), PI);
    }
}
