//! One checker per inequality. Each evaluates both sides by quadrature,
//! attaches an error budget and returns a verdict.

mod corpus;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::{theorem4_sharpness, ExtremalError};
use crate::model::{DiskFunction, HarmonicPair, HarmonicSeries, ModelError, C64};
use crate::quadrature::{
    circle_integral, diameter_integral, integrate_circle, integrate_segment, riesz_zygmund_sides, IntegralEstimate,
    QuadratureConfig, QuadratureError, RZ_GRID,
};
use crate::report::nullable_f64;
use crate::special::{a_p, frazer_bp, kalaj_constant, ConstantError};

pub use corpus::{run_corpus, run_corpus_with_reports, CorpusGrid, CorpusSummary};

/// Multiplier applied to the summed side errors to form the budget.
pub const BUDGET_FACTOR: f64 = 10.0;

/// Tolerance on `g(0) = 0` and `Re(h(0)g(0)) = 0`.
const PRECONDITION_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("exponent p = {p} not allowed here (need p {need})")]
    Exponent { p: f64, need: &'static str },
    #[error("checker needs an analytic function")]
    NotAnalytic,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("checker `{checker}` cannot run on corpus kind `{kind}`")]
    IncompatibleCorpus { checker: CheckerId, kind: String },
    #[error("empty {0} grid")]
    EmptyGrid(&'static str),
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which inequality a checker (or a corpus run) evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckerId {
    #[serde(rename = "rf-analytic")]
    RieszFejerAnalytic,
    #[serde(rename = "t1")]
    Theorem1,
    #[serde(rename = "t3")]
    Theorem3,
    #[serde(rename = "t4")]
    Theorem4,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "kalaj")]
    Kalaj,
    #[serde(rename = "frazer")]
    Frazer,
    #[serde(rename = "rz")]
    RieszZygmund,
}

impl CheckerId {
    pub const ALL: [CheckerId; 8] = [
        CheckerId::RieszFejerAnalytic,
        CheckerId::Theorem1,
        CheckerId::Theorem3,
        CheckerId::Theorem4,
        CheckerId::Lemma1,
        CheckerId::Kalaj,
        CheckerId::Frazer,
        CheckerId::RieszZygmund,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckerId::RieszFejerAnalytic => "rf-analytic",
            CheckerId::Theorem1 => "t1",
            CheckerId::Theorem3 => "t3",
            CheckerId::Theorem4 => "t4",
            CheckerId::Lemma1 => "lemma1",
            CheckerId::Kalaj => "kalaj",
            CheckerId::Frazer => "frazer",
            CheckerId::RieszZygmund => "rz",
        }
    }

    /// Whether the checker takes an exponent.
    pub fn uses_p(self) -> bool {
        matches!(
            self,
            CheckerId::RieszFejerAnalytic | CheckerId::Theorem1 | CheckerId::Lemma1 | CheckerId::Kalaj | CheckerId::Frazer
        )
    }

    /// Whether the checker takes a diameter angle.
    pub fn uses_t(self) -> bool {
        !matches!(self, CheckerId::Kalaj)
    }
}

impl fmt::Display for CheckerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckerId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckerId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown theorem `{s}` (expected one of t1, t3, t4, lemma1, kalaj, frazer, rz, rf-analytic)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "holds-within-budget")]
    HoldsWithinBudget,
    #[serde(rename = "VIOLATION")]
    Violation,
    #[serde(rename = "nonconverged")]
    Nonconverged,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinBudget => "holds-within-budget",
            Verdict::Violation => "VIOLATION",
            Verdict::Nonconverged => "nonconverged",
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsWithinBudget)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub p: f64,
    pub t: f64,
    #[serde(with = "nullable_f64")]
    pub lhs: f64,
    #[serde(with = "nullable_f64")]
    pub rhs: f64,
    pub constant_used: f64,
    #[serde(with = "nullable_f64")]
    pub margin: f64,
    #[serde(with = "nullable_f64")]
    pub err_budget: f64,
    pub verdict: Verdict,
}

/// One side of an inequality: value, absolute error, and whether the
/// quadrature behind it converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub value: f64,
    pub err: f64,
    pub converged: bool,
}

impl Side {
    pub fn exact(value: f64) -> Self {
        Side {
            value,
            err: 0.0,
            converged: true,
        }
    }

    fn failed() -> Self {
        Side {
            value: f64::NAN,
            err: f64::NAN,
            converged: false,
        }
    }

    /// Lower a quadrature outcome to a side. Argument errors propagate;
    /// nonconvergence and non-finite integrands become unconverged sides.
    pub fn from_quadrature(r: Result<IntegralEstimate, QuadratureError>) -> Result<Side, CheckError> {
        match r {
            Ok(e) => Ok(Side {
                value: e.value,
                err: e.err,
                converged: true,
            }),
            Err(QuadratureError::NonConvergence { best }) => Ok(Side {
                value: best.value,
                err: best.err,
                converged: false,
            }),
            Err(QuadratureError::NonFinite { .. }) => Ok(Side::failed()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn scaled(self, c: f64) -> Side {
        Side {
            value: self.value * c,
            err: self.err * c.abs(),
            converged: self.converged,
        }
    }

    pub fn plus(self, o: Side) -> Side {
        Side {
            value: self.value + o.value,
            err: self.err + o.err,
            converged: self.converged && o.converged,
        }
    }
}

impl InequalityReport {
    /// Assemble a report for `lhs ≤ rhs` and apply the verdict policy.
    pub fn from_sides(name: impl Into<String>, p: f64, t: f64, lhs: Side, rhs: Side, constant_used: f64) -> Self {
        let err_budget = BUDGET_FACTOR * (lhs.err + rhs.err);
        let margin = rhs.value - lhs.value;
        let excess = lhs.value - rhs.value;
        let verdict = if !(lhs.converged && rhs.converged) || !excess.is_finite() || !err_budget.is_finite() {
            Verdict::Nonconverged
        } else if excess <= 0.0 {
            Verdict::Holds
        } else if excess <= err_budget {
            Verdict::HoldsWithinBudget
        } else {
            Verdict::Violation
        };
        InequalityReport {
            name: name.into(),
            p,
            t,
            lhs: lhs.value,
            rhs: rhs.value,
            constant_used,
            margin,
            err_budget,
            verdict,
        }
    }

    /// `margin / rhs`, the scale-free slack.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.rhs.abs()
    }
}

fn require_p(p: f64, bound: f64, need: &'static str, strict: bool) -> Result<(), CheckError> {
    let ok = if strict { p > bound } else { p >= bound };
    if ok && p.is_finite() {
        Ok(())
    } else {
        Err(CheckError::Exponent { p, need })
    }
}

fn diameter(f: &(impl DiskFunction + ?Sized), t: f64, p: f64, cfg: &QuadratureConfig) -> Result<Side, CheckError> {
    Side::from_quadrature(diameter_integral(f, t, p, cfg))
}

fn circle(f: &(impl DiskFunction + ?Sized), p: f64, cfg: &QuadratureConfig) -> Result<Side, CheckError> {
    Side::from_quadrature(circle_integral(f, p, cfg))
}

/// `∫_{−1}^{1}|f(xe^{it})|^p dx ≤ ½∫|f(e^{iθ})|^p dθ` for analytic `f`, `p > 0`.
pub fn check_riesz_fejer_analytic(
    f: &(impl DiskFunction + ?Sized),
    p: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport, CheckError> {
    require_p(p, 0.0, "> 0", true)?;
    if !f.is_analytic() {
        return Err(CheckError::NotAnalytic);
    }
    let lhs = diameter(f, t, p, cfg)?;
    let rhs = circle(f, p, cfg)?.scaled(0.5);
    Ok(InequalityReport::from_sides("rf-analytic", p, t, lhs, rhs, 0.5))
}

/// Harmonic Riesz–Fejér: `∫_{−1}^{1}|f(xe^{it})|^p dx ≤ A_p ∫|f(e^{iθ})|^p dθ`, `p > 1`.
pub fn check_theorem1(
    f: &(impl DiskFunction + ?Sized),
    p: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport, CheckError> {
    require_p(p, 1.0, "> 1", true)?;
    let c = a_p(p)?;
    let lhs = diameter(f, t, p, cfg)?;
    let rhs = circle(f, p, cfg)?.scaled(c);
    Ok(InequalityReport::from_sides("t1", p, t, lhs, rhs, c))
}

/// `∫_{−1}^{1}|f(xe^{it})|² dx ≤ ½∫|f|²dθ + 2π Re Σ a_k b_k e^{2ikt}`.
pub fn check_theorem3(f: &HarmonicSeries, t: f64, cfg: &QuadratureConfig) -> Result<InequalityReport, CheckError> {
    let lhs = diameter(f, t, 2.0, cfg)?;
    let rhs = circle(f, 2.0, cfg)?.scaled(0.5).plus(Side::exact(f.cross_term(t)));
    Ok(InequalityReport::from_sides("t3", 2.0, t, lhs, rhs, 0.5))
}

/// `‖hg‖₁ = ∫_0^{2π}|h(e^{iθ}) g(e^{iθ})| dθ`.
pub fn hg_norm(f: &(impl HarmonicPair + ?Sized), cfg: &QuadratureConfig) -> Result<Side, CheckError> {
    Side::from_quadrature(integrate_circle(
        |th| {
            let z = C64::from_polar(1.0, th);
            (f.analytic_part(z) * f.coanalytic_part(z)).norm()
        },
        cfg,
    ))
}

/// Both halves of `∫_{-1}^{1}|f(xe^{it})|²dx ≤ ½∫|f|²dθ + ‖hg‖₁ ≤ ∫|f|²dθ`.
pub fn check_theorem4(
    f: &(impl HarmonicPair + ?Sized),
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<[InequalityReport; 2], CheckError> {
    let g0 = f.coanalytic_part(C64::new(0.0, 0.0));
    if g0.norm() > PRECONDITION_TOL {
        return Err(CheckError::Precondition(format!("g(0) = 0 required, got |g(0)| = {:e}", g0.norm())));
    }
    let lhs = diameter(f, t, 2.0, cfg)?;
    let boundary = circle(f, 2.0, cfg)?;
    let middle = boundary.scaled(0.5).plus(hg_norm(f, cfg)?);
    Ok([
        InequalityReport::from_sides("t4-lower", 2.0, t, lhs, middle, 0.5),
        InequalityReport::from_sides("t4-upper", 2.0, t, middle, boundary, 0.5),
    ])
}

/// The `L²` diameter chain on the rectangle extremal `Re √φ′`.
///
/// Here `h = g = √φ′/2`, so `g(0) ≠ 0`; the sides are assembled from the
/// map's analytic boundary densities instead of `check_theorem4`.
pub fn check_theorem4_rectangle(eps: f64, cfg: &QuadratureConfig) -> Result<[InequalityReport; 2], CheckError> {
    let s = theorem4_sharpness(eps, cfg)?;
    let side = |e: IntegralEstimate| Side {
        value: e.value,
        err: e.err,
        converged: true,
    };
    Ok([
        InequalityReport::from_sides("t4-lower", 2.0, 0.0, side(s.diameter), side(s.middle), 0.5),
        InequalityReport::from_sides("t4-upper", 2.0, 0.0, side(s.middle), side(s.boundary), 0.5),
    ])
}

/// `∫_{−1}^{1}(|φ|+|ψ|)^p dx ≤ ½∫(|φ|+|ψ|)^p dθ` for analytic `φ, ψ`, `p > 1`.
pub fn check_lemma1(
    phi: &(impl DiskFunction + ?Sized),
    psi: &(impl DiskFunction + ?Sized),
    p: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport, CheckError> {
    require_p(p, 1.0, "> 1", true)?;
    if !(phi.is_analytic() && psi.is_analytic()) {
        return Err(CheckError::NotAnalytic);
    }
    let e = C64::from_polar(1.0, t);
    let sum_pow = |z: C64| (phi.value(z).norm() + psi.value(z).norm()).powf(p);
    let lhs = Side::from_quadrature(integrate_segment(|x| sum_pow(e * x), -1.0, 1.0, cfg))?;
    let rhs = Side::from_quadrature(integrate_circle(|th| sum_pow(C64::from_polar(1.0, th)), cfg))?.scaled(0.5);
    Ok(InequalityReport::from_sides("lemma1", p, t, lhs, rhs, 0.5))
}

/// `∫(|h|²+|g|²)^{p/2} dθ ≤ (1 − |cos π/p|)^{−p/2} ∫|f|^p dθ`, assuming `Re(h(0)g(0)) = 0`.
pub fn check_kalaj(f: &(impl HarmonicPair + ?Sized), p: f64, cfg: &QuadratureConfig) -> Result<InequalityReport, CheckError> {
    require_p(p, 1.0, "> 1", true)?;
    let zero = C64::new(0.0, 0.0);
    let (h0, g0) = (f.analytic_part(zero), f.coanalytic_part(zero));
    let product = (h0 * g0).re;
    if product.abs() > PRECONDITION_TOL * (h0.norm() * g0.norm()).max(1.0) {
        return Err(CheckError::Precondition(format!("Re(h(0)g(0)) = 0 required, got {product:e}")));
    }
    let c = kalaj_constant(p)?;
    let lhs = Side::from_quadrature(integrate_circle(
        |th| {
            let z = C64::from_polar(1.0, th);
            (f.analytic_part(z).norm_sqr() + f.coanalytic_part(z).norm_sqr()).powf(0.5 * p)
        },
        cfg,
    ))?;
    let rhs = circle(f, p, cfg)?.scaled(c);
    Ok(InequalityReport::from_sides("kalaj", p, 0.0, lhs, rhs, c))
}

/// `Σ_{k<n} ∫_{D_k} U^p ≤ csc(π/2n) ∫ U^p dθ` with `U = |u|` and diameters at `t + kπ/n`, `p ≥ 2`.
pub fn check_frazer(
    u: &(impl DiskFunction + ?Sized),
    p: f64,
    n: u32,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport, CheckError> {
    require_p(p, 2.0, ">= 2", false)?;
    let c = frazer_bp(n, p)?;
    let mut lhs = Side::exact(0.0);
    for k in 0..n {
        lhs = lhs.plus(diameter(u, t + f64::from(k) * PI / f64::from(n), p, cfg)?);
    }
    let rhs = circle(u, p, cfg)?.scaled(c);
    Ok(InequalityReport::from_sides(format!("frazer-n{n}"), p, t, lhs, rhs, c))
}

/// Length of the image of the diameter at `t` against half the largest
/// image length of a circle `|z| = ρ`, `ρ` over the fixed grid.
pub fn check_riesz_zygmund(f: &HarmonicSeries, t: f64, cfg: &QuadratureConfig) -> Result<InequalityReport, CheckError> {
    let (lhs, rhs) = match riesz_zygmund_sides(f, t, &RZ_GRID, cfg) {
        Ok((l, r)) => (Side::from_quadrature(Ok(l))?, Side::from_quadrature(Ok(r))?.scaled(0.5)),
        Err(e) => {
            let s = Side::from_quadrature(Err(e))?;
            (s, Side { converged: false, ..s })
        }
    };
    Ok(InequalityReport::from_sides("rz", 1.0, t, lhs, rhs, 0.5))
}
