use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use super::ExtremalError;
use crate::model::{check_domain, DiskFunction, HarmonicPair, C64};
use crate::quadrature::{integrate_partition, IntegralEstimate, QuadratureConfig};

/// Lower end of the bisection bracket in `σ = ln sin α`. Corresponds to
/// `ε ≈ π/40000`.
const SIGMA_MIN: f64 = -20_000.0;
const BISECTION_STEPS: usize = 200;

/// Conformal map of the disk onto the rectangle with vertices `±1 ± iε`,
/// `φ′(z) = A (1 − z²e^{−2iα})^{−1/2} (1 − z²e^{2iα})^{−1/2}`.
///
/// `sin α` underflows for small `ε` (it behaves like `4e^{−π/2ε}`), so the
/// prevertex angle is kept through `log_sin_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleMap {
    pub eps: f64,
    pub alpha: f64,
    pub log_sin_alpha: f64,
    /// `A = φ′(0)`.
    pub scale: f64,
}

fn ln_sinh(y: f64) -> f64 {
    if y > 20.0 {
        y - LN_2 + (-(-2.0 * y).exp()).ln_1p()
    } else {
        y.sinh().ln()
    }
}

fn ln_cosh(y: f64) -> f64 {
    let y = y.abs();
    y - LN_2 + (-2.0 * y).exp().ln_1p()
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    v
}

/// `∫_0^1 dx/√((1−x²)² + 4x² sin²α) = ∫_0^∞ du/√(1 + sin²α sinh²2u)`, with `x = tanh u`.
fn real_axis_core(sigma: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate, ExtremalError> {
    let knee = (-0.5 * sigma).max(0.0);
    let upper = knee + 25.0;
    let g = |u: f64| real_axis_density(sigma, u.abs());
    let breaks = dedup_sorted(vec![0.0, knee, knee + 2.0, knee + 6.0, upper]);
    Ok(integrate_partition(g, &breaks, cfg)?)
}

fn real_axis_density(sigma: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 1.0;
    }
    let l = sigma + ln_sinh(2.0 * u);
    if l > 0.0 {
        let e = (-l).exp();
        e / (1.0 + e * e).sqrt()
    } else {
        1.0 / (1.0 + (2.0 * l).exp()).sqrt()
    }
}

/// `∫_0^α w(θ) dθ / (2√(sin²α − sin²θ))` through `sin θ = sin α · sin ψ`.
fn short_arc<W: Fn(f64, f64) -> f64>(sigma: f64, weight: W, cfg: &QuadratureConfig) -> Result<IntegralEstimate, ExtremalError> {
    let s = sigma.exp();
    let g = |psi: f64| {
        let sin_t = s * psi.sin();
        let cos_t = (1.0 - sin_t * sin_t).sqrt();
        0.5 * weight(sin_t, cos_t) / cos_t
    };
    Ok(integrate_partition(g, &[0.0, 0.5 * FRAC_PI_2, FRAC_PI_2], cfg)?)
}

/// `∫_α^{π/2} w(θ) dθ / (2√(sin²θ − sin²α))`.
///
/// Near `α` the substitution `sin θ = sin α · cosh w` removes the
/// singularity; the remainder up to `π/2` is integrated directly.
fn long_arc<W: Fn(f64, f64) -> f64>(sigma: f64, weight: W, cfg: &QuadratureConfig) -> Result<IntegralEstimate, ExtremalError> {
    let s = sigma.exp();
    let alpha = s.asin();
    let theta_mid = 0.5 * (alpha + FRAC_PI_2);
    let ln_y = theta_mid.sin().ln() - sigma;
    let w_mid = if ln_y > 30.0 {
        LN_2 + ln_y
    } else {
        ln_y.exp().acosh()
    };
    let near = |w: f64| {
        let sin_t = (sigma + ln_cosh(w)).exp();
        let cos_t = (1.0 - sin_t * sin_t).sqrt();
        0.5 * weight(sin_t, cos_t) / cos_t
    };
    let breaks = dedup_sorted(vec![0.0, w_mid.min(1.0), 0.5 * w_mid, w_mid]);
    let first = integrate_partition(near, &breaks, cfg)?;
    let far = |theta: f64| {
        let sin_t = theta.sin();
        let cos_t = theta.cos();
        weight(sin_t, cos_t) / (2.0 * ((sin_t - s) * (sin_t + s)).sqrt())
    };
    let second = integrate_partition(far, &[theta_mid, FRAC_PI_2], cfg)?;
    Ok(first.plus(second))
}

/// `ε` as a function of `σ`, together with the scale `A`.
fn eps_of_sigma(sigma: f64, cfg: &QuadratureConfig) -> Result<(f64, f64), ExtremalError> {
    let axis = real_axis_core(sigma, cfg)?;
    let scale = 1.0 / axis.value;
    let half_side = short_arc(sigma, |_, _| 1.0, cfg)?;
    Ok((scale * half_side.value, scale))
}

/// Solve for the prevertex angle that produces half-height `ε`.
pub fn rectmap_solve(eps: f64, cfg: &QuadratureConfig) -> Result<RectangleMap, ExtremalError> {
    let sigma_max = -0.5 * LN_2;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ExtremalError::NoBracket { eps, lo: 0.0, hi: 1.0 });
    }
    let (eps_lo, _) = eps_of_sigma(SIGMA_MIN, cfg)?;
    let (eps_hi, scale_hi) = eps_of_sigma(sigma_max, cfg)?;
    if eps < eps_lo || eps > eps_hi * (1.0 + 1e-9) {
        return Err(ExtremalError::NoBracket { eps, lo: eps_lo, hi: eps_hi });
    }
    if eps >= eps_hi {
        return Ok(map_from(eps, sigma_max, scale_hi));
    }
    let (mut lo, mut hi) = (SIGMA_MIN, sigma_max);
    let mut scale = scale_hi;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        let (e, a) = eps_of_sigma(mid, cfg)?;
        scale = a;
        if e < eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs() {
            break;
        }
    }
    let sigma = 0.5 * (lo + hi);
    let (_, a) = eps_of_sigma(sigma, cfg).unwrap_or((eps, scale));
    Ok(map_from(eps, sigma, a))
}

fn map_from(eps: f64, sigma: f64, scale: f64) -> RectangleMap {
    RectangleMap {
        eps,
        alpha: sigma.exp().asin(),
        log_sin_alpha: sigma,
        scale,
    }
}

impl RectangleMap {
    pub fn sin_alpha(&self) -> f64 {
        self.log_sin_alpha.exp()
    }

    /// The four prevertices `±e^{±iα}`.
    pub fn prevertices(&self) -> [C64; 4] {
        let e = C64::from_polar(1.0, self.alpha);
        [e, e.conj(), -e, -e.conj()]
    }

    /// `(1 − z²e^{−2iα}, 1 − z²e^{2iα})`, written as `(1−z)(1+z) + z²(1 − e^{∓2iα})`
    /// so nothing cancels when `α` is tiny.
    fn factors(&self, z: C64) -> Result<(C64, C64), ExtremalError> {
        check_domain(z)?;
        let s = self.sin_alpha();
        let e = C64::from_polar(1.0, self.alpha);
        let two_i_s = C64::new(0.0, 2.0 * s);
        let u = (1.0 - z) * (1.0 + z);
        let z2 = z * z;
        let f1 = u + z2 * two_i_s * e.conj();
        let f2 = u - z2 * two_i_s * e;
        // rounding floor of the two-term sums
        let floor = 8.0 * f64::EPSILON * (u.norm() + 2.0 * s * z2.norm());
        if f1.norm() <= floor || f2.norm() <= floor {
            return Err(ExtremalError::Prevertex { re: z.re, im: z.im });
        }
        Ok((f1, f2))
    }

    pub fn phi_prime(&self, z: C64) -> Result<C64, ExtremalError> {
        let w = self.sqrt_phi_prime(z)?;
        Ok(w * w)
    }

    /// `√φ′ = √A (1 − z²e^{−2iα})^{−1/4} (1 − z²e^{2iα})^{−1/4}`, on the branch
    /// with `√φ′(0) = √A`, via summed principal logarithms.
    pub fn sqrt_phi_prime(&self, z: C64) -> Result<C64, ExtremalError> {
        let (f1, f2) = self.factors(z)?;
        Ok((0.5 * self.scale.ln() - 0.25 * (f1.ln() + f2.ln())).exp())
    }

    /// `|φ′(e^{iθ})|`.
    pub fn boundary_speed(&self, theta: f64) -> f64 {
        let s = self.sin_alpha();
        let st = theta.sin();
        self.scale / (2.0 * ((st - s) * (st + s)).abs().sqrt())
    }

    /// Exact `|f(e^{iθ})|²` for `f = Re √φ′`.
    pub fn boundary_f_sq(&self, theta: f64) -> f64 {
        // |f|² is even in θ and π-periodic; reduce to [0, π/2].
        let mut t = theta.rem_euclid(PI);
        if t > FRAC_PI_2 {
            t = PI - t;
        }
        let arg = if t < self.alpha { -t } else { FRAC_PI_2 - t };
        self.boundary_speed(t) * 0.5 * (1.0 + arg.cos())
    }
}

/// `Re √φ′(z)`, the extremal for the `L²` diameter inequality.
pub fn rectmap_f(m: &RectangleMap, z: C64) -> Result<C64, ExtremalError> {
    Ok(C64::new(m.sqrt_phi_prime(z)?.re, 0.0))
}

impl DiskFunction for RectangleMap {
    fn value(&self, z: C64) -> C64 {
        rectmap_f(self, z).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn boundary_abs_pow(&self, theta: f64, p: f64) -> f64 {
        if p == 2.0 {
            self.boundary_f_sq(theta)
        } else {
            self.boundary_f_sq(theta).powf(0.5 * p)
        }
    }
}

impl HarmonicPair for RectangleMap {
    fn analytic_part(&self, z: C64) -> C64 {
        self.sqrt_phi_prime(z).map(|w| 0.5 * w).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn coanalytic_part(&self, z: C64) -> C64 {
        self.analytic_part(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem4Sharpness {
    pub map: RectangleMap,
    /// `∫_{−1}^{1} |f(x)|² dx`.
    pub diameter: IntegralEstimate,
    /// `½·boundary + hg_norm`.
    pub middle: IntegralEstimate,
    /// `∫_0^{2π} |f(e^{iθ})|² dθ`.
    pub boundary: IntegralEstimate,
    /// `‖hg‖₁ = ¼∫|φ′| dθ`.
    pub hg_norm: IntegralEstimate,
    /// `∫_0^{2π} |φ′(e^{iθ})| dθ`, expected `4 + 4ε`.
    pub perimeter: IntegralEstimate,
}

impl Theorem4Sharpness {
    /// `diameter / middle`.
    pub fn lower_ratio(&self) -> f64 {
        self.diameter.value / self.middle.value
    }

    /// `middle / boundary`.
    pub fn upper_ratio(&self) -> f64 {
        self.middle.value / self.boundary.value
    }
}

/// Perimeter and boundary integrals of the solved map, each over the four
/// symmetric copies of the first quadrant.
pub fn rectmap_boundary_integrals(
    m: &RectangleMap,
    cfg: &QuadratureConfig,
) -> Result<(IntegralEstimate, IntegralEstimate), ExtremalError> {
    let sigma = m.log_sin_alpha;
    let perimeter = short_arc(sigma, |_, _| 1.0, cfg)?
        .plus(long_arc(sigma, |_, _| 1.0, cfg)?)
        .scaled(4.0 * m.scale);
    let boundary = short_arc(sigma, |_, c| 0.5 * (1.0 + c), cfg)?
        .plus(long_arc(sigma, |s, _| 0.5 * (1.0 + s), cfg)?)
        .scaled(4.0 * m.scale);
    Ok((perimeter, boundary))
}

/// `∫_{−1}^{1} |f(x)|² dx` over the whole diameter, `x = tanh u`.
pub fn rectmap_diameter(m: &RectangleMap, cfg: &QuadratureConfig) -> Result<IntegralEstimate, ExtremalError> {
    let sigma = m.log_sin_alpha;
    let knee = (-0.5 * sigma).max(0.0);
    let upper = knee + 25.0;
    let mut breaks = vec![-upper, -knee - 6.0, -knee - 2.0, -knee, 0.0, knee, knee + 2.0, knee + 6.0, upper];
    breaks = dedup_sorted(breaks);
    let g = |u: f64| m.scale * real_axis_density(sigma, u.abs());
    Ok(integrate_partition(g, &breaks, cfg)?)
}

/// The three quantities of the `L²` diameter chain on the rectangle extremal.
pub fn theorem4_sharpness(eps: f64, cfg: &QuadratureConfig) -> Result<Theorem4Sharpness, ExtremalError> {
    let map = rectmap_solve(eps, cfg)?;
    let diameter = rectmap_diameter(&map, cfg)?;
    let (perimeter, boundary) = rectmap_boundary_integrals(&map, cfg)?;
    let hg_norm = perimeter.scaled(0.25);
    let middle = boundary.scaled(0.5).plus(hg_norm);
    Ok(Theorem4Sharpness {
        map,
        diameter,
        middle,
        boundary,
        hg_norm,
        perimeter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_circle, integrate_segment};
    use crate::special::{elliptic_k, elliptic_k_from_complement};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn matches_elliptic_closed_forms() {
        // ε = K(sin α)/K(cos α) and A = 2/K(cos α)
        for target in [0.5, 0.1, 0.01] {
            let m = rectmap_solve(target, &cfg()).unwrap();
            let s = m.sin_alpha();
            // K(cos α) from its complementary modulus sin α
            let k_cos = elliptic_k_from_complement(s).unwrap();
            let eps = elliptic_k(s).unwrap() / k_cos;
            assert!((eps - target).abs() < 1e-9 * target, "eps {target}");
            assert!((m.scale - 2.0 / k_cos).abs() < 1e-9 * m.scale);
        }
        let square = rectmap_solve(1.0, &cfg()).unwrap();
        assert!((square.alpha - PI / 4.0).abs() < 1e-6);
    }

    #[test]
    fn small_eps_asymptotics() {
        let m = rectmap_solve(1e-3, &cfg()).unwrap();
        assert_eq!(m.alpha, 0.0);
        let predicted = 4f64.ln() - PI / (2.0 * 1e-3);
        assert!((m.log_sin_alpha - predicted).abs() < 1e-6 * predicted.abs());
        assert!((m.scale - 4e-3 / PI).abs() < 1e-8);
    }

    #[test]
    fn out_of_range_eps() {
        assert!(matches!(rectmap_solve(2.0, &cfg()), Err(ExtremalError::NoBracket { .. })));
        assert!(matches!(rectmap_solve(1e-6, &cfg()), Err(ExtremalError::NoBracket { .. })));
        assert!(matches!(rectmap_solve(0.0, &cfg()), Err(ExtremalError::NoBracket { .. })));
    }

    #[test]
    fn phi_prime_positive_on_diameter() {
        let m = rectmap_solve(0.1, &cfg()).unwrap();
        for j in 0..=40 {
            let x = -0.999 + j as f64 * 0.04995;
            let d = m.phi_prime(C64::new(x, 0.0)).unwrap();
            assert!(d.re > 0.0 && d.im.abs() < 1e-12 * d.re);
            let f = rectmap_f(&m, C64::new(x, 0.0)).unwrap();
            assert!((f.re * f.re - d.re).abs() < 1e-12 * d.re);
        }
        assert!((rectmap_f(&m, C64::new(0.0, 0.0)).unwrap().re - m.scale.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetries() {
        let m = rectmap_solve(0.1, &cfg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let z = C64::from_polar(rng.random_range(0.0..0.999), rng.random_range(0.0..std::f64::consts::TAU));
            let a = m.phi_prime(z).unwrap();
            assert!((m.phi_prime(z.conj()).unwrap() - a.conj()).norm() < 1e-12 * a.norm());
            assert!((m.phi_prime(-z).unwrap() - a).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn rejects_prevertex() {
        let m = rectmap_solve(0.5, &cfg()).unwrap();
        for v in m.prevertices() {
            assert!(matches!(m.phi_prime(v), Err(ExtremalError::Prevertex { .. })));
        }
        assert!(m.phi_prime(C64::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn diameter_and_perimeter() {
        for eps in [0.1, 0.01, 1e-3] {
            let m = rectmap_solve(eps, &cfg()).unwrap();
            let d = rectmap_diameter(&m, &cfg()).unwrap();
            assert!((d.value - 2.0).abs() < 1e-8, "eps {eps}: {}", d.value);
            let (perimeter, boundary) = rectmap_boundary_integrals(&m, &cfg()).unwrap();
            assert!((perimeter.value - (4.0 + 4.0 * eps)).abs() < 1e-6, "eps {eps}");
            let expected = 0.5 * perimeter.value + PI * m.scale;
            assert!((boundary.value - expected).abs() < 1e-6, "eps {eps}");
        }
    }

    #[test]
    fn direct_evaluation_paths_agree() {
        // Moderate ε keeps the prevertices far enough apart for the complex path.
        let m = rectmap_solve(0.5, &cfg()).unwrap();
        let tight = cfg().with_singular_endpoints(true, true);
        let direct = integrate_segment(|x| rectmap_f(&m, C64::new(x, 0.0)).unwrap().re.powi(2), -1.0, 1.0, &tight).unwrap();
        assert!((direct.value - 2.0).abs() < 1e-7);
        let speed = integrate_circle(|t| m.phi_prime(C64::from_polar(1.0, t)).map(|d| d.norm()).unwrap_or(0.0), &cfg());
        if let Ok(est) = speed {
            assert!((est.value - 4.0 * 1.5).abs() < 1e-2);
        }
        for th in [0.1, 0.4, 1.0, 2.0, 3.5] {
            let f = rectmap_f(&m, C64::from_polar(1.0, th)).unwrap().re;
            assert!((f * f - m.boundary_f_sq(th)).abs() < 1e-10 * m.boundary_f_sq(th).max(1.0), "θ = {th}");
        }
    }

    #[test]
    fn sharpness_trend() {
        let mut prev: Option<Theorem4Sharpness> = None;
        for eps in [0.1, 0.01, 1e-3] {
            let t = theorem4_sharpness(eps, &cfg()).unwrap();
            assert!(t.lower_ratio() <= 1.0 + 1e-9 && t.upper_ratio() <= 1.0 + 1e-9);
            if let Some(p) = prev {
                assert!(t.lower_ratio() > p.lower_ratio());
                assert!(t.upper_ratio() > p.upper_ratio());
            }
            prev = Some(t);
        }
        let t = prev.unwrap();
        assert!((t.hg_norm.value / t.boundary.value - 0.5).abs() < 1e-3);
        assert!(t.boundary.value >= 2.0 && t.boundary.value <= 2.02);
    }
}
