use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExtremalError;
use crate::model::{BoundaryPeak, DiskFunction, C64};
use crate::quadrature::{circle_integral, integrate_circle_peaked, IntegralEstimate, QuadratureConfig};
use crate::special::{arctanh, conjectured_sharp, elliptic_k_from_complement};

/// `f_r(z) = Re((1 + rz)/(1 − rz))^{1/p}`, principal branch.
///
/// Stored through the defect `1 − r` so that `r` can sit closer to 1 than
/// double precision allows for `r` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalP {
    r: f64,
    defect: f64,
    p: f64,
}

fn check_p(p: f64) -> Result<(), ExtremalError> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(ExtremalError::InvalidParameter(format!("p must be > 1, got {p}")))
    }
}

impl ExtremalP {
    pub fn new(r: f64, p: f64) -> Result<Self, ExtremalError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(ExtremalError::InvalidParameter(format!("r must lie in (0, 1), got {r}")));
        }
        check_p(p)?;
        Ok(ExtremalP { r, defect: 1.0 - r, p })
    }

    /// The family member with `r = 1 − defect`.
    pub fn from_defect(defect: f64, p: f64) -> Result<Self, ExtremalError> {
        if !(defect > 0.0 && defect < 1.0) {
            return Err(ExtremalError::InvalidParameter(format!("1 - r must lie in (0, 1), got {defect}")));
        }
        check_p(p)?;
        Ok(ExtremalP {
            r: 1.0 - defect,
            defect,
            p,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Exact boundary value of `|f_r|^p`:
    /// `|cos^p(arctan(2r sinθ/(1−r²))/p)| · |(1+re^{iθ})/(1−re^{iθ})|`.
    pub fn boundary_density(&self, theta: f64) -> f64 {
        let (r, d, p) = (self.r, self.defect, self.p);
        let half = 0.5 * theta;
        let den = d * d + 4.0 * r * half.sin().powi(2);
        let num = d * d + 4.0 * r * half.cos().powi(2);
        let one_minus_r2 = d * (2.0 - d);
        let angle = (2.0 * r * theta.sin()).atan2(one_minus_r2);
        (angle / p).cos().abs().powf(p) * (num / den).sqrt()
    }

    /// `∫_{-1}^{1} |f_r(x)|^p dx = (4/r) arctanh r − 2`, independent of `p`.
    pub fn diameter_closed(&self) -> f64 {
        let at = if self.r < 0.5 {
            arctanh(self.r).expect("r in (0, 1/2)")
        } else {
            0.5 * ((2.0 - self.defect).ln() - self.defect.ln())
        };
        4.0 / self.r * at - 2.0
    }
}

impl DiskFunction for ExtremalP {
    fn value(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let w = (one + z * self.r) / (one - z * self.r);
        C64::new((w.ln() / self.p).exp().re, 0.0)
    }

    fn boundary_abs_pow(&self, theta: f64, p: f64) -> f64 {
        if p == self.p {
            self.boundary_density(theta)
        } else {
            self.boundary_value(theta).norm().powf(p)
        }
    }

    fn boundary_peak(&self) -> Option<BoundaryPeak> {
        Some(BoundaryPeak {
            center: 0.0,
            width: self.defect,
        })
    }
}

/// `∫_0^{2π} dθ/|1 − re^{iθ}| = 4K(2√r/(1+r))/(1+r)`.
pub fn kernel_integral(r: f64) -> Result<f64, ExtremalError> {
    if !(0.0..1.0).contains(&r) {
        return Err(ExtremalError::InvalidParameter(format!("r must lie in [0, 1), got {r}")));
    }
    // complementary modulus of 2√r/(1+r) is (1−r)/(1+r)
    let k_prime = (1.0 - r) / (1.0 + r);
    Ok(4.0 * elliptic_k_from_complement(k_prime)? / (1.0 + r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub r: f64,
    pub closed_form: f64,
    pub quadrature: IntegralEstimate,
    pub relative_difference: f64,
}

/// Compare the elliptic closed form with direct quadrature of the kernel.
pub fn kernel_identity_check(r: f64, cfg: &QuadratureConfig) -> Result<KernelCheck, ExtremalError> {
    let closed_form = kernel_integral(r)?;
    let d = 1.0 - r;
    let peak = BoundaryPeak {
        center: 0.0,
        width: d,
    };
    let quadrature = integrate_circle_peaked(
        |th: f64| 1.0 / (d * d + 4.0 * r * (0.5 * th).sin().powi(2)).sqrt(),
        peak,
        cfg,
    )?;
    Ok(KernelCheck {
        r,
        closed_form,
        quadrature,
        relative_difference: (quadrature.value - closed_form).abs() / closed_form,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub r: f64,
    /// `1 − r`, exact even when `r` rounds to 1.
    pub defect: f64,
    pub ratio: f64,
    /// Absolute error of `ratio` propagated from the boundary quadrature.
    pub ratio_err: f64,
    pub limit: f64,
    pub gap: f64,
}

fn sweep_point(fam: ExtremalP, limit: f64, cfg: &QuadratureConfig) -> Result<SweepPoint, ExtremalError> {
    let boundary = circle_integral(&fam, fam.p, cfg)?;
    let ratio = fam.diameter_closed() / boundary.value;
    Ok(SweepPoint {
        r: fam.r,
        defect: fam.defect,
        ratio,
        ratio_err: ratio * boundary.err / boundary.value,
        limit,
        gap: limit - ratio,
    })
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Ratio of the diameter integral to the boundary integral along `f_r`.
pub fn sharpness_sweep(p: f64, rs: &[f64], cfg: &QuadratureConfig) -> Result<Vec<SweepPoint>, ExtremalError> {
    check_p(p)?;
    if rs.is_empty() || !strictly_increasing(rs) {
        return Err(ExtremalError::InvalidParameter("r-list must be nonempty and increasing".into()));
    }
    let limit = conjectured_sharp(p)?;
    let fams = rs.iter().map(|&r| ExtremalP::new(r, p)).collect::<Result<Vec<_>, _>>()?;
    fams.into_par_iter().map(|f| sweep_point(f, limit, cfg)).collect()
}

/// Sweep parameterized by `1 − r`, listed in decreasing order.
pub fn sharpness_sweep_defects(p: f64, defects: &[f64], cfg: &QuadratureConfig) -> Result<Vec<SweepPoint>, ExtremalError> {
    check_p(p)?;
    let neg: Vec<f64> = defects.iter().map(|d| -d).collect();
    if defects.is_empty() || !strictly_increasing(&neg) {
        return Err(ExtremalError::InvalidParameter("defect list must be nonempty and decreasing".into()));
    }
    let limit = conjectured_sharp(p)?;
    let fams = defects
        .iter()
        .map(|&d| ExtremalP::from_defect(d, p))
        .collect::<Result<Vec<_>, _>>()?;
    fams.into_par_iter().map(|f| sweep_point(f, limit, cfg)).collect()
}

/// Taylor coefficients of `((1 + rz)/(1 − rz))^{1/p}` up to `z^n`.
pub(crate) fn warm_start_coefficients(r: f64, p: f64, n: usize) -> Vec<f64> {
    // (1 − r²z²) F' = (2r/p) F
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    if n >= 1 {
        c[1] = 2.0 * r / p;
    }
    for k in 1..n {
        c[k + 1] = (2.0 * r / p * c[k] + r * r * (k as f64 - 1.0) * c[k - 1]) / (k as f64 + 1.0);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{diameter_integral, integrate_circle};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn density_at_special_angles() {
        for r in [0.2, 0.5, 0.9] {
            let f = ExtremalP::new(r, 1.7).unwrap();
            assert!((f.boundary_density(0.0) - (1.0 + r) / (1.0 - r)).abs() < 1e-13);
            assert!((f.boundary_density(PI) - (1.0 - r) / (1.0 + r)).abs() < 1e-13);
        }
    }

    #[test]
    fn density_matches_pointwise_boundary_evaluation() {
        let f = ExtremalP::new(0.5, 2.0).unwrap();
        for th in [0.1, 0.9, 2.0, 3.0, 5.5] {
            let direct = f.value(C64::from_polar(1.0, th)).norm().powi(2);
            assert!((direct - f.boundary_density(th)).abs() < 1e-13);
        }
        let cfg = QuadratureConfig::default();
        let via_density = circle_integral(&f, 2.0, &cfg).unwrap();
        let via_eval = integrate_circle(|th| f.value(C64::from_polar(1.0, th)).norm().powi(2), &cfg).unwrap();
        assert!((via_density.value - via_eval.value).abs() < 1e-10 * via_eval.value);
    }

    #[test]
    fn diameter_closed_form() {
        let tiny = ExtremalP::new(1e-8, 2.0).unwrap();
        assert!((tiny.diameter_closed() - 2.0).abs() < 1e-12);
        let f = ExtremalP::new(0.5, 2.0).unwrap();
        assert!((f.diameter_closed() - (8.0 * 0.5f64.atanh() - 2.0)).abs() < 1e-14);
        assert!((f.diameter_closed() - 2.394_449).abs() < 1e-6);
        let by_defect = ExtremalP::from_defect(0.5, 2.0).unwrap();
        assert!((by_defect.diameter_closed() - f.diameter_closed()).abs() < 1e-14);
        let cfg = QuadratureConfig::default();
        for p in [1.5, 2.0, 3.0] {
            let fam = ExtremalP::new(0.5, p).unwrap();
            let q = diameter_integral(&fam, 0.0, p, &cfg).unwrap();
            assert!((q.value - fam.diameter_closed()).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_examples() {
        assert!((kernel_integral(0.0).unwrap() - TAU).abs() < 1e-15);
        let cfg = QuadratureConfig::default();
        assert!(kernel_identity_check(0.9, &cfg).unwrap().relative_difference < 1e-9);
        assert!(kernel_identity_check(0.99, &cfg).unwrap().relative_difference < 1e-8);
        assert!(kernel_integral(1.0).is_err());
    }

    #[test]
    fn warm_start_matches_function() {
        let (r, p) = (0.6, 3.0);
        let c = warm_start_coefficients(r, p, 80);
        let z = C64::new(0.3, 0.4);
        let series: C64 = c.iter().enumerate().map(|(k, &ck)| z.powu(k as u32) * ck).sum();
        let one = C64::new(1.0, 0.0);
        let direct = (((one + z * r) / (one - z * r)).ln() / p).exp();
        assert!((series - direct).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ExtremalP::new(1.0, 2.0).is_err());
        assert!(ExtremalP::new(0.5, 1.0).is_err());
        assert!(ExtremalP::from_defect(0.0, 2.0).is_err());
        let cfg = QuadratureConfig::default();
        assert!(sharpness_sweep(2.0, &[0.9, 0.5], &cfg).is_err());
        assert!(sharpness_sweep(1.0, &[0.5], &cfg).is_err());
    }
}
