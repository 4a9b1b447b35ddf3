//! Sharp constants and the special functions behind the kernel identity.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantError {
    #[error("exponent p must be > {bound}, got {p}")]
    ExponentTooSmall { p: f64, bound: f64 },
    #[error("the diameter-sum constant for 1 < p < 2 has no explicit value (got p = {0})")]
    UnspecifiedConstant(f64),
    #[error("number of diameters must be >= 1")]
    NoDiameters,
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },
}

fn require_p_above_one(p: f64) -> Result<(), ConstantError> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(ConstantError::ExponentTooSmall { p, bound: 1.0 })
    }
}

fn half_sec_pow(p: f64) -> f64 {
    if p == 2.0 {
        // cos(π/4)² rounds below ½
        return 1.0;
    }
    0.5 * (PI / (2.0 * p)).cos().powf(-p)
}

/// Sharp constant of the harmonic Riesz–Fejér inequality:
/// `½ sec^p(π/2p)` on `(1, 2]`, `1` for `p ≥ 2`.
pub fn a_p(p: f64) -> Result<f64, ConstantError> {
    require_p_above_one(p)?;
    Ok(if p <= 2.0 { half_sec_pow(p) } else { 1.0 })
}

/// `(1 − |cos(π/p)|)^{−p/2}`.
pub fn kalaj_constant(p: f64) -> Result<f64, ConstantError> {
    require_p_above_one(p)?;
    Ok((1.0 - (PI / p).cos().abs()).powf(-p / 2.0))
}

/// `½ sec^p(π/2p)` for every `p > 1`; the value the extremal family approaches.
pub fn conjectured_sharp(p: f64) -> Result<f64, ConstantError> {
    require_p_above_one(p)?;
    Ok(half_sec_pow(p))
}

/// `csc(π/2n)` for `p ≥ 2`.
pub fn frazer_bp(n: u32, p: f64) -> Result<f64, ConstantError> {
    if n == 0 {
        return Err(ConstantError::NoDiameters);
    }
    require_p_above_one(p)?;
    if p < 2.0 {
        return Err(ConstantError::UnspecifiedConstant(p));
    }
    Ok(1.0 / (PI / (2.0 * f64::from(n))).sin())
}

/// Arithmetic–geometric mean, iterated until the means agree to 4 ulps.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, modulus convention:
/// `K(k) = ∫_0^{π/2} dθ / √(1 − k² sin²θ)`.
pub fn elliptic_k(k: f64) -> Result<f64, ConstantError> {
    if !(0.0..1.0).contains(&k) {
        return Err(ConstantError::Domain {
            function: "elliptic_k",
            value: k,
        });
    }
    Ok(FRAC_PI_2 / agm(1.0, ((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `K(√(1 − k'²))` from the complementary modulus `k'`, accurate when `k'` is tiny.
pub fn elliptic_k_from_complement(k_prime: f64) -> Result<f64, ConstantError> {
    if !(k_prime > 0.0 && k_prime <= 1.0) {
        return Err(ConstantError::Domain {
            function: "elliptic_k_from_complement",
            value: k_prime,
        });
    }
    Ok(FRAC_PI_2 / agm(1.0, k_prime))
}

/// `½ ln((1+x)/(1−x))` for `|x| < 1`.
pub fn arctanh(x: f64) -> Result<f64, ConstantError> {
    if !(x.abs() < 1.0) {
        return Err(ConstantError::Domain {
            function: "arctanh",
            value: x,
        });
    }
    Ok(0.5 * (x.ln_1p() - (-x).ln_1p()))
}

/// All constants for one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpConstantTable {
    pub p: f64,
    pub a_p: f64,
    pub kalaj: f64,
    pub conjectured_sharp: f64,
    /// `n ↦ B_p`, populated only for `p ≥ 2`.
    pub frazer_n_to_bp: BTreeMap<u32, f64>,
}

impl SharpConstantTable {
    pub fn new(p: f64, ns: &[u32]) -> Result<Self, ConstantError> {
        let mut frazer_n_to_bp = BTreeMap::new();
        if p >= 2.0 {
            for &n in ns {
                frazer_n_to_bp.insert(n, frazer_bp(n, p)?);
            }
        }
        Ok(SharpConstantTable {
            p,
            a_p: a_p(p)?,
            kalaj: kalaj_constant(p)?,
            conjectured_sharp: conjectured_sharp(p)?,
            frazer_n_to_bp,
        })
    }
}
