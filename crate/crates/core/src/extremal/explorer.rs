use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::warm_start_coefficients;
use super::simplex::nelder_mead;
use super::ExtremalError;
use crate::model::{HarmonicSeries, C64};
use crate::quadrature::{circle_integral, diameter_integral, QuadratureConfig};

/// Degree of the truncated harmonic polynomials searched.
pub const EXPLORER_DEGREE: usize = 12;

const WARM_RADII: [f64; 7] = [0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999];
const EVALS_PER_RESTART: usize = 1000;
const MIN_BUDGET: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerResult {
    pub p: f64,
    pub degree: usize,
    pub seed: u64,
    pub budget: usize,
    pub best_ratio: f64,
    /// Propagated quadrature error of `best_ratio`.
    pub ratio_err: f64,
    pub best_function: HarmonicSeries,
    /// Index of the restart that produced the witness.
    pub best_restart: usize,
    pub restarts: usize,
    pub evaluations: usize,
}

/// `∫_{−1}^{1}|f(x)|^p dx / ∫_0^{2π}|f(e^{iθ})|^p dθ` and its error.
pub fn explorer_ratio(f: &HarmonicSeries, p: f64, cfg: &QuadratureConfig) -> Result<(f64, f64), ExtremalError> {
    let d = diameter_integral(f, 0.0, p, cfg)?;
    let c = circle_integral(f, p, cfg)?;
    if !(c.value > 0.0) {
        return Err(ExtremalError::InvalidParameter("boundary integral vanishes".into()));
    }
    let ratio = d.value / c.value;
    let err = ratio * (d.err / d.value.abs().max(f64::MIN_POSITIVE) + c.err / c.value);
    Ok((ratio, err))
}

fn pack(f: &HarmonicSeries, degree: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(4 * degree + 2);
    for k in 0..=degree {
        let a = f.a().get(k).copied().unwrap_or_default();
        x.extend([a.re, a.im]);
    }
    for k in 1..=degree {
        let b = f.b().get(k - 1).copied().unwrap_or_default();
        x.extend([b.re, b.im]);
    }
    x
}

fn unpack(x: &[f64], degree: usize) -> HarmonicSeries {
    let a = (0..=degree).map(|k| C64::new(x[2 * k], x[2 * k + 1])).collect();
    let off = 2 * (degree + 1);
    let b = (0..degree).map(|k| C64::new(x[off + 2 * k], x[off + 2 * k + 1])).collect();
    HarmonicSeries::new(a, b)
}

fn warm_start(r: f64, p: f64, degree: usize) -> HarmonicSeries {
    let c = warm_start_coefficients(r, p, degree);
    let mut a: Vec<C64> = c.iter().map(|&ck| C64::new(0.5 * ck, 0.0)).collect();
    a[0] = C64::new(c[0], 0.0);
    let b = c[1..].iter().map(|&ck| C64::new(0.5 * ck, 0.0)).collect();
    HarmonicSeries::new(a, b)
}

fn random_start(seed: u64, restart: usize, degree: usize) -> HarmonicSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64 + 1);
    let mut draw = |k: usize| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im) * (std::f64::consts::FRAC_1_SQRT_2 * (k as f64 + 1.0).powf(-1.5))
    };
    let a = (0..=degree).map(&mut draw).collect();
    let b = (1..=degree).map(&mut draw).collect();
    HarmonicSeries::new(a, b)
}

struct Outcome {
    ratio: f64,
    witness: HarmonicSeries,
    evaluations: usize,
}

/// Search for harmonic polynomials with a large diameter-to-boundary ratio
/// for `p > 2`.
///
/// Restarts begin with truncated `f_r` for increasing `r` and continue from
/// seeded random coefficient vectors; each runs a simplex search on the
/// real and imaginary parts of the coefficients. Restarts run in parallel
/// and the best is selected by ratio, ties going to the lower index.
pub fn conjecture_explore(p: f64, budget: usize, seed: u64, cfg: &QuadratureConfig) -> Result<ExplorerResult, ExtremalError> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(ExtremalError::InvalidParameter(format!("explorer needs p > 2, got {p}")));
    }
    if budget < MIN_BUDGET {
        return Err(ExtremalError::InvalidParameter(format!("budget must be >= {MIN_BUDGET}, got {budget}")));
    }
    let degree = EXPLORER_DEGREE;
    let restarts = (budget / EVALS_PER_RESTART).max(1);
    let per_restart = budget / restarts;
    let outcomes: Vec<Option<Outcome>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let start = match WARM_RADII.get(i) {
                Some(&r) => warm_start(r, p, degree),
                None => random_start(seed, i, degree),
            };
            let objective = |x: &[f64]| match explorer_ratio(&unpack(x, degree), p, cfg) {
                Ok((ratio, _)) => -ratio,
                Err(_) => f64::INFINITY,
            };
            let res = nelder_mead(objective, &pack(&start, degree), 0.1, per_restart);
            res.value.is_finite().then(|| Outcome {
                ratio: -res.value,
                witness: unpack(&res.x, degree),
                evaluations: res.evaluations,
            })
        })
        .collect();
    let evaluations = outcomes.iter().flatten().map(|o| o.evaluations).sum::<usize>();
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(i, o)| o.map(|o| (i, o)))
        .fold(None::<(usize, Outcome)>, |acc, (i, o)| match acc {
            Some((j, b)) if b.ratio >= o.ratio => Some((j, b)),
            _ => Some((i, o)),
        })
        .ok_or_else(|| ExtremalError::InvalidParameter("no restart produced a finite ratio".into()))?;
    let (best_ratio, ratio_err) = explorer_ratio(&best.witness, p, cfg)?;
    Ok(ExplorerResult {
        p,
        degree,
        seed,
        budget,
        best_ratio,
        ratio_err,
        best_function: best.witness,
        best_restart,
        restarts,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip() {
        let f = random_start(5, 3, EXPLORER_DEGREE);
        assert_eq!(unpack(&pack(&f, EXPLORER_DEGREE), EXPLORER_DEGREE), f);
    }

    #[test]
    fn warm_start_is_truncated_family() {
        let f = warm_start(0.5, 3.0, 40);
        let fam = super::super::ExtremalP::new(0.5, 3.0).unwrap();
        use crate::model::DiskFunction;
        let z = C64::new(0.2, -0.5);
        assert!((f.value(z) - fam.value(z)).norm() < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = QuadratureConfig::default();
        assert!(conjecture_explore(2.0, 1000, 1, &cfg).is_err());
        assert!(conjecture_explore(3.0, 99, 1, &cfg).is_err());
    }

    #[test]
    fn small_run_is_bounded_and_reproducible() {
        let cfg = QuadratureConfig::default();
        let a = conjecture_explore(3.0, 300, 7, &cfg).unwrap();
        let b = conjecture_explore(3.0, 300, 7, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.best_ratio <= 1.0 + a.ratio_err);
        assert!(a.evaluations <= 300);
        let (again, _) = explorer_ratio(&a.best_function, 3.0, &cfg).unwrap();
        assert!((again - a.best_ratio).abs() <= a.ratio_err.max(1e-12));
    }
}
