use std::f64::consts::TAU;

use super::{IntegralEstimate, QuadratureConfig, QuadratureError};

const START_NODES: usize = 32;
const MAX_NODES: usize = 1 << 14;

pub(crate) enum Outcome {
    Converged(IntegralEstimate),
    Stalled { evaluations: usize },
}

/// `n`-node trapezoid rule for `∫_0^{2π} g`. Exact for trigonometric
/// polynomials of degree `< n`.
pub fn trapezoid_circle<G: Fn(f64) -> f64>(g: G, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|j| g(j as f64 * h)).sum::<f64>() * h
}

fn checked<G: Fn(f64) -> f64>(g: &G, theta: f64) -> Result<f64, QuadratureError> {
    let y = g(theta);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadratureError::NonFinite { x: theta })
    }
}

/// Doubling trapezoid sequence. Converged once two successive differences
/// are both within tolerance; stalled when the node count hits the cap or
/// the differences stop shrinking geometrically.
pub(crate) fn doubling_trapezoid<G: Fn(f64) -> f64>(g: &G, cfg: &QuadratureConfig) -> Result<Outcome, QuadratureError> {
    let mut n = START_NODES;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for j in 0..n {
        let y = checked(g, j as f64 * TAU / n as f64)?;
        sum += y;
        abs_sum += y.abs();
    }
    let mut estimate = sum * TAU / n as f64;
    let mut last_diff = f64::INFINITY;
    let mut evaluations = n;
    while n < MAX_NODES {
        // New nodes are the midpoints of the current mesh.
        let h = TAU / n as f64;
        for j in 0..n {
            let y = checked(g, (j as f64 + 0.5) * h)?;
            sum += y;
            abs_sum += y.abs();
        }
        evaluations += n;
        n *= 2;
        let refined = sum * TAU / n as f64;
        let diff = (refined - estimate).abs();
        estimate = refined;
        let floor = 16.0 * f64::EPSILON * abs_sum * TAU / n as f64;
        let tol = cfg.tolerance(refined).max(floor);
        if diff <= tol && last_diff <= tol {
            return Ok(Outcome::Converged(IntegralEstimate {
                value: refined,
                err: diff.max(floor),
                evaluations,
            }));
        }
        if n >= 256 && diff > tol && diff > last_diff / 8.0 {
            break;
        }
        last_diff = diff;
    }
    Ok(Outcome::Stalled { evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trapezoid_exact_above_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let d = rng.random_range(1..=64usize);
            let c0: f64 = rng.random_range(-1.0..1.0);
            let coef: Vec<(f64, f64)> = (1..=d)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let g = |t: f64| {
                c0 + coef
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, b))| a * ((k + 1) as f64 * t).cos() + b * ((k + 1) as f64 * t).sin())
                    .sum::<f64>()
            };
            let v = trapezoid_circle(g, 2 * d + 1);
            assert!((v - TAU * c0).abs() < 1e-13, "degree {d}");
        }
    }
}
