/// Result of a Nelder–Mead minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimize `f` from `x0` with the reflection/expansion/contraction simplex.
///
/// The initial simplex offsets each coordinate by `step` times the larger of
/// `|x0_i|` and a tenth of the largest coordinate. Stops after `max_evals`
/// evaluations or when the simplex values agree to `1e-13` relative.
/// Non-finite objective values are treated as `+∞`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_evals: usize) -> SimplexResult {
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let f0 = eval(x0, &mut evaluations);
    if n == 0 || max_evals <= 1 {
        return SimplexResult {
            x: x0.to_vec(),
            value: f0,
            evaluations,
        };
    }
    let floor = 0.1 * x0.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        if evaluations >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step * x0[i].abs().max(floor);
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }
    if simplex.len() < n + 1 {
        return best_of(simplex, evaluations);
    }

    while evaluations < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        if (worst - best).abs() <= 1e-13 * best.abs().max(1e-300) {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(1.0, &simplex[n].0);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            if evaluations >= max_evals {
                simplex[n] = (xr, fr);
                break;
            }
            let xe = along(2.0, &simplex[n].0);
            let fe = eval(&xe, &mut evaluations);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        if evaluations >= max_evals {
            break;
        }
        // outside contraction when the reflection improved on the worst point
        let t = if fr < simplex[n].1 { 0.5 } else { -0.5 };
        let xc = along(t, &simplex[n].0);
        let fc = eval(&xc, &mut evaluations);
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let x_best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if evaluations >= max_evals {
                break;
            }
            let x: Vec<f64> = x_best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }
    best_of(simplex, evaluations)
}

fn best_of(simplex: Vec<(Vec<f64>, f64)>, evaluations: usize) -> SimplexResult {
    let (x, value) = simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex has at least one vertex");
    SimplexResult { x, value, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 5000);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
        assert!(r.evaluations <= 5000);
    }

    #[test]
    fn respects_budget() {
        let mut calls = 0;
        let r = nelder_mead(
            |x: &[f64]| {
                calls += 1;
                x.iter().map(|v| v * v).sum()
            },
            &[1.0; 10],
            0.2,
            37,
        );
        assert_eq!(calls, r.evaluations);
        assert!(r.evaluations <= 37);
    }

    #[test]
    fn non_finite_values_are_avoided() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.5).powi(2) };
        let r = nelder_mead(f, &[2.0], 0.5, 500);
        assert!((r.x[0] - 0.5).abs() < 1e-5);
    }
}
