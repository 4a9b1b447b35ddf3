use serde::{Deserialize, Serialize};

use super::{DiskFunction, ModelError, C64};

/// `B(z) = λ Π (z - a_j) / (1 - conj(a_j) z)` with `|a_j| < 1`, `|λ| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteBlaschke {
    zeros: Vec<C64>,
    rotation: C64,
}

impl FiniteBlaschke {
    pub fn new(zeros: Vec<C64>, rotation: C64) -> Result<Self, ModelError> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(ModelError::ZeroOutsideDisk { re: a.re, im: a.im });
        }
        let m = rotation.norm();
        if (m - 1.0).abs() > 1e-12 {
            return Err(ModelError::NotUnimodular(m));
        }
        Ok(FiniteBlaschke { zeros, rotation })
    }

    /// The empty product, `B ≡ 1`.
    pub fn identity() -> Self {
        FiniteBlaschke {
            zeros: Vec::new(),
            rotation: C64::new(1.0, 0.0),
        }
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn rotation(&self) -> C64 {
        self.rotation
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros
            .iter()
            .fold(self.rotation, |acc, &a| acc * (z - a) / (C64::new(1.0, 0.0) - a.conj() * z))
    }
}

impl DiskFunction for FiniteBlaschke {
    fn value(&self, z: C64) -> C64 {
        self.eval(z)
    }
    fn is_analytic(&self) -> bool {
        true
    }
}

/// Pointwise product `B·φ` of a finite Blaschke product with an analytic evaluator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct<F> {
    pub blaschke: FiniteBlaschke,
    pub inner: F,
}

impl<F: DiskFunction> BlaschkeProduct<F> {
    pub fn multiply(inner: F, blaschke: FiniteBlaschke) -> Self {
        BlaschkeProduct { blaschke, inner }
    }
}

impl<F: DiskFunction> DiskFunction for BlaschkeProduct<F> {
    fn value(&self, z: C64) -> C64 {
        self.blaschke.eval(z) * self.inner.value(z)
    }
    fn boundary_value(&self, theta: f64) -> C64 {
        let z = super::unit(theta);
        self.blaschke.eval(z) * self.inner.boundary_value(theta)
    }
    fn is_analytic(&self) -> bool {
        self.inner.is_analytic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AnalyticSeries;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_blaschke(rng: &mut ChaCha8Rng) -> FiniteBlaschke {
        let n = rng.random_range(0..=8);
        let zeros = (0..n)
            .map(|_| C64::from_polar(0.999 * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let rot = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        FiniteBlaschke::new(zeros, rot).unwrap()
    }

    #[test]
    fn unimodular_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let b = random_blaschke(&mut rng);
            for _ in 0..20 {
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                assert!((b.eval(C64::from_polar(1.0, th)).norm() - 1.0).abs() < 1e-12);
            }
            let z = C64::from_polar(0.99 * rng.random::<f64>(), 1.0);
            assert!(b.eval(z).norm() < 1.0 || b.zeros().is_empty());
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            FiniteBlaschke::new(vec![C64::new(1.0, 0.0)], C64::new(1.0, 0.0)),
            Err(ModelError::ZeroOutsideDisk { .. })
        ));
        assert!(matches!(
            FiniteBlaschke::new(vec![], C64::new(2.0, 0.0)),
            Err(ModelError::NotUnimodular(_))
        ));
    }

    #[test]
    fn multiply_examples() {
        let z_factor = FiniteBlaschke::new(vec![C64::new(0.0, 0.0)], C64::new(1.0, 0.0)).unwrap();
        let one = AnalyticSeries::constant(C64::new(1.0, 0.0));
        let prod = BlaschkeProduct::multiply(one.clone(), z_factor);
        for th in [0.0, 1.0, 2.5, 4.0] {
            assert!((prod.boundary_value(th).norm() - 1.0).abs() < 1e-12);
        }

        let phi = AnalyticSeries::new(vec![C64::new(0.5, 0.1), C64::new(-0.2, 0.7), C64::new(0.3, 0.0)]);
        let ident = BlaschkeProduct::multiply(phi.clone(), FiniteBlaschke::identity());
        let z = C64::new(0.3, 0.4);
        assert_eq!(ident.value(z), phi.value(z));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let b = random_blaschke(&mut rng);
            let p = BlaschkeProduct::multiply(phi.clone(), b);
            for th in [0.2, 1.9, 3.3] {
                assert!((p.boundary_value(th).norm() - phi.boundary_value(th).norm()).abs() < 1e-12);
            }
            for x in [-0.9, -0.2, 0.0, 0.5, 0.95] {
                let z = C64::new(x, 0.0);
                assert!(p.value(z).norm() <= phi.value(z).norm() + 1e-15);
            }
        }
    }
}
