use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{check_domain, unit, DiskFunction, HarmonicPair, ModelError, C64};

/// Truncated harmonic series `f(z) = Σ_{k=0}^N a_k z^k + conj(Σ_{k=1}^N b_k z^k)`.
///
/// `b` stores `b_1..b_N`; there is no `b_0` slot, so `g(0) = 0` always holds.
/// Any constant in the co-analytic part belongs in `a_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct HarmonicSeries {
    a: Vec<C64>,
    b: Vec<C64>,
}

/// Truncated power series `Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct AnalyticSeries {
    c: Vec<C64>,
}

/// Wire format: `{"a": [[re, im], ...], "b": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRepr {
    a: Vec<[f64; 2]>,
    #[serde(default)]
    b: Vec<[f64; 2]>,
}

fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

impl From<HarmonicSeries> for SeriesRepr {
    fn from(f: HarmonicSeries) -> Self {
        SeriesRepr {
            a: to_pairs(&f.a),
            b: to_pairs(&f.b),
        }
    }
}

impl TryFrom<SeriesRepr> for HarmonicSeries {
    type Error = ModelError;
    fn try_from(r: SeriesRepr) -> Result<Self, Self::Error> {
        Ok(HarmonicSeries::new(from_pairs(&r.a), from_pairs(&r.b)))
    }
}

impl From<AnalyticSeries> for SeriesRepr {
    fn from(f: AnalyticSeries) -> Self {
        SeriesRepr {
            a: to_pairs(&f.c),
            b: Vec::new(),
        }
    }
}

impl TryFrom<SeriesRepr> for AnalyticSeries {
    type Error = ModelError;
    fn try_from(r: SeriesRepr) -> Result<Self, Self::Error> {
        if r.b.iter().any(|&[re, im]| re != 0.0 || im != 0.0) {
            return Err(ModelError::NotAnalytic);
        }
        Ok(AnalyticSeries::new(from_pairs(&r.a)))
    }
}

/// Horner evaluation of `Σ c_k z^k`.
fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

/// Horner evaluation of `Σ_{k≥1} k c_k z^{k-1}` where `c[j]` is the coefficient of `z^{j+offset}`.
fn horner_derivative(c: &[C64], offset: usize, z: C64) -> C64 {
    c.iter()
        .enumerate()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, (j, &cj)| {
            let k = (j + offset) as f64;
            if j + offset == 0 {
                acc
            } else {
                acc * z + cj * k
            }
        })
}

impl HarmonicSeries {
    pub fn new(mut a: Vec<C64>, b: Vec<C64>) -> Self {
        if a.is_empty() {
            a.push(C64::new(0.0, 0.0));
        }
        HarmonicSeries { a, b }
    }

    pub fn from_parts(h: &AnalyticSeries, g: &AnalyticSeries) -> Self {
        // g(0) folded into a_0: conj(g(0)) is a constant of f.
        let mut a = h.c.clone();
        if let Some(&g0) = g.c.first() {
            a[0] += g0.conj();
        }
        let b = g.c.iter().skip(1).copied().collect();
        HarmonicSeries::new(a, b)
    }

    /// `f(z) = z + conj(z)`, i.e. `2 Re z`.
    pub fn z_plus_zbar() -> Self {
        HarmonicSeries::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0)])
    }

    pub fn constant(c: C64) -> Self {
        HarmonicSeries::new(vec![c], Vec::new())
    }

    pub fn a(&self) -> &[C64] {
        &self.a
    }

    /// Coefficients `b_1..b_N`.
    pub fn b(&self) -> &[C64] {
        &self.b
    }

    pub fn degree(&self) -> usize {
        (self.a.len() - 1).max(self.b.len())
    }

    /// `h(z) = Σ a_k z^k`
    pub fn h(&self, z: C64) -> C64 {
        horner(&self.a, z)
    }

    /// `g(z) = Σ_{k≥1} b_k z^k`
    pub fn g(&self, z: C64) -> C64 {
        horner(&self.b, z) * z
    }

    fn h_prime(&self, z: C64) -> C64 {
        horner_derivative(&self.a, 0, z)
    }

    fn g_prime(&self, z: C64) -> C64 {
        horner_derivative(&self.b, 1, z)
    }

    fn eval_unchecked(&self, z: C64) -> C64 {
        self.h(z) + self.g(z).conj()
    }

    /// `f(z)` for `|z| <= 1`.
    pub fn eval(&self, z: C64) -> Result<C64, ModelError> {
        check_domain(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Exact value of the finite series at `e^{iθ}`.
    pub fn boundary_eval(&self, theta: f64) -> C64 {
        self.eval_unchecked(unit(theta))
    }

    /// `∂/∂r f(r e^{it})`.
    pub fn radial_derivative(&self, r: f64, t: f64) -> C64 {
        let e = unit(t);
        let z = e * r;
        self.h_prime(z) * e + (self.g_prime(z) * e).conj()
    }

    /// `∂/∂θ f(r e^{iθ})`.
    pub fn angular_derivative(&self, r: f64, theta: f64) -> C64 {
        let z = unit(theta) * r;
        let iz = C64::new(0.0, 1.0) * z;
        self.h_prime(z) * iz + (self.g_prime(z) * iz).conj()
    }

    /// `Φ(z) = h(z) + conj(g(conj z))`, analytic with `|Φ(x)| = |f(x)|` on the real axis.
    pub fn conjugate_flip(&self) -> AnalyticSeries {
        let n = self.degree();
        let c = (0..=n)
            .map(|k| {
                let ak = self.a.get(k).copied().unwrap_or_default();
                let bk = if k == 0 {
                    C64::default()
                } else {
                    self.b.get(k - 1).copied().unwrap_or_default()
                };
                ak + bk.conj()
            })
            .collect();
        AnalyticSeries::new(c)
    }

    /// `∫_0^{2π} |f(e^{iθ})|^2 dθ = 2π (Σ|a_k|^2 + Σ|b_k|^2)`.
    pub fn parseval_boundary_l2(&self) -> f64 {
        let s: f64 = self.a.iter().chain(self.b.iter()).map(|c| c.norm_sqr()).sum();
        TAU * s
    }

    /// `2π Re Σ_{k≥1} a_k b_k e^{2ikt}`.
    pub fn cross_term(&self, t: f64) -> f64 {
        let s: C64 = self
            .b
            .iter()
            .enumerate()
            .filter_map(|(j, &bk)| {
                let k = j + 1;
                self.a.get(k).map(|&ak| ak * bk * unit(2.0 * k as f64 * t))
            })
            .sum();
        TAU * s.re
    }

    /// `z ↦ f(ρz)`.
    pub fn dilate(&self, rho: f64) -> Self {
        let a = self.a.iter().enumerate().map(|(k, &c)| c * rho.powi(k as i32)).collect();
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(j, &c)| c * rho.powi(j as i32 + 1))
            .collect();
        HarmonicSeries::new(a, b)
    }

    /// `z ↦ f(z e^{it})`.
    pub fn rotate(&self, t: f64) -> Self {
        let a = self.a.iter().enumerate().map(|(k, &c)| c * unit(k as f64 * t)).collect();
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(j, &c)| c * unit((j + 1) as f64 * t))
            .collect();
        HarmonicSeries::new(a, b)
    }

    /// `c·f`; the co-analytic coefficients pick up `conj(c)`.
    pub fn scale(&self, c: C64) -> Self {
        HarmonicSeries::new(
            self.a.iter().map(|&x| x * c).collect(),
            self.b.iter().map(|&x| x * c.conj()).collect(),
        )
    }

    pub fn is_analytic_series(&self) -> bool {
        self.b.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn analytic_part(&self) -> AnalyticSeries {
        AnalyticSeries::new(self.a.clone())
    }

    pub fn coanalytic_part(&self) -> AnalyticSeries {
        let mut c = Vec::with_capacity(self.b.len() + 1);
        c.push(C64::default());
        c.extend_from_slice(&self.b);
        AnalyticSeries::new(c)
    }
}

impl DiskFunction for HarmonicSeries {
    fn value(&self, z: C64) -> C64 {
        self.eval_unchecked(z)
    }
    fn boundary_value(&self, theta: f64) -> C64 {
        self.boundary_eval(theta)
    }
    fn is_analytic(&self) -> bool {
        self.is_analytic_series()
    }
}

impl HarmonicPair for HarmonicSeries {
    fn analytic_part(&self, z: C64) -> C64 {
        self.h(z)
    }
    fn coanalytic_part(&self, z: C64) -> C64 {
        self.g(z)
    }
}

impl AnalyticSeries {
    pub fn new(mut c: Vec<C64>) -> Self {
        if c.is_empty() {
            c.push(C64::default());
        }
        AnalyticSeries { c }
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        AnalyticSeries::new(vec![C64::default(), C64::new(1.0, 0.0)])
    }

    pub fn constant(c: C64) -> Self {
        AnalyticSeries::new(vec![c])
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn eval(&self, z: C64) -> Result<C64, ModelError> {
        check_domain(z)?;
        Ok(horner(&self.c, z))
    }

    pub fn to_harmonic(&self) -> HarmonicSeries {
        HarmonicSeries::new(self.c.clone(), Vec::new())
    }
}

impl From<AnalyticSeries> for HarmonicSeries {
    fn from(f: AnalyticSeries) -> Self {
        HarmonicSeries::new(f.c, Vec::new())
    }
}

impl DiskFunction for AnalyticSeries {
    fn value(&self, z: C64) -> C64 {
        horner(&self.c, z)
    }
    fn boundary_value(&self, theta: f64) -> C64 {
        horner(&self.c, unit(theta))
    }
    fn is_analytic(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_z_plus_zbar() {
        let f = HarmonicSeries::z_plus_zbar();
        for x in [-1.0, -0.3, 0.0, 0.25, 1.0] {
            assert!(close(f.eval(c(x, 0.0)).unwrap(), c(2.0 * x, 0.0), 1e-15));
        }
        assert!(close(f.eval(c(0.0, 1.0)).unwrap(), c(0.0, 0.0), 1e-15));
    }

    #[test]
    fn eval_constant_everywhere() {
        let k = c(0.3, -1.2);
        let f = HarmonicSeries::constant(k);
        for z in [c(0.0, 0.0), c(0.5, 0.5), c(-1.0, 0.0)] {
            assert_eq!(f.eval(z).unwrap(), k);
        }
    }

    #[test]
    fn eval_rejects_outside_disk() {
        let f = HarmonicSeries::z_plus_zbar();
        assert!(matches!(
            f.eval(c(1.0 + 1e-9, 0.0)),
            Err(ModelError::DomainViolation { .. })
        ));
        assert!(f.eval(c(1.0 + 1e-13, 0.0)).is_ok());
    }

    #[test]
    fn boundary_values() {
        let f = HarmonicSeries::z_plus_zbar();
        assert!(close(f.boundary_eval(0.0), c(2.0, 0.0), 1e-15));
        assert!(close(f.boundary_eval(FRAC_PI_2), c(0.0, 0.0), 1e-15));
        let g = HarmonicSeries::new(vec![c(0.1, 0.2), c(-0.4, 0.3), c(0.0, 1.0)], vec![c(0.7, 0.0), c(0.2, -0.5)]);
        for th in [0.1, 1.3, 2.9, -0.7] {
            assert!(close(g.boundary_eval(th), g.boundary_eval(th + TAU), 1e-14));
            assert!(close(g.boundary_eval(th), g.eval(unit(th)).unwrap(), 1e-15));
        }
    }

    #[test]
    fn radial_derivative_examples() {
        let z = AnalyticSeries::identity().to_harmonic();
        let z2 = HarmonicSeries::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], vec![]);
        for (r, t) in [(0.2, 0.4), (0.9, 2.0), (0.0, -1.0)] {
            let d = z.radial_derivative(r, t);
            assert!(close(d, unit(t), 1e-15));
            assert!((d.norm() - 1.0).abs() < 1e-15);
            assert!(close(z2.radial_derivative(r, t), unit(2.0 * t) * (2.0 * r), 1e-15));
        }
        let f = HarmonicSeries::z_plus_zbar();
        assert!(close(f.radial_derivative(0.6, 0.0), c(2.0, 0.0), 1e-15));
    }

    #[test]
    fn angular_derivative_examples() {
        let z = AnalyticSeries::identity().to_harmonic();
        for th in [0.0, 0.7, 3.0] {
            let d = z.angular_derivative(1.0, th);
            assert!(close(d, c(0.0, 1.0) * unit(th), 1e-15));
        }
        let k = HarmonicSeries::constant(c(2.0, 1.0));
        assert_eq!(k.angular_derivative(0.5, 1.0), c(0.0, 0.0));
        let f = HarmonicSeries::z_plus_zbar();
        assert!(close(f.angular_derivative(1.0, 0.0), c(0.0, 0.0), 1e-15));
    }

    #[test]
    fn conjugate_flip_examples() {
        let phi = HarmonicSeries::z_plus_zbar().conjugate_flip();
        assert_eq!(phi.coefficients(), &[c(0.0, 0.0), c(2.0, 0.0)]);
        let f = HarmonicSeries::new(vec![c(0.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0)]);
        let phi = f.conjugate_flip();
        assert!(phi.coefficients().iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn parseval_examples() {
        assert!((HarmonicSeries::z_plus_zbar().parseval_boundary_l2() - 4.0 * PI).abs() < 1e-14);
        let k = c(0.5, -2.0);
        assert!((HarmonicSeries::constant(k).parseval_boundary_l2() - TAU * k.norm_sqr()).abs() < 1e-13);
    }

    #[test]
    fn cross_term_examples() {
        let f = HarmonicSeries::z_plus_zbar();
        assert!((f.cross_term(0.0) - TAU).abs() < 1e-14);
        assert!((f.cross_term(FRAC_PI_2) + TAU).abs() < 1e-14);
        let g = HarmonicSeries::new(vec![c(1.0, 0.0), c(0.3, 0.2), c(-1.0, 0.5)], vec![]);
        assert_eq!(g.cross_term(0.4), 0.0);
    }

    #[test]
    fn dilate_rotate_scale_agree_with_pointwise() {
        let f = HarmonicSeries::new(vec![c(0.1, 0.2), c(-0.4, 0.3), c(0.0, 1.0)], vec![c(0.7, 0.0), c(0.2, -0.5)]);
        let z = c(0.3, -0.4);
        assert!(close(f.dilate(0.5).eval(z).unwrap(), f.eval(z * 0.5).unwrap(), 1e-15));
        assert!(close(f.rotate(0.8).eval(z).unwrap(), f.eval(z * unit(0.8)).unwrap(), 1e-15));
        let k = c(-1.5, 0.25);
        assert!(close(f.scale(k).eval(z).unwrap(), f.eval(z).unwrap() * k, 1e-14));
    }

    #[test]
    fn from_parts_folds_g0() {
        let h = AnalyticSeries::new(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let g = AnalyticSeries::new(vec![c(0.0, 2.0), c(1.0, 0.0)]);
        let f = HarmonicSeries::from_parts(&h, &g);
        let z = c(0.2, 0.5);
        let expect = h.eval(z).unwrap() + g.eval(z).unwrap().conj();
        assert!(close(f.eval(z).unwrap(), expect, 1e-15));
    }

    #[test]
    fn json_wire_format() {
        let f = HarmonicSeries::z_plus_zbar();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"a":[[0.0,0.0],[1.0,0.0]],"b":[[1.0,0.0]]}"#);
        let back: HarmonicSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<AnalyticSeries>(&s).is_err());
        assert!(serde_json::from_str::<HarmonicSeries>(r#"{"a":[],"b":[],"x":1}"#).is_err());
    }
}
