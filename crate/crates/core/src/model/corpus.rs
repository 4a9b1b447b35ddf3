use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{AnalyticSeries, BlaschkeProduct, DiskFunction, FiniteBlaschke, HarmonicSeries, ModelError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    Harmonic,
    Analytic,
    AnalyticPair,
    BlaschkeTimesAnalytic,
}

impl std::str::FromStr for CorpusKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "harmonic" => Ok(CorpusKind::Harmonic),
            "analytic" => Ok(CorpusKind::Analytic),
            "analytic-pair" => Ok(CorpusKind::AnalyticPair),
            "blaschke-times-analytic" => Ok(CorpusKind::BlaschkeTimesAnalytic),
            other => Err(ModelError::InvalidCorpus(format!("unknown kind `{other}`"))),
        }
    }
}

/// Seeded description of a random function corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub degree: usize,
    pub decay: f64,
    pub seed: u64,
    pub kind: CorpusKind,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 100,
            degree: 12,
            decay: 1.5,
            seed: 0,
            kind: CorpusKind::Harmonic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CorpusItem {
    Harmonic(HarmonicSeries),
    Analytic(AnalyticSeries),
    Pair {
        phi: AnalyticSeries,
        psi: AnalyticSeries,
    },
    BlaschkePair {
        phi: BlaschkeProduct<AnalyticSeries>,
        psi: BlaschkeProduct<AnalyticSeries>,
    },
}

impl CorpusItem {
    /// Every function carried by the item.
    pub fn members(&self) -> Vec<&dyn DiskFunction> {
        match self {
            CorpusItem::Harmonic(f) => vec![f],
            CorpusItem::Analytic(f) => vec![f],
            CorpusItem::Pair { phi, psi } => vec![phi, psi],
            CorpusItem::BlaschkePair { phi, psi } => vec![phi, psi],
        }
    }

    /// The item as a single finite series, when it is one.
    pub fn series(&self) -> Option<HarmonicSeries> {
        match self {
            CorpusItem::Harmonic(f) => Some(f.clone()),
            CorpusItem::Analytic(f) => Some(f.to_harmonic()),
            _ => None,
        }
    }

    /// The item as an analytic pair `(φ, ψ)`, when it is one.
    pub fn pair(&self) -> Option<(&dyn DiskFunction, &dyn DiskFunction)> {
        match self {
            CorpusItem::Pair { phi, psi } => Some((phi, psi)),
            CorpusItem::BlaschkePair { phi, psi } => Some((phi, psi)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("corpus items serialize")
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn coefficients(rng: &mut ChaCha8Rng, from: usize, to: usize, decay: f64) -> Vec<C64> {
    (from..=to)
        .map(|k| gaussian(rng) * ((k + 1) as f64).powf(-decay))
        .collect()
}

fn analytic(rng: &mut ChaCha8Rng, max_degree: usize, decay: f64) -> AnalyticSeries {
    let n = rng.random_range(1..=max_degree);
    AnalyticSeries::new(coefficients(rng, 0, n, decay))
}

fn blaschke(rng: &mut ChaCha8Rng) -> FiniteBlaschke {
    let count = rng.random_range(1..=3);
    let zeros = (0..count)
        .map(|_| {
            let r = 0.95 * rng.random::<f64>().sqrt();
            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let rotation = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    FiniteBlaschke::new(zeros, rotation).expect("zeros drawn inside the disk")
}

/// Deterministic corpus: identical spec, identical coefficients.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusItem>, ModelError> {
    if spec.count == 0 {
        return Err(ModelError::InvalidCorpus("count must be at least 1".into()));
    }
    if spec.degree == 0 {
        return Err(ModelError::InvalidCorpus("degree must be at least 1".into()));
    }
    if !(spec.decay >= 0.0) || !spec.decay.is_finite() {
        return Err(ModelError::InvalidCorpus(format!("decay must be >= 0, got {}", spec.decay)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let items = (0..spec.count)
        .map(|_| match spec.kind {
            CorpusKind::Harmonic => {
                let n = rng.random_range(1..=spec.degree);
                let a = coefficients(&mut rng, 0, n, spec.decay);
                let b = coefficients(&mut rng, 1, n, spec.decay);
                CorpusItem::Harmonic(HarmonicSeries::new(a, b))
            }
            CorpusKind::Analytic => CorpusItem::Analytic(analytic(&mut rng, spec.degree, spec.decay)),
            CorpusKind::AnalyticPair => CorpusItem::Pair {
                phi: analytic(&mut rng, spec.degree, spec.decay),
                psi: analytic(&mut rng, spec.degree, spec.decay),
            },
            CorpusKind::BlaschkeTimesAnalytic => {
                let a = analytic(&mut rng, spec.degree, spec.decay);
                let b1 = blaschke(&mut rng);
                let b = analytic(&mut rng, spec.degree, spec.decay);
                let b2 = blaschke(&mut rng);
                CorpusItem::BlaschkePair {
                    phi: BlaschkeProduct::multiply(a, b1),
                    psi: BlaschkeProduct::multiply(b, b2),
                }
            }
        })
        .collect();
    Ok(items)
}
