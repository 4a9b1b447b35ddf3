use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_frazer, check_kalaj, check_lemma1, check_riesz_fejer_analytic, check_riesz_zygmund, check_theorem1,
    check_theorem3, check_theorem4, CheckError, CheckerId, InequalityReport, Verdict,
};
use crate::model::{generate_corpus, CorpusItem, CorpusKind, CorpusSpec};
use crate::quadrature::QuadratureConfig;
use crate::report::nullable_f64;

/// Parameter grid applied to every corpus item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusGrid {
    pub ps: Vec<f64>,
    pub ts: Vec<f64>,
    /// Diameter counts, used by the Frazer checker only.
    pub ns: Vec<u32>,
}

impl Default for CorpusGrid {
    fn default() -> Self {
        CorpusGrid {
            ps: vec![1.5],
            ts: vec![0.0, PI / 6.0, PI / 4.0, PI / 2.0],
            ns: vec![1, 2, 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub checker: CheckerId,
    pub spec: CorpusSpec,
    pub grid: CorpusGrid,
    /// Number of reports produced.
    pub total: usize,
    pub violations: usize,
    pub nonconverged: usize,
    #[serde(with = "nullable_f64")]
    pub min_margin: f64,
    /// The function whose report has the smallest margin.
    pub worst_case: serde_json::Value,
    pub worst_report: Option<InequalityReport>,
}

fn compatible(checker: CheckerId, kind: CorpusKind) -> bool {
    use CorpusKind::*;
    match checker {
        CheckerId::Theorem1 | CheckerId::Frazer => true,
        CheckerId::Theorem3 | CheckerId::Theorem4 | CheckerId::Kalaj | CheckerId::RieszZygmund => {
            matches!(kind, Harmonic | Analytic)
        }
        CheckerId::RieszFejerAnalytic => kind != Harmonic,
        CheckerId::Lemma1 => matches!(kind, AnalyticPair | BlaschkeTimesAnalytic),
    }
}

fn check_item(
    checker: CheckerId,
    item: &CorpusItem,
    grid: &CorpusGrid,
    cfg: &QuadratureConfig,
) -> Result<Vec<InequalityReport>, CheckError> {
    let mut out = Vec::new();
    let ts: &[f64] = if checker.uses_t() { &grid.ts } else { &[0.0] };
    match checker {
        CheckerId::Theorem1 | CheckerId::RieszFejerAnalytic | CheckerId::Frazer => {
            for f in item.members() {
                for &p in &grid.ps {
                    for &t in ts {
                        match checker {
                            CheckerId::Theorem1 => out.push(check_theorem1(f, p, t, cfg)?),
                            CheckerId::RieszFejerAnalytic => out.push(check_riesz_fejer_analytic(f, p, t, cfg)?),
                            _ => {
                                for &n in &grid.ns {
                                    out.push(check_frazer(f, p, n, t, cfg)?);
                                }
                            }
                        }
                    }
                }
            }
        }
        CheckerId::Lemma1 => {
            let (phi, psi) = item.pair().expect("compatibility checked");
            for &p in &grid.ps {
                for &t in ts {
                    out.push(check_lemma1(phi, psi, p, t, cfg)?);
                }
            }
        }
        CheckerId::Kalaj => {
            let f = item.series().expect("compatibility checked");
            for &p in &grid.ps {
                out.push(check_kalaj(&f, p, cfg)?);
            }
        }
        CheckerId::Theorem3 | CheckerId::Theorem4 | CheckerId::RieszZygmund => {
            let f = item.series().expect("compatibility checked");
            for &t in ts {
                match checker {
                    CheckerId::Theorem3 => out.push(check_theorem3(&f, t, cfg)?),
                    CheckerId::Theorem4 => out.extend(check_theorem4(&f, t, cfg)?),
                    _ => out.push(check_riesz_zygmund(&f, t, cfg)?),
                }
            }
        }
    }
    Ok(out)
}

/// Run one checker over a seeded corpus and the given grid.
///
/// Items are checked in parallel; the summary is reduced in item order so
/// repeated runs give identical results.
pub fn run_corpus(
    checker: CheckerId,
    spec: &CorpusSpec,
    grid: &CorpusGrid,
    cfg: &QuadratureConfig,
) -> Result<CorpusSummary, CheckError> {
    run_corpus_with_reports(checker, spec, grid, cfg).map(|(summary, _)| summary)
}

/// As [`run_corpus`], also returning every report in item order.
pub fn run_corpus_with_reports(
    checker: CheckerId,
    spec: &CorpusSpec,
    grid: &CorpusGrid,
    cfg: &QuadratureConfig,
) -> Result<(CorpusSummary, Vec<InequalityReport>), CheckError> {
    if checker.uses_p() && grid.ps.is_empty() {
        return Err(CheckError::EmptyGrid("p"));
    }
    if checker.uses_t() && grid.ts.is_empty() {
        return Err(CheckError::EmptyGrid("t"));
    }
    if checker == CheckerId::Frazer && grid.ns.is_empty() {
        return Err(CheckError::EmptyGrid("n"));
    }
    if !compatible(checker, spec.kind) {
        let kind = serde_json::to_value(spec.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        return Err(CheckError::IncompatibleCorpus { checker, kind });
    }
    let items = generate_corpus(spec)?;
    let per_item: Vec<Vec<InequalityReport>> = items
        .par_iter()
        .map(|item| check_item(checker, item, grid, cfg))
        .collect::<Result<_, _>>()?;

    let mut summary = CorpusSummary {
        checker,
        spec: spec.clone(),
        grid: grid.clone(),
        total: 0,
        violations: 0,
        nonconverged: 0,
        min_margin: f64::INFINITY,
        worst_case: serde_json::Value::Null,
        worst_report: None,
    };
    let mut all = Vec::new();
    for (item, reports) in items.iter().zip(per_item) {
        for r in reports {
            all.push(r.clone());
            summary.total += 1;
            match r.verdict {
                Verdict::Violation => summary.violations += 1,
                Verdict::Nonconverged => summary.nonconverged += 1,
                _ => {}
            }
            if r.margin < summary.min_margin {
                summary.min_margin = r.margin;
                summary.worst_case = item.to_json();
                summary.worst_report = Some(r);
            }
        }
    }
    Ok((summary, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: CorpusKind) -> CorpusSpec {
        CorpusSpec {
            count: 12,
            degree: 6,
            kind,
            seed: 4,
            ..CorpusSpec::default()
        }
    }

    #[test]
    fn empty_p_list_is_an_error() {
        let grid = CorpusGrid {
            ps: vec![],
            ..CorpusGrid::default()
        };
        let r = run_corpus(CheckerId::Theorem1, &small(CorpusKind::Harmonic), &grid, &QuadratureConfig::default());
        assert_eq!(r, Err(CheckError::EmptyGrid("p")));
        // t3 has no exponent, so the same grid is fine.
        assert!(run_corpus(CheckerId::Theorem3, &small(CorpusKind::Harmonic), &grid, &QuadratureConfig::default()).is_ok());
    }

    #[test]
    fn deterministic_summaries() {
        let cfg = QuadratureConfig::default();
        let grid = CorpusGrid::default();
        let a = run_corpus(CheckerId::Theorem1, &small(CorpusKind::Harmonic), &grid, &cfg).unwrap();
        let b = run_corpus(CheckerId::Theorem1, &small(CorpusKind::Harmonic), &grid, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total, 12 * 4);
        assert_eq!(a.violations, 0);
    }

    #[test]
    fn incompatible_kinds_are_rejected() {
        let cfg = QuadratureConfig::default();
        let grid = CorpusGrid::default();
        let r = run_corpus(CheckerId::Lemma1, &small(CorpusKind::Harmonic), &grid, &cfg);
        assert!(matches!(r, Err(CheckError::IncompatibleCorpus { .. })));
        let ok = run_corpus(CheckerId::Lemma1, &small(CorpusKind::BlaschkeTimesAnalytic), &grid, &cfg).unwrap();
        assert_eq!(ok.violations, 0);
    }
}
