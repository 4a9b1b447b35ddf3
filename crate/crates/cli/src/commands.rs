use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{json, Value};

use fejer_core::checkers::{
    check_frazer, check_kalaj, check_lemma1, check_riesz_fejer_analytic, check_riesz_zygmund, check_theorem1,
    check_theorem3, check_theorem4, check_theorem4_rectangle, run_corpus_with_reports, CheckerId, CorpusGrid,
    InequalityReport, Verdict,
};
use fejer_core::extremal::{conjecture_explore, sharpness_sweep, theorem4_sharpness};
use fejer_core::report::{fmt_f64, reports_to_csv, sweep_to_csv};
use fejer_core::special::SharpConstantTable;
use fejer_core::{DiskFunction, QuadratureConfig};

use crate::registry::{parse_corpus, resolve_named, Named};
use crate::{
    CliError, ConstantsArgs, ExploreArgs, Format, RectmapArgs, SharpnessArgs, VerifyArgs, EXIT_NONCONVERGED, EXIT_OK,
    EXIT_VIOLATION,
};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub toolkit_version: String,
    pub started: String,
    pub finished: String,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true)
}

impl RunManifest {
    fn new(args: &impl Serialize, cfg: &QuadratureConfig, started: String) -> Self {
        let argv: Vec<String> = std::env::args().skip(1).collect();
        RunManifest {
            command: format!("fejer {}", argv.join(" ")),
            config: json!({ "args": args, "quadrature": cfg }),
            toolkit_version: env!("CARGO_PKG_VERSION").to_owned(),
            started,
            finished: now(),
        }
    }
}

fn quadrature_config() -> Result<QuadratureConfig, CliError> {
    Ok(QuadratureConfig::from_env()?)
}

fn write_json(out: Option<&Path>, doc: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("values serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// CSV to a file with a manifest sidecar, or to stdout.
fn write_csv(out: Option<&Path>, csv: &str, manifest: &RunManifest) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, csv)?;
            write_json(Some(&sidecar(path)), &json!({ "manifest": manifest }))
        }
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
            Ok(())
        }
    }
}

/// A VIOLATION anywhere gives 2; otherwise any unconverged report gives 3.
pub fn exit_code(reports: &[InequalityReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Violation) {
        EXIT_VIOLATION
    } else if reports.iter().any(|r| r.verdict == Verdict::Nonconverged) {
        EXIT_NONCONVERGED
    } else {
        EXIT_OK
    }
}

fn verify_named(
    checker: CheckerId,
    f: &Named,
    grid: &CorpusGrid,
    cfg: &QuadratureConfig,
) -> Result<Vec<InequalityReport>, CliError> {
    let disk: &dyn DiskFunction = match f {
        Named::Series(s) => s,
        Named::Extremal(e) => e,
        Named::Rectangle(m) => m,
    };
    let series = || match f {
        Named::Series(s) => Ok(s),
        _ => Err(CliError::Usage(format!("`{checker}` needs a function given by a finite coefficient series"))),
    };
    let mut out = Vec::new();
    match checker {
        CheckerId::Theorem1 | CheckerId::RieszFejerAnalytic | CheckerId::Lemma1 => {
            for &p in &grid.ps {
                for &t in &grid.ts {
                    out.push(match checker {
                        CheckerId::Theorem1 => check_theorem1(disk, p, t, cfg)?,
                        CheckerId::RieszFejerAnalytic => check_riesz_fejer_analytic(disk, p, t, cfg)?,
                        _ => check_lemma1(disk, disk, p, t, cfg)?,
                    });
                }
            }
        }
        CheckerId::Frazer => {
            for &p in &grid.ps {
                for &t in &grid.ts {
                    for &n in &grid.ns {
                        out.push(check_frazer(disk, p, n, t, cfg)?);
                    }
                }
            }
        }
        CheckerId::Kalaj => {
            for &p in &grid.ps {
                out.push(match f {
                    Named::Series(s) => check_kalaj(s, p, cfg)?,
                    Named::Rectangle(m) => check_kalaj(m, p, cfg)?,
                    Named::Extremal(_) => series().map(|_| unreachable!())?,
                });
            }
        }
        CheckerId::Theorem4 => match f {
            Named::Rectangle(m) => out.extend(check_theorem4_rectangle(m.eps, cfg)?),
            _ => {
                let s = series()?;
                for &t in &grid.ts {
                    out.extend(check_theorem4(s, t, cfg)?);
                }
            }
        },
        CheckerId::Theorem3 | CheckerId::RieszZygmund => {
            let s = series()?;
            for &t in &grid.ts {
                out.push(if checker == CheckerId::Theorem3 {
                    check_theorem3(s, t, cfg)?
                } else {
                    check_riesz_zygmund(s, t, cfg)?
                });
            }
        }
    }
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let started = now();
    let cfg = quadrature_config()?;
    let checker: CheckerId = a.theorem.parse().map_err(CliError::Usage)?;
    if checker.uses_p() && a.p.is_empty() {
        return Err(CliError::Usage(format!("--p is required for `{checker}`")));
    }
    let defaults = CorpusGrid::default();
    let grid = CorpusGrid {
        ps: a.p.clone(),
        ts: if a.t.is_empty() { defaults.ts } else { a.t.clone() },
        ns: if a.n.is_empty() { defaults.ns } else { a.n.clone() },
    };
    let (reports, summary) = match (&a.corpus, &a.named) {
        (Some(spec), None) => {
            let spec = parse_corpus(spec)?;
            let (summary, reports) = run_corpus_with_reports(checker, &spec, &grid, &cfg)?;
            (reports, Some(summary))
        }
        (None, Some(name)) => (verify_named(checker, &resolve_named(name, &cfg)?, &grid, &cfg)?, None),
        _ => return Err(CliError::Usage("exactly one of --corpus or --named is required".into())),
    };
    let code = exit_code(&reports);
    let manifest = RunManifest::new(a, &cfg, started);
    if let Some(path) = &a.csv {
        write_csv(Some(path), &reports_to_csv(&reports), &manifest)?;
    }
    let doc = json!({ "manifest": manifest, "reports": reports, "summary": summary });
    write_json(a.out.as_deref(), &doc)?;
    Ok(code)
}

pub fn sharpness(a: &SharpnessArgs) -> Result<u8, CliError> {
    let started = now();
    let cfg = quadrature_config()?;
    let points = sharpness_sweep(a.p, &a.r, &cfg)?;
    if let Some(last) = points.last() {
        if last.gap >= 0.02 * last.limit {
            eprintln!(
                "fejer: note: at r = {} the ratio {} is still {:.2}% below the limit {}",
                last.r,
                last.ratio,
                100.0 * last.gap / last.limit,
                last.limit
            );
        }
    }
    let manifest = RunManifest::new(a, &cfg, started);
    write_csv(a.out.as_deref(), &sweep_to_csv(&points), &manifest)?;
    Ok(EXIT_OK)
}

pub fn constants(a: &ConstantsArgs) -> Result<u8, CliError> {
    let started = now();
    let cfg = quadrature_config()?;
    let tables = a
        .p
        .iter()
        .map(|&p| SharpConstantTable::new(p, &a.n))
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest::new(a, &cfg, started);
    match a.format {
        Format::Json => write_json(a.out.as_deref(), &json!({ "manifest": manifest, "constants": tables }))?,
        Format::Csv => {
            let mut csv = String::from("p,a_p,kalaj,conjectured_sharp");
            for n in &a.n {
                let _ = write!(csv, ",frazer_n{n}");
            }
            csv.push('\n');
            for t in &tables {
                let _ = write!(
                    csv,
                    "{},{},{},{}",
                    fmt_f64(t.p),
                    fmt_f64(t.a_p),
                    fmt_f64(t.kalaj),
                    fmt_f64(t.conjectured_sharp)
                );
                for n in &a.n {
                    csv.push(',');
                    if let Some(b) = t.frazer_n_to_bp.get(n) {
                        csv.push_str(&fmt_f64(*b));
                    }
                }
                csv.push('\n');
            }
            write_csv(a.out.as_deref(), &csv, &manifest)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn rectmap(a: &RectmapArgs) -> Result<u8, CliError> {
    let started = now();
    let cfg = quadrature_config()?;
    let s = theorem4_sharpness(a.eps, &cfg)?;
    let manifest = RunManifest::new(a, &cfg, started);
    let doc = json!({
        "manifest": manifest,
        "map": s.map,
        "diameter": s.diameter.value,
        "middle": s.middle.value,
        "boundary": s.boundary.value,
        "hg_norm": s.hg_norm.value,
        "perimeter": s.perimeter.value,
        "lower_ratio": s.lower_ratio(),
        "upper_ratio": s.upper_ratio(),
        "estimates": s,
    });
    write_json(a.out.as_deref(), &doc)?;
    Ok(EXIT_OK)
}

pub fn explore(a: &ExploreArgs) -> Result<u8, CliError> {
    let started = now();
    let cfg = quadrature_config()?;
    let result = conjecture_explore(a.p, a.budget, a.seed, &cfg)?;
    let manifest = RunManifest::new(a, &cfg, started);
    write_json(a.out.as_deref(), &json!({ "manifest": manifest, "result": result }))?;
    Ok(EXIT_OK)
}
