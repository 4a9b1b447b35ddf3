//! Named example functions and `random:` corpus specs.

use std::collections::BTreeMap;

use fejer_core::extremal::{rectmap_solve, ExtremalP, RectangleMap};
use fejer_core::model::{CorpusKind, CorpusSpec};
use fejer_core::{AnalyticSeries, HarmonicSeries, QuadratureConfig, C64};

use crate::CliError;

pub enum Named {
    Series(HarmonicSeries),
    Extremal(ExtremalP),
    Rectangle(RectangleMap),
}

fn parse_params(rest: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{kv}`")))?;
        out.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(params: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    params
        .remove(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Usage(format!("bad value `{v}` for `{key}`")))
        })
        .transpose()
}

fn no_leftovers(params: &BTreeMap<String, String>, what: &str) -> Result<(), CliError> {
    match params.keys().next() {
        Some(k) => Err(CliError::Usage(format!("unknown parameter `{k}` for {what}"))),
        None => Ok(()),
    }
}

/// `z`, `z-plus-zbar`, `constant[:c=..]`, `extremal:p=..,r=..`, `rectangle:eps=..`.
pub fn resolve_named(name: &str, cfg: &QuadratureConfig) -> Result<Named, CliError> {
    let (head, rest) = name.split_once(':').unwrap_or((name, ""));
    let mut params = parse_params(rest)?;
    let named = match head {
        "z" => Named::Series(AnalyticSeries::identity().to_harmonic()),
        "z-plus-zbar" | "z+zbar" => Named::Series(HarmonicSeries::z_plus_zbar()),
        "constant" => {
            let c = take::<f64>(&mut params, "c")?.unwrap_or(1.0);
            Named::Series(HarmonicSeries::constant(C64::new(c, 0.0)))
        }
        "extremal" => {
            let p = take::<f64>(&mut params, "p")?.ok_or_else(|| CliError::Usage("extremal needs p=".into()))?;
            let r = take::<f64>(&mut params, "r")?.ok_or_else(|| CliError::Usage("extremal needs r=".into()))?;
            Named::Extremal(ExtremalP::new(r, p).map_err(|e| CliError::Usage(e.to_string()))?)
        }
        "rectangle" => {
            let eps = take::<f64>(&mut params, "eps")?.ok_or_else(|| CliError::Usage("rectangle needs eps=".into()))?;
            Named::Rectangle(rectmap_solve(eps, cfg)?)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown function `{other}` (expected z, z-plus-zbar, constant, extremal:p=..,r=.., rectangle:eps=..)"
            )))
        }
    };
    no_leftovers(&params, head)?;
    Ok(named)
}

/// `random:count=..,seed=..,degree=..,decay=..,kind=..`; omitted keys take defaults.
pub fn parse_corpus(spec: &str) -> Result<CorpusSpec, CliError> {
    let rest = spec
        .strip_prefix("random")
        .ok_or_else(|| CliError::Usage(format!("corpus spec must start with `random`, got `{spec}`")))?;
    let rest = rest.strip_prefix(':').unwrap_or(rest);
    let mut params = parse_params(rest)?;
    let mut out = CorpusSpec::default();
    if let Some(v) = take(&mut params, "count")? {
        out.count = v;
    }
    if let Some(v) = take(&mut params, "seed")? {
        out.seed = v;
    }
    if let Some(v) = take(&mut params, "degree")? {
        out.degree = v;
    }
    if let Some(v) = take(&mut params, "decay")? {
        out.decay = v;
    }
    if let Some(v) = params.remove("kind") {
        out.kind = v.parse::<CorpusKind>().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    no_leftovers(&params, "random corpus")?;
    Ok(out)
}
