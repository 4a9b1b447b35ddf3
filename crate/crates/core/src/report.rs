//! CSV and JSON emission.

use std::fmt::Write as _;

use crate::checkers::InequalityReport;
use crate::extremal::SweepPoint;

pub const REPORT_CSV_HEADER: &str = "name,p,t,lhs,rhs,constant,margin,err_budget,verdict";
pub const SWEEP_CSV_HEADER: &str = "r,ratio,limit,gap";

/// Full double precision, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn reports_to_csv(reports: &[InequalityReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.name),
            fmt_f64(r.p),
            fmt_f64(r.t),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.constant_used),
            fmt_f64(r.margin),
            fmt_f64(r.err_budget),
            r.verdict
        );
    }
    out
}

pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for s in points {
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(s.r), fmt_f64(s.ratio), fmt_f64(s.limit), fmt_f64(s.gap));
    }
    out
}

/// Serde adapter writing non-finite floats as `null` and reading `null` back as NaN.
pub mod nullable_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}
