//! JSON report documents and number formatting shared by the emitters.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::criteria::{ConditionReport, Overall, RankOneVerdict, Route};
use crate::energy::SplitEnergy;

pub const SCHEMA_VERSION: u32 = 1;

/// Finite numbers as JSON numbers; `inf`, `-inf` and `nan` as strings.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&fmt_sig(*x, 1))
    }
}

/// `x` with `digits` significant digits, positional for moderate exponents
/// and scientific otherwise, trailing zeros removed (like C's `%g`).
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySummary {
    pub name: String,
    pub h: String,
    pub f: String,
    pub params: BTreeMap<String, f64>,
}

impl From<&SplitEnergy> for EnergySummary {
    fn from(e: &SplitEnergy) -> Self {
        Self {
            name: e.name.clone(),
            h: e.h.source().to_string(),
            f: e.f.source().to_string(),
            params: e.params.clone(),
        }
    }
}

/// The versioned report document for a rank-one convexity verdict.
/// `extra` carries route-specific data such as the infima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<X: Serialize> {
    pub schema_version: u32,
    pub energy: EnergySummary,
    pub route: Route,
    pub conditions: Vec<ConditionReport>,
    pub overall: Overall,
    #[serde(flatten)]
    pub extra: X,
}

impl<X: Serialize> Report<X> {
    pub fn new(e: &SplitEnergy, v: &RankOneVerdict, extra: X) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            energy: e.into(),
            route: v.route,
            conditions: v.reports.clone(),
            overall: v.overall,
            extra,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
