//! Plain `key = value` energy files.
//!
//! ```text
//! # exponentiated isochoric part with a weak volumetric term
//! name = coupled
//! h = mu*exp(k*log(t)^2)
//! f = c*(z - 1/z)^2
//! params = mu=1, k=0.1, c=1e-3
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Parameters become
//! named constants of both expressions.

use std::collections::BTreeMap;

use super::SplitEnergy;
use crate::error::{Error, Result};

fn line_error(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("energy file line {line}: {msg}"))
}

fn parse_params(line: usize, text: &str, into: &mut BTreeMap<String, f64>) -> Result<()> {
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| line_error(line, format!("expected name=value, got `{item}`")))?;
        let k = k.trim();
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(line_error(line, format!("invalid parameter name `{k}`")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| line_error(line, format!("invalid number for `{k}`")))?;
        if !v.is_finite() {
            return Err(line_error(line, format!("non-finite value for `{k}`")));
        }
        if into.insert(k.to_string(), v).is_some() {
            return Err(line_error(line, format!("duplicate parameter `{k}`")));
        }
    }
    Ok(())
}

/// Parse an energy file. `overrides` replace or add parameters.
pub fn parse_energy_file(text: &str, overrides: &BTreeMap<String, f64>) -> Result<SplitEnergy> {
    let mut name = None;
    let mut h = None;
    let mut f = None;
    let mut params = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| line_error(line, "expected key = value"))?;
        let value = value.trim();
        let slot = match key.trim() {
            "name" => &mut name,
            "h" => &mut h,
            "f" => &mut f,
            "params" => {
                parse_params(line, value, &mut params)?;
                continue;
            }
            other => return Err(line_error(line, format!("unknown key `{other}`"))),
        };
        if slot.replace(value.to_string()).is_some() {
            return Err(line_error(line, format!("duplicate key `{}`", key.trim())));
        }
    }
    let h = h.ok_or_else(|| Error::InvalidArgument("energy file has no `h`".into()))?;
    let f = f.ok_or_else(|| Error::InvalidArgument("energy file has no `f`".into()))?;
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
    SplitEnergy::with_params(name.as_deref().unwrap_or("custom"), &h, &f, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_params_and_comments() {
        let text = "# c\nname = coupled\nh = mu*exp(k*log(t)^2)\n\nf = c*(z - 1/z)^2\nparams = mu=2, k=0.1, c=1e-3\n";
        let e = parse_energy_file(text, &BTreeMap::new()).unwrap();
        assert_eq!(e.name, "coupled");
        assert_eq!(e.params["mu"], 2.0);
        let v = e.h.eval(std::f64::consts::E).unwrap();
        assert!((v - 2.0 * 0.1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn overrides_replace_file_params() {
        let text = "h = mu*(1/2)*(t + 1/t)\nf = 0\nparams = mu=2";
        let o = BTreeMap::from([("mu".to_string(), 5.0)]);
        let e = parse_energy_file(text, &o).unwrap();
        assert_eq!(e.h.eval(1.0).unwrap(), 5.0);
        assert_eq!(e.name, "custom");
    }

    #[test]
    fn parameter_names_do_not_clash_by_substring() {
        let text = "h = (mu/k)*exp((k/2)*log(t)^2)\nf = (kappa/(2*khat))*exp(khat*log(z)^2)\nparams = mu=1, k=2, kappa=3, khat=4";
        let e = parse_energy_file(text, &BTreeMap::new()).unwrap();
        assert!((e.f.eval(1.0).unwrap() - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let none = BTreeMap::new();
        assert!(parse_energy_file("h = t\n", &none).is_err());
        assert!(parse_energy_file("f = z\n", &none).is_err());
        assert!(parse_energy_file("h = 0\nf = 0\ncolour = red", &none).is_err());
        assert!(parse_energy_file("h = 0\nh = 1\nf = 0", &none).is_err());
        assert!(parse_energy_file("h = 0\nf = 0\nparams = a=1, a=2", &none).is_err());
        assert!(parse_energy_file("h = 0\nf = 0\nparams = a", &none).is_err());
        assert!(parse_energy_file("h = t\nf = 0", &none).is_err());
        assert!(parse_energy_file("h = (1/2)*(t + 1/t)\nf = zz", &none).is_err());
        let msg = parse_energy_file("h = 0\nf = 0\nnonsense", &none)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }
}
