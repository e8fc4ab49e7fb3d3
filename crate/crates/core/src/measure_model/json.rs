//! JSON measure descriptions.
//!
//! ```json
//! {"atoms":[{"x":0.0,"w":0.5}],
//!  "density":{"kind":"table","x":[-1,0,1],"y":[0,1,0]},
//!  "support":[[-1,1]],
//!  "mass":1.0}
//! ```
//! `kind` may also be a catalog id with optional `"params":{"name":value}`;
//! the density of that catalog measure is used. Infinite support ends are
//! written as `"inf"`, `"-inf"` or `null`.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use super::{Atom, Density, Interval, SpectralMeasure};
use crate::catalog;
use crate::error::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn number(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(format!("{what}: not a number"))),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            _ => s.parse().map_err(|_| bad(format!("{what}: cannot parse `{s}`"))),
        },
        _ => Err(bad(format!("{what}: expected a number"))),
    }
}

fn end(v: &Value, lower: bool) -> Result<f64> {
    if v.is_null() {
        return Ok(if lower { f64::NEG_INFINITY } else { f64::INFINITY });
    }
    number(v, "support endpoint")
}

fn table_density(x: Vec<f64>, y: Vec<f64>) -> Result<Density> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(bad("table density needs matching x and y arrays with at least two entries"));
    }
    if x.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(bad("table x values must be strictly increasing"));
    }
    Ok(Density::new(move |t| {
        if t < x[0] || t > x[x.len() - 1] {
            return 0.0;
        }
        let i = x.partition_point(|&v| v <= t).clamp(1, x.len() - 1);
        let (x0, x1, y0, y1) = (x[i - 1], x[i], y[i - 1], y[i]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }))
}

pub fn measure_from_json_str(text: &str) -> Result<SpectralMeasure> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| bad("measure description must be a JSON object"))?;

    let mut atoms = Vec::new();
    if let Some(list) = obj.get("atoms") {
        for a in list.as_array().ok_or_else(|| bad("`atoms` must be an array"))? {
            let x = number(a.get("x").ok_or_else(|| bad("atom without `x`"))?, "atom x")?;
            let w = number(a.get("w").ok_or_else(|| bad("atom without `w`"))?, "atom w")?;
            atoms.push(Atom::new(x, w));
        }
    }

    let mut support = Vec::new();
    if let Some(list) = obj.get("support") {
        for s in list.as_array().ok_or_else(|| bad("`support` must be an array"))? {
            let pair = s.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("support entries are [lo, hi]"))?;
            support.push(Interval::new(end(&pair[0], true)?, end(&pair[1], false)?));
        }
    }

    let density = match obj.get("density") {
        None | Some(Value::Null) => None,
        Some(d) => {
            let kind = d.get("kind").and_then(Value::as_str).ok_or_else(|| bad("density needs a `kind`"))?;
            if kind == "table" {
                let arr = |key: &str| -> Result<Vec<f64>> {
                    d.get(key)
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad(format!("table density needs `{key}`")))?
                        .iter()
                        .map(|v| number(v, key))
                        .collect()
                };
                Some(table_density(arr("x")?, arr("y")?)?)
            } else {
                let mut params = BTreeMap::new();
                if let Some(p) = d.get("params") {
                    for (k, v) in p.as_object().ok_or_else(|| bad("`params` must be an object"))? {
                        params.insert(k.clone(), number(v, k)?);
                    }
                }
                let e = catalog::entry(kind, &params)?;
                let m = e.measure.clone();
                if support.is_empty() {
                    support = m.support().to_vec();
                }
                m.density().is_some().then(|| Density::new(move |x| m.density_at(x)))
            }
        }
    };

    let mass = match obj.get("mass") {
        None | Some(Value::Null) => None,
        Some(v) => Some(number(v, "mass")?),
    };
    SpectralMeasure::new(atoms, density, support, mass)
}

pub fn measure_from_json(path: &Path) -> Result<SpectralMeasure> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    measure_from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_atoms_and_table() {
        let m = measure_from_json_str(
            r#"{"atoms":[{"x":2.0,"w":0.5}],
                "density":{"kind":"table","x":[-1,0,1],"y":[0,0.5,0]},
                "support":[[-1,1]],"mass":1.0}"#,
        )
        .unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert!((m.density_at(0.5) - 0.25).abs() < 1e-15);
        assert!((m.total_mass().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn catalog_density_and_infinite_support() {
        let m = measure_from_json_str(
            r#"{"density":{"kind":"normal","params":{"m":0,"v":1}},"support":[["-inf",null]],"mass":1}"#,
        )
        .unwrap();
        assert!((m.density_at(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn mass_mismatch_and_garbage() {
        assert!(measure_from_json_str(r#"{"atoms":[{"x":0,"w":0.4}],"mass":1}"#).is_err());
        assert!(measure_from_json_str("[1,2]").is_err());
    }
}
