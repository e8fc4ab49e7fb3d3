//! Turning command-line flags into a measure to analyse.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use boolsd_core::catalog::{self, CatalogEntry};
use boolsd_core::measure_model::measure_from_json;
use boolsd_core::sd_analysis::SdProblem;
use boolsd_core::TransformHandle;
use clap::Args;

use crate::CliError;

/// Where the measure comes from: a catalog family or a JSON file.
#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// Catalog id or alias (see `boolsd list`)
    #[arg(long)]
    pub dist: Option<String>,
    /// Family parameter as name=value; repeatable
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    /// JSON measure description
    #[arg(long, conflicts_with = "dist")]
    pub measure: Option<PathBuf>,

    // shorthands for the family parameters
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

pub struct Subject {
    pub label: String,
    pub entry: Option<CatalogEntry>,
    pub problem: SdProblem,
}

impl Subject {
    pub fn f(&self) -> &TransformHandle {
        &self.problem.f
    }

    pub fn window(&self) -> (f64, f64) {
        self.problem.window
    }

    pub fn from_entry(e: CatalogEntry) -> Self {
        Subject {
            label: e.label(),
            problem: SdProblem::from_entry(&e),
            entry: Some(e),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let m = measure_from_json(path)?;
        let label = path.file_stem().map_or("measure".into(), |s| s.to_string_lossy().into_owned());
        Ok(Subject { problem: SdProblem::from_measure(&label, &m), label, entry: None })
    }
}

fn parse_value(s: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Spec(format!("`{s}` is not a number")))
}

fn parse_kv(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::Spec(format!("expected name=value, got `{s}`")))?;
    Ok((k.trim().to_string(), parse_value(v)?))
}

impl Source {
    fn shorthand(&self) -> Vec<(&'static str, f64)> {
        let all = [
            ("lambda", self.lambda),
            ("m", self.m),
            ("sigma", self.sigma),
            ("v", self.v),
            ("t", self.t),
            ("p", self.p),
            ("alpha", self.alpha),
            ("rho", self.rho),
            ("gamma", self.gamma),
            ("a", self.a),
            ("c", self.c),
        ];
        all.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect()
    }

    pub fn is_given(&self) -> bool {
        self.dist.is_some() || self.measure.is_some()
    }

    pub fn resolve(&self) -> Result<Subject, CliError> {
        if let Some(path) = &self.measure {
            if !self.params.is_empty() || !self.shorthand().is_empty() {
                return Err(CliError::Spec("parameters apply to --dist only, not to --measure".into()));
            }
            return Subject::from_file(path);
        }
        let id = self.dist.as_deref().ok_or_else(|| CliError::Spec("one of --dist or --measure is required".into()))?;
        let mut params = BTreeMap::new();
        for kv in &self.params {
            let (k, v) = parse_kv(kv)?;
            params.insert(k, v);
        }
        for (k, v) in self.shorthand() {
            params.insert(k.to_string(), v);
        }
        Ok(Subject::from_entry(catalog::entry(id, &params)?))
    }
}

/// `id`, `id:v1,v2` (values in parameter order), `id:k=v,...`, or a path to a
/// JSON file.
pub fn parse_spec(spec: &str) -> Result<Subject, CliError> {
    if spec.ends_with(".json") {
        return Subject::from_file(Path::new(spec));
    }
    let (id, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let fam = catalog::resolve(id)?;
    let mut params = BTreeMap::new();
    for (i, item) in rest.split(',').filter(|s| !s.trim().is_empty()).enumerate() {
        let (k, v) = if item.contains('=') {
            parse_kv(item)?
        } else {
            let name = fam
                .params
                .get(i)
                .ok_or_else(|| CliError::Spec(format!("{} takes {} parameter(s)", fam.id, fam.params.len())))?
                .name;
            (name.to_string(), parse_value(item)?)
        };
        params.insert(k, v);
    }
    Ok(Subject::from_entry(catalog::entry(id, &params)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        let s = parse_spec("dirac:1").unwrap();
        assert_eq!(s.entry.unwrap().param("c"), 1.0);
        let s = parse_spec("semicircle:sigma=2,m=-1").unwrap();
        let e = s.entry.unwrap();
        assert_eq!((e.param("m"), e.param("sigma")), (-1.0, 2.0));
        assert!(parse_spec("mp:1,2").is_err());
        assert!(parse_spec("nope").is_err());
    }

    #[test]
    fn shorthand_and_params() {
        let src = Source { dist: Some("mp".into()), lambda: Some(2.0), ..Default::default() };
        assert_eq!(src.resolve().unwrap().entry.unwrap().param("lambda"), 2.0);
        let src = Source { dist: Some("normal".into()), params: vec!["m=1.5".into()], ..Default::default() };
        assert_eq!(src.resolve().unwrap().entry.unwrap().param("m"), 1.5);
        let src = Source { dist: Some("normal".into()), params: vec!["m1.5".into()], ..Default::default() };
        assert!(src.resolve().is_err());
    }
}
