//! Configuration documents: JSON, or plain text with one `dotted.key = value`
//! per line. Both produce the same key-value tree.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{BoundaryPart, DomainSpec, MaterialField, Profile, RobinSpec, Shape};
use crate::{Error, Result};

/// Parses a configuration document; text starting with `{` is JSON.
pub fn parse_document(text: &str) -> Result<Value> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()));
    }
    let mut root = Value::Object(Map::new());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) =
            line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        if key.is_empty() || key.split('.').any(str::is_empty) {
            return Err(Error::Config(format!("line {}: bad key '{key}'", lineno + 1)));
        }
        insert(&mut root, key, parse_scalar(val.trim()), lineno + 1)?;
    }
    Ok(root)
}

fn parse_scalar(s: &str) -> Value {
    if let Ok(v) = serde_json::from_str::<Value>(s) {
        return v;
    }
    if s.contains(',') {
        return Value::Array(s.split(',').map(|p| parse_scalar(p.trim())).collect());
    }
    Value::String(s.to_string())
}

fn insert(root: &mut Value, key: &str, val: Value, lineno: usize) -> Result<()> {
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, p) in parts.iter().enumerate() {
        let obj =
            node.as_object_mut().ok_or_else(|| Error::Config(format!("line {lineno}: '{key}' nests under a value")))?;
        if i + 1 == parts.len() {
            if obj.insert(p.to_string(), val).is_some() {
                return Err(Error::Config(format!("line {lineno}: duplicate key '{key}'")));
            }
            return Ok(());
        }
        node = obj.entry(p.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

/// Parses a document into a typed configuration.
pub fn from_document<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_value(parse_document(text)?).map_err(|e| Error::Config(e.to_string()))
}

fn default_d() -> usize {
    2
}

fn one() -> f64 {
    1.0
}

fn unit() -> Profile {
    Profile::constant(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(default = "unit")]
    pub rho: Profile,
    #[serde(default = "unit")]
    pub mu: Profile,
    #[serde(default = "unit")]
    pub lambda: Profile,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self { rho: unit(), mu: unit(), lambda: unit() }
    }
}

/// Either adimensional `alpha_*` or dimensional `a_*` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobinConfig {
    pub alpha_t: Option<f64>,
    pub alpha_n: Option<f64>,
    pub a_t: Option<f64>,
    pub a_n: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "one")]
    pub ell: f64,
    /// Defaults to the annulus with `r_in = ell/2`.
    #[serde(default)]
    pub shape: Option<Shape>,
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default)]
    pub robin: RobinConfig,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self { d: 2, ell: 1.0, shape: None, material: MaterialConfig::default(), robin: RobinConfig::default() }
    }
}

impl ProblemConfig {
    pub fn domain(&self) -> Result<DomainSpec> {
        let shape = self.shape.unwrap_or(Shape::Annulus { r_in: self.ell / 2.0 });
        let dir = if shape == Shape::Ball { vec![] } else { vec![BoundaryPart::Inner] };
        DomainSpec::new(self.d, self.ell, shape, dir, vec![BoundaryPart::Outer])
    }

    pub fn material(&self) -> Result<MaterialField> {
        let dom = self.domain()?;
        let m = &self.material;
        MaterialField::new(m.rho.clone(), m.mu.clone(), m.lambda.clone(), dom.inner_radius(), dom.ell)
    }

    pub fn robin(&self, material: &MaterialField) -> Result<RobinSpec> {
        let r = &self.robin;
        match (r.alpha_t, r.alpha_n, r.a_t, r.a_n) {
            (None, None, Some(at), Some(an)) => RobinSpec::new(at, an, material),
            (at, an, None, None) => RobinSpec::from_alphas(at.unwrap_or(1.0), an.unwrap_or(1.0), material),
            _ => Err(Error::Config("give either robin.alpha_t/alpha_n or robin.a_t/a_n".into())),
        }
    }
}
