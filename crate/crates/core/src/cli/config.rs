//! Norm configuration files.
//!
//! ```toml
//! kind = "pnorm"        # pnorm | weighted-pnorm | quadratic | polyhedral
//! dim = 2
//! p = "inf"             # number >= 1 or "inf"
//! # weights = [1.0, 2.0]                 (weighted-pnorm)
//! # matrix = [[2.0, 0.5], [0.5, 1.0]]    (quadratic)
//! # vertices = [[1, 1], [-1, 1], ...]    (polyhedral)
//! ```
//!
//! Files ending in `.json` are read as JSON with the same fields.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::normspace::{Exponent, NormSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKindName {
    Pnorm,
    WeightedPnorm,
    Quadratic,
    Polyhedral,
}

/// The exponent as written: a number or the string "inf".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub kind: NormKindName,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<PValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.to_string()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "field `{field}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl NormConfig {
    pub fn parse_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError {
            field: None,
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn parse_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            field: None,
            message: e.to_string(),
        })
    }

    /// Picks the format from the file extension (`.json`, else TOML).
    pub fn parse_for_path(path: &Path, text: &str) -> Result<Self, ConfigError> {
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            Self::parse_json(text)
        } else {
            Self::parse_toml(text)
        }
    }

    fn exponent(&self) -> Result<Exponent, ConfigError> {
        match &self.p {
            None => Err(ConfigError::field(
                "p",
                "missing; expected a number >= 1 or \"inf\"",
            )),
            Some(PValue::Text(s)) if s == "inf" => Ok(Exponent::Infinite),
            Some(PValue::Text(s)) => Err(ConfigError::field(
                "p",
                format!("expected a number >= 1 or \"inf\", found {s:?}"),
            )),
            Some(PValue::Number(p)) => {
                Exponent::finite(*p).map_err(|e| ConfigError::field("p", e.to_string()))
            }
        }
    }

    fn forbid(&self, fields: &[(&str, bool)]) -> Result<(), ConfigError> {
        for (name, present) in fields {
            if *present {
                return Err(ConfigError::field(
                    name,
                    format!("not used by kind {:?}", self.kind),
                ));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> Result<NormSpec, ConfigError> {
        if self.dim == 0 {
            return Err(ConfigError::field("dim", "must be at least 1"));
        }
        let has_w = self.weights.is_some();
        let has_m = self.matrix.is_some();
        let has_v = self.vertices.is_some();
        let spec = match self.kind {
            NormKindName::Pnorm => {
                self.forbid(&[("weights", has_w), ("matrix", has_m), ("vertices", has_v)])?;
                NormSpec::pnorm(self.dim, self.exponent()?)
                    .map_err(|e| ConfigError::field("p", e.to_string()))?
            }
            NormKindName::WeightedPnorm => {
                self.forbid(&[("matrix", has_m), ("vertices", has_v)])?;
                let p = self.exponent()?;
                let w = self
                    .weights
                    .clone()
                    .ok_or_else(|| ConfigError::field("weights", "missing"))?;
                if w.len() != self.dim {
                    return Err(ConfigError::field(
                        "weights",
                        format!("has {} entries, dim is {}", w.len(), self.dim),
                    ));
                }
                NormSpec::weighted_pnorm(p, w)
                    .map_err(|e| ConfigError::field("weights", e.to_string()))?
            }
            NormKindName::Quadratic => {
                self.forbid(&[
                    ("p", self.p.is_some()),
                    ("weights", has_w),
                    ("vertices", has_v),
                ])?;
                let m = self
                    .matrix
                    .clone()
                    .ok_or_else(|| ConfigError::field("matrix", "missing"))?;
                if m.len() != self.dim || m.iter().any(|row| row.len() != self.dim) {
                    return Err(ConfigError::field(
                        "matrix",
                        format!("must be {0}x{0}", self.dim),
                    ));
                }
                NormSpec::quadratic(m).map_err(|e| ConfigError::field("matrix", e.to_string()))?
            }
            NormKindName::Polyhedral => {
                self.forbid(&[
                    ("p", self.p.is_some()),
                    ("weights", has_w),
                    ("matrix", has_m),
                ])?;
                let v = self
                    .vertices
                    .clone()
                    .ok_or_else(|| ConfigError::field("vertices", "missing"))?;
                if let Some(i) = v.iter().position(|row| row.len() != self.dim) {
                    return Err(ConfigError::field(
                        "vertices",
                        format!(
                            "vertex {i} has {} coordinates, dim is {}",
                            v[i].len(),
                            self.dim
                        ),
                    ));
                }
                NormSpec::polyhedral(v.into_iter().map(Point::new).collect())
                    .map_err(|e| ConfigError::field("vertices", e.to_string()))?
            }
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let c = NormConfig::parse_toml("kind = \"pnorm\"\ndim = 2\np = \"inf\"\n").unwrap();
        assert_eq!(c.to_spec().unwrap(), NormSpec::linf(2));
        let c = NormConfig::parse_toml("kind = \"pnorm\"\ndim = 3\np = 1.5\n").unwrap();
        assert_eq!(c.to_spec().unwrap().dim(), 3);
        let c =
            NormConfig::parse_toml("kind = \"weighted-pnorm\"\ndim = 2\np = 2\nweights = [1, 3]\n")
                .unwrap();
        assert!(c.to_spec().is_ok());
        let c = NormConfig::parse_toml(
            "kind = \"quadratic\"\ndim = 2\nmatrix = [[2, 0.5], [0.5, 1]]\n",
        )
        .unwrap();
        assert!(c.to_spec().unwrap().is_quadratic_kind());
        let c = NormConfig::parse_toml(
            "kind = \"polyhedral\"\ndim = 2\nvertices = [[1, 1], [-1, 1], [-1, -1], [1, -1]]\n",
        )
        .unwrap();
        assert!(c.to_spec().is_ok());
        let c = NormConfig::parse_json(r#"{"kind": "pnorm", "dim": 2, "p": 2}"#).unwrap();
        assert_eq!(c.to_spec().unwrap(), NormSpec::euclidean(2));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = NormConfig::parse_toml("kind = \"pnorm\"\ndim = 2\np = \n").unwrap_err();
        assert!(err.message.contains("line 3"), "{err}");
        let err = NormConfig::parse_toml("kind = \"circle\"\ndim = 2\n").unwrap_err();
        assert!(err.message.contains("line 1"), "{err}");
        let err =
            NormConfig::parse_toml("kind = \"pnorm\"\ndim = 2\np = 2\nextra = 1\n").unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let bad = |text: &str| NormConfig::parse_toml(text).unwrap().to_spec().unwrap_err();
        assert_eq!(
            bad("kind = \"pnorm\"\ndim = 2\np = 0.5\n").field.as_deref(),
            Some("p")
        );
        assert_eq!(
            bad("kind = \"pnorm\"\ndim = 2\np = \"infinity\"\n")
                .field
                .as_deref(),
            Some("p")
        );
        assert_eq!(
            bad("kind = \"pnorm\"\ndim = 2\n").field.as_deref(),
            Some("p")
        );
        assert_eq!(
            bad("kind = \"quadratic\"\ndim = 2\nmatrix = [[1, 2], [2, 1]]\n")
                .field
                .as_deref(),
            Some("matrix")
        );
        assert_eq!(
            bad("kind = \"weighted-pnorm\"\ndim = 3\np = 1\nweights = [1, 1]\n")
                .field
                .as_deref(),
            Some("weights")
        );
        assert_eq!(
            bad("kind = \"polyhedral\"\ndim = 2\nvertices = [[1, 0], [0, 1]]\n")
                .field
                .as_deref(),
            Some("vertices")
        );
        assert_eq!(
            bad("kind = \"pnorm\"\ndim = 2\np = 2\nmatrix = [[1]]\n")
                .field
                .as_deref(),
            Some("matrix")
        );
    }
}
