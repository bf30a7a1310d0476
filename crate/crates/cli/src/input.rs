//! Reading flag values: infix or JSON polynomials, `@file` indirection and
//! input documents, with every file read recorded for the report digest.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use zk_core::poly::parse::{identifiers, parse_poly, parse_poly_list};
use zk_core::wire::{AlgebraDoc, FractionDoc, PolyDoc};
use zk_core::{FpAlgebra, LaurentFraction, MultiPoly, Ring};

use crate::config::Config;
use crate::CliError;

pub struct Ctx {
    pub config: Config,
    vars: Option<Vec<String>>,
    files: BTreeMap<String, String>,
}

impl Ctx {
    pub fn new(config: Config, vars: Option<&str>, files: BTreeMap<String, String>) -> Ctx {
        let vars = vars.map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
        Ctx { config, vars, files }
    }

    pub fn files(&self) -> &BTreeMap<String, String> {
        &self.files
    }

    pub fn read_file(&mut self, flag: &str, path: &str) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(flag, format!("{path}: {e}")))?;
        self.files.insert(path.to_string(), text.clone());
        Ok(text)
    }

    /// Flag text, following a leading `@` to a file.
    pub fn text(&mut self, flag: &str, value: &str) -> Result<String, CliError> {
        match value.strip_prefix('@') {
            Some(path) => self.read_file(flag, path),
            None => Ok(value.to_string()),
        }
    }

    /// A JSON document given inline or as a path.
    pub fn doc<T: DeserializeOwned>(&mut self, flag: &str, value: &str) -> Result<T, CliError> {
        let trimmed = value.trim_start();
        let text = if trimmed.starts_with('{') {
            value.to_string()
        } else {
            self.read_file(flag, value.strip_prefix('@').unwrap_or(value))?
        };
        serde_json::from_str(&text).map_err(|e| CliError::usage(flag, e))
    }

    pub fn algebra(&mut self, flag: &str, value: &str) -> Result<FpAlgebra, CliError> {
        let doc: AlgebraDoc = self.doc(flag, value)?;
        doc.decode(self.config.field).map_err(|e| CliError::usage(flag, e))
    }

    /// The ring for the given polynomial flags: `--vars` if set, otherwise
    /// identifiers in order of first appearance.
    pub fn ring(&mut self, sources: &[(&str, &str)]) -> Result<Arc<Ring>, CliError> {
        let vars = match &self.vars {
            Some(v) => v.clone(),
            None => {
                let mut vars: Vec<String> = Vec::new();
                for (flag, value) in sources {
                    let text = self.text(flag, value)?;
                    let names = if looks_like_json(&text) {
                        json_vars(&text).ok_or_else(|| {
                            CliError::usage("--vars", format!("required with JSON polynomials in {flag} that carry no \"vars\""))
                        })?
                    } else {
                        identifiers(&text).map_err(|e| CliError::usage(flag, e))?
                    };
                    for name in names {
                        if !vars.contains(&name) {
                            vars.push(name);
                        }
                    }
                }
                vars
            }
        };
        Ok(Ring::new(self.config.field, vars).with_order(self.config.order.clone()))
    }

    pub fn polys(&mut self, flag: &str, value: &str, ring: &Arc<Ring>) -> Result<Vec<MultiPoly>, CliError> {
        let text = self.text(flag, value)?;
        if looks_like_json(&text) {
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(flag, e))?;
            let docs: Vec<PolyDoc> = if v.is_array() {
                serde_json::from_value(v).map_err(|e| CliError::usage(flag, e))?
            } else {
                vec![serde_json::from_value(v).map_err(|e| CliError::usage(flag, e))?]
            };
            return docs.iter().map(|d| d.decode(ring).map_err(|e| CliError::usage(flag, e))).collect();
        }
        parse_poly_list(&text, ring).map_err(|e| CliError::usage(flag, e))
    }

    pub fn poly(&mut self, flag: &str, value: &str, ring: &Arc<Ring>) -> Result<MultiPoly, CliError> {
        let text = self.text(flag, value)?;
        if looks_like_json(&text) {
            let mut all = self.polys(flag, &text, ring)?;
            if all.len() != 1 {
                return Err(CliError::usage(flag, "expected one polynomial"));
            }
            return Ok(all.remove(0));
        }
        parse_poly(&text, ring).map_err(|e| CliError::usage(flag, e))
    }
}

/// The `"vars"` key of a JSON polynomial, or of the first in a list.
fn json_vars(text: &str) -> Option<Vec<String>> {
    let v: Value = serde_json::from_str(text).ok()?;
    let first = if v.is_array() { v.get(0)?.clone() } else { v };
    serde_json::from_value(first.get("vars")?.clone()).ok()
}

fn looks_like_json(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with('{') || (t.starts_with('[') && t[1..].trim_start().starts_with('{'))
}

/// Term list plus a readable rendering.
pub fn poly_json(f: &MultiPoly) -> Value {
    let mut v = serde_json::to_value(PolyDoc::encode(f)).expect("serializable");
    v["field"] = json!(f.field().to_string());
    v["vars"] = json!(f.ring().vars());
    v["display"] = json!(f.to_string());
    v
}

pub fn polys_json(fs: &[MultiPoly]) -> Value {
    Value::Array(fs.iter().map(poly_json).collect())
}

pub fn fraction_json(f: &LaurentFraction) -> Value {
    let mut v = serde_json::to_value(FractionDoc::encode(f)).expect("serializable");
    v["display"] = json!(f.to_string());
    v
}

pub fn algebra_json(a: &FpAlgebra) -> Value {
    serde_json::to_value(AlgebraDoc::encode(a)).expect("serializable")
}
