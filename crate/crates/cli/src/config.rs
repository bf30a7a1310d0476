use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use zk_core::fpalg::DEFAULT_ENUMERATION_CAP;
use zk_core::{Field, TermOrder};

use crate::args::{Format, GlobalOpts};
use crate::CliError;

/// Values read from `--config`; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    field: Option<String>,
    order: Option<String>,
    cap: Option<u64>,
    sat_bound: Option<u32>,
    margin: Option<u32>,
    jobs: Option<usize>,
    format: Option<Format>,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub field: Field,
    pub field_given: bool,
    pub order: TermOrder,
    pub cap: u64,
    pub sat_bound: u32,
    pub margin: u32,
    pub jobs: Option<usize>,
    pub format: Format,
}

impl Config {
    /// Flags (and their `ZK_*` variables) first, then the config file, then defaults.
    pub fn resolve(opts: &GlobalOpts, read: impl FnOnce(&Path) -> Result<String, CliError>) -> Result<Config, CliError> {
        let file = match &opts.config {
            Some(path) => {
                let text = read(path)?;
                serde_json::from_str::<ConfigFile>(&text).map_err(|e| CliError::usage("--config", e))?
            }
            None => ConfigFile::default(),
        };
        let field_src = opts.field.clone().or(file.field);
        let field_given = field_src.is_some();
        let field = match field_src {
            Some(s) => s.parse().map_err(|e| CliError::usage("--field", e))?,
            None => Field::Rationals,
        };
        let order = match opts.order.clone().or(file.order) {
            Some(s) => s.parse().map_err(|e| CliError::usage("--order", e))?,
            None => TermOrder::grevlex(),
        };
        let cap = opts.cap.or(file.cap).unwrap_or(DEFAULT_ENUMERATION_CAP);
        if cap == 0 {
            return Err(CliError::usage("--cap", "must be positive"));
        }
        let sat_bound = opts.sat_bound.or(file.sat_bound).unwrap_or(zk_core::cover::DEFAULT_PATCH_BOUND);
        if sat_bound == 0 {
            return Err(CliError::usage("--sat-bound", "must be positive"));
        }
        let jobs = opts.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(CliError::usage("--jobs", "must be positive"));
        }
        Ok(Config {
            field,
            field_given,
            order,
            cap,
            sat_bound,
            margin: opts.margin.or(file.margin).unwrap_or(0),
            jobs,
            format: opts.format.or(file.format).unwrap_or(Format::Json),
        })
    }

    /// Settings that can change a result; parallelism and format cannot.
    pub fn digest_view(&self) -> Value {
        json!({
            "field": self.field.to_string(),
            "order": self.order.to_string(),
            "cap": self.cap,
            "sat_bound": self.sat_bound,
            "margin": self.margin,
        })
    }
}
