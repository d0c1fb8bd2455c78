//! Flat `key = value` experiment files.
//!
//! ```text
//! # MLQAE on 10 qubits
//! algorithm = mlqae
//! qubits = 10
//! a = 0.125
//! m = 3
//! shots = 16, 32, 64, 128, 256, 512, 1024
//! reps = 30
//! seed = 7
//! ```
//!
//! Recognized keys: `algorithm` (`mlqae`, `iqae`, `mci`), `qubits`, `a`,
//! `shots` (alias `samples`), `reps`, `seed`, `backend` (`sv`, `analytic`),
//! `m` and `schedule` for MLQAE, `epsilon`, `alpha` and `ratio` for IQAE.

use std::collections::HashMap;
use std::str::FromStr;

use qae_core::{Backend, ScheduleKind};
use thiserror::Error;

use crate::bench::{Algorithm, ExperimentConfig};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

const KEYS: &[&str] = &[
    "algorithm",
    "qubits",
    "a",
    "shots",
    "samples",
    "reps",
    "seed",
    "backend",
    "m",
    "schedule",
    "epsilon",
    "alpha",
    "ratio",
];

struct Entries {
    values: HashMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &'static str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e| ConfigError::Line {
                line,
                message: format!("bad value for `{key}`: {e}"),
            }),
        }
    }

    fn require<T: FromStr>(&self, key: &'static str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or(ConfigError::Missing(key))
    }
}

fn parse_list(line: usize, value: &str) -> Result<Vec<u64>, ConfigError> {
    value
        .split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|e| ConfigError::Line {
                line,
                message: format!("bad shot count `{}`: {e}", s.trim()),
            })
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut values = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Line {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::Line {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Line {
                line,
                message: format!("empty value for `{key}`"),
            });
        }
        let key = if key == "samples" { "shots" } else { key };
        if values
            .insert(key.to_string(), (line, value.to_string()))
            .is_some()
        {
            return Err(ConfigError::Line {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    let entries = Entries { values };

    let algorithm = match entries.raw("algorithm") {
        None => return Err(ConfigError::Missing("algorithm")),
        Some((_, "mlqae")) => Algorithm::Mlqae {
            m: entries.require("m")?,
            kind: entries.get::<ScheduleKind>("schedule")?.unwrap_or_default(),
        },
        Some((_, "iqae")) => Algorithm::Iqae {
            epsilon: entries.require("epsilon")?,
            alpha: entries.get("alpha")?.unwrap_or(0.05),
            ratio: entries.get("ratio")?.unwrap_or(2),
        },
        Some((_, "mci")) => Algorithm::Mci,
        Some((line, other)) => {
            return Err(ConfigError::Line {
                line,
                message: format!("unknown algorithm `{other}`"),
            })
        }
    };
    let (shots_line, shots) = entries.raw("shots").ok_or(ConfigError::Missing("shots"))?;
    let shots_list = parse_list(shots_line, shots)?;

    // MCI has no quantum register; default to one wide enough for a = k/1024.
    let domain_qubits = match algorithm {
        Algorithm::Mci => entries.get("qubits")?.unwrap_or(10),
        _ => entries.require("qubits")?,
    };

    Ok(ExperimentConfig {
        algorithm,
        domain_qubits,
        a_true: entries.require("a")?,
        shots_list,
        repetitions: entries.require("reps")?,
        base_seed: entries.get("seed")?.unwrap_or(0),
        backend: entries.get::<Backend>("backend")?.unwrap_or_default(),
    })
}
