//! Manifest files: which torus, which one-forms, which checks.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use wodzicki::coefficients::TrigEntry;
use wodzicki::psido::{OneForm, OperatorSpec, SpecKind};
use wodzicki::theorems::{one_form_corpus, CorpusConfig};

use crate::Suite;

/// Top-level manifest. Every field except `dim` is optional.
///
/// ```json
/// {
///   "dim": 2,
///   "one_forms": { "random": { "seed": 7, "count": 20, "max_freq": 2, "modes": 2 } },
///   "operator": { "kind": "composite", "factors": [ ... ] },
///   "floor": -8,
///   "suite": "tadpole",
///   "output": "report.json"
/// }
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub dim: usize,
    #[serde(default)]
    pub one_forms: Option<OneFormSource>,
    /// Operator for `ncint`, in the operator-spec format.
    #[serde(default)]
    pub operator: Option<SpecKind>,
    /// Lowest symbol degree kept when realizing `operator`.
    #[serde(default)]
    pub floor: Option<i32>,
    #[serde(default)]
    pub suite: Option<Suite>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OneFormSource {
    /// One entry per one-form; each is a list of `d` Fourier tables.
    Explicit(Vec<Vec<Vec<TrigEntry>>>),
    Random {
        seed: u64,
        #[serde(default = "default_count")]
        count: usize,
        #[serde(default = "default_max_freq")]
        max_freq: i32,
        #[serde(default = "default_modes")]
        modes: usize,
    },
}

fn default_count() -> usize {
    10
}

fn default_max_freq() -> i32 {
    CorpusConfig::default().max_freq
}

fn default_modes() -> usize {
    CorpusConfig::default().modes
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let m: Manifest =
            serde_json::from_str(&text).map_err(|e| format!("malformed manifest {}: {e}", path.display()))?;
        m.validate()?;
        Ok(m)
    }

    /// Checks the dimension and that explicit one-forms are selfadjoint.
    fn validate(&self) -> Result<(), String> {
        if self.dim < 2 {
            return Err(format!("manifest: dim must be at least 2, got {}", self.dim));
        }
        if let Some(OneFormSource::Explicit(_)) = &self.one_forms {
            self.one_forms(0)?;
        }
        Ok(())
    }

    /// The one-forms named by the manifest, or a seeded corpus of `fallback`
    /// forms when none are given.
    pub fn one_forms(&self, fallback: usize) -> Result<Vec<OneForm>, String> {
        let d = self.dim;
        match &self.one_forms {
            Some(OneFormSource::Explicit(tables)) => tables
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if t.len() != d {
                        return Err(format!("manifest: one_forms[{i}] has {} components, expected {d}", t.len()));
                    }
                    let a = OneForm::from_entries(d, t).map_err(|e| format!("manifest: one_forms[{i}]: {e}"))?;
                    a.require_selfadjoint().map_err(|e| format!("manifest: one_forms[{i}]: {e}"))?;
                    Ok(a)
                })
                .collect(),
            Some(OneFormSource::Random {
                seed,
                count,
                max_freq,
                modes,
            }) => {
                let cfg = CorpusConfig {
                    max_freq: *max_freq,
                    modes: *modes,
                };
                if *max_freq < 1 || *modes < 1 {
                    return Err("manifest: max_freq and modes must be positive".into());
                }
                Ok(one_form_corpus(d, *count, *seed, cfg))
            }
            None => Ok(one_form_corpus(d, fallback, 0, CorpusConfig::default())),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.one_forms {
            Some(OneFormSource::Random { seed, .. }) => Some(*seed),
            _ => None,
        }
    }

    pub fn operator_spec(&self) -> Result<OperatorSpec, String> {
        let kind = self.operator.clone().ok_or("manifest: `operator` is required for ncint")?;
        Ok(OperatorSpec {
            dim: self.dim,
            kind,
            floor: self.floor,
        })
    }
}
