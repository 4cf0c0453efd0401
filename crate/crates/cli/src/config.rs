use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Validate,
    Hardy,
    Bounds,
    Eigen,
    Ctmc,
    All,
}

impl std::str::FromStr for Pipeline {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Config(format!("unknown pipeline {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BirthDeath {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Skip2 {
    pub b0: f64,
    pub b2: f64,
    pub b3: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub hardy_rel_tol: f64,
    pub eigen_rel_tol: f64,
    pub eigen_levels: usize,
    /// Poisson tail mass allowed per time point.
    pub ctmc_tol: f64,
    pub slope_spread: f64,
    pub state_cap_agreement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let decay = qmbp::ctmc::DecayOptions::default();
        Self {
            hardy_rel_tol: qmbp::hardy::DEFAULT_REL_TOL,
            eigen_rel_tol: qmbp::sl_eigen::DEFAULT_TARGET_REL_TOL,
            eigen_levels: qmbp::sl_eigen::DEFAULT_LEVELS,
            ctmc_tol: decay.tol,
            slope_spread: decay.slope_spread,
            state_cap_agreement: decay.agreement,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct CtmcSettings {
    pub n0: usize,
    pub n_max: usize,
    pub points: usize,
    /// Time horizon as a multiple of `1/λ_ref`.
    pub horizon: f64,
    /// Simulated paths; 0 disables the Monte Carlo channel.
    pub mc_paths: usize,
    pub mc_i0: usize,
    pub mc_min_alive: usize,
}

impl Default for CtmcSettings {
    fn default() -> Self {
        let decay = qmbp::ctmc::DecayOptions::default();
        Self {
            n0: decay.n0,
            n_max: decay.n_max,
            points: decay.points,
            horizon: 10.0,
            mc_paths: 20_000,
            mc_i0: 1,
            mc_min_alive: 100,
        }
    }
}

/// Contents of the JSON config file.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub rates: Option<Vec<f64>>,
    #[serde(default)]
    pub birth_death: Option<BirthDeath>,
    #[serde(default)]
    pub skip2: Option<Skip2>,
    /// Empty means `all`.
    #[serde(default)]
    pub pipelines: Vec<Pipeline>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub ctmc: CtmcSettings,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The explicit rate list. Exactly one law form must be present.
    pub fn expand_rates(&self) -> Result<Vec<f64>, CliError> {
        match (&self.rates, &self.birth_death, &self.skip2) {
            (Some(r), None, None) => Ok(r.clone()),
            (None, Some(bd), None) => Ok(qmbp::law::birth_death_rates(bd.a, bd.b)),
            (None, None, Some(s)) => Ok(qmbp::law::skip2_rates(s.b0, s.b2, s.b3)),
            _ => Err(CliError::Config(
                "give exactly one of \"rates\", \"birth_death\" or \"skip2\"".to_string(),
            )),
        }
    }

    /// Requested pipelines closed under dependencies, in run order.
    pub fn resolved_pipelines(&self) -> Vec<Pipeline> {
        use Pipeline::*;
        let req = &self.pipelines;
        if req.is_empty() || req.contains(&All) {
            return vec![Validate, Hardy, Bounds, Eigen, Ctmc];
        }
        let mut out = vec![Validate];
        let needs_hardy = req
            .iter()
            .any(|p| matches!(p, Hardy | Bounds | Eigen | Ctmc));
        if needs_hardy {
            out.push(Hardy);
        }
        for p in [Bounds, Eigen, Ctmc] {
            if req.contains(&p) {
                out.push(p);
            }
        }
        out
    }
}
