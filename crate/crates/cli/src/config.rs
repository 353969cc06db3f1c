//! Campaign files. Every command has its own schema; unknown keys are
//! rejected with their name. Flags given on the command line win over the
//! file.

use std::path::{Path, PathBuf};

use hardy_core::verify::{BumpFamily, Epsilons, SearchBudget};
use hardy_core::{ConvexBody, QuadratureSpec, TestFunction};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::args::Format;
use crate::error::{config, CliError};

/// Keys shared by every command that integrates.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    /// Master seed; mandatory for Monte Carlo runs, overrides `quadrature.seed`.
    pub seed: Option<u64>,
    pub c3: Option<f64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub dim: Option<Vec<usize>>,
    pub p: Option<Vec<f64>>,
    pub c3: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalitiesConfig {
    pub p: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub c3: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyConfig {
    pub body: Option<ConvexBody>,
    pub family: Option<Vec<TestFunction>>,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub c3: Option<f64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperharmonicityConfig {
    pub body: Option<ConvexBody>,
    pub points: Option<Vec<Vec<f64>>>,
    pub point_count: Option<usize>,
    pub epsilons: Option<Epsilons>,
    /// Check harmonicity (|T_ε| → 0) instead; defaults to true on half-spaces.
    pub harmonic: Option<bool>,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpedientConfig {
    pub body: Option<ConvexBody>,
    pub points: Option<Vec<Vec<f64>>>,
    pub point_count: Option<usize>,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsConfig {
    pub function: Option<TestFunction>,
    pub p: Option<Vec<f64>>,
    pub s_to_one: Option<Vec<f64>>,
    pub s_to_zero: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpConfig {
    pub body: Option<ConvexBody>,
    pub family: Option<BumpFamily>,
    /// Starting parameters `[c_1, …, c_N, r, q]`; default is the box midpoint.
    pub start: Option<Vec<f64>>,
    pub budget: Option<SearchBudget>,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub c3: Option<f64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenConfig {
    pub body: Option<ConvexBody>,
    pub family: Option<BumpFamily>,
    pub budget: Option<SearchBudget>,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub c3: Option<f64>,
    pub quadrature: Option<QuadratureSpec>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Reads `path` as TOML when its extension is `.toml`, JSON otherwise.
///
/// Also returns `quadrature.seed` when the file sets it explicitly, so that
/// a missing seed can be told apart from a zero seed.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<(T, Option<u64>), CliError> {
    let Some(path) = path else {
        return Ok((T::default(), None));
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    let value: serde_json::Value = if is_toml {
        toml::from_str(&text).map_err(|e| config(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text).map_err(|e| config(format!("{}: {e}", path.display())))?
    };
    let seed = value.pointer("/quadrature/seed").and_then(serde_json::Value::as_u64);
    let cfg = T::deserialize(value).map_err(|e| config(format!("{}: {e}", path.display())))?;
    Ok((cfg, seed))
}

macro_rules! common_from {
    ($($t:ty),*) => {$(
        impl From<&$t> for Common {
            fn from(c: &$t) -> Self {
                Common {
                    seed: c.seed,
                    c3: None,
                    quadrature: c.quadrature.clone(),
                    threads: c.threads,
                    out: c.out.clone(),
                    format: c.format,
                }
            }
        }
    )*};
}

common_from!(SuperharmonicityConfig, ExpedientConfig, AsymptoticsConfig);

macro_rules! common_with_c3 {
    ($($t:ty),*) => {$(
        impl From<&$t> for Common {
            fn from(c: &$t) -> Self {
                Common {
                    seed: c.seed,
                    c3: c.c3,
                    quadrature: c.quadrature.clone(),
                    threads: c.threads,
                    out: c.out.clone(),
                    format: c.format,
                }
            }
        }
    )*};
}

common_with_c3!(HardyConfig, SharpConfig, EigenConfig);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_named() {
        let err = serde_json::from_str::<HardyConfig>(r#"{"bodyy": {}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("bodyy"), "{err}");
        let err = serde_json::from_str::<HardyConfig>(r#"{"quadrature": {"samples": 3}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("samples"), "{err}");
        // keys of other commands are unknown too
        assert!(serde_json::from_str::<ExpedientConfig>(r#"{"epsilons": {"absolute": [0.1]}}"#).is_err());
    }

    #[test]
    fn toml_and_json_agree() {
        let json: HardyConfig = serde_json::from_str(
            r#"{"body": {"type": "ball", "center": [0, 0], "radius": 1}, "s": [0.5], "seed": 3,
                "quadrature": {"method": "monte_carlo", "outer_samples": 1000, "inner_samples": 10}}"#,
        )
        .unwrap();
        let toml: HardyConfig = toml::from_str(
            "s = [0.5]\nseed = 3\n[body]\ntype = \"ball\"\ncenter = [0.0, 0.0]\nradius = 1.0\n[quadrature]\nmethod = \"monte_carlo\"\nouter_samples = 1000\ninner_samples = 10\n",
        )
        .unwrap();
        assert_eq!(json.body, toml.body);
        assert_eq!(json.quadrature, toml.quadrature);
        assert_eq!(json.seed, toml.seed);
    }
}
