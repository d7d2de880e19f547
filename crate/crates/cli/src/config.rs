//! Run configuration: command-line flags override a JSON config file, which
//! overrides the built-in defaults. `POND_MASTER_SEED` replaces the default
//! seed only.

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "POND_MASTER_SEED";

/// Marks an error as a problem with the invocation rather than the run.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

macro_rules! usage {
    ($($t:tt)*) => { return Err(anyhow::Error::new($crate::config::Usage(format!($($t)*)))) };
}
pub(crate) use usage;

/// Contents of a `--config` file. Every key is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub n: Option<Vec<u32>>,
    pub m: Option<u32>,
    pub p: Option<Vec<f64>>,
    pub trials: Option<u64>,
    pub pi_trials: Option<u64>,
    pub pilot_trials: Option<u64>,
    pub pilot_seed: Option<u64>,
    pub m0: Option<u32>,
    pub m_max: Option<u32>,
    pub margin: Option<u32>,
    pub eps: Option<f64>,
    pub trials_per_size: Option<u64>,
    pub n_max: Option<u32>,
    pub k: Option<u32>,
    pub outer: Option<u32>,
    pub box_size: Option<u32>,
    pub sides: Option<String>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Usage(format!("reading config {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)
            .map_err(|e| Usage(format!("parsing config {}: {e}", path.display())))?)
    }
}

/// Picks the flag, then the file value, then the default.
pub fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

pub fn pick_opt<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

pub fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse() {
            Ok(v) => Ok(v),
            Err(_) => usage!("{SEED_ENV}={s} is not an unsigned integer"),
        },
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => usage!("{SEED_ENV}: {e}"),
    }
}

pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    match flag.or(file) {
        Some(s) => Ok(s),
        None => default_seed(),
    }
}

pub fn check_powers_of_two(name: &str, grid: &[u32]) -> Result<()> {
    if grid.is_empty() {
        usage!("--{name} must not be empty");
    }
    if let Some(bad) = grid.iter().find(|&&n| n == 0 || !n.is_power_of_two()) {
        usage!("--{name}: {bad} is not a power of two");
    }
    Ok(())
}

pub fn check_positive(name: &str, grid: &[u32]) -> Result<()> {
    if grid.is_empty() {
        usage!("--{name} must not be empty");
    }
    if grid.contains(&0) {
        usage!("--{name} entries must be at least 1");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(&Some(1), &Some(2), 3), 1);
        assert_eq!(pick(&None, &Some(2), 3), 2);
        assert_eq!(pick(&None, &None, 3), 3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"sed": 1}"#).is_err());
        let c: FileConfig = serde_json::from_str(r#"{"seed": 4, "n": [8, 16]}"#).unwrap();
        assert_eq!(c.n, Some(vec![8, 16]));
    }

    #[test]
    fn grids() {
        assert!(check_powers_of_two("n", &[8, 16]).is_ok());
        assert!(check_powers_of_two("n", &[8, 12]).is_err());
        assert!(check_powers_of_two("n", &[]).is_err());
        assert!(check_positive("n", &[3, 5]).is_ok());
        assert!(check_positive("n", &[0]).is_err());
    }
}
