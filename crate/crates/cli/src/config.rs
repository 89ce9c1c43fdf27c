//! `key = value` configuration files. Blank lines and lines starting with
//! `#` are ignored.

use std::collections::BTreeMap;

use k3curves::homotopy::TrackerConfig;
use k3curves::{Error, Rational, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

const TRACKER_KEYS: [&str; 16] = [
    "newton_tol",
    "max_newton_iters",
    "initial_step",
    "max_step",
    "min_step",
    "step_grow",
    "step_shrink",
    "success_residual",
    "final_sharpen_iters",
    "corrector_tol",
    "corrector_iters",
    "max_correction",
    "infinity_norm",
    "dedup_tol",
    "max_steps",
    "threads",
];
const OTHER_KEYS: [&str; 5] = ["seed", "tolerance", "target", "mu", "lambda"];

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim().to_string();
            if !TRACKER_KEYS.contains(&key.as_str()) && !OTHER_KEYS.contains(&key.as_str()) {
                return Err(Error::Usage(format!("config line {}: unknown key {key:?}", n + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Usage(format!("config line {}: {key:?} given twice", n + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read config {path}: {e}")))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Usage(format!("config value {key} = {v:?} is not a valid number"))))
            .transpose()
    }

    pub fn rationals(&self, key: &str) -> Result<Option<Vec<Rational>>> {
        self.get(key).map(parse_rationals).transpose()
    }

    /// Applies every tracker key present in the file.
    pub fn apply_tracker(&self, cfg: &mut TrackerConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.number(stringify!($field))? {
                    cfg.$field = v;
                })*
            };
        }
        set!(
            newton_tol,
            max_newton_iters,
            initial_step,
            max_step,
            min_step,
            step_grow,
            step_shrink,
            success_residual,
            final_sharpen_iters,
            corrector_tol,
            corrector_iters,
            max_correction,
            infinity_norm,
            dedup_tol,
            max_steps,
            threads
        );
        Ok(())
    }
}

/// A comma-separated list such as `2, -3/4, 5`.
pub fn parse_rationals(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Rational>().map_err(|_| Error::Usage(format!("{t:?} is not a rational number"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# tracker\nmax_step = 0.05\n\nmu = 2, -3/4, 5\n").unwrap();
        let mut t = TrackerConfig::default();
        c.apply_tracker(&mut t).unwrap();
        assert_eq!(t.max_step, 0.05);
        assert_eq!(c.rationals("mu").unwrap().unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("nonsense").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("seed = 1\nseed = 2").is_err());
        assert!(Config::parse("max_step = fast").unwrap().apply_tracker(&mut TrackerConfig::default()).is_err());
    }
}
