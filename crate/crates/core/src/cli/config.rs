//! Flat `key = value` config files whose keys mirror the long flag names.

use std::collections::BTreeMap;
use std::path::Path;

use super::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "vx",
    "vy",
    "squeezing-db",
    "antisqueezing-db",
    "eta-start",
    "eta-stop",
    "eta-steps",
    "eps",
    "eta-det",
    "n-cp",
    "bs-t",
    "samples",
    "seed",
    "out",
    "noncl-max",
    "thermal-max",
    "grid-steps",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are skipped; keys may carry a leading `--`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Usage(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let cfg =
            ConfigFile::parse("# state\nvx = 0.47\n--vy=100 # anti\n\neta_steps = 11\n").unwrap();
        assert_eq!(cfg.get::<f64>("vx").unwrap(), Some(0.47));
        assert_eq!(cfg.get::<f64>("vy").unwrap(), Some(100.0));
        assert_eq!(cfg.get::<usize>("eta-steps").unwrap(), Some(11));
        assert_eq!(cfg.get::<f64>("eps").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("vx 0.4").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("vx = 1\nvx = 2").is_err());
        let cfg = ConfigFile::parse("vx = abc").unwrap();
        assert!(cfg.get::<f64>("vx").is_err());
    }
}
