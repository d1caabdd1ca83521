//! Flat `key = value` config files. Keys are the long flag names without the
//! leading dashes; `#` starts a comment.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type ConfigMap = BTreeMap<String, String>;

pub fn parse_config(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::InvalidInput(format!("config line {}: empty key", i + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_values_and_comments() {
        let m = parse_config("# sweep\nestimator = cor3\nt = 100, 200,400\n\nn_order=3 # trailing\n").unwrap();
        assert_eq!(m["estimator"], "cor3");
        assert_eq!(m["t"], "100, 200,400");
        assert_eq!(m["n-order"], "3");
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(parse_config("sigma 0.5").is_err());
        assert!(parse_config(" = 3").is_err());
    }
}
