//! Flat `key = value` run configuration and manifests.
//!
//! A manifest is itself a valid config file, so feeding it back with
//! `--config` reproduces the run.

use std::collections::BTreeMap;

use crate::LabError;

pub type Settings = BTreeMap<String, String>;

/// Keys accepted by every command.
pub const GLOBAL_KEYS: &[&str] = &["command", "threads", "out", "precision"];

/// Parse `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str) -> Result<Settings, LabError> {
    let mut out = Settings::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(LabError::Config(format!("line {}: empty key", n + 1)));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(LabError::Config(format!("line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(out)
}

/// Layer `defaults`, then the config file, then explicit flags; reject any
/// key outside `allowed` and [`GLOBAL_KEYS`].
pub fn merge(command: &str, allowed: &[&str], defaults: &[(&str, &str)], file: &Settings, flags: &Settings) -> Result<Settings, LabError> {
    let mut eff = Settings::new();
    for (k, v) in defaults {
        eff.insert((*k).to_string(), (*v).to_string());
    }
    for layer in [file, flags] {
        for (k, v) in layer {
            if !allowed.contains(&k.as_str()) && !GLOBAL_KEYS.contains(&k.as_str()) {
                return Err(LabError::Config(format!("unknown key `{k}` for `{command}`")));
            }
            eff.insert(k.clone(), v.clone());
        }
    }
    if let Some(c) = eff.get("command") {
        if c != command {
            return Err(LabError::Config(format!("config is for `{c}`, not `{command}`")));
        }
    }
    eff.insert("command".into(), command.into());
    Ok(eff)
}

pub fn manifest(settings: &Settings) -> String {
    let mut s = String::from("# multicorn-lab run manifest\n");
    for (k, v) in settings {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(v);
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_round_trip() {
        let s = parse("# run\nfamily = tricorn  # the d = 2 case\n\nres=64\n").unwrap();
        assert_eq!(s["family"], "tricorn");
        assert_eq!(s["res"], "64");
        let eff = merge("render", &["family", "res"], &[("res", "8")], &s, &Settings::new()).unwrap();
        assert_eq!(parse(&manifest(&eff)).unwrap(), eff);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        let s = parse("colour = red").unwrap();
        assert!(merge("render", &["coloring"], &[], &s, &Settings::new()).is_err());
        assert!(parse("a = 1\na = 2").is_err());
        assert!(parse("just words").is_err());
    }
}
