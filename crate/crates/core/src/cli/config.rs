//! `unaryflow.conf`: `key = value` lines turned into `--key value` flags.
//!
//! A bare key applies to every subcommand that has that flag; a
//! `subcommand.key` entry applies to one subcommand only. Flags given on the
//! command line replace the config entry for that flag.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Command;

use crate::error::{Error, Result};

pub const DEFAULT_CONFIG: &str = "unaryflow.conf";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEntry {
    pub scope: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse_config(text: &str, origin: &str) -> Result<Vec<ConfigEntry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(origin, i + 1, "expected key = value"))?;
        let k = k.trim();
        let (scope, key) = match k.split_once('.') {
            Some((s, key)) => (Some(s.trim().to_string()), key.trim()),
            None => (None, k),
        };
        if key.is_empty() || key.starts_with('-') {
            return Err(Error::parse(origin, i + 1, format!("bad key '{k}'")));
        }
        entries.push(ConfigEntry {
            scope,
            key: key.replace('_', "-"),
            value: v.trim().to_string(),
            line: i + 1,
        });
    }
    Ok(entries)
}

/// Position of the subcommand token, skipping `--config PATH`.
fn subcommand_index(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy();
        if arg == "--config" {
            i += 2;
            continue;
        }
        if !arg.starts_with('-') {
            return Some(i);
        }
        i += 1;
    }
    None
}

/// The config path named on the command line, if any, else the default file
/// when it exists.
pub fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let end = subcommand_index(argv).unwrap_or(argv.len());
    let mut i = 1;
    while i < end {
        let arg = argv[i].to_string_lossy();
        if arg == "--config" {
            return argv.get(i + 1).map(PathBuf::from);
        }
        if let Some(p) = arg.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
        i += 1;
    }
    let default = Path::new(DEFAULT_CONFIG);
    default.exists().then(|| default.to_path_buf())
}

/// Inserts the applicable config entries as flags right after the
/// subcommand token.
pub fn inject(argv: Vec<OsString>, entries: &[ConfigEntry], command: &Command, origin: &str) -> Result<Vec<OsString>> {
    let Some(idx) = subcommand_index(&argv) else {
        return Ok(argv);
    };
    let name = argv[idx].to_string_lossy().into_owned();
    let Some(sub) = command.find_subcommand(&name) else {
        return Ok(argv);
    };
    // Multi-value flags append across occurrences, so a flag given on the
    // command line suppresses its config entry instead of following it.
    let given: Vec<String> = argv[idx + 1..]
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|f| f.split('=').next().unwrap_or(f).to_string()))
        .collect();
    let mut injected: Vec<OsString> = Vec::new();
    for e in entries {
        match &e.scope {
            Some(scope) if scope != &name => {
                if command.find_subcommand(scope).is_none() {
                    return Err(Error::parse(origin, e.line, format!("unknown subcommand '{scope}'")));
                }
                continue;
            }
            _ => {}
        }
        let arg = sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str()));
        let Some(arg) = arg else {
            if e.scope.is_some() {
                return Err(Error::parse(origin, e.line, format!("'{name}' has no --{} flag", e.key)));
            }
            continue;
        };
        if given.iter().any(|g| g == &e.key) {
            continue;
        }
        let takes_value = arg.get_num_args().is_none_or(|r| r.takes_values());
        if takes_value {
            injected.push(format!("--{}", e.key).into());
            injected.extend(e.value.split_whitespace().map(OsString::from));
        } else {
            match e.value.as_str() {
                "true" | "yes" | "1" => injected.push(format!("--{}", e.key).into()),
                "false" | "no" | "0" => {}
                other => {
                    return Err(Error::parse(origin, e.line, format!("--{} expects true or false, got '{other}'", e.key)))
                }
            }
        }
    }
    let mut out = argv;
    out.splice(idx + 1..idx + 1, injected);
    Ok(out)
}
