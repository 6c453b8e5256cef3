//! Config-file defaults. Each `key = value` line becomes `--key value`,
//! inserted right after the subcommand so that later command-line flags
//! override it.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

const SUBCOMMANDS: [&str; 4] = ["measures", "sweep", "fit", "decohere"];

pub fn parse(text: &str, origin: &Path) -> CliResult<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| CliError::invalid(format!("{}:{}: {why}", origin.display(), i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-') {
            return Err(bad(&format!("invalid key `{key}`")));
        }
        if key == "config" {
            return Err(bad("config files cannot include other config files"));
        }
        entries.push((key.to_string(), value.to_string()));
    }
    Ok(entries)
}

fn config_path(args: &[OsString]) -> Option<(usize, OsString)> {
    let mut iter = args.iter().enumerate().skip(1);
    while let Some((i, a)) = iter.next() {
        if a == "--config" {
            return iter.next().map(|(j, v)| (j, v.clone()));
        }
        if let Some(v) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some((i, v.into()));
        }
    }
    None
}

/// `args` with the defaults from `--config` spliced in.
pub fn expand_args(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some((value_index, path)) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse(&text, path)?;
    let Some(sub) = args
        .iter()
        .enumerate()
        .skip(1)
        .find(|(i, a)| *i != value_index && a.to_str().is_some_and(|s| SUBCOMMANDS.contains(&s)))
        .map(|(i, _)| i)
    else {
        return Ok(args);
    };
    let injected = entries
        .into_iter()
        .flat_map(|(k, v)| [OsString::from(format!("--{k}")), OsString::from(v)]);
    let mut out: Vec<OsString> = args[..=sub].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}
