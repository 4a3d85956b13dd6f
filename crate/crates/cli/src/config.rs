//! Plain-text `key=value` configuration files. Each key is the long name
//! of a flag of the chosen subcommand; flags given on the command line win
//! over the file.

use std::ffi::OsString;
use std::fs;

use clap::{ArgAction, Command};

use crate::CliError;

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Inserts the settings of `--config FILE` right after the subcommand name,
/// so that later (command-line) occurrences override them.
pub fn expand(args: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let Some(sub_name) = args.get(1).map(|s| s.to_string_lossy().into_owned()) else {
        return Ok(args);
    };
    let Some(sub) = cmd.find_subcommand(&sub_name) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.to_string_lossy())))?;

    let mut extra: Vec<OsString> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| CliError::config(format!("config line {}: expected key=value", lineno + 1)))?;
        if key == "config" {
            return Err(CliError::config("config files cannot include other config files"));
        }
        let arg = sub.get_arguments().find(|a| a.get_long() == Some(key)).ok_or_else(|| {
            CliError::config(format!(
                "config line {}: unknown key '{key}' for '{sub_name}'",
                lineno + 1
            ))
        })?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value {
                "true" | "yes" | "1" => extra.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(CliError::config(format!(
                        "config line {}: '{key}' takes true or false",
                        lineno + 1
                    )))
                }
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }
    let mut out = Vec::with_capacity(args.len() + extra.len());
    out.extend_from_slice(&args[..2]);
    out.extend(extra);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}
