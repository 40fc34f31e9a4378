//! Key-value configuration files merged into the command line.
//!
//! Each non-comment line is `key = value` where `key` is a long flag of the
//! subcommand. Config entries are inserted before the user's flags, so flags
//! given on the command line take precedence.

use std::fs;

use clap::{ArgAction, Command};

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = vec![];
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", no + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", no + 1));
        }
        out.push((k.to_string(), v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

fn config_path(rest: &[String]) -> Result<Option<String>, String> {
    let mut found = None;
    let mut i = 0;
    while i < rest.len() {
        let a = &rest[i];
        if a == "--config" {
            let v = rest.get(i + 1).ok_or("--config needs a file")?;
            found = Some(v.clone());
            i += 2;
            continue;
        }
        if let Some(v) = a.strip_prefix("--config=") {
            found = Some(v.to_string());
        }
        i += 1;
    }
    Ok(found)
}

/// Returns `argv` with the entries of the `--config` file, if any, inserted
/// right after the subcommand name.
pub fn merge(cli: &Command, argv: Vec<String>) -> Result<Vec<String>, String> {
    if argv.len() < 2 {
        return Ok(argv);
    }
    let Some(sub) = cli.find_subcommand(&argv[1]) else {
        return Ok(argv);
    };
    let Some(path) = config_path(&argv[2..])? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut injected = vec![];
    for (k, v) in parse(&text)? {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(k.as_str()) && k != "config" && k != "help" && k != "version")
            .ok_or_else(|| format!("unknown config key {k:?} for subcommand {}", sub.get_name()))?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match v.as_str() {
                "true" | "1" | "yes" => injected.push(format!("--{k}")),
                "false" | "0" | "no" => {}
                _ => return Err(format!("config key {k:?} expects true or false, got {v:?}")),
            }
        } else {
            injected.push(format!("--{k}={v}"));
        }
    }
    let mut out = argv[..2].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
