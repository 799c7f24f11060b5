//! `key = value` config files, spliced into the argument list ahead of the
//! command-line flags so that later flags win.

use std::path::Path;

use crate::args::PARAM_KEYS;
use crate::Exit;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", i + 1));
        };
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key `{}`", i + 1, k.trim()));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn flag_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("--")?;
    Some(name.split('=').next().unwrap_or(name))
}

/// Inserts the file's settings right after the subcommand. Parameter-style
/// keys from the file are dropped when the command line picks a style itself.
pub fn merge(argv: Vec<String>) -> Result<Vec<String>, Exit> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    if argv.len() < 2 {
        return Ok(argv);
    }
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| Exit::usage(format!("cannot read config `{path}`: {e}")))?;
    let pairs = parse(&text).map_err(|e| Exit::usage(format!("config `{path}`: {e}")))?;
    let cli_has_style = argv.iter().filter_map(|a| flag_name(a)).any(|n| PARAM_KEYS.contains(&n));
    let mut injected = Vec::new();
    for (key, value) in pairs {
        if cli_has_style && PARAM_KEYS.contains(&key.as_str()) {
            continue;
        }
        match value.as_str() {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => {
                injected.push(format!("--{key}"));
                injected.extend(value.split_whitespace().map(str::to_string));
            }
        }
    }
    let mut out = Vec::with_capacity(argv.len() + injected.len());
    out.extend_from_slice(&argv[..2]);
    out.extend(injected);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
