//! `--config FILE`: a JSON object whose keys are flag names.
//!
//! Keys use the flag spelling with `_` or `-`. Booleans toggle flags, arrays
//! repeat a flag, and the optional key `command` (string or array of words)
//! supplies the subcommand when none is given on the command line. Flags given
//! explicitly win over the file.

use serde_json::Value;

use crate::exit::{CliError, CliResult};

pub fn merged_args(mut argv: Vec<String>) -> CliResult<Vec<String>> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = if let Some(p) = argv[pos].strip_prefix("--config=") {
        let p = p.to_string();
        argv.remove(pos);
        p
    } else {
        if pos + 1 >= argv.len() {
            return Err(CliError::parse("--config needs a file"));
        }
        let p = argv.remove(pos + 1);
        argv.remove(pos);
        p
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::parse(format!("cannot read {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))?;
    let Value::Object(map) = value else {
        return Err(CliError::parse(format!("{path}: expected a JSON object")));
    };

    if argv.get(1).is_none_or(|a| a.starts_with('-')) {
        let words: Vec<String> = match map.get("command") {
            Some(Value::String(s)) => s.split_whitespace().map(String::from).collect(),
            Some(Value::Array(words)) => words
                .iter()
                .map(|w| scalar(w).ok_or_else(|| CliError::parse("command words must be strings")))
                .collect::<CliResult<_>>()?,
            Some(_) => return Err(CliError::parse("command must be a string or array")),
            None => Vec::new(),
        };
        argv.splice(1..1, words);
    }

    let mut extra = Vec::new();
    for (key, value) in map.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        let given = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match value {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    extra.push(flag.clone());
                    extra.push(scalar(item).ok_or_else(|| CliError::parse(format!("{key}: unsupported value")))?);
                }
            }
            v => {
                extra.push(flag);
                extra.push(scalar(v).ok_or_else(|| CliError::parse(format!("{key}: unsupported value")))?);
            }
        }
    }
    argv.extend(extra);
    Ok(argv)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn no_config_passes_through() {
        let a = args(&["symkron", "enumerate", "--dim", "2"]);
        assert_eq!(merged_args(a.clone()).unwrap(), a);
    }

    #[test]
    fn file_fills_missing_flags() {
        let dir = std::env::temp_dir().join(format!("symkron-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"command":"check","dim":3,"order":2,"force_non_unitary":true,"seed":5}"#).unwrap();
        let p = path.to_str().unwrap();
        let got = merged_args(args(&["symkron", "--config", p, "--seed", "9"])).unwrap();
        assert_eq!(
            got,
            args(&["symkron", "check", "--seed", "9", "--dim", "3", "--force-non-unitary", "--order", "2"])
        );
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file_is_parse_error() {
        let e = merged_args(args(&["symkron", "--config", "/nonexistent/x.json"])).unwrap_err();
        assert_eq!(e.code, crate::exit::PARSE);
    }
}
