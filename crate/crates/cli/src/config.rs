//! `--config FILE`: a JSON object mirroring the command-line flags.
//!
//! ```json
//! {"command": "share", "json": true, "tol": 1e-9,
//!  "args": {"f": "sin(z)", "g": "2*sin(z)", "a": "0", "r": 10}}
//! ```
//!
//! The file is expanded into arguments placed before the real ones, so flags
//! given on the command line win.

use std::ffi::OsString;

use serde_json::Value;

pub const SUBCOMMANDS: [&str; 6] = ["solve-eigen", "residual", "nevanlinna", "share", "rational", "roots"];

const GLOBAL_FLAGS: [&str; 4] = ["json", "tol", "seed", "quiet"];

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn push_flag(out: &mut Vec<OsString>, key: &str, v: &Value) -> Result<(), String> {
    let flag = format!("--{}", key.replace('_', "-"));
    match v {
        Value::Bool(true) => out.push(flag.into()),
        Value::Bool(false) | Value::Null => {}
        Value::Array(items) => {
            for item in items {
                let text = scalar_text(item).ok_or_else(|| format!("config value for `{key}` must be scalar"))?;
                out.push(flag.clone().into());
                out.push(text.into());
            }
        }
        other => {
            let text = scalar_text(other).ok_or_else(|| format!("config value for `{key}` must be scalar"))?;
            out.push(flag.into());
            out.push(text.into());
        }
    }
    Ok(())
}

/// Finds `--config` in `args` and splices the file's contents in.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    let prog = it.next().unwrap_or_else(|| "lindiff".into());
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a file path")?.to_string_lossy().into_owned());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        let mut out = vec![prog];
        out.extend(rest);
        return Ok(out);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let cfg: Value = serde_json::from_str(&text).map_err(|e| format!("config {path} is not valid JSON: {e}"))?;
    let obj = cfg.as_object().ok_or("config must be a JSON object")?;

    let cli_command = rest.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let command = match cli_command {
        Some(i) => rest.remove(i),
        None => obj
            .get("command")
            .and_then(Value::as_str)
            .ok_or("no subcommand given on the command line or in the config")?
            .into(),
    };
    let mut out = vec![prog, command];
    for key in GLOBAL_FLAGS {
        if let Some(v) = obj.get(key) {
            push_flag(&mut out, key, v)?;
        }
    }
    if let Some(args) = obj.get("args") {
        let args = args.as_object().ok_or("config \"args\" must be an object")?;
        for (k, v) in args {
            push_flag(&mut out, k, v)?;
        }
    }
    out.extend(rest);
    Ok(out)
}
