use std::path::Path;

use miniw_core::{MiniwError, Result};
use serde_json::Value;

use crate::{Command, Format};

fn invalid(field: &str, reason: impl Into<String>) -> MiniwError {
    MiniwError::InvalidConfig {
        field: field.into(),
        reason: reason.into(),
    }
}

fn text(field: &str, v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(invalid(field, "expected a string or number")),
    }
}

fn count(field: &str, v: &Value) -> Result<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| invalid(field, "expected a nonnegative integer"))
}

fn flag(field: &str, v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| invalid(field, "expected true or false"))
}

fn not_for(field: &str, cmd: &str) -> MiniwError {
    invalid(field, format!("not accepted by `{cmd}`"))
}

/// Applies the keys of a JSON config object on top of the parsed flags.
pub fn apply_config(path: &Path, cmd: &mut Command, format: &mut Format) -> Result<()> {
    let raw = std::fs::read_to_string(path).map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&raw).map_err(|e| invalid("config", e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| invalid("config", "expected a JSON object"))?;
    for (key, val) in obj {
        let key = key.replace('-', "_");
        let k = key.as_str();
        if k == "format" {
            *format = match text(k, val)?.as_str() {
                "json" => Format::Json,
                "csv" => Format::Csv,
                "plain" => Format::Plain,
                other => return Err(invalid(k, format!("unknown format {other:?}"))),
            };
            continue;
        }
        match cmd {
            Command::Info(a) => match k {
                "algebra" => a.algebra = text(k, val)?,
                _ => return Err(not_for(k, "info")),
            },
            Command::Char(a) => match k {
                "algebra" => a.algebra = text(k, val)?,
                "lambda" => a.lambda = text(k, val)?,
                "which" => a.which = text(k, val)?,
                "depth" => a.depth = count(k, val)?,
                "height" => a.height = count(k, val)?,
                _ => return Err(not_for(k, "char")),
            },
            Command::Wchar(a) => match k {
                "algebra" => a.algebra = text(k, val)?,
                "lambda" => a.lambda = Some(text(k, val)?),
                "k" => a.k = Some(text(k, val)?),
                "max_level" => a.max_level = text(k, val)?,
                "compare_brst" => a.compare_brst = flag(k, val)?,
                "depth" => a.depth = count(k, val)?,
                _ => return Err(not_for(k, "wchar")),
            },
            Command::Cohomology(a) => match k {
                "algebra" => a.algebra = text(k, val)?,
                "lambda" => a.lambda = text(k, val)?,
                "which" => a.which = text(k, val)?,
                "xi_level" => a.xi_level = text(k, val)?,
                "xi_hf" => a.xi_hf = Some(text(k, val)?),
                "chain" => a.chain = count(k, val)?,
                "depth" => a.depth = count(k, val)?,
                _ => return Err(not_for(k, "cohomology")),
            },
            Command::Verify(a) => match k {
                "algebra" => a.algebra = text(k, val)?,
                "lambda" => a.lambda = Some(text(k, val)?),
                "which" => a.which = text(k, val)?,
                "depth" => a.depth = count(k, val)?,
                _ => return Err(not_for(k, "verify")),
            },
            Command::Suite(a) => match k {
                "criteria" => a.criteria = Some(text(k, val)?),
                _ => return Err(not_for(k, "suite")),
            },
        }
    }
    Ok(())
}

/// Worker count from MINIW_THREADS, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("MINIW_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(invalid("MINIW_THREADS", format!("expected a positive integer, got {s:?}"))),
        },
    }
}
