use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

/// `x` with 6 significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

/// JSON object holding `config`, `seed` and the fields of `body`.
pub fn with_config<C: Serialize, B: Serialize>(config: &C, seed: u64, body: &B) -> Result<Value> {
    let mut out = Map::new();
    out.insert("config".into(), serde_json::to_value(config)?);
    out.insert("seed".into(), seed.into());
    match serde_json::to_value(body)? {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Value::Object(out))
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<()> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// CSV artifact preceded by `# config:` and `# seed:` comment lines.
pub fn write_csv_with_config<C: Serialize>(
    dir: &Path,
    name: &str,
    config: &C,
    seed: u64,
    body: &[u8],
) -> Result<()> {
    let path = dir.join(name);
    let mut text = format!("# config: {}\n# seed: {seed}\n", serde_json::to_string(config)?).into_bytes();
    text.extend_from_slice(body);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}
