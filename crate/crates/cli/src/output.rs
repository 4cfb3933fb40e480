//! Number formatting and document headers shared by all drivers.

use serde::Serialize;
use serde_json::{json, Value};

use crate::VERSION;

/// Twelve significant digits in scientific notation. Negative zero prints
/// as zero.
pub fn number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Empty field for values that do not exist at this grid point.
pub fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// `# `-prefixed lines recording the version and the full config.
pub fn csv_header(command: &str, config: &impl Serialize, extra: &[(&str, String)]) -> String {
    let cfg = serde_json::to_string(config).expect("configs serialize");
    let mut out = format!("# stellar-qec {VERSION} {command}\n# config {cfg}\n");
    for (k, v) in extra {
        out.push_str(&format!("# {k} {v}\n"));
    }
    out
}

pub fn json_header(command: &str, config: &impl Serialize) -> Value {
    json!({
        "artifact": "stellar-qec",
        "version": VERSION,
        "command": command,
        "config": config,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn json_document(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(number(1.0), "1.00000000000e0");
        assert_eq!(number(-0.0), "0.00000000000e0");
        assert_eq!(number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(number(123456.7891234567), "1.23456789123e5");
    }

    #[test]
    fn missing_values_are_empty() {
        assert_eq!(optional(None), "");
        assert_eq!(csv_line(&["a".into(), optional(None)]), "a,\n");
    }
}
