//! Plain-text rendering of reports.

use serde_json::Value;

/// Census reports become `n<TAB>count` rows; other reports are flattened to
/// `path = value` lines.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    if let Some(rows) = report.get("census").and_then(Value::as_array) {
        out.push_str("n\tcount\n");
        for r in rows {
            out.push_str(&format!(
                "{}\t{}\n",
                r["n"],
                r["count"].as_str().unwrap_or_default()
            ));
        }
        return out;
    }
    if let Some(text) = report.get("text").and_then(Value::as_str) {
        out.push_str(text);
        out.push('\n');
        return out;
    }
    flatten("", report, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{}.{}", path, k)
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) => {
            if let Some(items) = xs.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{} = [{}]\n", path, items.join(", ")));
            } else {
                for (i, x) in xs.iter().enumerate() {
                    flatten(&join(&i.to_string()), x, out);
                }
            }
        }
        _ => out.push_str(&format!("{} = {}\n", path, scalar(v).unwrap_or_default())),
    }
}
