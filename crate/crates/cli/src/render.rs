//! Table and LaTeX views over the JSON report.

use serde_json::Value;

use crate::Format;

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json values print"),
        Format::Table => {
            let rows = flatten(v, false);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, val)| format!("{k:<width$}  {val}")).collect::<Vec<_>>().join("\n")
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{ll}\n\\hline\n");
            for (k, val) in flatten(v, true) {
                out.push_str(&format!("\\texttt{{{}}} & {} \\\\\n", escape(&k), val));
            }
            out.push_str("\\hline\n\\end{tabular}");
            out
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}").replace('_', "\\_").replace('&', "\\&").replace('#', "\\#").replace('%', "\\%")
}

fn flatten(v: &Value, latex: bool) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    walk(v, String::new(), latex, &mut rows);
    rows
}

fn walk(v: &Value, path: String, latex: bool, rows: &mut Vec<(String, String)>) {
    if let Some(s) = leaf(v, latex) {
        rows.push((path, s));
        return;
    }
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(child, p, latex, rows);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                walk(child, format!("{path}[{i}]"), latex, rows);
            }
        }
        _ => unreachable!("scalars are leaves"),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn leaf(v: &Value, latex: bool) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(if latex { escape(&s) } else { s });
    }
    if let Some(s) = series(v, latex) {
        return Some(s);
    }
    if let Some(z) = gaussian(v) {
        return Some(if latex { format!("${z}$") } else { z });
    }
    if let Value::Array(items) = v {
        if items.is_empty() || items.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_) | Value::Bool(_))) {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            return Some(format!("[{}]", parts.join(", ")));
        }
    }
    None
}

fn gaussian(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    let (re, im) = (obj.get("re")?.as_str()?, obj.get("im")?.as_str()?);
    Some(match (re, im) {
        (r, "0") => r.to_string(),
        ("0", i) => format!("{i}i"),
        (r, i) if i.starts_with('-') => format!("{r} - {}i", &i[1..]),
        (r, i) => format!("{r} + {i}i"),
    })
}

fn series(v: &Value, latex: bool) -> Option<String> {
    let obj = v.as_object()?;
    if obj.get("vars")?.as_i64()? != 1 {
        return None;
    }
    let min = obj.get("min")?.as_i64()?;
    let max = obj.get("max").and_then(Value::as_i64);
    let exact = obj.get("exact").and_then(Value::as_bool).unwrap_or(false);
    let coeffs = obj.get("coeffs")?.as_array()?;
    let pow = |k: i64| match (k, latex) {
        (0, _) => String::new(),
        (1, _) => "t".into(),
        (k, true) => format!("t^{{{k}}}"),
        (k, false) => format!("t^{k}"),
    };
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        let c = c.as_str()?;
        if c == "0" {
            continue;
        }
        let k = min + i as i64;
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c),
        };
        let mag = if latex && mag.contains('/') {
            let (a, b) = mag.split_once('/').unwrap();
            format!("\\frac{{{a}}}{{{b}}}")
        } else {
            mag.to_string()
        };
        let body = match (mag.as_str(), k) {
            ("1", 0) => "1".to_string(),
            ("1", _) => pow(k),
            (m, 0) => m.to_string(),
            (m, _) => format!("{m}{}", pow(k)),
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    if !exact {
        if let Some(m) = max {
            let o = if latex { format!("O(t^{{{}}})", m + 1) } else { format!("O(t^{})", m + 1) };
            out = if out == "0" { o } else { format!("{out} + {o}") };
        }
    }
    Some(if latex { format!("${out}$") } else { out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn series_views() {
        let s = json!({"vars": 1, "min": -1, "max": 2, "coeffs": ["1", "-2", "0", "1/2"]});
        assert_eq!(series(&s, false).unwrap(), "t^-1 - 2 + 1/2t^2 + O(t^3)");
        assert_eq!(series(&s, true).unwrap(), "$t^{-1} - 2 + \\frac{1}{2}t^{2} + O(t^{3})$");
        let e = json!({"vars": 1, "min": 0, "max": 0, "coeffs": ["8"], "exact": true});
        assert_eq!(series(&e, false).unwrap(), "8");
    }

    #[test]
    fn table_rows() {
        let v = json!({"a": {"b": [1, 2]}, "z": {"re": "1", "im": "-1/2"}});
        assert_eq!(render(&v, Format::Table), "a.b  [1, 2]\nz    1 - 1/2i");
        assert!(render(&v, Format::Latex).contains("\\texttt{a.b} & [1, 2]"));
    }
}
