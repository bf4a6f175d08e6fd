//! Sweep-grid parsing and dotted-key overrides on a TOML tree.
//!
//! A grid spec is `key=v1,v2,...;key2=w1,...` where keys are dotted config
//! paths. The cartesian product is enumerated in row-major order with the
//! last axis varying fastest, so sweep output order is deterministic no
//! matter how points are scheduled.

use toml::Value;

/// One sweep axis: a dotted config key and its raw value list.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub key: String,
    pub values: Vec<String>,
}

pub fn parse_grid(spec: &str) -> Result<Vec<GridAxis>, String> {
    let mut axes = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, list) = part
            .split_once('=')
            .ok_or_else(|| format!("grid entry `{part}` is not KEY=V1,V2,..."))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("grid entry `{part}` has an empty key"));
        }
        let values: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(format!("grid entry `{part}` has an empty value"));
        }
        axes.push(GridAxis {
            key: key.to_string(),
            values,
        });
    }
    if axes.is_empty() {
        return Err("empty sweep".to_string());
    }
    Ok(axes)
}

/// Enumerate the full cartesian product as (key, raw value) assignment lists.
pub fn cartesian(axes: &[GridAxis]) -> Vec<Vec<(&str, &str)>> {
    let mut points: Vec<Vec<(&str, &str)>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        for point in &points {
            for value in &axis.values {
                let mut grown = point.clone();
                grown.push((axis.key.as_str(), value.as_str()));
                next.push(grown);
            }
        }
        points = next;
    }
    points
}

/// Interpret a raw override value with TOML-like literal rules: integer,
/// then float, then boolean, falling back to a string.
fn coerce(raw: &str) -> Value {
    if let Ok(i) = raw.parse::<i64>() {
        return Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return Value::Float(f);
    }
    if let Ok(b) = raw.parse::<bool>() {
        return Value::Boolean(b);
    }
    Value::String(raw.to_string())
}

/// Set `key` (dotted path) to `raw` inside a parsed TOML tree, creating
/// intermediate tables as needed. A typo'd path survives here and is then
/// rejected by strict config parsing, which names the unknown key.
pub fn apply_override(root: &mut Value, key: &str, raw: &str) -> Result<(), String> {
    let segments: Vec<&str> = key.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(format!("override key `{key}` has an empty path segment"));
    }
    let mut node = root;
    for seg in &segments[..segments.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| format!("override key `{key}`: `{seg}` is not a table"))?;
        node = table
            .entry(seg.to_string())
            .or_insert_with(|| Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| format!("override key `{key}` does not address a table entry"))?;
    table.insert(segments[segments.len() - 1].to_string(), coerce(raw));
    Ok(())
}

/// Deterministic file stem for a grid point, e.g.
/// `schedule.lambda_n-0.1__numerics.dt-0.01`.
pub fn encode_point(assignments: &[(&str, &str)]) -> String {
    let sanitize = |part: &str| -> String {
        part.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') {
                    c
                } else {
                    '_'
                }
            })
            .collect()
    };
    assignments
        .iter()
        .map(|(k, v)| format!("{}-{}", sanitize(k), sanitize(v)))
        .collect::<Vec<_>>()
        .join("__")
}

/// Human-readable grid-point label for the manifest, e.g.
/// `schedule.lambda_n=0.1;numerics.dt=0.01`.
pub fn point_label(assignments: &[(&str, &str)]) -> String {
    assignments
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_axis_grid() {
        let axes = parse_grid("schedule.lambda_n=0.1,0.3; numerics.dt = 0.01, 0.005").unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[0].key, "schedule.lambda_n");
        assert_eq!(axes[0].values, vec!["0.1", "0.3"]);
        assert_eq!(axes[1].values, vec!["0.01", "0.005"]);
    }

    #[test]
    fn empty_grid_is_rejected_with_fixed_message() {
        assert_eq!(parse_grid("").unwrap_err(), "empty sweep");
        assert_eq!(parse_grid(" ; ;").unwrap_err(), "empty sweep");
        assert!(parse_grid("justakey").is_err());
        assert!(parse_grid("k=1,,2").is_err());
    }

    #[test]
    fn cartesian_order_varies_last_axis_fastest() {
        let axes = parse_grid("a=1,2;b=x,y").unwrap();
        let points = cartesian(&axes);
        let labels: Vec<String> = points.iter().map(|p| point_label(p)).collect();
        assert_eq!(labels, vec!["a=1;b=x", "a=1;b=y", "a=2;b=x", "a=2;b=y"]);
    }

    #[test]
    fn overrides_create_nested_tables_and_coerce_literals() {
        let mut v: Value = toml::from_str("[schedule]\nn0 = 1.0\n").unwrap();
        apply_override(&mut v, "schedule.lambda_n", "0.6").unwrap();
        apply_override(&mut v, "output.precision", "9").unwrap();
        apply_override(&mut v, "entropy.mode", "exact").unwrap();
        let text = toml::to_string(&v).unwrap();
        assert!(text.contains("lambda_n = 0.6"));
        assert!(text.contains("precision = 9"));
        assert!(text.contains("mode = \"exact\""));
        assert!(apply_override(&mut v, "a..b", "1").is_err());
    }

    #[test]
    fn encoded_point_names_are_filesystem_safe() {
        let name = encode_point(&[("schedule.lambda_n", "0.1"), ("entropy.mode", "exact")]);
        assert_eq!(name, "schedule.lambda_n-0.1__entropy.mode-exact");
        assert!(name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_')));
        let odd = encode_point(&[("a/b", "1;2")]);
        assert_eq!(odd, "a_b-1_2");
    }
}
