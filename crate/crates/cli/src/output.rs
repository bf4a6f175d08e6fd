//! Text rendering: fixed-significant-digit numbers, CSV rows, line-delimited
//! records, and the run summary.

use thinwall_core::{OutputFormat, RunSummary, SimulationRecord, CSV_HEADER};

/// JSON/record keys for the numeric fields, in frozen schema order (the
/// non-numeric tail `cs2_stable,min_length_ok,regime` is appended by the
/// writers).
const NUMERIC_KEYS: [&str; 15] = [
    "t",
    "N",
    "b",
    "L",
    "plateau_phi",
    "thinness",
    "wall_charge",
    "grad_energy",
    "phi_dot",
    "phi_tilde",
    "delta_s_over_s",
    "G",
    "l_p",
    "V_eff",
    "cs2",
];

/// Scientific notation with a fixed number of significant digits, e.g.
/// `format_sig(0.14, 12) == "1.40000000000e-1"`. Parsing the result back
/// reproduces the value to that precision.
pub fn format_sig(x: f64, sig: usize) -> String {
    format!("{:.*e}", sig.saturating_sub(1), x)
}

fn push_bool(out: &mut String, b: bool) {
    out.push_str(if b { "true" } else { "false" });
}

pub fn csv_line(r: &SimulationRecord, sig: usize) -> String {
    let mut out = String::new();
    for v in r.numeric_values() {
        out.push_str(&format_sig(v, sig));
        out.push(',');
    }
    push_bool(&mut out, r.cs2_stable);
    out.push(',');
    push_bool(&mut out, r.min_length_ok);
    out.push(',');
    out.push_str(&r.regime.to_string());
    out
}

/// One record as a JSON object on a single line, same field set and numeric
/// formatting as the CSV.
pub fn records_line(r: &SimulationRecord, sig: usize) -> String {
    let mut out = String::from("{");
    for (key, v) in NUMERIC_KEYS.iter().zip(r.numeric_values()) {
        out.push('"');
        out.push_str(key);
        out.push_str("\":");
        out.push_str(&format_sig(v, sig));
        out.push(',');
    }
    out.push_str("\"cs2_stable\":");
    push_bool(&mut out, r.cs2_stable);
    out.push_str(",\"min_length_ok\":");
    push_bool(&mut out, r.min_length_ok);
    out.push_str(",\"regime\":\"");
    out.push_str(&r.regime.to_string());
    out.push_str("\"}");
    out
}

/// Render the whole series in the chosen format (CSV carries the frozen
/// header line, records are self-describing).
pub fn render_series(records: &[SimulationRecord], format: OutputFormat, sig: usize) -> String {
    let mut out = String::new();
    if format == OutputFormat::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for r in records {
        out.push_str(&match format {
            OutputFormat::Csv => csv_line(r, sig),
            OutputFormat::Records => records_line(r, sig),
        });
        out.push('\n');
    }
    out
}

fn entry_or_never(t: Option<f64>, sig: usize) -> String {
    t.map_or_else(|| "never".to_string(), |t| format_sig(t, sig))
}

/// Human-readable run summary: the three regime-entry times (or `never`)
/// plus endpoint observables.
pub fn summary_text(n_records: usize, s: &RunSummary, sig: usize) -> String {
    let f = &s.final_record;
    let mut out = String::new();
    out.push_str(&format!("records: {n_records}\n"));
    out.push_str(&format!(
        "thin_wall_entry: {}\n",
        entry_or_never(s.thin_wall_entry, sig)
    ));
    out.push_str(&format!(
        "breakdown_entry: {}\n",
        entry_or_never(s.breakdown_entry, sig)
    ));
    out.push_str(&format!("cc_entry: {}\n", entry_or_never(s.cc_entry, sig)));
    out.push_str(&format!("dominance_steps: {}\n", s.dominance_steps));
    out.push_str(&format!("final_regime: {}\n", f.regime));
    out.push_str(&format!(
        "final_plateau_phi: {}\n",
        format_sig(f.plateau_phi, sig)
    ));
    out.push_str(&format!("final_v_eff: {}\n", format_sig(f.v_eff, sig)));
    out.push_str(&format!("final_g: {}\n", format_sig(f.g, sig)));
    out.push_str(&format!("final_cs2: {}\n", format_sig(f.cs2, sig)));
    out
}

/// Quote a manifest field if it contains CSV-special characters.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use thinwall_core::{run_simulation, summarize, RunConfig};

    fn short_run() -> Vec<SimulationRecord> {
        let mut cfg = RunConfig::default();
        cfg.numerics.t_end = 0.1;
        run_simulation(&cfg).unwrap()
    }

    #[test]
    fn significant_digit_format_round_trips() {
        for &x in &[0.14, -6.283185281278366, 1.0e-30, 57.735026918962576, 0.0] {
            let s = format_sig(x, 12);
            let back: f64 = s.parse().unwrap();
            let tol = 1e-11 * x.abs().max(1e-300);
            assert!(
                (back - x).abs() <= tol,
                "{x} -> {s} -> {back} off by more than {tol}"
            );
        }
        assert_eq!(format_sig(0.14, 12), "1.40000000000e-1");
        assert_eq!(format_sig(2.0, 3), "2.00e0");
    }

    #[test]
    fn csv_line_has_the_full_field_count() {
        let records = short_run();
        let line = csv_line(&records[0], 12);
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
        assert!(line.ends_with("ThinWall"));
    }

    #[test]
    fn records_line_is_valid_json_with_schema_keys() {
        let records = short_run();
        let line = records_line(&records[3], 12);
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), 18);
        for key in CSV_HEADER.split(',') {
            assert!(obj.contains_key(key), "missing key {key}");
        }
        assert!(obj["cs2_stable"].is_boolean());
        assert_eq!(obj["regime"].as_str().unwrap(), "ThinWall");
        let t = obj["t"].as_f64().unwrap();
        assert!((t - records[3].t).abs() < 1e-12);
    }

    #[test]
    fn summary_says_never_for_unreached_regimes() {
        let records = short_run();
        let s = summarize(&records, 10.0).unwrap();
        let text = summary_text(records.len(), &s, 12);
        assert!(text.contains("records: 11"));
        assert!(text.contains("thin_wall_entry: 0.00000000000e0"));
        assert!(text.contains("cc_entry: never"));
    }

    #[test]
    fn manifest_fields_are_escaped_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
