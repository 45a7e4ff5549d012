use serde_json::{Map, Value};

use super::appendix_c::InequalityReport;
use super::config::OutputFormat;
use super::sweep::SweepRow;

/// 12 significant digits; fixed notation for moderate magnitudes with
/// trailing zeros removed, scientific otherwise.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let Some(first) = rows.first() else {
        return out;
    };
    let mut header = vec!["p".to_string()];
    for (name, _) in &first.values {
        header.push(name.to_string());
        header.push(format!("{name}_status"));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut fields = vec![format_float(row.p)];
        for (_, m) in &row.values {
            fields.push(m.value.map(format_float).unwrap_or_default());
            fields.push(m.status.name().to_string());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn rows_to_json(rows: &[SweepRow]) -> String {
    let array: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert("p".into(), Value::from(row.p));
            for (name, m) in &row.values {
                obj.insert(
                    name.to_string(),
                    m.value.map(Value::from).unwrap_or(Value::Null),
                );
                obj.insert(format!("{name}_status"), Value::from(m.status.name()));
            }
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(array)).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render_rows(rows: &[SweepRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows),
    }
}

pub fn render_report(report: &InequalityReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("d,points,max_gap,argmax_p,max_identity_residual\n");
            for s in &report.per_dimension {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.d,
                    s.points,
                    format_float(s.max_gap),
                    format_float(s.argmax_p),
                    format_float(s.max_identity_residual)
                ));
            }
            out
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sweep::{Measured, ValueStatus};

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(0.29), "0.29");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(std::f64::consts::SQRT_2), "1.41421356237");
        assert_eq!(format_float(-2.5e-9), "-2.50000000000e-9");
        assert_eq!(format_float(1234.5), "1234.5");
    }

    fn sample() -> Vec<SweepRow> {
        vec![SweepRow {
            p: 0.0,
            values: vec![
                ("rom_plus", Measured::ok(1.5)),
                (
                    "rom_minus",
                    Measured {
                        value: None,
                        status: ValueStatus::ZeroWeight,
                    },
                ),
            ],
        }]
    }

    #[test]
    fn csv_layout() {
        let csv = rows_to_csv(&sample());
        assert_eq!(
            csv,
            "p,rom_plus,rom_plus_status,rom_minus,rom_minus_status\n0,1.5,ok,,zero_weight\n"
        );
        assert_eq!(rows_to_csv(&[]), "");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&rows_to_json(&sample())).unwrap();
        assert_eq!(v[0]["rom_plus"], 1.5);
        assert!(v[0]["rom_minus"].is_null());
        assert_eq!(v[0]["rom_minus_status"], "zero_weight");
    }
}
