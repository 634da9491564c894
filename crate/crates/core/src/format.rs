//! Deterministic text output for CSV tables.

/// Rounds to 12 significant digits and prints the shortest decimal that
/// round-trips the rounded value. Negative zero prints as `0`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}

/// Value rounded to 12 significant digits, for JSON reports.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

pub fn csv_row(values: &[f64]) -> String {
    let mut row = values.iter().map(|v| sig12(*v)).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}
