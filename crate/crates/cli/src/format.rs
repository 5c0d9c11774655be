//! Text formatting shared by the CSV writers and manifests.

/// 17 significant digits in scientific notation; parses back to the same
/// `f64` bit pattern.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_list(values: &[f64]) -> String {
    values.iter().map(|&v| format_float(v)).collect::<Vec<_>>().join(",")
}
