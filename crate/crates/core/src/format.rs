//! Text formatting shared by the CSV writers.

/// Formats a real with 17 significant digits (scientific notation), which
/// round-trips every `f64` exactly.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
