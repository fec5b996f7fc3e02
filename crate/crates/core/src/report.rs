//! Number formatting shared by every emitted artifact.

/// Decimal rendering rounded to 12 significant digits, no exponent and no
/// locale separators. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}
