//! Output formatting helpers shared by the subcommands.

/// `x` with `digits` significant digits as a plain decimal (no exponent),
/// e.g. `significant(9.10588, 4)` is `"9.106"`.
pub fn significant(x: f64, digits: u32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Fixed six decimals, the layout used in results tables.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

/// First header line for every output file: tool, version, subcommand, and
/// the effective configuration. Deliberately free of timestamps so reruns
/// are byte-identical.
pub fn provenance(subcommand: &str, pairs: &[(&str, String)]) -> String {
    let mut line = format!("# dyadnet v{} {subcommand}", env!("CARGO_PKG_VERSION"));
    for (key, value) in pairs {
        line.push(' ');
        line.push_str(key);
        line.push('=');
        line.push_str(value);
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_placement() {
        assert_eq!(significant(9.10588, 4), "9.106");
        assert_eq!(significant(0.0123456, 4), "0.01235");
        assert_eq!(significant(12345.6, 4), "12346");
        assert_eq!(significant(-3.75816, 4), "-3.758");
        assert_eq!(significant(0.0, 4), "0");
    }

    #[test]
    fn provenance_shape() {
        let line = provenance("ingest", &[("merge-gap", "75".into())]);
        assert!(line.starts_with("# dyadnet v"));
        assert!(line.ends_with(" ingest merge-gap=75"));
    }
}
