//! Locale-independent number formatting for CSV output.

/// 12 significant digits, '.' separator, trailing zeros trimmed. Plain
/// notation for exponents in -6..16, scientific otherwise.
pub fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-6..16).contains(&exp) {
        let m = trim(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    // Round through the scientific string so both paths agree on 12 digits.
    let rounded: f64 = sci.parse().expect("valid float");
    trim(&format!("{rounded:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Join already formatted fields into one CSV line.
pub(crate) fn row<I: IntoIterator<Item = String>>(fields: I) -> String {
    let mut line = fields.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(-0.1875), "-0.1875");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_float(1221.7744), "1221.7744");
        assert_eq!(fmt_float(4.75e-5), "0.0000475");
        assert_eq!(fmt_float(1.5e-9), "1.5e-9");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(123456789012345.0), "123456789012000");
    }
}
