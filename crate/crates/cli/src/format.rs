//! Locale-independent number formatting for CSV output.

/// `%.9g`-style rendering: nine significant digits, trailing zeros trimmed, scientific
/// notation outside `1e-4 ≤ |v| < 1e9`.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(sig9).unwrap_or_default()
}
