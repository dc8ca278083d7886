/// `%g`-style formatting with `sig` significant digits and trailing zeros
/// removed.
pub fn sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sig = sig.max(1);
    let exp = v.abs().log10().floor() as i32;
    // rounding can carry into the next decade (999999.5 -> 1e6)
    let rounded: f64 = format!("{:.*e}", sig - 1, v).parse().unwrap_or(v);
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) {
        exp + 1
    } else {
        exp
    };
    if exp < -4 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, v);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim(mantissa), e)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
