use crate::error::{CliError, CliResult};

const MAX_POINTS: usize = 100_000;

/// Parses `a:b:step` (inclusive of `b`), a comma list `a,b,c`, or a single
/// number.
pub fn parse_values(flag: &str, text: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("--{flag} `{text}`: {why}"));
    let number = |s: &str| -> CliResult<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(&format!("`{}` is not a number", s.trim())))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite"))
        }
    };
    let text_t = text.trim();
    if text_t.is_empty() {
        return Err(bad("empty value"));
    }
    if text_t.contains(':') {
        let parts: Vec<&str> = text_t.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(bad("range must be start:stop:step"));
        };
        let (a, b, step) = (number(a)?, number(b)?, number(step)?);
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if b < a {
            return Err(bad("stop must not be below start"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize + 1;
        if n > MAX_POINTS {
            return Err(bad(&format!("more than {MAX_POINTS} points")));
        }
        // snap to 12 decimals so 0.1 steps print as 0.3, not 0.30000000000000004
        return Ok((0..n)
            .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    text_t.split(',').map(number).collect()
}
