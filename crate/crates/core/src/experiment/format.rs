/// Significant digits used for every number the CLI writes.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Formats `x` like C's `%.10g`: ten significant digits, trailing zeros
/// dropped, scientific notation outside `[1e-4, 1e10)`.
///
/// Rounding is done once, by the standard library's exact decimal
/// conversion (ties to even), so output does not depend on locale or
/// platform.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let mantissa_digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if exp < -4 || exp >= digits as i32 {
        let (head, tail) = mantissa_digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let (int_part, frac) = mantissa_digits.split_at(split);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        let frac = format!("{zeros}{mantissa_digits}");
        format!("0.{}", frac.trim_end_matches('0'))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
