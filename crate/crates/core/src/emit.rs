//! Number formatting shared by the CSV and JSON emitters.

/// Significant digits used for every real-valued output.
pub const SIG_DIGITS: usize = 10;

/// Formats `x` with ten significant digits in positional notation.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_digits(x, SIG_DIGITS)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may have carried into a new leading digit, e.g. 9.99.. -> 10.0..
    let sig = s
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    if decimals > 0 && sig > digits {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(fmt_sig(2.055593369479003), "2.055593369");
        assert_eq!(fmt_sig(21.299337384969135), "21.29933738");
        assert_eq!(fmt_sig(0.8340647828484926), "0.8340647828");
        assert_eq!(fmt_sig(0.0), "0.000000000");
        assert_eq!(fmt_sig(-0.5), "-0.5000000000");
        assert_eq!(fmt_sig(123456789012.7), "123456789013");
        assert_eq!(fmt_sig(0.00012345678901), "0.0001234567890");
    }

    #[test]
    fn carry_into_new_digit() {
        assert_eq!(fmt_sig(9.99999999999), "10.00000000");
        assert_eq!(fmt_sig(0.0999999999999), "0.1000000000");
    }
}
