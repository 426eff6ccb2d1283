//! Six-significant-digit number formatting for CSV and JSON output.

use serde::Serializer;

/// Formats like C's `%.6g`, with `inf`/`-inf`/`nan` for non-finite values.
pub fn sig6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to six significant digits.
pub fn round6(v: f64) -> f64 {
    if v.is_finite() {
        sig6(v).parse().expect("sig6 output parses")
    } else {
        v
    }
}

/// Serde adapter: finite values as JSON numbers rounded to six significant
/// digits, non-finite values as the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(round6(*v))
    } else {
        s.serialize_str(&sig6(*v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.04, "0.04"),
            (25.123456789, "25.1235"),
            (0.728749, "0.728749"),
            (100.0, "100"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234567, "1.23457e-05"),
            (-3.5, "-3.5"),
            (999999.5, "1e+06"),
            (0.0, "0"),
            (f64::INFINITY, "inf"),
        ];
        for (v, want) in cases {
            assert_eq!(sig6(v), want, "{v}");
        }
    }

    #[test]
    fn json_numbers_round() {
        #[derive(serde::Serialize)]
        struct T {
            #[serde(serialize_with = "serialize")]
            a: f64,
            #[serde(serialize_with = "serialize")]
            b: f64,
        }
        let s = serde_json::to_string(&T {
            a: 1.0 / 3.0,
            b: f64::INFINITY,
        })
        .unwrap();
        assert_eq!(s, r#"{"a":0.333333,"b":"inf"}"#);
    }
}
