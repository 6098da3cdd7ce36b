//! Output formats: JSON with 17 significant digits per float, and the scan CSV.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::jointmeas::UncertaintyReport;

pub const CSV_HEADER: &str = "theta,di1,di2,dm1,dm2,product,bound";

/// `x` with 17 significant digits, trailing zeros trimmed. Plain decimal for
/// exponents in `[-5, 17)`, otherwise `d.ddde±n`. Non-finite values give
/// `None`.
pub fn float17(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(if x.is_sign_negative() { "-0.0" } else { "0.0" }.into());
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };

    let body = if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
        };
        let frac = frac.trim_end_matches('0');
        format!("{int}.{}", if frac.is_empty() { "0" } else { frac })
    } else {
        let frac = digits[1..].trim_end_matches('0');
        format!(
            "{}.{}e{exp}",
            &digits[..1],
            if frac.is_empty() { "0" } else { frac }
        )
    };
    Some(format!("{sign}{body}"))
}

/// Compact JSON formatter that prints floats through [`float17`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Float17Formatter;

impl Formatter for Float17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        match float17(value) {
            Some(s) => writer.write_all(s.as_bytes()),
            None => CompactFormatter.write_null(writer),
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialises `value` as one line of JSON, followed by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17Formatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// One CSV row, without line terminator.
pub fn csv_row(r: &UncertaintyReport) -> String {
    [
        r.theta,
        r.delta_i1,
        r.delta_i2,
        r.delta_m1,
        r.delta_m2,
        r.product,
        r.lower_bound,
    ]
    .iter()
    .map(|v| float17(*v).unwrap_or_else(|| "NaN".into()))
    .collect::<Vec<_>>()
    .join(",")
}

/// Header plus one LF-terminated row per report.
pub fn to_csv<'a>(rows: impl IntoIterator<Item = &'a UncertaintyReport>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}
