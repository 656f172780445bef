//! Canonical JSON: sorted keys (serde_json's default map) and every float as `{:.16e}`.

use std::io;

use num_complex::Complex;
use rmt_autocorr::scalar::to_c64;
use rmt_autocorr::{Mp, Real, C64};
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::{json, Value};

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_canonical(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FixedFloats);
    v.serialize(&mut ser).expect("Value always serializes");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Floats that JSON cannot hold become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex(z: C64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

/// Double view of a value, plus full decimal text for extended precision.
pub trait Report: Real {
    fn report(z: &Complex<Self>) -> Value;
}

impl Report for f64 {
    fn report(z: &Complex<f64>) -> Value {
        complex(*z)
    }
}

impl Report for Mp {
    fn report(z: &Complex<Mp>) -> Value {
        let mut v = complex(to_c64(z));
        v["re_decimal"] = Value::String(z.re.to_decimal_string());
        v["im_decimal"] = Value::String(z.im.to_decimal_string());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = json!({ "zeta": 1, "alpha": num(5.0), "mid": complex(C64::new(0.1, -2.5)) });
        let s = to_canonical(&v);
        assert_eq!(
            s,
            r#"{"alpha":5.0000000000000000e0,"mid":{"im":-2.5000000000000000e0,"re":1.0000000000000001e-1},"zeta":1}"#
        );
    }

    #[test]
    fn reparse_is_byte_identical() {
        let v = json!({ "x": num(std::f64::consts::PI), "y": [num(1e-300), num(-7.25e12)], "n": null, "b": true });
        let a = to_canonical(&v);
        let back: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(to_canonical(&back), a);
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
