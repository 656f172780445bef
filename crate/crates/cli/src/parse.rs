//! Complex literals of the form `a`, `bi`, `a+bi`, `a-bi`.

use num_complex::Complex;
#[cfg(test)]
use rmt_autocorr::Real;
use rmt_autocorr::{Mp, C64};

/// A complex literal kept as its decimal text, so extended precision can re-read it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub re: String,
    pub im: String,
}

impl Literal {
    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.parse().expect("validated"), self.im.parse().expect("validated"))
    }

    pub fn to_mp(&self, digits: u32) -> Result<Complex<Mp>, String> {
        Ok(Complex::new(Mp::parse_decimal(&self.re, digits)?, Mp::parse_decimal(&self.im, digits)?))
    }
}

fn check_real(s: &str) -> Result<(), String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(())
}

/// Split at the last sign that is neither leading nor part of an exponent.
fn split_point(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    (1..b.len()).rev().find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E'))
}

fn imaginary_part(s: &str) -> String {
    match s {
        "" | "+" => "1".into(),
        "-" => "-1".into(),
        _ => s.trim_start_matches('+').into(),
    }
}

pub fn parse_complex(raw: &str) -> Result<Literal, String> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let lit = if let Some(body) = s.strip_suffix(['i', 'j']) {
        match split_point(body) {
            Some(p) => Literal { re: body[..p].trim_start_matches('+').into(), im: imaginary_part(&body[p..]) },
            None => Literal { re: "0".into(), im: imaginary_part(body) },
        }
    } else {
        Literal { re: s.trim_start_matches('+').into(), im: "0".into() }
    };
    check_real(&lit.re).and_then(|_| check_real(&lit.im)).map_err(|e| format!("in `{raw}`: {e}"))?;
    Ok(lit)
}

/// Comma-separated list of complex literals.
pub fn parse_list(raw: &str) -> Result<Vec<Literal>, String> {
    raw.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> C64 {
        parse_complex(s).unwrap().to_c64()
    }

    #[test]
    fn forms() {
        assert_eq!(v("2"), C64::new(2.0, 0.0));
        assert_eq!(v("-1.5"), C64::new(-1.5, 0.0));
        assert_eq!(v("0.5+0.25i"), C64::new(0.5, 0.25));
        assert_eq!(v("0.5-0.25i"), C64::new(0.5, -0.25));
        assert_eq!(v("-i"), C64::new(0.0, -1.0));
        assert_eq!(v("i"), C64::new(0.0, 1.0));
        assert_eq!(v("3i"), C64::new(0.0, 3.0));
        assert_eq!(v("1e-3-2E+2i"), C64::new(1e-3, -200.0));
        assert_eq!(v(" 1 + 2i "), C64::new(1.0, 2.0));
        assert_eq!(parse_list("1,2i,-1-i").unwrap().len(), 3);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1+", "1+2", "nan", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn extended_reads_decimal_text() {
        let z = parse_complex("0.1+0.2i").unwrap().to_mp(50).unwrap();
        let err = z.re * Mp::from_i64(10) - Mp::from_i64(1);
        assert!(err.abs().to_f64() < 1e-48);
    }

    proptest! {
        #[test]
        fn round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let text = format!("{re}{im:+}i");
            prop_assert_eq!(v(&text), C64::new(re, im));
        }
    }
}
