use std::io;

use serde_json::ser::Formatter;

/// Shortest stable rendering with 17 significant digits: fixed notation for
/// exponents in `-5..17`, scientific otherwise.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    if v == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        sci
    }
}

/// Single-line JSON with `", "` and `": "` separators.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpacedFormatter;

impl Formatter for SpacedFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(5.0 / 18.0), "0.27777777777777779");
        assert_eq!(format_f64(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_f64(1.0), "1.0000000000000000");
        assert_eq!(format_f64(-0.5), "-0.50000000000000000");
        assert_eq!(format_f64(12.5), "12.500000000000000");
        assert_eq!(format_f64(5.11e-17), "5.1100000000000001e-17");
        assert_eq!(format_f64(0.0), "0.0000000000000000");
    }

    #[test]
    fn round_trips() {
        for v in [0.1, 2.0 / 9.0, 1e-300, 6.02e23, -7.0 / 15.0, 1e-5, 9.99999e-6] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn spaced_object() {
        #[derive(serde::Serialize)]
        struct S {
            a: f64,
            b: Vec<u8>,
            c: bool,
        }
        let s = to_json(&S {
            a: 0.5,
            b: vec![1, 2],
            c: true,
        });
        assert_eq!(s, r#"{"a": 0.50000000000000000, "b": [1, 2], "c": true}"#);
    }
}
