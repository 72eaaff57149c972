//! JSON output with every float written to 17 significant digits, which is
//! enough for any `f64` to round-trip exactly.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

#[derive(Clone, Copy, Debug, Default)]
pub struct RoundTripFormatter;

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no infinities; serde_json writes null for them too
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Writes `value` as a single compact JSON document without a trailing
/// newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> serde_json::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, RoundTripFormatter);
    value.serialize(&mut ser)
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    write_json(&mut out, value).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1f64, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0] {
            let s = to_string(&x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(to_string(&0.125), "1.2500000000000000e-1");
        assert_eq!(to_string(&f64::NAN), "null");
    }

    #[test]
    fn integers_untouched() {
        assert_eq!(to_string(&vec![1u64, 2, 3]), "[1,2,3]");
    }
}
