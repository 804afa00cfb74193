//! Text forms of bit vectors and LLR arrays.
//!
//! Bit vectors are written either as binary strings (`0110…`, bit 0 first)
//! or as hexadecimal with a `0x` prefix, four bits per digit, bit 0 in the
//! most significant position of the first digit and the last digit padded
//! with zeros.

use crate::error::{Error, Result};

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

/// Parses a binary or `0x`-prefixed hex string into `len` bits. Hex input
/// must have exactly `ceil(len / 4)` digits with zero padding.
pub fn parse_bits(text: &str, len: usize) -> Result<Vec<u8>> {
    let text = text.trim();
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        if hex.len() != len.div_ceil(4) {
            return Err(parse_error(
                3,
                format!(
                    "expected {} hex digits for {len} bits, found {}",
                    len.div_ceil(4),
                    hex.len()
                ),
            ));
        }
        let mut bits = Vec::with_capacity(4 * hex.len());
        for (offset, ch) in hex.chars().enumerate() {
            let digit = ch
                .to_digit(16)
                .ok_or_else(|| parse_error(offset + 3, format!("'{ch}' is not a hex digit")))?;
            bits.extend((0..4).rev().map(|s| ((digit >> s) & 1) as u8));
        }
        if let Some(pos) = bits[len..].iter().position(|&b| b == 1) {
            return Err(parse_error(
                3 + (len + pos) / 4,
                "padding bits must be zero",
            ));
        }
        bits.truncate(len);
        return Ok(bits);
    }
    let bits = text
        .chars()
        .enumerate()
        .map(|(offset, ch)| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(parse_error(offset + 1, format!("'{ch}' is not a bit"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    if bits.len() != len {
        return Err(parse_error(
            1,
            format!("expected {len} bits, found {}", bits.len()),
        ));
    }
    Ok(bits)
}

/// `0x`-prefixed hex form of `bits`.
pub fn format_hex(bits: &[u8]) -> String {
    let digits: String = bits
        .chunks(4)
        .map(|chunk| {
            let v = chunk
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
            char::from_digit(v, 16).expect("a nibble is a hex digit")
        })
        .collect();
    format!("0x{digits}")
}

/// Binary-string form of `bits`.
pub fn format_binary(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect()
}

/// Parses real numbers separated by commas and/or whitespace.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let base = line.as_ptr() as usize;
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let column = tok.as_ptr() as usize - base + 1;
            let value: f64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                column,
                message: format!("'{tok}' is not a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column,
                    message: "LLRs must be finite".into(),
                });
            }
            values.push(value);
        }
    }
    Ok(values)
}

/// Comma-separated form of `values`.
pub fn format_llrs(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let bits = vec![1, 0, 1, 1, 0, 0, 0, 1, 1];
        let hex = format_hex(&bits);
        assert_eq!(hex, "0xb18");
        assert_eq!(parse_bits(&hex, 9).unwrap(), bits);
        assert_eq!(format_binary(&bits), "101100011");
        assert_eq!(parse_bits("101100011", 9).unwrap(), bits);
    }

    #[test]
    fn rejects_malformed_bits() {
        assert!(matches!(
            parse_bits("0x1g", 8),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(parse_bits("0xb1f", 9).is_err());
        assert!(parse_bits("0xb1", 9).is_err());
        assert!(matches!(
            parse_bits("0120", 4),
            Err(Error::Parse { column: 3, .. })
        ));
        assert!(parse_bits("010", 4).is_err());
    }

    #[test]
    fn llr_text() {
        assert_eq!(
            parse_llrs("1.5, -2\n3e0 0\n").unwrap(),
            vec![1.5, -2.0, 3.0, 0.0]
        );
        assert!(matches!(
            parse_llrs("1,2\n3,x").unwrap_err(),
            Error::Parse {
                line: 2,
                column: 3,
                ..
            }
        ));
        assert!(parse_llrs("inf").is_err());
        assert_eq!(format_llrs(&[1.5, -2.0]), "1.5,-2");
    }
}
