//! Operation-count report: measured per-decode costs next to the published
//! closed forms and reference values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sc::{Mode, ScDecoder};
use crate::transform::{log2_exact, CodeSpec};

/// Published reference costs `(n, SF, reduced)`, as printed.
const PUBLISHED: &[(usize, f64, f64)] = &[
    (16, 718.0, 272.0),
    (32, 2630.0, 968.0),
    (64, 7734.0, 3000.0),
    (128, 20502.0, 8344.0),
    (1024, 2.86e5, 1.27e5),
    (4096, 1.47e6, 6.70e5),
    (16384, 7.20e7, 3.33e7),
];

/// Published closed-form cost of one decode.
pub fn published_closed_form(mode: Mode, n: usize) -> Result<i64> {
    let m = log2_exact(n)? as f64;
    let n = n as f64;
    let value = match mode {
        Mode::Sf => 40.0 * n * m - 120.5 * n + 86.0,
        Mode::Eff => 20.0 * n * m - 76.5 * n + 216.0,
    };
    Ok(value.round() as i64)
}

/// Published reference value for `n`, if listed.
pub fn published_value(mode: Mode, n: usize) -> Option<f64> {
    PUBLISHED
        .iter()
        .find(|row| row.0 == n)
        .map(|&(_, sf, eff)| match mode {
            Mode::Sf => sf,
            Mode::Eff => eff,
        })
}

/// Rounds to `digits` significant digits.
fn round_significant(x: f64, digits: i32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpcountRow {
    pub n: usize,
    pub mode: String,
    /// Counted operations of one instrumented decode.
    pub measured: u64,
    /// Published closed form evaluated at `n`.
    pub closed_form: i64,
    /// Published reference value, empty when not listed.
    pub published_value: Option<f64>,
    /// `measured / (n log2 n)`, two decimals.
    pub ratio: f64,
    pub note: String,
}

/// Counted operations of one decode (the schedule does not depend on the
/// input).
pub fn measure_ops(n: usize, mode: Mode) -> Result<u64> {
    let spec = CodeSpec::from_frozen(n, &[])?;
    Ok(ScDecoder::new(n, mode)?
        .decode(&spec, &vec![0.0; n])?
        .ops
        .total())
}

fn note_for(measured: u64, closed_form: i64, published: Option<f64>) -> String {
    let mut notes = Vec::new();
    if measured as i64 != closed_form {
        notes.push(format!(
            "measured differs from closed form by {}",
            measured as i64 - closed_form
        ));
    }
    if let Some(p) = published {
        let digits = if p.fract() == 0.0 && p < 1e5 { 6 } else { 3 };
        let expected = round_significant(closed_form as f64, digits);
        if (p / expected - 10.0).abs() < 1e-9 {
            notes.push("published value is 10x the closed form".into());
        } else if p != expected {
            notes.push("published value differs from the closed form".into());
        }
    }
    notes.join("; ")
}

/// Report rows for every power of two in `[min_n, max_n]`.
pub fn opcount_report(min_n: usize, max_n: usize, mode: Mode) -> Result<Vec<OpcountRow>> {
    let min_len = 1usize << mode.min_log_len();
    if min_n < min_len {
        return Err(Error::CodeTooShort {
            n: min_n,
            min: min_len,
        });
    }
    let mut rows = Vec::new();
    let mut n = min_n.next_power_of_two();
    while n <= max_n {
        let m = log2_exact(n)?;
        let measured = measure_ops(n, mode)?;
        let closed_form = published_closed_form(mode, n)?;
        let published_value = published_value(mode, n);
        let ratio = (measured as f64 / (n * m) as f64 * 100.0).round() / 100.0;
        rows.push(OpcountRow {
            n,
            mode: mode.to_string(),
            measured,
            closed_form,
            published_value,
            ratio,
            note: note_for(measured, closed_form, published_value),
        });
        n *= 2;
    }
    Ok(rows)
}
