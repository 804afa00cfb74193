//! Exhaustive reference decoders for short codes.
//!
//! Every hypothesis is scored with the decoders' own metric: a codeword `c`
//! scores `sum_i c_i Y_i`, larger is more likely.

use crate::cluster::Llr;
use crate::error::{Error, Result};
use crate::transform::{check_bits, check_len, encode, log2_exact, CodeSpec};

/// Longest code (for LLRs) or largest message (for ML decoding) searched
/// exhaustively.
pub const MAX_EXHAUSTIVE: usize = 20;

fn metric(c: &[u8], y: &[f64]) -> f64 {
    c.iter()
        .zip(y)
        .filter(|(&b, _)| b == 1)
        .map(|(_, &v)| v)
        .sum()
}

/// Generator rows `encode(e_i)` as bit masks.
fn row_masks(n: usize) -> Result<Vec<u32>> {
    (0..n)
        .map(|i| {
            let mut e = vec![0u8; n];
            e[i] = 1;
            Ok(encode(&e)?
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << j)))
        })
        .collect()
}

/// Metric of the codeword of every input word `u` (bit `i` of the index is
/// `u_i`).
fn metric_table(y: &[f64]) -> Result<Vec<f64>> {
    let n = y.len();
    log2_exact(n)?;
    if n > MAX_EXHAUSTIVE {
        return Err(Error::TooManyInfoBits {
            k: n,
            max: MAX_EXHAUSTIVE,
        });
    }
    let rows = row_masks(n)?;
    let mut words = vec![0u32; 1 << n];
    let mut table = vec![0.0; 1 << n];
    for u in 1..1usize << n {
        let low = u.trailing_zeros() as usize;
        words[u] = words[u & (u - 1)] ^ rows[low];
        let w = words[u];
        table[u] = (0..n).filter(|&j| (w >> j) & 1 == 1).map(|j| y[j]).sum();
    }
    Ok(table)
}

fn llr_from_table(table: &[f64], n: usize, prefix: usize, phase: usize) -> f64 {
    let mut best = [f64::NEG_INFINITY; 2];
    for rest in 0..1usize << (n - phase) {
        let v = table[prefix | (rest << phase)];
        let bit = rest & 1;
        if v > best[bit] {
            best[bit] = v;
        }
    }
    best[0] - best[1]
}

/// Min-sum LLR of phase `prefix.len()` given the earlier inputs `prefix`,
/// maximizing over all completions.
pub fn exhaustive_llr(y: &[f64], prefix: &[u8]) -> Result<Llr> {
    let n = y.len();
    if prefix.len() >= n {
        return Err(Error::PhaseOutOfRange {
            phase: prefix.len(),
            n,
        });
    }
    check_bits(prefix)?;
    let table = metric_table(y)?;
    let packed = prefix
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
    Ok(Llr(llr_from_table(&table, n, packed, prefix.len())))
}

/// Min-sum LLR of every phase `φ` given the earlier inputs `u[..φ]`.
pub fn exhaustive_llrs(y: &[f64], u: &[u8]) -> Result<Vec<f64>> {
    let n = y.len();
    check_len(u.len(), n)?;
    check_bits(u)?;
    let table = metric_table(y)?;
    let mut prefix = 0usize;
    let mut out = Vec::with_capacity(n);
    for (phase, &bit) in u.iter().enumerate() {
        out.push(llr_from_table(&table, n, prefix, phase));
        prefix |= usize::from(bit) << phase;
    }
    Ok(out)
}

/// Maximum-likelihood (min-sum) decoding by enumerating all `2^k`
/// codewords. Messages are visited in lexicographic order (`message[0]`
/// most significant) and the first one with the highest metric wins.
pub fn ml_oracle(spec: &CodeSpec, y: &[f64]) -> Result<Vec<u8>> {
    let (n, k) = (spec.n(), spec.k());
    check_len(y.len(), n)?;
    if k > MAX_EXHAUSTIVE {
        return Err(Error::TooManyInfoBits {
            k,
            max: MAX_EXHAUSTIVE,
        });
    }
    // rows[j]: codeword of the message with only bit j set
    let rows: Vec<Vec<u8>> = (0..k)
        .map(|j| {
            let mut msg = vec![0u8; k];
            msg[j] = 1;
            spec.encode_message(&msg)
        })
        .collect::<Result<_>>()?;
    let mut c = vec![0u8; n];
    let mut best = (metric(&c, y), 0usize);
    for step in 1..1usize << k {
        // Gray-code walk; bit `b` of the Gray value is message bit k-1-b
        let b = step.trailing_zeros() as usize;
        for (ci, ri) in c.iter_mut().zip(&rows[k - 1 - b]) {
            *ci ^= ri;
        }
        let index = step ^ (step >> 1);
        let v = metric(&c, y);
        if v > best.0 || (v == best.0 && index < best.1) {
            best = (v, index);
        }
    }
    Ok((0..k)
        .map(|j| ((best.1 >> (k - 1 - j)) & 1) as u8)
        .collect())
}
