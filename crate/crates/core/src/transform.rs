//! The convolutional polarizing transform and the code description it acts on.
//!
//! One layer of the transform maps an input `u` of even length `l` onto two
//! half-length vectors `u·X` and `u·Z`, where `X` and `Z` are the `l × l/2`
//! sliding-window matrices built by [`build_xz`]. The full transform applies
//! the layer recursively to both halves and interleaves the two outputs
//! (the inverse of the "even first, odd last" permutation).
//!
//! Bit order: in every index tuple `x_0` is the first and least significant
//! bit, so [`j_index`] of `(s_0, s_1, ...)` is `s_0 + 2 s_1 + ...`.

use crate::error::{Error, Result};

/// Length, frozen set and information set of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    n: usize,
    m: usize,
    frozen: Vec<usize>,
    info: Vec<usize>,
    is_frozen: Vec<bool>,
}

impl CodeSpec {
    /// Builds a spec from the frozen index set. Indices may be given in any
    /// order but must be distinct and below `n`.
    pub fn from_frozen(n: usize, frozen: &[usize]) -> Result<Self> {
        let m = log2_exact(n)?;
        if n < 2 {
            return Err(Error::InvalidCode(format!("length {n} is below 2")));
        }
        let mut is_frozen = vec![false; n];
        for &f in frozen {
            if f >= n {
                return Err(Error::InvalidCode(format!(
                    "frozen index {f} out of range for length {n}"
                )));
            }
            if is_frozen[f] {
                return Err(Error::InvalidCode(format!("frozen index {f} repeated")));
            }
            is_frozen[f] = true;
        }
        let frozen = (0..n).filter(|&i| is_frozen[i]).collect();
        let info = (0..n).filter(|&i| !is_frozen[i]).collect();
        Ok(Self {
            n,
            m,
            frozen,
            info,
            is_frozen,
        })
    }

    /// Builds a spec from the information index set.
    pub fn from_info(n: usize, info: &[usize]) -> Result<Self> {
        let mut is_info = vec![false; n];
        for &i in info {
            if i >= n {
                return Err(Error::InvalidCode(format!(
                    "information index {i} out of range for length {n}"
                )));
            }
            if is_info[i] {
                return Err(Error::InvalidCode(format!(
                    "information index {i} repeated"
                )));
            }
            is_info[i] = true;
        }
        let frozen: Vec<usize> = (0..n).filter(|&i| !is_info[i]).collect();
        Self::from_frozen(n, &frozen)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn info(&self) -> &[usize] {
        &self.info
    }

    pub fn is_frozen(&self, phase: usize) -> bool {
        self.is_frozen[phase]
    }

    /// Smallest information index.
    pub fn first_info(&self) -> Option<usize> {
        self.info.first().copied()
    }

    /// Largest frozen index.
    pub fn last_frozen(&self) -> Option<usize> {
        self.frozen.last().copied()
    }

    /// Places `message` on the information positions and zeros elsewhere.
    pub fn embed(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_len(message.len(), self.k())?;
        check_bits(message)?;
        let mut u = vec![0u8; self.n];
        for (&pos, &bit) in self.info.iter().zip(message) {
            u[pos] = bit;
        }
        Ok(u)
    }

    /// Extracts the information positions of a full input vector.
    pub fn extract(&self, u: &[u8]) -> Vec<u8> {
        self.info.iter().map(|&i| u[i]).collect()
    }

    /// Encodes a message of `k` bits into a codeword of `n` bits.
    pub fn encode_message(&self, message: &[u8]) -> Result<Vec<u8>> {
        encode(&self.embed(message)?)
    }
}

/// The pair of sliding-window matrices of one transform layer, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XzMatrices {
    pub x: Vec<Vec<u8>>,
    pub z: Vec<Vec<u8>>,
}

/// `X[i][j] = 1` iff `2j <= i <= 2j+2`, `Z[i][j] = 1` iff `2j < i <= 2j+2`.
pub fn build_xz(l: usize) -> Result<XzMatrices> {
    if l == 0 || !l.is_multiple_of(2) {
        return Err(Error::OddLength(l));
    }
    let cols = l / 2;
    let x = (0..l)
        .map(|i| {
            (0..cols)
                .map(|j| u8::from(2 * j <= i && i <= 2 * j + 2))
                .collect()
        })
        .collect();
    let z = (0..l)
        .map(|i| {
            (0..cols)
                .map(|j| u8::from(2 * j < i && i <= 2 * j + 2))
                .collect()
        })
        .collect();
    Ok(XzMatrices { x, z })
}

/// One transform layer: returns `(u·X, u·Z)`.
pub fn layer_forward(u: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    let l = u.len();
    if l == 0 || !l.is_multiple_of(2) {
        return Err(Error::OddLength(l));
    }
    check_bits(u)?;
    Ok(layer_forward_unchecked(u))
}

fn layer_forward_unchecked(u: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let half = u.len() / 2;
    let mut u0 = Vec::with_capacity(half);
    let mut u1 = Vec::with_capacity(half);
    for i in 0..half {
        let next = u.get(2 * i + 2).copied().unwrap_or(0);
        u1.push(u[2 * i + 1] ^ next);
        u0.push(u[2 * i] ^ u[2 * i + 1] ^ next);
    }
    (u0, u1)
}

/// Forward: `(v0, v2, ..., v1, v3, ...)`. Inverse interleaves the two halves back.
pub fn permute_even_odd<T: Clone>(v: &[T], inverse: bool) -> Result<Vec<T>> {
    let l = v.len();
    if !l.is_multiple_of(2) {
        return Err(Error::OddLength(l));
    }
    let half = l / 2;
    let out = if inverse {
        (0..l).map(|i| v[(i % 2) * half + i / 2].clone()).collect()
    } else {
        v.iter()
            .step_by(2)
            .chain(v.iter().skip(1).step_by(2))
            .cloned()
            .collect()
    };
    Ok(out)
}

/// `sum_j s_j 2^j`.
pub fn j_index(s: &[u8]) -> usize {
    s.iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (usize::from(b & 1) << j))
}

/// Computes `u·Q` by the layer recursion.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    let n = u.len();
    log2_exact(n)?;
    if n < 2 {
        return Err(Error::NotPowerOfTwo(n));
    }
    check_bits(u)?;
    Ok(encode_rec(u))
}

fn encode_rec(u: &[u8]) -> Vec<u8> {
    if u.len() == 1 {
        return u.to_vec();
    }
    let (u0, u1) = layer_forward_unchecked(u);
    let a = encode_rec(&u0);
    let b = encode_rec(&u1);
    a.iter().zip(&b).flat_map(|(&x, &y)| [x, y]).collect()
}

/// Inverts [`encode`]: runs the layer recursion backwards.
pub fn encode_inverse(c: &[u8]) -> Result<Vec<u8>> {
    let n = c.len();
    log2_exact(n)?;
    if n < 2 {
        return Err(Error::NotPowerOfTwo(n));
    }
    check_bits(c)?;
    Ok(decode_rec(c))
}

fn decode_rec(c: &[u8]) -> Vec<u8> {
    let n = c.len();
    if n == 1 {
        return c.to_vec();
    }
    let even: Vec<u8> = c.iter().step_by(2).copied().collect();
    let odd: Vec<u8> = c.iter().skip(1).step_by(2).copied().collect();
    let u0 = decode_rec(&even);
    let u1 = decode_rec(&odd);
    let half = n / 2;
    let mut u = vec![0u8; n];
    u[n - 1] = u1[half - 1];
    u[n - 2] = u0[half - 1] ^ u[n - 1];
    for i in (0..half - 1).rev() {
        u[2 * i + 1] = u1[i] ^ u[2 * i + 2];
        u[2 * i] = u0[i] ^ u1[i];
    }
    u
}

/// `log2(n)` for a power of two, `NotPowerOfTwo` otherwise.
pub fn log2_exact(n: usize) -> Result<usize> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros() as usize)
}

pub(crate) fn check_len(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(index) => Err(Error::InvalidBit {
            index,
            value: bits[index],
        }),
        None => Ok(()),
    }
}
