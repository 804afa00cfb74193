//! Clusters and the min-sum cluster operators.
//!
//! A `t`-cluster is an array of `2^t` log-likelihoods indexed by `t` bits
//! `x_0..x_{t-1}`. Larger values mean more likely; every cluster is only
//! meaningful up to one additive constant shared by all of its entries.
//!
//! Each operator comes in two forms: a slice kernel (`*_into`) used by the
//! decoders on their flat storage, and a checked wrapper over [`Cluster`].
//! The kernels store entry `x` at offset `x_0 + 2 x_1 + ...`; a [`Cluster`]
//! lists its entries in tuple order instead (`x_0` varies slowest), and the
//! wrappers convert between the two.
//! All kernels tally the float additions and comparisons they perform into
//! an [`OpCounter`]; sign tests, absolute values, negation and halving are
//! free.

use std::fmt;

use crate::error::{Error, Result};

/// Largest cluster dimension any schedule uses.
pub const MAX_DIM: usize = 5;

/// Float additions and comparisons performed so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub additions: u64,
    pub comparisons: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.additions + self.comparisons
    }

    #[inline]
    pub fn add(&mut self, count: u64) {
        self.additions += count;
    }

    #[inline]
    pub fn compare(&mut self, count: u64) {
        self.comparisons += count;
    }

    pub fn merge(&mut self, other: &OpCounter) {
        self.additions += other.additions;
        self.comparisons += other.comparisons;
    }
}

impl std::ops::Sub for OpCounter {
    type Output = OpCounter;

    fn sub(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            additions: self.additions - rhs.additions,
            comparisons: self.comparisons - rhs.comparisons,
        }
    }
}

/// Log-likelihood ratio `L[0] - L[1]` of a single symbol.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Llr(pub f64);

impl Llr {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1` iff the ratio favours the symbol `1`, i.e. is negative.
    pub fn hard_decision(self) -> u8 {
        u8::from(self.0 < 0.0)
    }
}

impl fmt::Display for Llr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A `dim`-cluster of `2^dim` finite values, listed in tuple order: the
/// entry for `(x_0, ..., x_{dim-1})` sits at offset `x_{dim-1} + 2 x_{dim-2} + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    dim: usize,
    values: Vec<f64>,
}

impl Cluster {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            values: vec![0.0; 1 << dim],
        })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let dim = len.trailing_zeros() as usize;
        check_dim(dim)?;
        Ok(Self { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Value at the index tuple `bits` (`bits[0]` is `x_0`).
    pub fn get(&self, bits: &[u8]) -> f64 {
        self.values[reverse(pack(bits), self.dim)]
    }

    /// Entries in kernel layout.
    fn packed(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|x| self.values[reverse(x, self.dim)])
            .collect()
    }

    /// Builds a cluster from entries in kernel layout.
    fn from_packed(dim: usize, packed: &[f64]) -> Self {
        Self {
            dim,
            values: (0..packed.len()).map(|x| packed[reverse(x, dim)]).collect(),
        }
    }
}

/// Reverses the low `dim` bits of `x`.
#[inline]
fn reverse(x: usize, dim: usize) -> usize {
    x.reverse_bits() >> (usize::BITS as usize - dim)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

fn expect_dim(c: &Cluster, expected: usize) -> Result<()> {
    if c.dim != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: c.dim,
        });
    }
    Ok(())
}

fn expect_ubits(ubits: &[u8], i: usize) -> Result<()> {
    crate::transform::check_len(ubits.len(), i)?;
    crate::transform::check_bits(ubits)
}

#[inline]
pub(crate) fn pack(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| acc | (usize::from(b & 1) << k))
}

/// Cluster indices `(x·X, x·Z)` for a `2 half`-bit vector `x` packed
/// LSB-first. The window of the last column is truncated at the end of `x`.
#[inline]
pub(crate) fn xz_index(x: usize, half: usize) -> (usize, usize) {
    let len = 2 * half;
    let ext = x & ((1 << len) - 1);
    let mut a = 0;
    let mut b = 0;
    for j in 0..half {
        let w = ext >> (2 * j);
        let z = (w >> 1) ^ (w >> 2);
        a |= ((w ^ z) & 1) << j;
        b |= (z & 1) << j;
    }
    (a, b)
}

/// `sigma_{i,t,j}`: combines two `t'`-clusters, `t' = (i + t + j) / 2`, into a
/// `t`-cluster, fixing the first `i` bits to `ubits` and maximizing over the
/// last `j`. Cost `2^t (2^{j+1} - 1)`.
#[allow(clippy::too_many_arguments)]
pub fn sigma_into(
    i: usize,
    t: usize,
    j: usize,
    a: &[f64],
    b: &[f64],
    ubits: usize,
    out: &mut [f64],
    ctr: &mut OpCounter,
) {
    let half = (i + t + j) / 2;
    for (x, slot) in out[..1 << t].iter_mut().enumerate() {
        let head = ubits | (x << i);
        let mut best = f64::NEG_INFINITY;
        for tail in 0..1usize << j {
            let (ai, bi) = xz_index(head | (tail << (i + t)), half);
            let v = a[ai] + b[bi];
            if tail == 0 {
                best = v;
            } else {
                ctr.compare(1);
                if v > best {
                    best = v;
                }
            }
        }
        ctr.add(1 << j);
        *slot = best;
    }
}

/// `mu_{i,t,j}`: fixes the first `i` bits of a `(i + t + j)`-cluster and
/// maximizes over the last `j`. Cost `2^t (2^j - 1)`.
pub fn mu_into(
    i: usize,
    t: usize,
    j: usize,
    a: &[f64],
    ubits: usize,
    out: &mut [f64],
    ctr: &mut OpCounter,
) {
    for (x, slot) in out[..1 << t].iter_mut().enumerate() {
        let head = ubits | (x << i);
        let mut best = a[head];
        for tail in 1..1usize << j {
            let v = a[head | (tail << (i + t))];
            if v > best {
                best = v;
            }
        }
        ctr.compare((1 << j) - 1);
        *slot = best;
    }
}

/// `Delta mu_{i,1,j}`: the difference of the two entries of `mu_{i,1,j}`.
/// Cost `2^{j+1} - 1`.
pub fn delta_mu_slice(i: usize, j: usize, a: &[f64], ubits: usize, ctr: &mut OpCounter) -> f64 {
    let mut pair = [0.0; 2];
    mu_into(i, 1, j, a, ubits, &mut pair, ctr);
    ctr.add(1);
    pair[0] - pair[1]
}

/// Both maxima of the crosswise pairwise sums of `s` and `t`,
/// `(max(s0+t0, s1+t1), max(s0+t1, s1+t0))`, given the precomputed
/// differences `delta = s0 - s1` and `cap_delta = t0 - t1`. Three counted
/// operations.
#[inline]
pub fn max2d(
    s: [f64; 2],
    t: [f64; 2],
    delta: f64,
    cap_delta: f64,
    ctr: &mut OpCounter,
) -> [f64; 2] {
    let si = usize::from(delta < 0.0);
    let ti = usize::from(cap_delta < 0.0);
    let mut r = [0.0; 2];
    let hi = s[si] + t[ti];
    r[si ^ ti] = hi;
    r[si ^ ti ^ 1] = hi - delta.abs().min(cap_delta.abs());
    ctr.add(2);
    ctr.compare(1);
    r
}

/// `sigma_{i,t,1}` built from [`max2d`]: output entries are produced in pairs
/// that differ in the last two output bits, and the differences of the input
/// halves are computed once per distinct input prefix. Requires `t >= 2`.
pub fn sigma_fast_into(
    i: usize,
    t: usize,
    a: &[f64],
    b: &[f64],
    ubits: usize,
    out: &mut [f64],
    ctr: &mut OpCounter,
) {
    debug_assert!(t >= 2);
    let half = (i + t).div_ceil(2);
    let top = 1usize << (half - 1);
    let mut deltas = [f64::NAN; 1 << (MAX_DIM - 1)];
    let mut cap_deltas = [f64::NAN; 1 << (MAX_DIM - 1)];
    let pair_mask = (1usize << (t - 1)) | (1usize << (t - 2));
    for x in 0..1usize << (t - 1) {
        // last output bit and the free bit are both zero here
        let (alpha, beta) = xz_index(ubits | (x << i), half);
        if deltas[alpha].is_nan() {
            deltas[alpha] = a[alpha] - a[alpha | top];
            ctr.add(1);
        }
        if cap_deltas[beta].is_nan() {
            cap_deltas[beta] = b[beta] - b[beta | top];
            ctr.add(1);
        }
        let r = max2d(
            [a[alpha], a[alpha | top]],
            [b[beta], b[beta | top]],
            deltas[alpha],
            cap_deltas[beta],
            ctr,
        );
        out[x] = r[0];
        out[x ^ pair_mask] = r[1];
    }
}

/// `sigma-bar_{i,t,0}`: valid only where the exact output satisfies
/// `C[x, 1] = -C[x, 0]`. Computes the `x_{t-1} = 0` half and negates it.
/// Cost `2^{t-1}`.
pub fn sigma_bar_into(
    i: usize,
    t: usize,
    a: &[f64],
    b: &[f64],
    ubits: usize,
    out: &mut [f64],
    ctr: &mut OpCounter,
) {
    let half = (i + t) / 2;
    let hi = 1usize << (t - 1);
    for x in 0..hi {
        let (ai, bi) = xz_index(ubits | (x << i), half);
        let v = a[ai] + b[bi];
        out[x] = v;
        out[x | hi] = -v;
    }
    ctr.add(hi as u64);
}

/// `mu-bar_{i,t,1}`: `|A[u, x, 0]|`, valid for inputs antisymmetric in their
/// last bit. Free.
pub fn mu_bar_into(i: usize, t: usize, a: &[f64], ubits: usize, out: &mut [f64]) {
    for x in 0..1usize << t {
        out[x] = a[ubits | (x << i)].abs();
    }
}

/// Maps a 4-bit codeword pattern `x` (bit `k` = `x_k`) of the size-4
/// transform to its input `v`.
#[inline]
fn inverse_q4(x: usize) -> usize {
    let bit = |k: usize| (x >> k) & 1;
    let v3 = bit(3);
    let v2 = bit(2) ^ bit(3);
    let v1 = bit(1) ^ bit(2);
    let v0 = bit(0) ^ bit(1) ^ bit(2) ^ bit(3);
    v0 | (v1 << 1) | (v2 << 2) | (v3 << 3)
}

/// Layer-2 4-cluster over the inputs `v` of a size-4 sub-transform whose
/// outputs see the channel LLRs `y4`: entry `v` is `sum_k (x_k - 1/2) y4[k]`
/// with `x = v·Q(4)`. The `x_3 = 0` half is walked in Gray-code order of `x`
/// (3 additions for the start, one per step); the other half is its negation.
/// Cost 10.
pub fn gray_init_into(y4: [f64; 4], out: &mut [f64], ctr: &mut OpCounter) {
    let mut value = -((y4[0] + y4[1]) + (y4[2] + y4[3])) * 0.5;
    ctr.add(3);
    out[0] = value;
    out[8] = -value;
    let mut prev = 0usize;
    for h in 1..8usize {
        let x = h ^ (h >> 1);
        let flipped = (x ^ prev).trailing_zeros() as usize;
        if x & (1 << flipped) != 0 {
            value += y4[flipped];
        } else {
            value -= y4[flipped];
        }
        ctr.add(1);
        let v = inverse_q4(x);
        out[v] = value;
        out[v | 8] = -value;
        prev = x;
    }
}

fn checked_half(i: usize, t: usize, j: usize) -> Result<usize> {
    if !(i + t + j).is_multiple_of(2) || t == 0 {
        return Err(Error::Parity { i, t, j });
    }
    Ok((i + t + j) / 2)
}

/// Checked [`sigma_into`] over clusters.
pub fn sigma_generic(
    i: usize,
    t: usize,
    j: usize,
    a: &Cluster,
    b: &Cluster,
    ubits: &[u8],
    ctr: &mut OpCounter,
) -> Result<Cluster> {
    let half = checked_half(i, t, j)?;
    expect_dim(a, half)?;
    expect_dim(b, half)?;
    expect_ubits(ubits, i)?;
    check_dim(t)?;
    let mut out = vec![0.0; 1 << t];
    sigma_into(
        i,
        t,
        j,
        &a.packed(),
        &b.packed(),
        pack(ubits),
        &mut out,
        ctr,
    );
    Ok(Cluster::from_packed(t, &out))
}

/// Checked [`mu_into`] over clusters.
pub fn mu_generic(
    i: usize,
    t: usize,
    j: usize,
    a: &Cluster,
    ubits: &[u8],
    ctr: &mut OpCounter,
) -> Result<Cluster> {
    expect_dim(a, i + t + j)?;
    expect_ubits(ubits, i)?;
    check_dim(t)?;
    let mut out = vec![0.0; 1 << t];
    mu_into(i, t, j, &a.packed(), pack(ubits), &mut out, ctr);
    Ok(Cluster::from_packed(t, &out))
}

/// Checked [`delta_mu_slice`].
pub fn delta_mu(i: usize, j: usize, a: &Cluster, ubits: &[u8], ctr: &mut OpCounter) -> Result<Llr> {
    expect_dim(a, i + 1 + j)?;
    expect_ubits(ubits, i)?;
    Ok(Llr(delta_mu_slice(i, j, &a.packed(), pack(ubits), ctr)))
}

/// Checked [`sigma_fast_into`] for any `sigma_{i,t,1}` with `t >= 2`.
pub fn sigma_fast(
    i: usize,
    t: usize,
    a: &Cluster,
    b: &Cluster,
    ubits: &[u8],
    ctr: &mut OpCounter,
) -> Result<Cluster> {
    let half = checked_half(i, t, 1)?;
    if t < 2 {
        return Err(Error::InvalidOperator(format!(
            "pairwise maxima need at least two output bits, got t={t}"
        )));
    }
    expect_dim(a, half)?;
    expect_dim(b, half)?;
    expect_ubits(ubits, i)?;
    check_dim(t)?;
    let mut out = vec![0.0; 1 << t];
    sigma_fast_into(i, t, &a.packed(), &b.packed(), pack(ubits), &mut out, ctr);
    Ok(Cluster::from_packed(t, &out))
}

/// `sigma_{0,3,1}` on two 2-clusters, 16 counted operations.
pub fn sigma_031_fast(s: &Cluster, t: &Cluster, ctr: &mut OpCounter) -> Result<Cluster> {
    sigma_fast(0, 3, s, t, &[], ctr)
}

/// `sigma_{1,4,1}` on two 3-clusters with the first bit fixed to `u`, 32
/// counted operations.
pub fn sigma_141_fast(s: &Cluster, t: &Cluster, u: u8, ctr: &mut OpCounter) -> Result<Cluster> {
    sigma_fast(1, 4, s, t, &[u], ctr)
}

/// Checked [`sigma_bar_into`]. Antisymmetry of the exact result is the
/// caller's responsibility.
pub fn sigma_bar(
    i: usize,
    t: usize,
    a: &Cluster,
    b: &Cluster,
    ubits: &[u8],
    ctr: &mut OpCounter,
) -> Result<Cluster> {
    let half = checked_half(i, t, 0)?;
    expect_dim(a, half)?;
    expect_dim(b, half)?;
    expect_ubits(ubits, i)?;
    check_dim(t)?;
    let mut out = vec![0.0; 1 << t];
    sigma_bar_into(i, t, &a.packed(), &b.packed(), pack(ubits), &mut out, ctr);
    Ok(Cluster::from_packed(t, &out))
}

/// Checked [`mu_bar_into`].
pub fn mu_bar(i: usize, t: usize, a: &Cluster, ubits: &[u8]) -> Result<Cluster> {
    expect_dim(a, i + t + 1)?;
    expect_ubits(ubits, i)?;
    check_dim(t)?;
    let mut out = vec![0.0; 1 << t];
    mu_bar_into(i, t, &a.packed(), pack(ubits), &mut out);
    Ok(Cluster::from_packed(t, &out))
}

/// See [`gray_init_into`].
pub fn gray_init_layer2(y4: [f64; 4], ctr: &mut OpCounter) -> Cluster {
    let mut out = [0.0; 16];
    gray_init_into(y4, &mut out, ctr);
    Cluster::from_packed(4, &out)
}

/// Operator families known to the cost model and the schedules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Generic `sigma_{i,t,j}`.
    Sigma,
    /// `sigma_{i,t,1}` evaluated with pairwise maxima.
    SigmaFast,
    /// Half-and-negate `sigma-bar_{i,t,0}`.
    SigmaBar,
    Mu,
    MuBar,
    /// `Delta mu_{i,1,j}`; `t` is always 1.
    DeltaMu,
    /// Layer-2 Gray-code initializer (`sigma-bar_{0,4,0}` on channel LLRs).
    GrayInit,
}

/// An operator together with its `(i, t, j)` parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OpId {
    pub kind: OpKind,
    pub i: usize,
    pub t: usize,
    pub j: usize,
}

impl OpId {
    pub const fn new(kind: OpKind, i: usize, t: usize, j: usize) -> Self {
        Self { kind, i, t, j }
    }

    /// Dimension of the cluster(s) the operator reads.
    pub fn input_dim(&self) -> usize {
        match self.kind {
            OpKind::Sigma | OpKind::SigmaFast | OpKind::SigmaBar => (self.i + self.t + self.j) / 2,
            OpKind::Mu | OpKind::MuBar | OpKind::DeltaMu => self.i + self.t + self.j,
            OpKind::GrayInit => 0,
        }
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            OpKind::Sigma => "sigma",
            OpKind::SigmaFast => "sigma*",
            OpKind::SigmaBar => "sigma-bar",
            OpKind::Mu => "mu",
            OpKind::MuBar => "mu-bar",
            OpKind::DeltaMu => "delta-mu",
            OpKind::GrayInit => "gray-init",
        };
        write!(f, "{name}_{{{},{},{}}}", self.i, self.t, self.j)
    }
}

/// Counted cost of one call of `op`.
pub fn cost_of(op: OpId) -> Result<u64> {
    let OpId { kind, i, t, j } = op;
    let invalid = || Error::InvalidOperator(op.to_string());
    match kind {
        OpKind::Sigma => {
            checked_half(i, t, j)?;
            Ok((1u64 << t) * ((1u64 << (j + 1)) - 1))
        }
        OpKind::SigmaFast => {
            if j != 1 || t < 2 {
                return Err(invalid());
            }
            let half = checked_half(i, t, j)?;
            if half > MAX_DIM {
                return Err(invalid());
            }
            Ok(fast_sigma_cost(i, t, half))
        }
        OpKind::SigmaBar => {
            if j != 0 {
                return Err(invalid());
            }
            checked_half(i, t, j)?;
            Ok(1u64 << (t - 1))
        }
        OpKind::Mu => Ok((1u64 << t) * ((1u64 << j) - 1)),
        OpKind::MuBar => {
            if j != 1 {
                return Err(invalid());
            }
            Ok(0)
        }
        OpKind::DeltaMu => {
            if t != 1 {
                return Err(invalid());
            }
            Ok((1u64 << (j + 1)) - 1)
        }
        OpKind::GrayInit => {
            if (i, t, j) != (0, 4, 0) {
                return Err(invalid());
            }
            Ok(10)
        }
    }
}

/// Three operations per output pair plus one subtraction per distinct input
/// prefix of either operand.
fn fast_sigma_cost(i: usize, t: usize, half: usize) -> u64 {
    let mut seen_a = 0u64;
    let mut seen_b = 0u64;
    for x in 0..1usize << (t - 1) {
        // the fixed bits do not change which prefixes occur, only their labels
        let (alpha, beta) = xz_index(x << i, half);
        seen_a |= 1 << alpha;
        seen_b |= 1 << beta;
    }
    u64::from(seen_a.count_ones() + seen_b.count_ones()) + 3 * (1u64 << (t - 1))
}
