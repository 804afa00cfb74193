//! Operator schedules: which cluster operators run on which layer at which
//! local phase, for the straightforward (SF) and efficient (EFF) decoders,
//! plus a row executor shared by every decoder that stores clusters per
//! layer and dimension.
//!
//! Layer `λ` consists of `2^{m-λ}` sub-transforms of size `2^λ`;
//! sub-transform `I` on layer `λ` is fed by sub-transforms `I` and `I + N`,
//! `N = 2^{m-λ}`, on layer `λ - 1`. An operator with `i` fixed bits at local
//! phase `φ` fixes them to the decisions `û_{φ-i}, ..., û_{φ-1}` of its own
//! sub-transform.

use crate::cluster::{
    delta_mu_slice, mu_bar_into, mu_into, sigma_bar_into, sigma_fast_into, sigma_into, OpCounter,
    OpId, OpKind,
};
use crate::error::{Error, Result};

const fn op(kind: OpKind, i: usize, t: usize, j: usize) -> OpId {
    OpId::new(kind, i, t, j)
}

use OpKind::{DeltaMu, GrayInit, Mu, MuBar, Sigma, SigmaBar, SigmaFast};

const SF_PHASE0: &[OpId] = &[op(Sigma, 0, 2, 2), op(Sigma, 0, 3, 1)];
const SF_PHASE0_TOP: &[OpId] = &[op(Sigma, 0, 3, 1)];
const SF_ODD: &[OpId] = &[op(Sigma, 1, 3, 2)];
const SF_EVEN: &[OpId] = &[op(Sigma, 2, 3, 1)];
const SF_TAIL_ODD: &[OpId] = &[op(Sigma, 1, 3, 0)];
const SF_TAIL_EVEN: &[OpId] = &[op(Sigma, 2, 2, 0)];

/// SF cluster operators for layer `λ ∈ [2..m]` at local phase `φ`
/// (excluding the layer-`m` conversions to an LLR).
pub fn sf_row(m: usize, layer: usize, phase: usize) -> Result<&'static [OpId]> {
    let size = 1usize << layer;
    let missing = Error::MissingScheduleRow { layer, phase };
    if layer < 2 || layer > m || phase >= size - 1 {
        return Err(missing);
    }
    Ok(match phase {
        0 if layer == m => SF_PHASE0_TOP,
        0 => SF_PHASE0,
        p if p == size - 3 => SF_TAIL_ODD,
        p if p == size - 2 => {
            if layer == m {
                // the last two phases on layer m read the phase n-3 cluster
                return Err(missing);
            }
            SF_TAIL_EVEN
        }
        p if p % 2 == 1 => SF_ODD,
        _ => SF_EVEN,
    })
}

const L2_PHASE0: &[OpId] = &[op(GrayInit, 0, 4, 0), op(MuBar, 0, 3, 1), op(Mu, 0, 2, 1)];
const L2_PHASE1: &[OpId] = &[op(Mu, 1, 3, 0)];
const L2_PHASE2: &[OpId] = &[op(Mu, 1, 2, 0)];

const MID_PHASE0: &[OpId] = &[op(SigmaFast, 0, 3, 1), op(Mu, 0, 2, 1)];
const MID_ODD: &[OpId] = &[op(SigmaFast, 1, 4, 1), op(Mu, 0, 3, 1)];
const MID_EVEN: &[OpId] = &[op(Mu, 1, 3, 0)];
const MID_S5: &[OpId] = &[op(SigmaBar, 1, 5, 0), op(MuBar, 0, 4, 1), op(Mu, 0, 3, 1)];
const MID_S4: &[OpId] = &[op(Mu, 1, 3, 0), op(Mu, 1, 4, 0)];
const MID_S3: &[OpId] = &[op(Mu, 1, 3, 0)];
const MID_S2: &[OpId] = &[op(Mu, 1, 2, 0)];

const PEN_PHASE0: &[OpId] = &[op(SigmaFast, 0, 3, 1), op(Mu, 0, 2, 1)];
const PEN_ODD: &[OpId] = &[op(Mu, 1, 2, 0)];
const PEN_EVEN: &[OpId] = &[op(SigmaFast, 2, 3, 1), op(Mu, 0, 2, 1)];
const PEN_S4: &[OpId] = &[op(SigmaBar, 2, 4, 0), op(MuBar, 0, 3, 1), op(Mu, 0, 2, 1)];
const PEN_S3: &[OpId] = &[op(Mu, 1, 2, 0), op(Mu, 1, 3, 0)];

const TOP_PHASE0: &[OpId] = &[
    op(SigmaFast, 0, 3, 1),
    op(Mu, 0, 2, 1),
    op(DeltaMu, 0, 1, 1),
];
const TOP_AFTER_FRESH: &[OpId] = &[op(DeltaMu, 1, 1, 0), op(Mu, 1, 2, 0)];
const TOP_SELECT: &[OpId] = &[op(DeltaMu, 1, 1, 0)];
const TOP_ODD: &[OpId] = &[op(SigmaFast, 1, 2, 1), op(DeltaMu, 0, 1, 1)];
const TOP_N3: &[OpId] = &[
    op(SigmaBar, 1, 3, 0),
    op(MuBar, 0, 2, 1),
    op(DeltaMu, 0, 1, 1),
];

/// EFF cluster operators for layer `λ ∈ [2..m]` at local phase `φ`, `m ≥ 4`.
/// Layer `m` rows end with the `Δμ` that yields the phase's LLR.
pub fn eff_row(m: usize, layer: usize, phase: usize) -> Result<&'static [OpId]> {
    let missing = Error::MissingScheduleRow { layer, phase };
    if m < 4 || layer < 2 || layer > m {
        return Err(missing);
    }
    let s = 1usize << layer;
    let row = if layer == 2 {
        match phase {
            0 => Some(L2_PHASE0),
            1 => Some(L2_PHASE1),
            2 => Some(L2_PHASE2),
            _ => None,
        }
    } else if layer == m {
        match phase {
            0 => Some(TOP_PHASE0),
            p if p == 1 || p == s - 2 => Some(TOP_AFTER_FRESH),
            p if p == 2 || p == s - 1 => Some(TOP_SELECT),
            p if p == s - 3 => Some(TOP_N3),
            p if p >= s => None,
            p if p % 2 == 1 => Some(TOP_ODD),
            _ => Some(TOP_SELECT),
        }
    } else if layer == m - 1 {
        match phase {
            0 => Some(PEN_PHASE0),
            p if p == s - 2 => Some(PEN_ODD),
            p if p == s - 3 => Some(PEN_S3),
            p if p == s - 4 => Some(PEN_S4),
            p if p >= s - 1 => None,
            p if p % 2 == 1 => Some(PEN_ODD),
            _ => Some(PEN_EVEN),
        }
    } else {
        match phase {
            0 => Some(MID_PHASE0),
            p if p == s - 2 => Some(MID_S2),
            p if p == s - 3 => Some(MID_S3),
            p if p == s - 4 => Some(MID_S4),
            p if p == s - 5 => Some(MID_S5),
            p if p >= s - 1 => None,
            p if p % 2 == 1 => Some(MID_ODD),
            _ => Some(MID_EVEN),
        }
    };
    row.ok_or(missing)
}

/// Counted cost of a whole row.
pub fn row_cost(row: &[OpId]) -> u64 {
    row.iter()
        .map(|&o| crate::cluster::cost_of(o).expect("schedules only hold valid operators"))
        .sum()
}

/// Deepest layer and its local phase that an SF decoder must recompute for
/// global phase `φ ∈ [1, n-3]`; rows then run upward with `ψ ← 2ψ + 1`.
pub fn sf_start(m: usize, phase: usize) -> (usize, usize) {
    let mut layer = m;
    let mut psi = phase;
    while psi % 2 == 1 && layer > 2 && psi != 1 {
        psi /= 2;
        layer -= 1;
    }
    (layer, psi)
}

/// Deepest layer and its local phase that an EFF decoder must recompute for
/// global phase `φ ≥ 1`.
pub fn eff_start(m: usize, phase: usize) -> (usize, usize) {
    let mut layer = m;
    let mut psi = phase;
    while layer > 2 && psi % 2 == 1 && psi > 1 && psi < (1 << layer) - 1 {
        psi /= 2;
        layer -= 1;
    }
    (layer, psi)
}

/// Per-layer, per-dimension cluster storage that the row executor works on.
///
/// Each `(layer, dim)` pair names an array of `2^{m-layer}` clusters whose
/// `I`-th cluster starts at `I * stride(layer, dim)`.
pub(crate) trait ClusterStore {
    fn stride(&self, layer: usize, dim: usize) -> usize;

    /// Decisions of `dst_layer`, the clusters of dimension `src_dim` on
    /// `src_layer` (read) and those of dimension `dst_dim` on `dst_layer`
    /// (written). The two arrays are always distinct.
    fn io(
        &mut self,
        src_layer: usize,
        src_dim: usize,
        dst_layer: usize,
        dst_dim: usize,
    ) -> (&[u8], &[f64], &mut [f64]);

    /// Decisions and clusters of one layer, read-only.
    fn read(&self, layer: usize, dim: usize) -> (&[u8], &[f64]);
}

/// Shared access to `v[read]` alongside exclusive access to `v[write]`.
pub(crate) fn split_pair<T>(v: &mut [T], read: usize, write: usize) -> (&T, &mut T) {
    assert_ne!(read, write, "source and destination arrays must differ");
    if read < write {
        let (lo, hi) = v.split_at_mut(write);
        (&lo[read], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(read);
        (&hi[0], &mut lo[write])
    }
}

/// Fixed bits `û_{φ-i}..û_{φ-1}` of sub-transform `sub`, packed LSB-first.
#[inline]
pub(crate) fn fixed_bits(decisions: &[u8], sub: usize, phase: usize, i: usize) -> usize {
    (0..i).fold(0, |acc, k| {
        let p = phase - i + k;
        acc | (usize::from(decisions[2 * sub + (p & 1)]) << k)
    })
}

/// Runs one operator on every sub-transform of `layer`. Returns the LLR for
/// a `Δμ` (which only runs on the single sub-transform of layer `m`).
pub(crate) fn run_op<S: ClusterStore + ?Sized>(
    store: &mut S,
    m: usize,
    layer: usize,
    phase: usize,
    op: OpId,
    ctr: &mut OpCounter,
) -> Option<f64> {
    let OpId { kind, i, t, j } = op;
    let count = 1usize << (m - layer);
    match kind {
        Sigma | SigmaFast | SigmaBar => {
            let half = (i + t + j) / 2;
            let (ss, ds) = (store.stride(layer - 1, half), store.stride(layer, t));
            let (dec, src, dst) = store.io(layer - 1, half, layer, t);
            for sub in 0..count {
                let a = &src[sub * ss..sub * ss + (1 << half)];
                let b = &src[(sub + count) * ss..(sub + count) * ss + (1 << half)];
                let out = &mut dst[sub * ds..sub * ds + (1 << t)];
                let u = fixed_bits(dec, sub, phase, i);
                match kind {
                    Sigma => sigma_into(i, t, j, a, b, u, out, ctr),
                    SigmaFast => sigma_fast_into(i, t, a, b, u, out, ctr),
                    _ => sigma_bar_into(i, t, a, b, u, out, ctr),
                }
            }
            None
        }
        Mu | MuBar => {
            let full = i + t + j;
            let (ss, ds) = (store.stride(layer, full), store.stride(layer, t));
            let (dec, src, dst) = store.io(layer, full, layer, t);
            for sub in 0..count {
                let a = &src[sub * ss..sub * ss + (1 << full)];
                let out = &mut dst[sub * ds..sub * ds + (1 << t)];
                let u = fixed_bits(dec, sub, phase, i);
                if kind == Mu {
                    mu_into(i, t, j, a, u, out, ctr);
                } else {
                    mu_bar_into(i, t, a, u, out);
                }
            }
            None
        }
        DeltaMu => {
            debug_assert_eq!(count, 1);
            let (dec, src) = store.read(layer, i + 1 + j);
            let u = fixed_bits(dec, 0, phase, i);
            Some(delta_mu_slice(i, j, &src[..1 << (i + 1 + j)], u, ctr))
        }
        GrayInit => unreachable!("the layer-2 initializer reads channel values and runs at init"),
    }
}

/// Runs a whole row, returning the LLR produced by its `Δμ`, if any.
pub(crate) fn run_row<S: ClusterStore + ?Sized>(
    store: &mut S,
    m: usize,
    layer: usize,
    phase: usize,
    row: &[OpId],
    ctr: &mut OpCounter,
) -> Option<f64> {
    let mut llr = None;
    for &o in row {
        if let Some(v) = run_op(store, m, layer, phase, o, ctr) {
            llr = Some(v);
        }
    }
    llr
}
