//! Min-sum successive-cancellation decoding.
//!
//! Two engines share the decision bookkeeping: [`Mode::Sf`] runs the
//! straightforward schedule on 2- and 3-clusters, [`Mode::Eff`] the
//! reduced-complexity schedule with per-dimension cluster arrays, pairwise
//! maxima and the Gray-code layer-2 initializer. Both are exact min-sum and
//! take identical decisions.
//!
//! Channel values are `Y_i = ln W(1|y_i) / W(0|y_i)`; returned LLRs are
//! `L[0] - L[1]`, so a negative LLR favours the bit `1`.

use std::fmt;
use std::str::FromStr;

use crate::cluster::{gray_init_into, Llr, OpCounter, OpId, OpKind};
use crate::error::{Error, Result};
use crate::schedule::{
    eff_row, eff_start, run_op, run_row, sf_row, sf_start, split_pair, ClusterStore,
};
use crate::transform::{check_len, encode_inverse, log2_exact, CodeSpec};

/// Which SC engine to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Straightforward schedule.
    Sf,
    /// Reduced-complexity schedule.
    Eff,
}

impl Mode {
    /// Smallest supported `log2(n)`.
    pub fn min_log_len(self) -> usize {
        match self {
            Mode::Sf => 3,
            Mode::Eff => 4,
        }
    }

    /// Closed-form counted cost of one decode of length `n`, if known. The
    /// SF value is the measured sum of its schedule, see the crate README.
    pub fn closed_form_ops(self, n: usize) -> Option<u64> {
        let m = log2_exact(n).ok()?;
        if m < self.min_log_len() {
            return None;
        }
        let (n, m) = (n as i64, m as i64);
        let twice = match self {
            Mode::Sf => 80 * n * m - 161 * n + 108,
            Mode::Eff => 40 * n * m - 153 * n + 432,
        };
        Some((twice / 2) as u64)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sf => "sf",
            Mode::Eff => "eff",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sf" => Ok(Mode::Sf),
            "eff" => Ok(Mode::Eff),
            other => Err(Error::InvalidOperator(format!(
                "unknown decoder mode '{other}'"
            ))),
        }
    }
}

/// Decision arrays of one layer pair, as seen by [`update_c`].
pub(crate) trait DecisionStore {
    /// `C[layer]` for reading and `C[layer - 1]` for writing.
    fn layer_pair(&mut self, layer: usize) -> (&[u8], &mut [u8]);
}

impl DecisionStore for Vec<Vec<u8>> {
    fn layer_pair(&mut self, layer: usize) -> (&[u8], &mut [u8]) {
        let (c, d) = split_pair(self, layer, layer - 1);
        (c, d)
    }
}

/// Propagates the decision of phase `phase`, already stored in
/// `C[m][phase mod 2]`, to the lower layers as partial sums.
pub(crate) fn update_c<S: DecisionStore + ?Sized>(store: &mut S, m: usize, phase: usize) {
    let mut layer = m;
    let mut phi = phase;
    let mut count = 1usize;
    while phi != 0 && layer != 0 {
        let psi = (phi - 1) / 2;
        let b = psi % 2;
        let (c, d) = store.layer_pair(layer);
        if phi % 2 == 1 {
            for i in 0..count {
                if layer == 1 {
                    d[i] = c[2 * i] ^ c[2 * i + 1];
                    d[i + count] = c[2 * i + 1];
                } else {
                    d[2 * i + b] = c[2 * i] ^ c[2 * i + 1];
                    d[2 * i + b + 2 * count] = c[2 * i + 1];
                }
            }
            if phi != (1 << layer) - 1 {
                break;
            }
        } else {
            for i in 0..count {
                d[2 * i + b] ^= c[2 * i];
                d[2 * i + b + 2 * count] ^= c[2 * i];
            }
        }
        layer -= 1;
        phi = psi;
        count *= 2;
    }
}

/// Cluster arrays of one decoding path: `clusters[slot(layer, dim)]`.
#[derive(Clone, Debug)]
struct Store {
    mode: Mode,
    clusters: Vec<Vec<f64>>,
    decisions: Vec<Vec<u8>>,
}

impl Store {
    fn new(mode: Mode, m: usize) -> Self {
        let clusters = match mode {
            Mode::Sf => (0..=m)
                .map(|layer| match layer {
                    0 => Vec::new(),
                    1 => vec![0.0; 4 << (m - 1)],
                    _ => vec![0.0; 8 << (m - layer)],
                })
                .collect(),
            Mode::Eff => (0..(m + 1) * 4)
                .map(|key| {
                    let (layer, dim) = (key / 4, key % 4 + 2);
                    if layer < 2 {
                        Vec::new()
                    } else {
                        vec![0.0; 1 << (m - layer + dim)]
                    }
                })
                .collect(),
        };
        let decisions = (0..=m).map(|layer| vec![0u8; 2 << (m - layer)]).collect();
        Self {
            mode,
            clusters,
            decisions,
        }
    }

    fn slot(&self, layer: usize, dim: usize) -> usize {
        match self.mode {
            Mode::Sf => layer,
            Mode::Eff => layer * 4 + dim - 2,
        }
    }
}

impl ClusterStore for Store {
    fn stride(&self, layer: usize, dim: usize) -> usize {
        match self.mode {
            Mode::Sf if layer == 1 => 4,
            Mode::Sf => 8,
            Mode::Eff => 1 << dim,
        }
    }

    fn io(
        &mut self,
        src_layer: usize,
        src_dim: usize,
        dst_layer: usize,
        dst_dim: usize,
    ) -> (&[u8], &[f64], &mut [f64]) {
        let (src, dst) = (self.slot(src_layer, src_dim), self.slot(dst_layer, dst_dim));
        let (a, b) = split_pair(&mut self.clusters, src, dst);
        (&self.decisions[dst_layer], a, b)
    }

    fn read(&self, layer: usize, dim: usize) -> (&[u8], &[f64]) {
        (
            &self.decisions[layer],
            &self.clusters[self.slot(layer, dim)],
        )
    }
}

/// Result of one SC decode.
#[derive(Clone, Debug, PartialEq)]
pub struct ScOutput {
    /// Decoded information bits.
    pub message: Vec<u8>,
    /// Decoded input vector `û_[n]`, frozen positions included.
    pub u_hat: Vec<u8>,
    /// LLR computed at every phase.
    pub llrs: Vec<f64>,
    /// Counted operations of the whole decode.
    pub ops: OpCounter,
}

/// A reusable single-path SC decoder for one code length.
#[derive(Clone, Debug)]
pub struct ScDecoder {
    mode: Mode,
    m: usize,
    n: usize,
    store: Store,
    layer_ops: Vec<OpCounter>,
    conversion_ops: OpCounter,
    next_phase: usize,
    awaiting_commit: bool,
    initialized: bool,
}

const DELTA_012: OpId = OpId::new(OpKind::DeltaMu, 0, 1, 2);
const DELTA_111: OpId = OpId::new(OpKind::DeltaMu, 1, 1, 1);
const DELTA_210: OpId = OpId::new(OpKind::DeltaMu, 2, 1, 0);
const SIGMA_022: OpId = OpId::new(OpKind::Sigma, 0, 2, 2);
const SIGMA_031: OpId = OpId::new(OpKind::Sigma, 0, 3, 1);
const MUBAR_031: OpId = OpId::new(OpKind::MuBar, 0, 3, 1);
const MU_021: OpId = OpId::new(OpKind::Mu, 0, 2, 1);

impl ScDecoder {
    pub fn new(n: usize, mode: Mode) -> Result<Self> {
        let m = log2_exact(n)?;
        let min = mode.min_log_len();
        if m < min {
            return Err(Error::CodeTooShort { n, min: 1 << min });
        }
        Ok(Self {
            mode,
            m,
            n,
            store: Store::new(mode, m),
            layer_ops: vec![OpCounter::new(); m + 1],
            conversion_ops: OpCounter::new(),
            next_phase: 0,
            awaiting_commit: false,
            initialized: false,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Loads channel LLRs, clears all decisions and counters, and computes
    /// the bottom clusters.
    pub fn init(&mut self, y: &[f64]) -> Result<()> {
        check_len(y.len(), self.n)?;
        for c in &mut self.layer_ops {
            *c = OpCounter::new();
        }
        self.conversion_ops = OpCounter::new();
        for d in &mut self.store.decisions {
            d.fill(0);
        }
        let n = self.n;
        match self.mode {
            Mode::Sf => {
                let bottom = &mut self.store.clusters[1];
                for i in 0..n / 2 {
                    let (a, b) = (y[i], y[i + n / 2]);
                    bottom[4 * i..4 * i + 4].copy_from_slice(&[0.0, a, a + b, b]);
                }
                self.layer_ops[1].add((n / 2) as u64);
            }
            Mode::Eff => {
                let quarter = n / 4;
                let slot = self.store.slot(2, 4);
                let gray = &mut self.store.clusters[slot];
                for j in 0..quarter {
                    let y4 = [y[j], y[j + quarter], y[j + 2 * quarter], y[j + 3 * quarter]];
                    gray_init_into(y4, &mut gray[16 * j..16 * j + 16], &mut self.layer_ops[2]);
                }
                for o in [MUBAR_031, MU_021] {
                    run_op(&mut self.store, self.m, 2, 0, o, &mut self.layer_ops[2]);
                }
            }
        }
        self.next_phase = 0;
        self.awaiting_commit = false;
        self.initialized = true;
        Ok(())
    }

    /// Layer-1 clusters of the SF engine (four entries per sub-transform,
    /// indexed `a + 2b`), for perturbation experiments between [`init`] and
    /// the first [`calct`]. `None` in EFF mode, whose bottom clusters are
    /// consumed during [`init`].
    ///
    /// [`init`]: ScDecoder::init
    /// [`calct`]: ScDecoder::calct
    pub fn bottom_clusters_mut(&mut self) -> Option<&mut [f64]> {
        match self.mode {
            Mode::Sf => Some(&mut self.store.clusters[1]),
            Mode::Eff => None,
        }
    }

    /// LLR of phase `phase`; phases must be requested in order, each
    /// followed by [`commit`](ScDecoder::commit).
    pub fn calct(&mut self, phase: usize) -> Result<Llr> {
        if phase >= self.n {
            return Err(Error::PhaseOutOfRange { phase, n: self.n });
        }
        if !self.initialized || self.awaiting_commit || phase != self.next_phase {
            return Err(Error::PhaseOrder {
                expected: self.next_phase,
                got: phase,
            });
        }
        let llr = match self.mode {
            Mode::Sf => self.calct_sf(phase)?,
            Mode::Eff => self.calct_eff(phase)?,
        };
        self.awaiting_commit = true;
        Ok(Llr(llr))
    }

    fn calct_sf(&mut self, phase: usize) -> Result<f64> {
        let (m, n) = (self.m, self.n);
        let delta = if phase == n - 2 {
            DELTA_111
        } else if phase == n - 1 {
            DELTA_210
        } else {
            if phase == 0 {
                for layer in 2..m {
                    run_op(
                        &mut self.store,
                        m,
                        layer,
                        0,
                        SIGMA_022,
                        &mut self.layer_ops[layer],
                    );
                }
                // top-down, so that every layer still reads 2-clusters below it
                for layer in (2..=m).rev() {
                    run_op(
                        &mut self.store,
                        m,
                        layer,
                        0,
                        SIGMA_031,
                        &mut self.layer_ops[layer],
                    );
                }
            } else {
                let (start, mut psi) = sf_start(m, phase);
                for layer in start..=m {
                    let row = sf_row(m, layer, psi)?;
                    run_row(
                        &mut self.store,
                        m,
                        layer,
                        psi,
                        row,
                        &mut self.layer_ops[layer],
                    );
                    psi = 2 * psi + 1;
                }
            }
            DELTA_012
        };
        Ok(run_op(
            &mut self.store,
            m,
            m,
            phase,
            delta,
            &mut self.conversion_ops,
        )
        .expect("a delta operator yields an LLR"))
    }

    fn calct_eff(&mut self, phase: usize) -> Result<f64> {
        let m = self.m;
        let (start, mut psi) = if phase == 0 {
            (3, 0)
        } else {
            eff_start(m, phase)
        };
        let mut llr = None;
        for layer in start..=m {
            let row = eff_row(m, layer, psi)?;
            llr = run_row(
                &mut self.store,
                m,
                layer,
                psi,
                row,
                &mut self.layer_ops[layer],
            );
            if psi != 0 {
                psi = 2 * psi + 1;
            }
        }
        Ok(llr.expect("layer-m rows end with a delta operator"))
    }

    /// Records the decision for `phase` and propagates it.
    pub fn commit(&mut self, phase: usize, bit: u8) -> Result<()> {
        if !self.awaiting_commit || phase != self.next_phase {
            return Err(Error::PhaseOrder {
                expected: self.next_phase,
                got: phase,
            });
        }
        if bit > 1 {
            return Err(Error::InvalidBit {
                index: phase,
                value: bit,
            });
        }
        self.store.decisions[self.m][phase % 2] = bit;
        update_c(&mut self.store.decisions, self.m, phase);
        self.awaiting_commit = false;
        self.next_phase += 1;
        Ok(())
    }

    /// Hard decisions on the codeword; complete once every phase is committed.
    pub fn codeword(&self) -> &[u8] {
        &self.store.decisions[0][..self.n]
    }

    /// Decision array of one layer.
    pub fn decisions(&self, layer: usize) -> &[u8] {
        &self.store.decisions[layer]
    }

    /// Operations counted on one layer. In SF mode the layer-`m` count
    /// excludes the final LLR conversions, see [`conversion_ops`].
    ///
    /// [`conversion_ops`]: ScDecoder::conversion_ops
    pub fn layer_ops(&self, layer: usize) -> OpCounter {
        self.layer_ops[layer]
    }

    /// SF only: operations spent turning layer-`m` clusters into LLRs.
    pub fn conversion_ops(&self) -> OpCounter {
        self.conversion_ops
    }

    /// Total counted operations since [`init`](ScDecoder::init).
    pub fn ops(&self) -> OpCounter {
        let mut total = self.conversion_ops;
        for c in &self.layer_ops {
            total.merge(c);
        }
        total
    }

    /// Runs a full decode, choosing each information bit from the sign of
    /// its LLR.
    pub fn decode(&mut self, spec: &CodeSpec, y: &[f64]) -> Result<ScOutput> {
        self.run(spec, y, |phase, llr| {
            u8::from(!spec.is_frozen(phase) && llr < 0.0)
        })
    }

    /// Runs a full decode with decisions fixed to `u` (a genie decoder),
    /// returning the LLR of every phase.
    pub fn decode_genie(&mut self, y: &[f64], u: &[u8]) -> Result<Vec<f64>> {
        check_len(u.len(), self.n)?;
        let spec = CodeSpec::from_frozen(self.n, &[])?;
        Ok(self.run(&spec, y, |phase, _| u[phase] & 1)?.llrs)
    }

    fn run(
        &mut self,
        spec: &CodeSpec,
        y: &[f64],
        mut decide: impl FnMut(usize, f64) -> u8,
    ) -> Result<ScOutput> {
        check_len(spec.n(), self.n)?;
        self.init(y)?;
        let mut llrs = Vec::with_capacity(self.n);
        for phase in 0..self.n {
            let llr = self.calct(phase)?.value();
            llrs.push(llr);
            self.commit(phase, decide(phase, llr))?;
        }
        let u_hat = encode_inverse(self.codeword())?;
        Ok(ScOutput {
            message: spec.extract(&u_hat),
            u_hat,
            llrs,
            ops: self.ops(),
        })
    }
}

/// One-shot SC decode.
pub fn decode_sc(spec: &CodeSpec, y: &[f64], mode: Mode) -> Result<ScOutput> {
    ScDecoder::new(spec.n(), mode)?.decode(spec, y)
}
