//! SC list decoding over a lazy-copy pool.
//!
//! Every path owns, per layer, one decision array and one cluster array per
//! dimension 2..=5, referenced through slot handles with reference counts.
//! Cloning a path only copies handles. A path that writes a shared cluster
//! array is moved to a fresh slot without copying (the new values never
//! depend on the old ones); a shared decision array is copied on write,
//! since partial sums are updated in place.
//!
//! Scores follow the min-sum path metric: 0 for the empty path, reduced by
//! `|L|` whenever a decision disagrees with the sign of its LLR `L`.

use std::cmp::Ordering;

use crate::cluster::{gray_init_into, OpCounter, OpId, OpKind};
use crate::error::{Error, Result};
use crate::sc::{update_c, DecisionStore};
use crate::schedule::{eff_row, eff_start, run_op, split_pair, ClusterStore};
use crate::transform::{check_len, encode_inverse, log2_exact, CodeSpec};

/// Storage classes per layer: decisions, then clusters of dimension 2..=5.
pub const CLASSES: usize = 5;
const NONE: usize = usize::MAX;
const INFINITE: u32 = u32::MAX;

fn class_of_dim(dim: usize) -> usize {
    debug_assert!((2..=5).contains(&dim));
    dim - 1
}

/// Slotted storage shared by up to `l` paths.
#[derive(Clone, Debug)]
pub struct ListPool {
    m: usize,
    l: usize,
    /// `c_data[λ][s]`: decision array of slot `s` on layer `λ`.
    c_data: Vec<Vec<Vec<u8>>>,
    /// `t_data[λ * 4 + class - 1][s]`: cluster array of slot `s`.
    t_data: Vec<Vec<Vec<f64>>>,
    array_index: Vec<usize>,
    ref_count: Vec<u32>,
    free: Vec<Vec<usize>>,
    active: Vec<bool>,
    zeros: Vec<u8>,
    cluster_copies: u64,
    decision_copies: u64,
}

impl ListPool {
    /// Pool for codes of length `2^m` and at most `l` paths, with path 0
    /// active and every array of it unallocated.
    pub fn new(m: usize, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidListSize);
        }
        let c_data = (0..=m)
            .map(|layer| vec![vec![0u8; 2 << (m - layer)]; l])
            .collect();
        let t_data = (0..(m + 1) * 4)
            .map(|key| {
                let (layer, dim) = (key / 4, key % 4 + 2);
                let len = if layer < 2 { 0 } else { 1 << (m - layer + dim) };
                vec![vec![0.0; len]; l]
            })
            .collect();
        let mut pool = Self {
            m,
            l,
            c_data,
            t_data,
            array_index: Vec::new(),
            ref_count: Vec::new(),
            free: Vec::new(),
            active: Vec::new(),
            zeros: vec![0; 2 << m],
            cluster_copies: 0,
            decision_copies: 0,
        };
        pool.reset();
        Ok(pool)
    }

    /// Frees every slot and leaves only path 0 active, bound to the sentinel.
    pub fn reset(&mut self) {
        let (m, l) = (self.m, self.l);
        self.array_index = vec![NONE; (m + 1) * l * CLASSES];
        self.ref_count = vec![0; (m + 1) * (l + 1) * CLASSES];
        for layer in 0..=m {
            for class in 0..CLASSES {
                let rc = self.rc_index(layer, l, class);
                self.ref_count[rc] = INFINITE;
            }
        }
        self.free = vec![(0..l).rev().collect(); (m + 1) * CLASSES];
        self.active = vec![false; l];
        self.active[0] = true;
        for layer in 0..=m {
            for class in 0..CLASSES {
                let at = self.index(layer, 0, class);
                self.array_index[at] = l;
            }
        }
        self.cluster_copies = 0;
        self.decision_copies = 0;
    }

    pub fn list_size(&self) -> usize {
        self.l
    }

    pub fn is_active(&self, p: usize) -> bool {
        self.active.get(p).copied().unwrap_or(false)
    }

    /// Active paths in ascending order.
    pub fn active_paths(&self) -> Vec<usize> {
        (0..self.l).filter(|&p| self.active[p]).collect()
    }

    fn index(&self, layer: usize, p: usize, class: usize) -> usize {
        (layer * self.l + p) * CLASSES + class
    }

    fn rc_index(&self, layer: usize, slot: usize, class: usize) -> usize {
        (layer * (self.l + 1) + slot) * CLASSES + class
    }

    /// Slot bound to path `p` for `(layer, class)`: `Some(l)` is the
    /// sentinel, `None` means the path is inactive.
    pub fn slot_of(&self, p: usize, layer: usize, class: usize) -> Option<usize> {
        match self.array_index[self.index(layer, p, class)] {
            NONE => None,
            s => Some(s),
        }
    }

    /// Reference count of a slot; `u32::MAX` for the sentinel.
    pub fn ref_count(&self, layer: usize, slot: usize, class: usize) -> u32 {
        self.ref_count[self.rc_index(layer, slot, class)]
    }

    /// Number of cluster arrays ever copied between slots.
    pub fn cluster_copies(&self) -> u64 {
        self.cluster_copies
    }

    /// Number of decision arrays copied on write.
    pub fn decision_copies(&self) -> u64 {
        self.decision_copies
    }

    fn check_active(&self, p: usize) -> Result<()> {
        if self.is_active(p) {
            Ok(())
        } else {
            Err(Error::InactivePath(p))
        }
    }

    /// Makes `p`'s `(layer, class)` slot exclusively owned. Returns the slot
    /// and, if `p` was rebound, the slot it previously pointed to.
    fn own_slot(&mut self, p: usize, layer: usize, class: usize) -> Result<(usize, Option<usize>)> {
        self.check_active(p)?;
        let at = self.index(layer, p, class);
        let old = self.array_index[at];
        if old != self.l && self.ref_count(layer, old, class) <= 1 {
            return Ok((old, None));
        }
        let fresh = self.free[layer * CLASSES + class]
            .pop()
            .ok_or(Error::PoolExhausted { layer, class })?;
        if old != self.l {
            let rc = self.rc_index(layer, old, class);
            self.ref_count[rc] -= 1;
        }
        let rc = self.rc_index(layer, fresh, class);
        self.ref_count[rc] = 1;
        self.array_index[at] = fresh;
        Ok((fresh, Some(old)))
    }

    /// Writable cluster array of dimension `dim` on `layer` for path `p`.
    /// A shared array is replaced by a fresh one whose contents are stale.
    pub fn acquire_t(&mut self, p: usize, layer: usize, dim: usize) -> Result<&mut [f64]> {
        if !(2..=5).contains(&dim) || !(2..=self.m).contains(&layer) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let (slot, _) = self.own_slot(p, layer, class_of_dim(dim))?;
        Ok(&mut self.t_data[layer * 4 + dim - 2][slot])
    }

    /// Writable decision array of `layer` for path `p`, copied first if shared.
    pub fn acquire_c(&mut self, p: usize, layer: usize) -> Result<&mut [u8]> {
        let (slot, old) = self.own_slot(p, layer, 0)?;
        let arrays = &mut self.c_data[layer];
        match old {
            Some(old) if old == self.l => arrays[slot].fill(0),
            Some(old) => {
                let (src, dst) = split_pair(arrays, old, slot);
                dst.copy_from_slice(src);
                self.decision_copies += 1;
            }
            None => {}
        }
        Ok(&mut self.c_data[layer][slot])
    }

    /// Decision array of `layer` for path `p`; all zeros before the first write.
    pub fn read_c(&self, p: usize, layer: usize) -> Result<&[u8]> {
        self.check_active(p)?;
        let slot = self.array_index[self.index(layer, p, 0)];
        let len = 2 << (self.m - layer);
        Ok(if slot == self.l {
            &self.zeros[..len]
        } else {
            &self.c_data[layer][slot]
        })
    }

    /// Cluster array of dimension `dim` on `layer` for path `p`, if written.
    pub fn read_t(&self, p: usize, layer: usize, dim: usize) -> Result<Option<&[f64]>> {
        self.check_active(p)?;
        let slot = self.array_index[self.index(layer, p, class_of_dim(dim))];
        Ok((slot != self.l).then(|| self.t_data[layer * 4 + dim - 2][slot].as_slice()))
    }

    /// Deactivates `p`, releasing its references.
    pub fn kill_path(&mut self, p: usize) -> Result<()> {
        self.check_active(p)?;
        for layer in 0..=self.m {
            for class in 0..CLASSES {
                let at = self.index(layer, p, class);
                let slot = self.array_index[at];
                if slot != self.l {
                    let rc = self.rc_index(layer, slot, class);
                    self.ref_count[rc] -= 1;
                    if self.ref_count[rc] == 0 {
                        self.free[layer * CLASSES + class].push(slot);
                    }
                }
                self.array_index[at] = NONE;
            }
        }
        self.active[p] = false;
        Ok(())
    }

    /// Activates the smallest inactive path as a copy of `p` sharing all of
    /// its arrays.
    pub fn clone_path(&mut self, p: usize) -> Result<usize> {
        self.check_active(p)?;
        let q = (0..self.l)
            .find(|&q| !self.active[q])
            .ok_or(Error::ListFull(self.l))?;
        for layer in 0..=self.m {
            for class in 0..CLASSES {
                let slot = self.array_index[self.index(layer, p, class)];
                let at = self.index(layer, q, class);
                self.array_index[at] = slot;
                if slot != self.l {
                    let rc = self.rc_index(layer, slot, class);
                    self.ref_count[rc] += 1;
                }
            }
        }
        self.active[q] = true;
        Ok(q)
    }

    /// Checks that every reference count equals the number of active paths
    /// bound to its slot, that free stacks hold exactly the unreferenced
    /// slots, and that the sentinel is intact.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let l = self.l;
        for layer in 0..=self.m {
            for class in 0..CLASSES {
                let mut counts = vec![0u32; l];
                for p in 0..l {
                    let slot = self.array_index[self.index(layer, p, class)];
                    match (self.active[p], slot) {
                        (false, NONE) => {}
                        (false, s) => return Err(format!("inactive path {p} holds slot {s}")),
                        (true, NONE) => return Err(format!("active path {p} has no handle")),
                        (true, s) if s == l => {}
                        (true, s) if s < l => counts[s] += 1,
                        (true, s) => return Err(format!("path {p} holds invalid slot {s}")),
                    }
                }
                if self.ref_count(layer, l, class) != INFINITE {
                    return Err(format!(
                        "sentinel count changed at layer {layer} class {class}"
                    ));
                }
                let stack = &self.free[layer * CLASSES + class];
                let mut on_stack = vec![false; l];
                for &s in stack {
                    if s >= l || on_stack[s] {
                        return Err(format!("free stack {layer}/{class} has bad entry {s}"));
                    }
                    on_stack[s] = true;
                }
                for s in 0..l {
                    let rc = self.ref_count(layer, s, class);
                    if rc != counts[s] {
                        return Err(format!(
                            "layer {layer} class {class} slot {s}: count {rc}, {} references",
                            counts[s]
                        ));
                    }
                    if (rc == 0) != on_stack[s] {
                        return Err(format!(
                            "layer {layer} class {class} slot {s}: free-stack mismatch"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A single path's view of the pool, used to run schedule rows and
/// decision updates.
struct PathView<'a> {
    pool: &'a mut ListPool,
    p: usize,
}

impl ClusterStore for PathView<'_> {
    fn stride(&self, _layer: usize, dim: usize) -> usize {
        1 << dim
    }

    fn io(
        &mut self,
        src_layer: usize,
        src_dim: usize,
        dst_layer: usize,
        dst_dim: usize,
    ) -> (&[u8], &[f64], &mut [f64]) {
        let p = self.p;
        let (dst_slot, _) = self
            .pool
            .own_slot(p, dst_layer, class_of_dim(dst_dim))
            .expect("conservation leaves a free slot for every active path");
        let pool = &mut *self.pool;
        let src_slot = pool.array_index[pool.index(src_layer, p, class_of_dim(src_dim))];
        assert!(src_slot < pool.l, "cluster read before it was written");
        let dec_slot = pool.array_index[pool.index(dst_layer, p, 0)];
        let decisions = if dec_slot == pool.l {
            &pool.zeros[..]
        } else {
            &pool.c_data[dst_layer][dec_slot][..]
        };
        let (src, dst) = split_pair(
            &mut pool.t_data,
            src_layer * 4 + src_dim - 2,
            dst_layer * 4 + dst_dim - 2,
        );
        (decisions, &src[src_slot], &mut dst[dst_slot])
    }

    fn read(&self, layer: usize, dim: usize) -> (&[u8], &[f64]) {
        let pool = &*self.pool;
        let slot = pool.array_index[pool.index(layer, self.p, class_of_dim(dim))];
        assert!(slot < pool.l, "cluster read before it was written");
        let decisions = pool.read_c(self.p, layer).expect("path is active");
        (decisions, &pool.t_data[layer * 4 + dim - 2][slot])
    }
}

impl DecisionStore for PathView<'_> {
    fn layer_pair(&mut self, layer: usize) -> (&[u8], &mut [u8]) {
        let p = self.p;
        let pool = &mut *self.pool;
        // make the lower array writable (copying it if shared) before borrowing
        pool.acquire_c(p, layer - 1).expect("path is active");
        let lower = pool.array_index[pool.index(layer - 1, p, 0)];
        let upper = pool.array_index[pool.index(layer, p, 0)];
        let l = pool.l;
        let (up, low) = split_pair(&mut pool.c_data, layer, layer - 1);
        let upper_data = if upper == l {
            &pool.zeros[..]
        } else {
            &up[upper][..]
        };
        (upper_data, &mut low[lower][..])
    }
}

/// Optional shortcuts of the list decoder; neither changes the decoded
/// message.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ListOptions {
    /// Do not score the frozen phases before the first information phase.
    pub skip_head: bool,
    /// After the last frozen phase keep only the best path and finish with
    /// plain SC decisions.
    pub sc_tail: bool,
}

/// Result of one list decode.
#[derive(Clone, Debug, PartialEq)]
pub struct ListOutput {
    pub message: Vec<u8>,
    pub u_hat: Vec<u8>,
    /// Score of the returned path.
    pub score: f64,
    /// Counted LLR operations over all paths.
    pub ops: OpCounter,
    /// Score comparisons spent selecting surviving candidates (not part of
    /// `ops`).
    pub selection_comparisons: u64,
}

const MUBAR_031: OpId = OpId::new(OpKind::MuBar, 0, 3, 1);
const MU_021: OpId = OpId::new(OpKind::Mu, 0, 2, 1);

/// A reusable list decoder for one code length and list size.
#[derive(Clone, Debug)]
pub struct ListDecoder {
    m: usize,
    n: usize,
    pool: ListPool,
    score: Vec<f64>,
    r: Vec<f64>,
    ops: OpCounter,
    selection_comparisons: u64,
}

/// Candidate continuation of a path.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    score: f64,
    path: usize,
    bit: u8,
    flipped: bool,
}

impl ListDecoder {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        let m = log2_exact(n)?;
        if m < 4 {
            return Err(Error::CodeTooShort { n, min: 16 });
        }
        Ok(Self {
            m,
            n,
            pool: ListPool::new(m, l)?,
            score: vec![0.0; l],
            r: vec![0.0; l],
            ops: OpCounter::new(),
            selection_comparisons: 0,
        })
    }

    pub fn pool(&self) -> &ListPool {
        &self.pool
    }

    pub fn active_paths(&self) -> Vec<usize> {
        self.pool.active_paths()
    }

    /// Current score of path `p`.
    pub fn score(&self, p: usize) -> f64 {
        self.score[p]
    }

    /// Last LLR computed for path `p`.
    pub fn llr(&self, p: usize) -> f64 {
        self.r[p]
    }

    /// Counted operations so far in the current decode.
    pub fn ops(&self) -> OpCounter {
        self.ops
    }

    pub fn decode(&mut self, spec: &CodeSpec, y: &[f64], opts: ListOptions) -> Result<ListOutput> {
        self.decode_observed(spec, y, opts, |_, _| {})
    }

    /// Like [`decode`](ListDecoder::decode), calling `observer` after every
    /// phase has been committed.
    pub fn decode_observed(
        &mut self,
        spec: &CodeSpec,
        y: &[f64],
        opts: ListOptions,
        mut observer: impl FnMut(&ListDecoder, usize),
    ) -> Result<ListOutput> {
        check_len(spec.n(), self.n)?;
        check_len(y.len(), self.n)?;
        self.init(y)?;
        let head_end = if opts.skip_head {
            spec.first_info().unwrap_or(self.n)
        } else {
            0
        };
        let tail_start = if opts.sc_tail {
            spec.last_frozen().map(|f| f + 1)
        } else {
            None
        };
        let mut limit = self.pool.list_size();
        for phase in 0..self.n {
            if tail_start == Some(phase) {
                let best = self.best_path();
                for p in self.pool.active_paths() {
                    if p != best {
                        self.pool.kill_path(p)?;
                    }
                }
                limit = 1;
            }
            let scored = phase >= head_end;
            for p in self.pool.active_paths() {
                self.calct(p, phase, scored)?;
            }
            if spec.is_frozen(phase) {
                self.continue_frozen(phase, scored)?;
            } else {
                self.continue_info(phase, limit)?;
            }
            observer(self, phase);
        }
        let best = self.best_path();
        let u_hat = encode_inverse(&self.pool.read_c(best, 0)?[..self.n])?;
        Ok(ListOutput {
            message: spec.extract(&u_hat),
            u_hat,
            score: self.score[best],
            ops: self.ops,
            selection_comparisons: self.selection_comparisons,
        })
    }

    fn init(&mut self, y: &[f64]) -> Result<()> {
        self.pool.reset();
        self.score.fill(0.0);
        self.r.fill(0.0);
        self.ops = OpCounter::new();
        self.selection_comparisons = 0;
        let quarter = self.n / 4;
        let gray = self.pool.acquire_t(0, 2, 4)?;
        for j in 0..quarter {
            let y4 = [y[j], y[j + quarter], y[j + 2 * quarter], y[j + 3 * quarter]];
            gray_init_into(y4, &mut gray[16 * j..16 * j + 16], &mut self.ops);
        }
        let mut view = PathView {
            pool: &mut self.pool,
            p: 0,
        };
        for o in [MUBAR_031, MU_021] {
            run_op(&mut view, self.m, 2, 0, o, &mut self.ops);
        }
        Ok(())
    }

    /// Computes the LLR of `phase` for path `p` into `R[p]`; with
    /// `scored == false` only the clusters are updated.
    fn calct(&mut self, p: usize, phase: usize, scored: bool) -> Result<()> {
        let m = self.m;
        let (start, mut psi) = if phase == 0 {
            (3, 0)
        } else {
            eff_start(m, phase)
        };
        let mut view = PathView {
            pool: &mut self.pool,
            p,
        };
        for layer in start..=m {
            for &o in eff_row(m, layer, psi)? {
                if o.kind == OpKind::DeltaMu && !scored {
                    continue;
                }
                if let Some(v) = run_op(&mut view, m, layer, psi, o, &mut self.ops) {
                    self.r[p] = v;
                }
            }
            if psi != 0 {
                psi = 2 * psi + 1;
            }
        }
        Ok(())
    }

    fn commit(&mut self, p: usize, phase: usize, bit: u8) -> Result<()> {
        self.pool.acquire_c(p, self.m)?[phase % 2] = bit;
        update_c(
            &mut PathView {
                pool: &mut self.pool,
                p,
            },
            self.m,
            phase,
        );
        Ok(())
    }

    /// Extends every path with a zero, penalizing paths whose LLR disagrees.
    fn continue_frozen(&mut self, phase: usize, scored: bool) -> Result<()> {
        for p in self.pool.active_paths() {
            if scored {
                self.score[p] += self.r[p].min(0.0);
            }
            self.commit(p, phase, 0)?;
        }
        Ok(())
    }

    /// Extends every path both ways and keeps the best `min(2|A|, limit)`
    /// continuations.
    fn continue_info(&mut self, phase: usize, limit: usize) -> Result<()> {
        let active = self.pool.active_paths();
        let mut cands = Vec::with_capacity(2 * active.len());
        for &p in &active {
            let natural = u8::from(self.r[p] < 0.0);
            cands.push(Candidate {
                score: self.score[p],
                path: p,
                bit: natural,
                flipped: false,
            });
            cands.push(Candidate {
                score: self.score[p] - self.r[p].abs(),
                path: p,
                bit: natural ^ 1,
                flipped: true,
            });
        }
        let mut comparisons = 0u64;
        cands.sort_by(|a, b| {
            comparisons += 1;
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(Ordering::Equal)
                .then(a.path.cmp(&b.path))
                .then(a.flipped.cmp(&b.flipped))
        });
        self.selection_comparisons += comparisons;
        cands.truncate(limit.min(cands.len()));

        let l = self.pool.list_size();
        let mut kept: Vec<Vec<Candidate>> = vec![Vec::new(); l];
        for c in &cands {
            kept[c.path].push(*c);
        }
        for &p in &active {
            if kept[p].is_empty() {
                self.pool.kill_path(p)?;
            }
        }
        for &p in &active {
            match kept[p].as_slice() {
                [] => {}
                [only] => {
                    self.score[p] = only.score;
                    self.commit(p, phase, only.bit)?;
                }
                [first, second] => {
                    let (natural, flipped) = if first.flipped {
                        (second, first)
                    } else {
                        (first, second)
                    };
                    let q = self.pool.clone_path(p)?;
                    self.score[q] = flipped.score;
                    self.r[q] = self.r[p];
                    self.score[p] = natural.score;
                    self.commit(p, phase, natural.bit)?;
                    self.commit(q, phase, flipped.bit)?;
                }
                _ => unreachable!("a path has two continuations"),
            }
        }
        Ok(())
    }

    /// Highest-scoring active path, ties to the smallest index.
    fn best_path(&self) -> usize {
        let mut best = None::<usize>;
        for p in self.pool.active_paths() {
            if best.is_none_or(|b| self.score[p] > self.score[b]) {
                best = Some(p);
            }
        }
        best.expect("at least one path stays active")
    }
}

/// One-shot list decode.
pub fn decode_list(spec: &CodeSpec, y: &[f64], l: usize, opts: ListOptions) -> Result<ListOutput> {
    ListDecoder::new(spec.n(), l)?.decode(spec, y, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sc::{decode_sc, Mode};
    use crate::sim::oracle::ml_oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noisy(rng: &mut ChaCha8Rng, c: &[u8], sigma: f64) -> Vec<f64> {
        c.iter()
            .map(|&b| {
                let s = 1.0 - 2.0 * f64::from(b);
                let noise: f64 = rng.gen_range(-1.0..1.0) * sigma * 1.7;
                -2.0 * (s + noise) / (sigma * sigma)
            })
            .collect()
    }

    fn random_spec(rng: &mut ChaCha8Rng, n: usize, k: usize) -> CodeSpec {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        CodeSpec::from_info(n, &idx[..k]).unwrap()
    }

    #[test]
    fn init_state() {
        let pool = ListPool::new(4, 4).unwrap();
        assert_eq!(pool.active_paths(), vec![0]);
        assert_eq!(pool.slot_of(0, 3, 2), Some(4));
        assert_eq!(pool.slot_of(1, 3, 2), None);
        assert_eq!(pool.ref_count(3, 4, 2), u32::MAX);
        pool.audit().unwrap();
        assert!(ListPool::new(4, 0).is_err());
    }

    #[test]
    fn acquire_and_clone() {
        let mut pool = ListPool::new(4, 3).unwrap();
        pool.acquire_t(0, 3, 3).unwrap()[0] = 7.0;
        let s = pool.slot_of(0, 3, 2).unwrap();
        assert_eq!(s, 0);
        pool.acquire_t(0, 3, 3).unwrap();
        assert_eq!(pool.slot_of(0, 3, 2), Some(s));
        let q = pool.clone_path(0).unwrap();
        assert_eq!(q, 1);
        assert_eq!(pool.ref_count(3, s, 2), 2);
        pool.audit().unwrap();
        pool.acquire_t(q, 3, 3).unwrap();
        assert_ne!(pool.slot_of(q, 3, 2), Some(s));
        assert_eq!(pool.ref_count(3, s, 2), 1);
        assert_eq!(pool.read_t(0, 3, 3).unwrap().unwrap()[0], 7.0);
        pool.audit().unwrap();
        assert_eq!(pool.cluster_copies(), 0);
    }

    #[test]
    fn decisions_copy_on_write() {
        let mut pool = ListPool::new(4, 2).unwrap();
        pool.acquire_c(0, 2).unwrap()[1] = 1;
        let q = pool.clone_path(0).unwrap();
        let before = pool.read_c(q, 2).unwrap().to_vec();
        pool.acquire_c(0, 2).unwrap()[1] = 0;
        assert_eq!(pool.read_c(q, 2).unwrap(), before.as_slice());
        assert_eq!(pool.read_c(0, 2).unwrap()[1], 0);
        assert_eq!(pool.decision_copies(), 1);
        let rc = pool.ref_count(2, pool.slot_of(q, 2, 0).unwrap(), 0);
        pool.read_c(q, 2).unwrap();
        assert_eq!(pool.ref_count(2, pool.slot_of(q, 2, 0).unwrap(), 0), rc);
        pool.audit().unwrap();
    }

    #[test]
    fn clone_then_kill_restores_pool() {
        let mut pool = ListPool::new(4, 4).unwrap();
        pool.acquire_t(0, 4, 2).unwrap();
        pool.acquire_c(0, 4).unwrap();
        let counts: Vec<u32> = (0..=4)
            .flat_map(|layer| (0..=4).flat_map(move |s| (0..CLASSES).map(move |c| (layer, s, c))))
            .map(|(layer, s, c)| pool.ref_count(layer, s, c))
            .collect();
        let free = pool.free.clone();
        let q = pool.clone_path(0).unwrap();
        pool.kill_path(q).unwrap();
        let after: Vec<u32> = (0..=4)
            .flat_map(|layer| (0..=4).flat_map(move |s| (0..CLASSES).map(move |c| (layer, s, c))))
            .map(|(layer, s, c)| pool.ref_count(layer, s, c))
            .collect();
        assert_eq!(counts, after);
        assert_eq!(free, pool.free);
        pool.kill_path(0).unwrap();
        pool.audit().unwrap();
        assert_eq!(pool.ref_count(4, 4, 1), u32::MAX);
        assert!(pool.kill_path(0).is_err());
        assert!(pool.clone_path(0).is_err());
    }

    #[test]
    fn clone_fails_when_full() {
        let mut pool = ListPool::new(4, 2).unwrap();
        pool.clone_path(0).unwrap();
        assert!(matches!(pool.clone_path(0), Err(Error::ListFull(2))));
    }

    #[test]
    fn frozen_and_info_scoring() {
        let mut dec = ListDecoder::new(16, 4).unwrap();
        dec.init(&[0.0; 16]).unwrap();
        dec.r[0] = 3.0;
        dec.continue_frozen(0, true).unwrap();
        assert_eq!(dec.score(0), 0.0);
        dec.r[0] = -2.0;
        dec.continue_frozen(1, true).unwrap();
        assert_eq!(dec.score(0), -2.0);
        dec.r[0] = -1.5;
        dec.continue_info(2, 4).unwrap();
        assert_eq!(dec.active_paths(), vec![0, 1]);
        assert_eq!(dec.score(1), -3.5);
        assert_eq!(dec.pool.read_c(0, 4).unwrap()[0], 1);
        assert_eq!(dec.pool.read_c(1, 4).unwrap()[0], 0);
        dec.pool.audit().unwrap();
    }

    #[test]
    fn single_path_matches_sc() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [16, 64] {
            let mut list = ListDecoder::new(n, 1).unwrap();
            for _ in 0..100 {
                let spec = random_spec(&mut rng, n, n / 2);
                let msg: Vec<u8> = (0..spec.k()).map(|_| rng.gen_range(0..2)).collect();
                let y = noisy(&mut rng, &spec.encode_message(&msg).unwrap(), 0.9);
                let sc = decode_sc(&spec, &y, Mode::Eff).unwrap();
                let mut llrs = Vec::new();
                let out = list
                    .decode_observed(&spec, &y, ListOptions::default(), |d, _| {
                        llrs.push(d.llr(0))
                    })
                    .unwrap();
                assert_eq!(out.u_hat, sc.u_hat);
                assert_eq!(llrs, sc.llrs);
                assert_eq!(out.ops, sc.ops);
            }
        }
    }

    #[test]
    fn large_list_is_ml() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut list = ListDecoder::new(16, 64).unwrap();
        for _ in 0..100 {
            let spec = random_spec(&mut rng, 16, 6);
            let msg: Vec<u8> = (0..6).map(|_| rng.gen_range(0..2)).collect();
            let y = noisy(&mut rng, &spec.encode_message(&msg).unwrap(), 1.0);
            let out = list.decode(&spec, &y, ListOptions::default()).unwrap();
            assert_eq!(out.message, ml_oracle(&spec, &y).unwrap());
            list.pool().audit().unwrap();
        }
    }

    #[test]
    fn shortcuts_keep_decisions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut list = ListDecoder::new(64, 4).unwrap();
        for _ in 0..100 {
            let spec = random_spec(&mut rng, 64, 32);
            let msg: Vec<u8> = (0..32).map(|_| rng.gen_range(0..2)).collect();
            let y = noisy(&mut rng, &spec.encode_message(&msg).unwrap(), 0.8);
            let plain = list.decode(&spec, &y, ListOptions::default()).unwrap();
            let opts = ListOptions {
                skip_head: true,
                sc_tail: true,
            };
            let fast = list.decode(&spec, &y, opts).unwrap();
            assert_eq!(plain.message, fast.message);
        }
    }

    #[test]
    fn full_rate_noiseless() {
        let spec = CodeSpec::from_frozen(32, &[]).unwrap();
        let msg: Vec<u8> = (0..32).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let y: Vec<f64> = spec
            .encode_message(&msg)
            .unwrap()
            .iter()
            .map(|&b| if b == 1 { 1.0 } else { -1.0 })
            .collect();
        for l in [1, 2, 3, 8] {
            assert_eq!(
                decode_list(&spec, &y, l, ListOptions::default())
                    .unwrap()
                    .message,
                msg
            );
        }
    }
}
