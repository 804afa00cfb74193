//! Monte-Carlo frozen-set construction.
//!
//! Random input vectors are encoded, sent over an AWGN channel and decoded by
//! a genie-aided SC decoder that always continues with the true bits. Phase
//! `φ` counts an error whenever its hard decision disagrees with `u_φ`, which
//! is the first error of the frame had all earlier phases been right. The
//! `n − k` phases with the most errors are frozen (ties freeze the lower
//! index).

use crate::error::{Error, Result};
use crate::sc::{Mode, ScDecoder};
use crate::sim::channel::{random_bits, trial_rng, Channel};
use crate::transform::{encode, log2_exact, CodeSpec};

/// Per-phase genie-aided error counts over `trials` frames.
pub fn phase_error_counts(n: usize, sigma: f64, trials: u64, seed: u64) -> Result<Vec<u64>> {
    let channel = Channel::awgn(sigma)?;
    let m = log2_exact(n)?;
    let mode = if m >= Mode::Eff.min_log_len() {
        Mode::Eff
    } else {
        Mode::Sf
    };
    let mut decoder = ScDecoder::new(n, mode)?;
    let mut counts = vec![0u64; n];
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let u = random_bits(&mut rng, n);
        let y = channel.transmit(&encode(&u)?, &mut rng);
        let llrs = decoder.decode_genie(&y, &u)?;
        for (phase, (&llr, &bit)) in llrs.iter().zip(&u).enumerate() {
            if u8::from(llr < 0.0) != bit {
                counts[phase] += 1;
            }
        }
    }
    Ok(counts)
}

/// Builds an `(n, k)` code by freezing the `n − k` least reliable phases at
/// noise deviation `sigma`.
pub fn mc_construct(n: usize, k: usize, sigma: f64, trials: u64, seed: u64) -> Result<CodeSpec> {
    if k >= n {
        return Err(Error::InvalidCode(format!(
            "dimension {k} must be below the length {n}"
        )));
    }
    let counts = phase_error_counts(n, sigma, trials, seed)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut frozen = order[..n - k].to_vec();
    frozen.sort_unstable();
    CodeSpec::from_frozen(n, &frozen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contract() {
        let spec = mc_construct(64, 32, 0.8, 200, 1).unwrap();
        assert_eq!(spec.frozen().len(), 32);
        assert_eq!(spec.k(), 32);
        assert!(spec.frozen().iter().all(|f| !spec.info().contains(f)));
        assert!(spec.is_frozen(0));
        assert!(!spec.is_frozen(63));
        assert_eq!(spec, mc_construct(64, 32, 0.8, 200, 1).unwrap());
    }

    #[test]
    fn rejects_full_rate() {
        assert!(mc_construct(16, 16, 0.5, 10, 0).is_err());
    }
}
