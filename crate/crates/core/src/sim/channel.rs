//! Binary-input channels with BPSK mapping `b → 1 − 2b`.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`): trial `t` of a run seeded
//! with `s` draws from the generator seeded with `s` on stream `t`, so every
//! trial is reproducible on its own and across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A memoryless binary-input channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    /// Additive white Gaussian noise with standard deviation `sigma`.
    Awgn { sigma: f64 },
    /// Binary symmetric channel with crossover probability `p`.
    Bsc { p: f64 },
}

impl Channel {
    pub fn awgn(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Channel::Awgn { sigma })
        } else {
            Err(Error::InvalidChannel(format!(
                "noise deviation {sigma} must be positive"
            )))
        }
    }

    /// AWGN channel at `Eb/N0 = ebn0_db` for a code of rate `rate`:
    /// `σ² = 1 / (2·rate·10^{ebn0_db/10})`.
    pub fn awgn_ebn0(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidChannel(format!(
                "code rate {rate} outside (0, 1]"
            )));
        }
        Self::awgn((2.0 * rate * 10f64.powf(ebn0_db / 10.0)).recip().sqrt())
    }

    /// BSC with `0 < p < 0.5`; `p = 0` is rejected because its LLRs are
    /// infinite.
    pub fn bsc(p: f64) -> Result<Self> {
        if p > 0.0 && p < 0.5 {
            Ok(Channel::Bsc { p })
        } else {
            Err(Error::InvalidChannel(format!(
                "crossover probability {p} outside (0, 0.5)"
            )))
        }
    }

    /// Sends codeword `c` and returns the channel LLRs
    /// `Y_i = ln W(1|y_i) / W(0|y_i)`.
    pub fn transmit<R: Rng + ?Sized>(&self, c: &[u8], rng: &mut R) -> Vec<f64> {
        match *self {
            Channel::Awgn { sigma } => c
                .iter()
                .map(|&b| {
                    let noise: f64 = rng.sample(StandardNormal);
                    awgn_llr(1.0 - 2.0 * f64::from(b) + sigma * noise, sigma)
                })
                .collect(),
            Channel::Bsc { p } => {
                let magnitude = ((1.0 - p) / p).ln();
                c.iter()
                    .map(|&b| {
                        let received = b ^ u8::from(rng.gen_bool(p));
                        if received == 1 {
                            magnitude
                        } else {
                            -magnitude
                        }
                    })
                    .collect()
            }
        }
    }
}

/// LLR of an AWGN channel output `y`: `−2y/σ²`.
pub fn awgn_llr(y: f64, sigma: f64) -> f64 {
    -2.0 * y / (sigma * sigma)
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `n` uniformly random bits.
pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.gen::<bool>())).collect()
}
