//! Deterministic, seedable generation of Gaussian sensing matrices, planted
//! split-sparse signals, and norm-bounded noise.
//!
//! The raw generator is SplitMix64 (Steele, Lea & Flood's 64-bit mixer with
//! the golden-ratio increment); normals come from the Box–Muller transform,
//! which consumes a fixed pair of raw outputs per pair of samples, so stream
//! accounting stays exact. Every generated object is a pure function of
//! `(Seed, parameters)` within one build. Bit reproducibility across
//! different builds or platforms is deliberately not promised; the
//! statistical tests below are the portable contract.

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix};
use crate::partial::PartiallySparseSignal;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Base seed plus a sub-stream index. Distinct streams derived from the same
/// base are decorrelated by seeding the generator at
/// `base XOR (stream * GOLDEN_GAMMA)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub base: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(base: u64) -> Self {
        Self { base, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self {
            base: self.base,
            stream,
        }
    }

    /// Derived sub-stream: mixes the extra index into the current stream.
    /// Used to give each consumer of a seed (matrix, signal, noise, trial)
    /// its own independent raw sequence.
    pub fn substream(self, index: u64) -> Self {
        Self {
            base: self.base,
            stream: mix64(self.stream ^ index.wrapping_mul(GOLDEN_GAMMA)),
        }
    }
}

/// SplitMix64 finalizer; also reused as a general-purpose 64-bit hash.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic generator: SplitMix64 stream plus a Box–Muller spare slot.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    spare_normal: Option<f64>,
}

impl Rng {
    pub fn from_seed(seed: Seed) -> Self {
        Self {
            state: seed.base ^ seed.stream.wrapping_mul(GOLDEN_GAMMA),
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): 53 high bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform strictly inside (0, 1); safe to feed to a logarithm.
    fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by Box–Muller; pairs are drawn together and the
    /// second one is cached.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(v) = self.spare_normal.take() {
            return v;
        }
        let u1 = self.next_open01();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Uniform integer in `[0, bound)` by the widening-multiply map.
    pub fn next_index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// How planted signals are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    pub support_law: SupportLaw,
    pub magnitude_law: MagnitudeLaw,
    pub dense_law: DenseLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportLaw {
    UniformSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MagnitudeLaw {
    /// Entries are exactly ±1.
    UnitMagnitudeRandomSign,
    /// Magnitudes uniform in `[lo, hi]` (with `lo > 0`), random signs.
    UniformInRange { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DenseLaw {
    StandardGaussian,
}

impl Default for SignalModel {
    fn default() -> Self {
        Self {
            support_law: SupportLaw::UniformSupport,
            magnitude_law: MagnitudeLaw::UniformInRange { lo: 0.5, hi: 2.0 },
            dense_law: DenseLaw::StandardGaussian,
        }
    }
}

impl SignalModel {
    pub fn validate(&self) -> Result<()> {
        if let MagnitudeLaw::UniformInRange { lo, hi } = self.magnitude_law {
            if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
                return Err(Error::DomainError(format!(
                    "magnitude range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// `k x n` matrix with i.i.d. normal entries of mean 0 and variance `1/k`,
/// filled in row-major order.
pub fn gaussian_matrix(k: usize, n: usize, seed: Seed) -> DenseMatrix {
    let mut rng = Rng::from_seed(seed);
    let scale = 1.0 / (k as f64).sqrt();
    let entries: Vec<f64> = (0..k * n).map(|_| rng.next_normal() * scale).collect();
    DenseMatrix::new(k, n, entries).expect("generated entries are finite")
}

/// Plant a split signal: `x1` has exactly `sparsity` nonzeros on a uniformly
/// random support, `x2` is dense. Draw order is support, then magnitudes,
/// then the dense block.
pub fn planted_signal(
    n_minus_r: usize,
    sparsity: usize,
    r: usize,
    model: &SignalModel,
    seed: Seed,
) -> Result<PartiallySparseSignal> {
    if sparsity > n_minus_r {
        return Err(Error::DomainError(format!(
            "sparsity {sparsity} exceeds block length {n_minus_r}"
        )));
    }
    model.validate()?;
    let mut rng = Rng::from_seed(seed);

    // Partial Fisher-Yates: the first `sparsity` slots are a uniform subset.
    let mut indices: Vec<usize> = (0..n_minus_r).collect();
    for i in 0..sparsity {
        let j = i + rng.next_index(n_minus_r - i);
        indices.swap(i, j);
    }
    let mut support = indices[..sparsity].to_vec();
    support.sort_unstable();

    let mut x1 = vec![0.0; n_minus_r];
    for &idx in &support {
        x1[idx] = match model.magnitude_law {
            MagnitudeLaw::UnitMagnitudeRandomSign => rng.next_sign(),
            MagnitudeLaw::UniformInRange { lo, hi } => {
                let mag = lo + rng.next_f64() * (hi - lo);
                mag * rng.next_sign()
            }
        };
    }

    let x2: Vec<f64> = match model.dense_law {
        DenseLaw::StandardGaussian => (0..r).map(|_| rng.next_normal()).collect(),
    };

    Ok(PartiallySparseSignal {
        x1,
        x2,
        declared_sparsity: sparsity,
    })
}

/// Noise with `||ε||₂ <= eta`, exactly. The direction is an isotropic
/// Gaussian draw; the radius is `eta` itself when `boundary` is set (the
/// worst case for error-bound checks) and `eta · u^(1/k)` otherwise, which
/// is uniform in the ball.
pub fn noise_on_ball(k: usize, eta: f64, seed: Seed, boundary: bool) -> Result<Vec<f64>> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::DomainError(format!(
            "noise radius must be nonnegative, got {eta}"
        )));
    }
    if eta == 0.0 || k == 0 {
        return Ok(vec![0.0; k]);
    }
    let mut rng = Rng::from_seed(seed);
    let mut direction: Vec<f64>;
    loop {
        direction = (0..k).map(|_| rng.next_normal()).collect();
        if norm2(&direction) > 0.0 {
            break;
        }
    }
    let norm = norm2(&direction);
    let radius = if boundary {
        eta
    } else {
        eta * rng.next_open01().powf(1.0 / k as f64)
    };
    let mut eps: Vec<f64> = direction.iter().map(|d| d * radius / norm).collect();
    // Clamp out any rounding excess so the bound holds with zero tolerance.
    let actual = norm2(&eps);
    if actual > eta {
        let shrink = eta / actual;
        for e in eps.iter_mut() {
            *e *= shrink;
        }
    }
    Ok(eps)
}
