//! Reproducible random streams.
//!
//! A [`RngStream`] is a value `(seed, stream_id)`; it never mutates. Draw
//! `i` of a batch pulls its variates from [`RngStream::substream`]`(i)`, a
//! SplitMix64 generator keyed by `(seed, stream_id, i)`, so each row of a
//! batch is a pure function of those three words: batches are reproducible
//! bit-for-bit and independent of evaluation order.

use rand::RngCore;

use crate::Real;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Vigna): full-avalanche 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An immutable handle on a family of reproducible random substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// The generator for draw `index`. Identical `(seed, stream_id, index)`
    /// reproduces the identical variate sequence.
    pub fn substream(&self, index: u64) -> DrawRng {
        let mut h = self.seed.wrapping_add(GOLDEN_GAMMA);
        h = mix64(h) ^ self.stream_id;
        h = mix64(h.wrapping_add(GOLDEN_GAMMA)) ^ index;
        DrawRng {
            state: mix64(h.wrapping_add(GOLDEN_GAMMA)),
        }
    }

    /// Derives an unrelated stream from this one, for internal parallel or
    /// multi-phase use without colliding with caller-chosen stream ids.
    pub fn split(&self, label: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: mix64(self.stream_id.wrapping_add(GOLDEN_GAMMA) ^ mix64(label)),
        }
    }
}

/// SplitMix64 sequence for a single draw; output `n` is a pure function of
/// the key and `n`.
#[derive(Debug, Clone)]
pub struct DrawRng {
    state: u64,
}

impl RngCore for DrawRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let mut chunks = dest.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.next_u64().to_le_bytes());
        }
        let rem = chunks.into_remainder();
        if !rem.is_empty() {
            let bytes = self.next_u64().to_le_bytes();
            rem.copy_from_slice(&bytes[..rem.len()]);
        }
    }
}

/// Scalar types that can be drawn from the standard distributions used by
/// the samplers. Implemented for `f32` and `f64` on top of `rand_distr`
/// (ziggurat normals, Marsaglia-Tsang gamma).
pub trait Sample: Real {
    /// Standard normal variate.
    fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> Self;

    /// Uniform variate in the open interval (0, 1).
    fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> Self;

    /// Student-t variate with `df > 0` degrees of freedom.
    fn student_t<R: RngCore + ?Sized>(rng: &mut R, df: Self) -> Self;

    /// Gamma variate with `shape > 0` and `scale > 0`.
    fn gamma<R: RngCore + ?Sized>(rng: &mut R, shape: Self, scale: Self) -> Self;
}

macro_rules! impl_sample {
    ($t:ty) => {
        impl Sample for $t {
            fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> Self {
                rand::Rng::sample(rng, rand_distr::StandardNormal)
            }

            fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> Self {
                rand::Rng::sample(rng, rand_distr::Open01)
            }

            fn student_t<R: RngCore + ?Sized>(rng: &mut R, df: Self) -> Self {
                let dist = rand_distr::StudentT::new(df).expect("degrees of freedom must be positive");
                rand::Rng::sample(rng, dist)
            }

            fn gamma<R: RngCore + ?Sized>(rng: &mut R, shape: Self, scale: Self) -> Self {
                let dist = rand_distr::Gamma::new(shape, scale).expect("gamma parameters must be positive");
                rand::Rng::sample(rng, dist)
            }
        }
    };
}

impl_sample!(f32);
impl_sample!(f64);

/// A vector of `n` independent standard normal variates.
pub fn standard_normal_vector<T: Sample, R: RngCore + ?Sized>(
    rng: &mut R,
    n: usize,
) -> nalgebra::DVector<T> {
    nalgebra::DVector::from_fn(n, |_, _| T::standard_normal(rng))
}
