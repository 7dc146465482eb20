//! Seedable randomness with independent named substreams.
//!
//! Every substream is a ChaCha8 keystream keyed by the master seed and
//! addressed by a 64-bit stream id, so two substreams never share
//! keystream blocks and any draw can be regenerated from
//! `(seed, name, word position)` alone.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Names of the substreams used by a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StreamName {
    /// Exponential perturbations `q`.
    Perturbation,
    /// Exploration coin `r`.
    ExploreCoin,
    /// Uniform exploration pick `u`.
    ExplorePick,
    /// Adversary randomness.
    Adversary,
    /// Monte-Carlo resampling of the perturbed leader.
    MonteCarlo,
}

impl StreamName {
    pub const ALL: [StreamName; 5] = [
        StreamName::Perturbation,
        StreamName::ExploreCoin,
        StreamName::ExplorePick,
        StreamName::Adversary,
        StreamName::MonteCarlo,
    ];

    pub fn short(self) -> &'static str {
        match self {
            StreamName::Perturbation => "q",
            StreamName::ExploreCoin => "r",
            StreamName::ExplorePick => "u",
            StreamName::Adversary => "adv",
            StreamName::MonteCarlo => "mc",
        }
    }

    fn id(self) -> u64 {
        match self {
            StreamName::Perturbation => 1,
            StreamName::ExploreCoin => 2,
            StreamName::ExplorePick => 3,
            StreamName::Adversary => 4,
            StreamName::MonteCarlo => 5,
        }
    }
}

/// One independent substream.
#[derive(Debug, Clone)]
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    /// Substream `name` of `seed`. `lane` separates further independent
    /// copies of the same name (replications, workers).
    pub fn new(seed: u64, name: StreamName, lane: u64) -> Self {
        assert!(lane < (1 << 48), "lane index out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((name.id() << 48) | lane);
        Stream { rng }
    }

    /// Position in 32-bit words since the start of the substream.
    pub fn position(&self) -> u64 {
        self.rng.get_word_pos() as u64
    }

    pub fn seek(&mut self, position: u64) {
        self.rng.set_word_pos(position as u128);
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-rate exponential draw.
    pub fn exponential(&mut self) -> f64 {
        exponential_from_uniform(self.uniform())
    }

    /// `true` with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Inverse CDF of the unit exponential: `-ln(1 - u)`.
pub fn exponential_from_uniform(u: f64) -> f64 {
    -libm::log1p(-u)
}

/// Draws one perturbation with `P(q >= x) = e^{-x}`.
pub fn sample_exponential(stream: &mut Stream) -> f64 {
    stream.exponential()
}

/// Word positions of all five substreams at some instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DrawCursor {
    pub q: u64,
    pub r: u64,
    pub u: u64,
    pub adv: u64,
    pub mc: u64,
}

/// The full set of named substreams for one game.
#[derive(Debug, Clone)]
pub struct RandomStreams {
    seed: u64,
    streams: [Stream; 5],
}

impl RandomStreams {
    pub fn new(seed: u64) -> Self {
        Self::with_lane(seed, 0)
    }

    pub fn with_lane(seed: u64, lane: u64) -> Self {
        RandomStreams {
            seed,
            streams: StreamName::ALL.map(|name| Stream::new(seed, name, lane)),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&mut self, name: StreamName) -> &mut Stream {
        &mut self.streams[name as usize]
    }

    pub fn cursor(&self) -> DrawCursor {
        let p = |name: StreamName| self.streams[name as usize].position();
        DrawCursor {
            q: p(StreamName::Perturbation),
            r: p(StreamName::ExploreCoin),
            u: p(StreamName::ExplorePick),
            adv: p(StreamName::Adversary),
            mc: p(StreamName::MonteCarlo),
        }
    }

    /// Repositions every substream to `cursor`.
    pub fn restore(&mut self, cursor: &DrawCursor) {
        self.get(StreamName::Perturbation).seek(cursor.q);
        self.get(StreamName::ExploreCoin).seek(cursor.r);
        self.get(StreamName::ExplorePick).seek(cursor.u);
        self.get(StreamName::Adversary).seek(cursor.adv);
        self.get(StreamName::MonteCarlo).seek(cursor.mc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn inverse_cdf_endpoints() {
        assert_eq!(exponential_from_uniform(0.0), 0.0);
        let u = 1.0 - libm::exp(-1.0);
        assert!((exponential_from_uniform(u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_mean_is_one() {
        let mut s = Stream::new(7, StreamName::Perturbation, 0);
        let m = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..m {
            let x = sample_exponential(&mut s);
            assert!(x >= 0.0);
            sum += x;
        }
        // sd of the mean is 1e-3; 5 sigma
        assert!((sum / m as f64 - 1.0).abs() < 0.005);
    }

    #[test]
    fn exponential_ks_distance() {
        let mut s = Stream::new(11, StreamName::MonteCarlo, 0);
        let m = 100_000;
        let mut xs: Vec<f64> = (0..m).map(|_| s.exponential()).collect();
        xs.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        for (k, &x) in xs.iter().enumerate() {
            let f = 1.0 - libm::exp(-x);
            d = d.max((f - k as f64 / m as f64).abs());
            d = d.max(((k + 1) as f64 / m as f64 - f).abs());
        }
        assert!(d < 0.01, "KS distance {d}");
    }

    #[test]
    fn same_name_same_sequence() {
        let mut a = Stream::new(42, StreamName::ExplorePick, 0);
        let mut b = Stream::new(42, StreamName::ExplorePick, 0);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn distinct_names_uncorrelated() {
        let m = 100_000;
        for (i, &x) in StreamName::ALL.iter().enumerate() {
            for &y in &StreamName::ALL[i + 1..] {
                let mut a = Stream::new(3, x, 0);
                let mut b = Stream::new(3, y, 0);
                let (mut sa, mut sb, mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for _ in 0..m {
                    let u = a.uniform();
                    let v = b.uniform();
                    sa += u;
                    sb += v;
                    sab += u * v;
                    saa += u * u;
                    sbb += v * v;
                }
                let mf = m as f64;
                let cov = sab / mf - (sa / mf) * (sb / mf);
                let va = saa / mf - (sa / mf) * (sa / mf);
                let vb = sbb / mf - (sb / mf) * (sb / mf);
                let corr = cov / libm::sqrt(va * vb);
                assert!(corr.abs() < 0.01, "{x:?} vs {y:?}: {corr}");
            }
        }
    }

    #[test]
    fn lanes_are_distinct() {
        let mut a = Stream::new(3, StreamName::Perturbation, 0);
        let mut b = Stream::new(3, StreamName::Perturbation, 1);
        assert_ne!(a.uniform().to_bits(), b.uniform().to_bits());
    }

    #[test]
    fn cursor_restore_replays_draws() {
        let mut s = RandomStreams::new(99);
        s.get(StreamName::Perturbation).exponential();
        s.get(StreamName::ExplorePick).index(7);
        let cur = s.cursor();
        let expect: Vec<u64> = (0..20)
            .map(|_| s.get(StreamName::Perturbation).uniform().to_bits())
            .collect();
        let mut t = RandomStreams::new(99);
        t.restore(&cur);
        let got: Vec<u64> = (0..20)
            .map(|_| t.get(StreamName::Perturbation).uniform().to_bits())
            .collect();
        assert_eq!(expect, got);
    }
}
