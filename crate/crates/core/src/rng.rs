//! Seeded randomness. Every random draw in the crate descends from one `u64`
//! seed; independent consumers take separate ChaCha streams so adding a draw
//! in one place never shifts the values seen elsewhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CrateRng = ChaCha8Rng;

/// Root of the seed tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedTree {
    seed: u64,
}

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        SeedTree { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generator for the named stream.
    pub fn stream(&self, label: &str) -> CrateRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(label.as_bytes()));
        rng
    }

    /// Child tree for a sub-computation (e.g. the `i`-th loop).
    pub fn child(&self, label: &str, index: u64) -> SeedTree {
        let mut h = fnv1a(label.as_bytes()) ^ self.seed.rotate_left(17);
        h = h.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ index;
        SeedTree { seed: splitmix(h) }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn nonzero_small<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Random nonzero rational with numerator and denominator uniform in
/// `[-999, 999] \ {0}`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    random_rational_bounded(rng, 999)
}

pub fn random_rational_bounded<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    let n = nonzero_small(rng, bound);
    let d = nonzero_small(rng, bound);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random rational avoiding every value in `forbidden`.
pub fn random_rational_avoiding<R: Rng + ?Sized>(rng: &mut R, forbidden: &[BigRational]) -> BigRational {
    loop {
        let q = random_rational(rng);
        if !forbidden.contains(&q) {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let t = SeedTree::new(7);
        let a: Vec<u32> = (0..4).map(|_| t.stream("a").gen()).collect();
        let a2: Vec<u32> = (0..4).map(|_| t.stream("a").gen()).collect();
        assert_eq!(a, a2);
        let mut ra = t.stream("a");
        let mut rb = t.stream("b");
        assert_ne!(ra.gen::<u64>(), rb.gen::<u64>());
        assert_ne!(t.child("loop", 0), t.child("loop", 1));
    }

    #[test]
    fn rationals_in_range() {
        let mut rng = SeedTree::new(1).stream("q");
        for _ in 0..200 {
            let q = random_rational(&mut rng);
            assert!(q != BigRational::from_integer(0.into()));
            assert!(q.numer().magnitude() <= &999u32.into());
        }
    }
}
