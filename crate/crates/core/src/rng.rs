//! Seeded random streams and samplers shared by every experiment.
//!
//! All randomness goes through [`Pcg32`] (PCG-XSH-RR: 64-bit LCG state, 32-bit
//! output, selectable odd increment). A run is addressed by `(seed, index)`:
//! the seed becomes the LCG state and the index selects the stream, so trial
//! `i` of a Monte-Carlo loop draws the same numbers no matter which worker
//! runs it or in which order.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_distr::StandardNormal;
pub use rand_pcg::Pcg32;

/// Independent generator for sub-experiment `index` of a run seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> Pcg32 {
    Pcg32::new(seed, index)
}

/// Uniform `k`-subset of `0..n` (Floyd's algorithm), returned sorted.
pub fn sample_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "cannot sample {k} distinct indices from {n}");
    let mut chosen = std::collections::BTreeSet::new();
    for j in (n - k)..n {
        let t = rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

/// Random `s`-sparse unit vector: uniform support, standard normal values,
/// scaled to unit Euclidean norm.
pub fn sparse_signal<R: Rng + ?Sized>(rng: &mut R, n: usize, s: usize) -> Vec<f64> {
    let support = sample_subset(rng, n, s);
    let mut x = vec![0.0; n];
    for &i in &support {
        x[i] = rng.sample(StandardNormal);
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient clamped to `u64::MAX`.
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    u64::try_from(binomial(n, k)).unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| stream(7, 0).random()).collect();
        let b: Vec<u32> = (0..4).map(|_| stream(7, 0).random()).collect();
        assert_eq!(a, b);
        let x: u64 = stream(7, 0).random();
        let y: u64 = stream(7, 1).random();
        assert_ne!(x, y);
    }

    #[test]
    fn floyd_subset_is_sorted_and_distinct() {
        let mut rng = stream(1, 2);
        for k in 0..=10 {
            let s = sample_subset(&mut rng, 10, k);
            assert_eq!(s.len(), k);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&i| i < 10));
        }
    }

    #[test]
    fn floyd_subset_is_roughly_uniform() {
        let mut rng = stream(3, 0);
        let mut counts = [0usize; 6];
        for _ in 0..60_000 {
            for i in sample_subset(&mut rng, 6, 2) {
                counts[i] += 1;
            }
        }
        // each index appears with probability 1/3
        for c in counts {
            assert!((c as f64 - 20_000.0).abs() < 600.0, "{counts:?}");
        }
    }

    #[test]
    fn sparse_signal_has_unit_norm_and_sparsity() {
        let mut rng = stream(11, 5);
        let x = sparse_signal(&mut rng, 20, 4);
        assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 4);
        let n2: f64 = x.iter().map(|v| v * v).sum();
        assert!((n2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(19, 16), 969);
        assert_eq!(binomial_u64(11, 6), 462);
        assert_eq!(binomial_u64(3, 5), 0);
        let big = binomial(1009, 508);
        // about 1.34e302
        let digits = big.to_string();
        assert_eq!(digits.len(), 303);
        assert!(digits.starts_with("134"), "{}", &digits[..5]);
    }
}
