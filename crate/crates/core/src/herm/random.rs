//! Haar-distributed local state sampling.
//!
//! A vector of i.i.d. standard complex Gaussian entries, normalized, is
//! Haar-distributed on the unit sphere (the Zyczkowski–Sommers recipe); with
//! `real_only` the entries are real Gaussians and the distribution is
//! invariant under orthogonal rotations instead. Every sampler takes the
//! generator explicitly — there is no hidden global state anywhere in the
//! crate.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{BipartiteDims, Complex64, ProductVector};

/// One Haar-random unit vector of dimension `d`.
///
/// With `real_only` set, imaginary parts are exactly zero.
pub fn random_local_state<R: Rng + ?Sized>(d: usize, real_only: bool, rng: &mut R) -> Vec<Complex64> {
    assert!(d >= 2, "local dimension must be at least 2");
    loop {
        let mut v: Vec<Complex64> = (0..d)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if real_only { 0.0 } else { rng.sample(StandardNormal) };
                Complex::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for z in &mut v {
                *z /= norm;
            }
            return v;
        }
        // All-zero draw is astronomically unlikely; redraw keeps the stream
        // deterministic.
    }
}

/// A pair of independent Haar-random local vectors.
pub fn random_product_vector<R: Rng + ?Sized>(
    dims: BipartiteDims,
    real_only: bool,
    rng: &mut R,
) -> ProductVector {
    let a = random_local_state(dims.d1(), real_only, rng);
    let b = random_local_state(dims.d2(), real_only, rng);
    ProductVector::new_unchecked(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_vectors_are_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=6 {
            let v = random_local_state(d, false, &mut rng);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn real_only_has_zero_imaginary_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = random_local_state(5, true, &mut rng);
        for z in &v {
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn fixed_seed_reproduces_bits() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(123);
            random_local_state(4, false, &mut rng)
        };
        let (u, v) = (draw(), draw());
        for (x, y) in u.iter().zip(v.iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn haar_first_component_moment() {
        // |<e1|v>|^2 is Beta(1, d-1) under the Haar measure: mean 1/d,
        // variance (d-1)/(d^2 (d+1)). Monte-Carlo mean must sit within
        // three standard errors.
        let d = 3;
        let n = 100_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut acc = 0.0;
        for _ in 0..n {
            let v = random_local_state(d, false, &mut rng);
            acc += v[0].norm_sqr();
        }
        let mean = acc / n as f64;
        let var = (d as f64 - 1.0) / ((d * d) as f64 * (d as f64 + 1.0));
        let three_sigma = 3.0 * (var / n as f64).sqrt();
        assert!(
            (mean - 1.0 / d as f64).abs() < three_sigma,
            "mean {mean} deviates more than {three_sigma}"
        );
    }
}
