//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! At the dimensions used here (<= 36) Jacobi is simple, accurate to machine
//! precision, and fast enough to sit inside the seesaw inner loop. Output
//! order is deterministic: eigenvalues descending, exact ties broken by
//! lexicographic comparison of the eigenvectors, and each eigenvector's
//! global phase fixed so its largest-modulus entry is real positive.

use num_complex::Complex;

use super::{Complex64, HermitianOp};

/// Spectral decomposition `A = sum_k values[k] |vectors[k]><vectors[k]|`.
pub struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` paired with `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    /// Rebuild the operator from the decomposition (test oracle).
    pub fn reconstruct(&self) -> HermitianOp {
        let n = self.vectors[0].len();
        let mut acc = HermitianOp::zeros(n);
        for (val, vec) in self.values.iter().zip(self.vectors.iter()) {
            acc = &acc + &HermitianOp::outer(vec).scale(*val);
        }
        acc
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian operator by cyclic Jacobi rotations.
pub fn eig_hermitian(op: &HermitianOp) -> EigenDecomposition {
    let n = op.dim();
    let mut a: Vec<Complex64> = op.entries().to_vec();
    let mut v = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::ONE;
    }

    let scale = frobenius(&a);
    if scale > 0.0 {
        let target = scale * 1e-15;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a, n) <= target {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, n, p, q);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|r| v[r * n + k]).collect();
            canonical_phase(&mut col);
            (a[k * n + k].re, col)
        })
        .collect();

    pairs.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .expect("eigenvalues are finite")
            .then_with(|| lex_cmp(&x.1, &y.1))
    });

    let (values, vectors) = pairs.into_iter().unzip();
    EigenDecomposition { values, vectors }
}

/// One two-sided rotation zeroing the (p, q) entry.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // Phase of the off-diagonal entry; for real input this is exactly +-1,
    // so real matrices stay real through the sweep.
    let u = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let su = u * s;
    let su_conj = u.conj() * s;

    // A <- U' A U with U = [[c, s u], [-s conj(u), c]] acting on columns p, q.
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * su_conj;
        a[k * n + q] = akp * su + akq * c;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * su;
        a[q * n + k] = apk * su_conj + aqk * c;
    }
    // Closed forms for the rotated 2x2 block keep the diagonal exactly real.
    a[p * n + p] = Complex::new(app * c * c + aqq * s * s - 2.0 * c * s * mag, 0.0);
    a[q * n + q] = Complex::new(app * s * s + aqq * c * c + 2.0 * c * s * mag, 0.0);
    a[p * n + q] = Complex64::ZERO;
    a[q * n + p] = Complex64::ZERO;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * su_conj;
        v[k * n + q] = vkp * su + vkq * c;
    }
}

fn frobenius(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Rotate the global phase so the largest-modulus entry is real positive;
/// makes the decomposition reproducible and keeps real vectors real.
fn canonical_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (k, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = k;
        }
    }
    if best_mag == 0.0 {
        return;
    }
    let pivot = v[best];
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[best] = Complex::new(v[best].re, 0.0);
}

fn lex_cmp(x: &[Complex64], y: &[Complex64]) -> std::cmp::Ordering {
    for (a, b) in x.iter().zip(y.iter()) {
        match a.re.partial_cmp(&b.re).expect("finite") {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
        match a.im.partial_cmp(&b.im).expect("finite") {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_hermitian(&HermitianOp::identity(3));
        for v in &eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted_descending() {
        let a = HermitianOp::from_upper(3, |i, j| {
            if i == j {
                Complex64::new([3.0, 1.0, 2.0][i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let eig = eig_hermitian(&a);
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn known_two_by_two() {
        // [[0, 1], [1, 0]] has eigenvalues +-1 with eigenvectors (1, +-1)/sqrt(2).
        let a = HermitianOp::from_upper(2, |i, j| {
            if i == j {
                Complex64::ZERO
            } else {
                Complex64::ONE
            }
        });
        let eig = eig_hermitian(&a);
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] + 1.0).abs() < 1e-14);
        let top = &eig.vectors[0];
        assert!((top[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((top[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let a = HermitianOp::from_upper(5, |i, j| {
            if i == j {
                Complex64::new(i as f64 - 1.3, 0.0)
            } else {
                Complex64::new(0.3 * (i as f64 - j as f64), 0.1 * (i + j) as f64)
            }
        });
        let eig = eig_hermitian(&a);
        assert!(eig.reconstruct().hs_distance(&a).unwrap() < 1e-12);
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let a = HermitianOp::from_upper(6, |i, j| {
            Complex64::new(
                1.0 / (1.0 + (i + j) as f64),
                if i == j { 0.0 } else { 0.05 * (j - i) as f64 },
            )
        });
        let eig = eig_hermitian(&a);
        for p in 0..6 {
            for q in 0..6 {
                let dot: Complex64 = eig.vectors[p]
                    .iter()
                    .zip(eig.vectors[q].iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let expected = if p == q { 1.0 } else { 0.0 };
                assert!((dot.re - expected).abs() < 1e-12 && dot.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn real_input_gives_real_eigenvectors() {
        let a = HermitianOp::from_upper(4, |i, j| Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, 0.0));
        let eig = eig_hermitian(&a);
        for vec in &eig.vectors {
            for z in vec {
                assert_eq!(z.im, 0.0);
            }
        }
    }
}
