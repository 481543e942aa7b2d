//! Dense complex Hermitian operator algebra.
//!
//! Operators are stored dense and row-major; every dimension in play is at
//! most 36, where dense beats anything clever. The [`HermitianOp`] type keeps
//! exact conjugate symmetry as a representation invariant: all constructors
//! either fill only the upper triangle and mirror it, or perform operations
//! (sums, real scalings, entry permutations) that preserve exact symmetry in
//! floating point. Validated input paths check symmetry to [`HERMITICITY_TOL`]
//! and then re-symmetrize.

mod eig;
mod io;
mod random;

pub use eig::{eig_hermitian, EigenDecomposition};
pub use io::{fnv1a64, operator_from_str, operator_hash, operator_to_string, read_operator, write_operator};
pub use random::{random_local_state, random_product_vector};

use std::ops::{Add, Deref, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Elementwise tolerance for accepting externally supplied matrices as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on quantities derived through long computations (traces, eigenvalues).
pub const DERIVED_TOL: f64 = 1e-10;
/// Tolerance for unit-norm checks on local vectors.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Dimensions of a bipartite system; the joint space has dimension `d1 * d2`.
///
/// The composite basis index is `i * d2 + j` (zero-based) for local indices
/// `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    d1: usize,
    d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 < 2 {
            return Err(Error::DimTooSmall(d1));
        }
        if d2 < 2 {
            return Err(Error::DimTooSmall(d2));
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Joint dimension `d1 * d2`.
    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    /// Composite basis index for zero-based local indices.
    pub fn composite(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.d1 && j < self.d2);
        i * self.d2 + j
    }
}

/// Dense complex Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianOp {
    /// Build from a full entry list, validating conjugate symmetry to
    /// [`HERMITICITY_TOL`] and then symmetrizing exactly.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimTooSmall(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch(entries.len(), dim * dim));
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let diff = entries[i * dim + j] - entries[j * dim + i].conj();
                worst = worst.max(diff.norm());
            }
        }
        if worst > HERMITICITY_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let mut op = Self { dim, entries };
        op.symmetrize();
        Ok(op)
    }

    /// Fill only the upper triangle through `f(i, j)` for `i <= j`; the lower
    /// triangle is mirrored by conjugation and diagonal imaginary parts are
    /// dropped, so the result is exactly Hermitian whatever `f` returns.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 2, "operator dimension must be at least 2");
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let z = f(i, j);
                if i == j {
                    entries[i * dim + i] = Complex64::new(z.re, 0.0);
                } else {
                    entries[i * dim + j] = z;
                    entries[j * dim + i] = z.conj();
                }
            }
        }
        Self { dim, entries }
    }

    /// Internal constructor for results of operations that preserve exact
    /// Hermitian symmetry (sums, real scalings, entry permutations).
    pub(crate) fn from_raw_unchecked(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        let op = Self { dim, entries };
        debug_assert!(op.hermiticity_violation() <= 1e-15);
        op
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 2, "operator dimension must be at least 2");
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Complex64::ONE;
        }
        op
    }

    /// Rank-one projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_upper(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Trace; exactly real because diagonal imaginary parts are identically zero.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_raw_unchecked(self.dim, self.entries.iter().map(|z| z * c).collect())
    }

    /// Matrix square; the product of an operator with itself is exactly
    /// Hermitian in floating point.
    pub fn square(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += self.entries[i * n + k] * self.entries[k * n + j];
                }
                entries[i * n + j] = acc;
            }
        }
        // Symmetrize away the last-ulp asymmetry from summation order.
        let mut op = Self { dim: n, entries };
        op.symmetrize();
        op
    }

    /// Kronecker product; the tensor product of Hermitian factors is exactly
    /// Hermitian entrywise.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..n {
            for ip in 0..n {
                let a = self.entries[i * n + ip];
                for j in 0..m {
                    for jp in 0..m {
                        entries[(i * m + j) * dim + (ip * m + jp)] = a * other.entries[j * m + jp];
                    }
                }
            }
        }
        Self::from_raw_unchecked(dim, entries)
    }

    /// Hilbert–Schmidt inner product `tr(A B)`, real for Hermitian inputs.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        // tr(AB) = sum_ij A_ij conj(B_ij); computed in real arithmetic so the
        // result is exactly symmetric in the arguments.
        let mut acc = 0.0;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            acc += a.re * b.re + a.im * b.im;
        }
        Ok(acc)
    }

    /// `tr(A^2) = ||A||_HS^2`, always nonnegative.
    pub fn hs_norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.re * z.re + z.im * z.im).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().sqrt()
    }

    /// Hilbert–Schmidt distance `sqrt(tr(A - B)^2)`.
    pub fn hs_distance(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut acc = 0.0;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            let d = a - b;
            acc += d.re * d.re + d.im * d.im;
        }
        Ok(acc.sqrt())
    }

    /// Frobenius norm of the matrix product `A * other` (not Hermitian in
    /// general, so only the norm is exposed).
    pub fn product_hs_norm(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut z = Complex64::ZERO;
                for k in 0..n {
                    z += self.entries[i * n + k] * other.entries[k * n + j];
                }
                acc += z.re * z.re + z.im * z.im;
            }
        }
        Ok(acc.sqrt())
    }

    /// Expectation value `<v|A|v>`, real for Hermitian operators.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (v[i].conj() * self.entries[i * n + j] * v[j]).re;
            }
        }
        acc
    }

    pub fn eig(&self) -> EigenDecomposition {
        eig_hermitian(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eig()
            .values
            .last()
            .expect("operator has at least one eigenvalue")
    }

    /// Number of eigenvalues above 0.5; meaningful for (approximate)
    /// projectors, whose spectrum clusters at {0, 1}.
    pub fn projector_rank(&self) -> usize {
        self.eig().values.iter().filter(|&&v| v > 0.5).count()
    }

    pub(crate) fn hermiticity_violation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let diff = self.entries[i * n + j] - self.entries[j * n + i].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.entries[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self.entries[i * n + j] + self.entries[j * n + i].conj()) * 0.5;
                self.entries[i * n + j] = avg;
                self.entries[j * n + i] = avg.conj();
            }
        }
    }
}

impl Add for &HermitianOp {
    type Output = HermitianOp;

    fn add(self, rhs: &HermitianOp) -> HermitianOp {
        assert_eq!(self.dim, rhs.dim, "operator dimensions must match");
        HermitianOp::from_raw_unchecked(
            self.dim,
            self.entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &HermitianOp {
    type Output = HermitianOp;

    fn sub(self, rhs: &HermitianOp) -> HermitianOp {
        assert_eq!(self.dim, rhs.dim, "operator dimensions must match");
        HermitianOp::from_raw_unchecked(
            self.dim,
            self.entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// Free-function form of [`HermitianOp::hs_inner`].
pub fn hs_inner(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    a.hs_inner(b)
}

/// Free-function form of [`HermitianOp::hs_distance`].
pub fn hs_distance(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    a.hs_distance(b)
}

/// `A - (tr A / dim) * I`; idempotent, output trace is zero.
pub fn traceless_part(a: &HermitianOp) -> HermitianOp {
    let shift = a.trace() / a.dim() as f64;
    let n = a.dim();
    let mut entries = a.entries.clone();
    for i in 0..n {
        entries[i * n + i].re -= shift;
    }
    HermitianOp::from_raw_unchecked(n, entries)
}

/// Transpose on the second tensor factor: entry `[(i,j),(i',j')]` of the output
/// is entry `[(i,j'),(i',j)]` of the input. An involution that preserves trace
/// and HS norm.
pub fn partial_transpose(a: &HermitianOp, dims: BipartiteDims) -> Result<HermitianOp> {
    if a.dim() != dims.total() {
        return Err(Error::DimMismatch(a.dim(), dims.total()));
    }
    let n = a.dim();
    let d2 = dims.d2();
    let mut entries = vec![Complex64::ZERO; n * n];
    for i in 0..dims.d1() {
        for j in 0..d2 {
            for ip in 0..dims.d1() {
                for jp in 0..d2 {
                    entries[(i * d2 + j) * n + (ip * d2 + jp)] =
                        a.entries[(i * d2 + jp) * n + (ip * d2 + j)];
                }
            }
        }
    }
    Ok(HermitianOp::from_raw_unchecked(n, entries))
}

/// Unit-trace positive operator; the invariants are checked on construction
/// through [`DensityMatrix::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOp,
}

/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Allowed negativity of the spectrum.
pub const PSD_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(op: HermitianOp) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let min = op.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "minimum eigenvalue {min:.3e} is negative"
            )));
        }
        Ok(Self { op })
    }

    /// Constructor for states that are positive and unit-trace by
    /// construction (convex combinations of projectors); skips the spectral
    /// check, which would dominate the cost of the projection loop.
    pub(crate) fn trusted(op: HermitianOp) -> Self {
        debug_assert!((op.trace() - 1.0).abs() < 1e-9, "trace {}", op.trace());
        Self { op }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOp::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn into_op(self) -> HermitianOp {
        self.op
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianOp;

    fn deref(&self) -> &HermitianOp {
        &self.op
    }
}

/// A pair of unit local vectors `(|a>, |b>)`; the joint state `|a> ⊗ |b>` is
/// an extreme point of the separable set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl ProductVector {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        for v in [&a, &b] {
            if v.len() < 2 {
                return Err(Error::DimTooSmall(v.len()));
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(Self { a, b })
    }

    pub(crate) fn new_unchecked(a: Vec<Complex64>, b: Vec<Complex64>) -> Self {
        Self { a, b }
    }

    pub fn first(&self) -> &[Complex64] {
        &self.a
    }

    pub fn second(&self) -> &[Complex64] {
        &self.b
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            d1: self.a.len(),
            d2: self.b.len(),
        }
    }

    /// The joint vector `a ⊗ b`.
    pub fn joint(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.a.len() * self.b.len());
        for ai in &self.a {
            for bj in &self.b {
                v.push(ai * bj);
            }
        }
        v
    }

    pub fn projector(&self) -> DensityMatrix {
        product_projector(self)
    }
}

/// Rank-one density matrix `|a ⊗ b><a ⊗ b|`.
pub fn product_projector(p: &ProductVector) -> DensityMatrix {
    DensityMatrix::trusted(HermitianOp::outer(&p.joint()))
}
