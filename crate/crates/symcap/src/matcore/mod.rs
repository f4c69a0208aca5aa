//! Dense complex matrices and the domain types shared by every other module.
//!
//! Everything here is desk scale (`N` up to a few dozen), stored dense and
//! row-major. [`CovarianceMatrix`] and [`UnitaryMatrix`] are validating
//! newtypes over [`ComplexMatrix`]; constructing one checks the defining
//! invariants once so downstream code can rely on them.

mod decomp;
mod stream;

pub use decomp::{eigh, qr, CholeskyFactor};
pub use stream::RandomStream;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Relative Hermitian-symmetry tolerance for covariance validation.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute floor on the smallest eigenvalue of a covariance matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Absolute unit-trace tolerance for covariance validation.
pub const TRACE_TOL: f64 = 1e-12;
/// Frobenius tolerance on `V V* - I` for unitary validation.
pub const UNITARY_TOL: f64 = 1e-10;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self { rows: n, cols: n, entries: vec![Complex64::new(1.0, 0.0); n * n] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds from nested rows; rows must be nonempty and rectangular.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Real-valued convenience constructor, mostly for tests and literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Zeroes every off-diagonal entry (the map `Δ`).
    pub fn diagonal_part(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = self[(i, i)];
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.diag().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// Matrix product `self * other`; shapes must agree.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lhs = i * other.cols;
                let rhs = k * other.cols;
                for j in 0..other.cols {
                    out.entries[lhs + j] += a * other.entries[rhs + j];
                }
            }
        }
        out
    }

    /// `U * self * U^*`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.mul(self).mul(&u.adjoint())
    }

    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part: matrix must be square");
        self.add(&self.adjoint()).scale_re(0.5)
    }

    pub fn dist_frobenius(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// Kronecker product; block `(i,j)` of the result is `self[i,j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut i0, mut j0) = (0, 0);
        for b in blocks {
            out.set_block(i0, j0, b);
            i0 += b.rows;
            j0 += b.cols;
        }
        out
    }

    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Self {
        assert!(i0 + rows <= self.rows && j0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(i0 + i, j0 + j)])
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, b: &Self) {
        assert!(i0 + b.rows <= self.rows && j0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(i0 + i, j0 + j)] = b[(i, j)];
            }
        }
    }

    /// Real part of the trace inner product `<A, B> = Tr(A* B)`.
    pub fn inner_re(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "inner: shape mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "\n  [")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, " ]")?;
        }
        Ok(())
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{:.9}", z.re)?;
                } else {
                    write!(f, "{:.9}{:+.9}i", z.re, z.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// Matrix literal format shared with CLI configs: an array of rows, each entry
// either a real number x or a two-element array [re, im].
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| [self[(i, j)].re, self[(i, j)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryLiteral {
    Real(f64),
    Pair([f64; 2]),
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<EntryLiteral>> = Vec::deserialize(deserializer)?;
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        EntryLiteral::Real(x) => Complex64::new(x, 0.0),
                        EntryLiteral::Pair([re, im]) => Complex64::new(re, im),
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// `N x N` Hermitian positive-semidefinite matrix with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    matrix: ComplexMatrix,
}

impl CovarianceMatrix {
    /// Validates the Hermitian / PSD / unit-trace invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix("covariance matrix must be square".into()));
        }
        let herm_residual = matrix.dist_frobenius(&matrix.adjoint());
        if herm_residual > HERMITIAN_TOL * matrix.frobenius_norm().max(1.0) {
            return Err(Error::InvalidMatrix(format!(
                "not Hermitian: residual {herm_residual:.3e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidMatrix(format!("trace {tr} is not 1")));
        }
        let (eigenvalues, _) = eigh(&matrix)?;
        let min_eig = eigenvalues.first().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidMatrix(format!(
                "not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// The isotropic input `I_N / N`.
    pub fn isotropic(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_re(1.0 / n as f64) }
    }

    /// Full-rank random covariance: a normalized Ginibre Gram matrix.
    pub fn random(n: usize, rng: &mut RandomStream) -> Self {
        let g = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
        let gram = g.mul(&g.adjoint()).hermitian_part();
        let tr = gram.trace().re;
        Self { matrix: gram.scale_re(1.0 / tr) }
    }

    /// Diagonal covariance from a probability vector.
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "not a probability vector (sum {sum})"
            )));
        }
        let clipped: Vec<f64> = p.iter().map(|&x| x.max(0.0) / sum).collect();
        Self::new(ComplexMatrix::from_real_diag(&clipped))
    }

    /// The 2x2 covariance `[[a, conj(c)], [c, b]]`.
    pub fn from_two_by_two(a: f64, b: f64, c: Complex64) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(vec![
            vec![Complex64::new(a, 0.0), c.conj()],
            vec![c, Complex64::new(b, 0.0)],
        ])?)
    }

    /// Parameters `(a, b, c)` of a 2x2 covariance.
    pub fn two_by_two_params(&self) -> Result<(f64, f64, Complex64)> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch("expected a 2x2 covariance".into()));
        }
        Ok((self.matrix[(0, 0)].re, self.matrix[(1, 1)].re, self.matrix[(1, 0)]))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl Serialize for CovarianceMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CovarianceMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        CovarianceMatrix::new(m).map_err(D::Error::custom)
    }
}

/// `N x N` unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix("unitary matrix must be square".into()));
        }
        let residual = matrix
            .mul(&matrix.adjoint())
            .dist_frobenius(&ComplexMatrix::identity(matrix.rows()));
        if residual > UNITARY_TOL {
            return Err(Error::InvalidMatrix(format!("not unitary: residual {residual:.3e}")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    /// For matrices unitary by construction (samplers, compositions).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(
            matrix
                .mul(&matrix.adjoint())
                .dist_frobenius(&ComplexMatrix::identity(matrix.rows()))
                <= UNITARY_TOL
        );
        Self { matrix }
    }

    /// Unitary diag of unit-modulus entries; moduli are renormalized.
    pub fn from_unit_diag(diag: &[Complex64]) -> Self {
        let normalized: Vec<Complex64> = diag
            .iter()
            .map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) })
            .collect();
        Self { matrix: ComplexMatrix::from_diag(&normalized) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self { matrix: self.matrix.adjoint() }
    }

    /// `self * other`, staying in the group.
    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self { matrix: self.matrix.mul(&other.matrix) }
    }
}

impl Serialize for UnitaryMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        UnitaryMatrix::new(m).map_err(D::Error::custom)
    }
}

/// `log det(I_M + H Q H*)` in nats.
///
/// The argument matrix has eigenvalues at least one, so the result is
/// nonnegative and a Cholesky factorization always exists.
pub fn logdet_kernel(h: &ComplexMatrix, q: &CovarianceMatrix) -> Result<f64> {
    if h.cols() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{} but Q is {n}x{n}",
            h.rows(),
            h.cols(),
            n = q.dim()
        )));
    }
    let m = ComplexMatrix::identity(h.rows())
        .add(&h.mul(q.matrix()).mul(&h.adjoint()))
        .hermitian_part();
    let chol = CholeskyFactor::new(&m)?;
    Ok(chol.logdet().max(0.0))
}

/// Frobenius norm `sqrt(Tr(A* A))`.
pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Nearest unit-trace PSD matrix to the Hermitian part of `a`.
///
/// Eigenvalues of `(A + A*)/2` are projected onto the probability simplex by
/// the exact sort-and-threshold rule, which clips negatives and shifts the
/// rest to restore unit trace in one closed-form step.
pub fn project_to_covariance(a: &ComplexMatrix) -> Result<CovarianceMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("projection input must be square".into()));
    }
    let (eigenvalues, vectors) = eigh(&a.hermitian_part())?;
    let projected = decomp::simplex_projection(&eigenvalues);
    let d = ComplexMatrix::from_real_diag(&projected);
    let q = vectors.mul(&d).mul(&vectors.adjoint()).hermitian_part();
    // Pin the trace exactly; rounding in the similarity transform is ~1e-16.
    let tr = q.trace().re;
    CovarianceMatrix::new(q.scale_re(1.0 / tr))
}

#[cfg(test)]
mod tests;
