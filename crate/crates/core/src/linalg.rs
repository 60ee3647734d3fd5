//! Dense complex linear algebra shared by the quantum-facing modules.
//!
//! Dimensions here are tiny (at most a few qubits), so everything is dense
//! and matrix functions go through a full Hermitian eigendecomposition.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation from `M = M†` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum entrywise deviation from `U U† = I` accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `Σ|a_i|² = 1` for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Wraps an nalgebra matrix, checking that it is square, non-empty and
    /// finite.
    pub fn from_inner(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::dims("non-empty square matrix", format!("{}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::dims(format!("row length {n}"), bad.len()));
        }
        Self::from_inner(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Builds an `n x n` matrix from `f(i, j)`. Panics if `n == 0`.
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        ComplexMatrix(DMatrix::from_fn(n, n, f))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| C64::new(0.0, 0.0))
    }

    pub fn from_diagonal(d: &[C64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on dimension
    /// mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn unitary_deviation(&self) -> f64 {
        let prod = self * &self.adjoint();
        prod.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// `(M + M†)/2`, after checking the input is Hermitian within
    /// [`HERMITIAN_TOL`].
    pub fn symmetrized(&self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(ComplexMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0)))
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(Error::dims(self.dim(), v.dim()));
        }
        Ok(StateVector(&self.0 * &v.0))
    }

    /// Real part of every entry, row-major.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        self.rows().into_iter().map(|r| r.into_iter().map(|z| z.re).collect()).collect()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix sum dimension mismatch");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix difference dimension mismatch");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Normalized vector of probability amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    /// Accepts amplitudes whose squared norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::dims("at least one amplitude", 0));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(StateVector(DVector::from_vec(amplitudes)))
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() || !norm_sq.is_finite() || norm_sq == 0.0 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let s = norm_sq.sqrt();
        Ok(StateVector(DVector::from_iterator(amplitudes.len(), amplitudes.into_iter().map(|a| a / s))))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        StateVector(DVector::from_fn(dim, |i, _| if i == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.0[k]
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.0.iter().copied().collect()
    }

    /// `|⟨k|ψ⟩|²`
    pub fn probability(&self, k: usize) -> f64 {
        self.0[k].norm_sqr()
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * self.0.adjoint())
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let n = other.dim();
        StateVector(DVector::from_fn(self.dim() * n, |k, _| self.0[k / n] * other.0[k % n]))
    }
}

/// Which factor of a bipartite space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product; entry `(i·db + k, j·db + l)` is `a[i,j]·b[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |r, c| a.0[(r / db, c / db)] * b.0[(r % db, c % db)])
}

/// `ab - ba`
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    Ok(&(a * b) - &(b * a))
}

/// Traces out one factor of a `dims.0 x dims.1` bipartite operator and returns
/// the reduced operator on `keep`.
pub fn partial_trace(rho: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::dims(format!("{da}x{db} = {}", da * db), rho.dim()));
    }
    let m = &rho.0;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(db, |k, l| (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()),
    })
}

/// Spectral decomposition of a Hermitian matrix: real eigenvalues and the
/// unitary whose columns are the matching eigenvectors.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let sym = h.symmetrized()?;
    let eig = SymmetricEigen::new(sym.0);
    Ok((eig.eigenvalues.iter().copied().collect(), ComplexMatrix(eig.eigenvectors)))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut values = hermitian_eigen(h)?.0;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `f(H) = V diag(f(λ)) V†` for Hermitian `H`.
pub fn matrix_function_hermitian(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let fd = ComplexMatrix::from_diagonal(&values.iter().map(|&l| f(l)).collect::<Vec<_>>());
    Ok(&(&vectors * &fd) * &vectors.adjoint())
}

/// Singular values of a rectangular `rows x cols` grid (row-major), largest
/// first.
pub fn singular_values(rows: usize, cols: usize, entries: &[C64]) -> Result<Vec<f64>> {
    if rows * cols != entries.len() || entries.is_empty() {
        return Err(Error::dims(format!("{rows}x{cols}"), entries.len()));
    }
    let m = DMatrix::from_row_slice(rows, cols, entries);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// The Pauli matrices and a few other fixed gates.
pub mod gates {
    use super::ComplexMatrix;
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn pauli_y() -> ComplexMatrix {
        let m = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        ComplexMatrix::from_fn(2, |i, j| m[i][j])
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    pub fn hadamard() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = [[s, s], [s, -s]];
        ComplexMatrix::from_fn(2, |i, j| c(m[i][j], 0.0))
    }
}
