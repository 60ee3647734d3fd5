//! Matrix (Lax) form of the replicator dynamics.
//!
//! With `X_ij = √(x_i x_j)` and the diagonal `Q_ii = ½ (Ax)_i`, the flow
//! becomes `dX/dt = [[Q, X], X] = [Λ, X]` where `Λ = [Q, X]`. The diagonal of
//! `[Λ, X]` is exactly the vector field `x_i (f_i − ⟨f⟩)`, which follows from
//! `X = x̂ x̂ᵀ` with `x̂_i = √x_i` being a rank-one projector.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{check_square, mat_vec, FrequencyVector};
use crate::error::Result;

/// Symmetric rank-one projector `X_ij = √(x_i x_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyMatrix(#[serde(serialize_with = "serialize_rows")] DMatrix<f64>);

fn serialize_rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        seq.serialize_element(&m.row(i).iter().copied().collect::<Vec<f64>>())?;
    }
    seq.end()
}

impl FrequencyMatrix {
    pub fn new(x: &FrequencyVector) -> Self {
        let root: Vec<f64> = x.as_slice().iter().map(|v| v.sqrt()).collect();
        let n = root.len();
        FrequencyMatrix(DMatrix::from_fn(n, n, |i, j| root[i] * root[j]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Largest entrywise deviation of `X²` from `X`.
    pub fn idempotence_error(&self) -> f64 {
        (&self.0 * &self.0 - &self.0).amax()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0 == self.0.transpose()
    }

    /// The population frequencies on the diagonal.
    pub fn frequencies(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }
}

/// The three matrices of the Lax form at one state.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxDecomposition {
    pub x: FrequencyMatrix,
    /// Diagonal, `q_ii = ½ (Ax)_i`.
    pub q: DMatrix<f64>,
    /// `[Q, X]`, real antisymmetric.
    pub lambda: DMatrix<f64>,
}

pub fn lax_decomposition(a: &[Vec<f64>], x: &FrequencyVector) -> Result<LaxDecomposition> {
    check_square(a, x.len())?;
    let f = mat_vec(a, x.as_slice());
    let n = f.len();
    let xm = FrequencyMatrix::new(x);
    let q = DMatrix::from_fn(n, n, |i, j| if i == j { 0.5 * f[i] } else { 0.0 });
    let lambda = &q * &xm.0 - &xm.0 * &q;
    Ok(LaxDecomposition { x: xm, q, lambda })
}

/// `dX/dt = [Λ, X]`
pub fn lax_rhs(a: &[Vec<f64>], x: &FrequencyVector) -> Result<DMatrix<f64>> {
    let d = lax_decomposition(a, x)?;
    let xm = &d.x.0;
    Ok(&d.lambda * xm - xm * &d.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::replicator::replicator_rhs;

    fn pd() -> Vec<Vec<f64>> {
        vec![vec![-1.0, -20.0], vec![0.0, -10.0]]
    }

    #[test]
    fn pure_state_has_zero_lambda() {
        let d = lax_decomposition(&pd(), &FrequencyVector::vertex(2, 0)).unwrap();
        assert_eq!(d.x.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(d.lambda.amax(), 0.0);
        assert_eq!(lax_rhs(&pd(), &FrequencyVector::vertex(2, 1)).unwrap().amax(), 0.0);
    }

    #[test]
    fn frequency_matrix_quarter() {
        let x = FrequencyVector::new(vec![0.25, 0.75]).unwrap();
        let m = FrequencyMatrix::new(&x);
        let off = 0.1875_f64.sqrt();
        let expected = DMatrix::from_row_slice(2, 2, &[0.25, off, off, 0.75]);
        assert!((m.matrix() - expected).amax() < 1e-15);
        assert!(m.idempotence_error() < 1e-12);
        assert!(m.is_symmetric());
        assert!((m.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pd_lambda_and_rhs() {
        let x = FrequencyVector::binary(0.5).unwrap();
        let d = lax_decomposition(&pd(), &x).unwrap();
        assert!((d.lambda[(0, 1)] + 1.375).abs() < 1e-15);
        assert!((&d.lambda + d.lambda.transpose()).amax() < 1e-12);
        let r = lax_rhs(&pd(), &x).unwrap();
        assert!((r[(0, 0)] + 1.375).abs() < 1e-12);
        let v = replicator_rhs(&pd(), &x).unwrap();
        assert!((r[(1, 1)] - v[1]).abs() < 1e-12);
        assert!((r.clone() - r.transpose()).amax() < 1e-12);
        assert!(r.trace().abs() < 1e-12);
    }
}
