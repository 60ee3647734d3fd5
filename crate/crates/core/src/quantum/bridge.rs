//! From population frequencies to density matrices.
//!
//! A frequency vector `x` maps to `ρ_ij = √(x_i x_j)`, which is the rank-one
//! projector onto `x̂ = (√x_1, …, √x_n)` and coincides with the matrix `X` of
//! the Lax form. Under that map `[Λ, X]` is the von Neumann right-hand side
//! for the Hermitian operator `H = iℏΛ`.

use num_complex::Complex64 as C64;

use super::DensityMatrix;
use crate::error::Result;
use crate::linalg::{commutator, ComplexMatrix};
use crate::replicator::{lax_decomposition, FrequencyVector};

/// `ρ_ij = √(x_i x_j)`; always a pure state with `diag(ρ) = x`.
pub fn quantize_frequencies(x: &FrequencyVector) -> DensityMatrix {
    let root: Vec<f64> = x.as_slice().iter().map(|v| v.sqrt()).collect();
    DensityMatrix(ComplexMatrix::from_fn(root.len(), |i, j| C64::new(root[i] * root[j], 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicatorCorrespondence {
    /// `H = iℏΛ`
    pub hamiltonian: ComplexMatrix,
    /// `[Λ, X]`
    pub lax_flow: ComplexMatrix,
    /// `(−i/ℏ)[H, X]`
    pub von_neumann_flow: ComplexMatrix,
}

pub fn quantum_replicator_correspondence(a: &[Vec<f64>], x: &FrequencyVector, hbar: f64) -> Result<ReplicatorCorrespondence> {
    let d = lax_decomposition(a, x)?;
    let n = x.len();
    let lambda = ComplexMatrix::from_fn(n, |i, j| C64::new(d.lambda[(i, j)], 0.0));
    let xm = ComplexMatrix::from_fn(n, |i, j| C64::new(d.x.matrix()[(i, j)], 0.0));
    let hamiltonian = lambda.scale(C64::new(0.0, hbar));
    let lax_flow = commutator(&lambda, &xm)?;
    let von_neumann_flow = commutator(&hamiltonian, &xm)?.scale(C64::new(0.0, -1.0 / hbar));
    Ok(ReplicatorCorrespondence { hamiltonian, lax_flow, von_neumann_flow })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HERMITIAN_TOL;

    #[test]
    fn vertex_maps_to_basis_projector() {
        let rho = quantize_frequencies(&FrequencyVector::vertex(2, 0));
        assert_eq!(rho.populations(), vec![1.0, 0.0]);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_lax_matrix() {
        let x = FrequencyVector::new(vec![0.25, 0.75]).unwrap();
        let rho = quantize_frequencies(&x);
        let d = lax_decomposition(&[vec![0.0; 2], vec![0.0; 2]], &x).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix().get(i, j).re - d.x.matrix()[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn correspondence_flows_agree() {
        let a = vec![vec![0.0, 3.0, -1.0], vec![1.0, 0.5, 2.0], vec![-2.0, 1.0, 0.0]];
        let x = FrequencyVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        for hbar in [1.0, 0.5, 3.0] {
            let c = quantum_replicator_correspondence(&a, &x, hbar).unwrap();
            assert!(c.lax_flow.max_abs_diff(&c.von_neumann_flow) < 1e-12);
            assert!(c.hamiltonian.is_hermitian(HERMITIAN_TOL));
        }
        let c = quantum_replicator_correspondence(&a, &FrequencyVector::vertex(3, 1), 1.0).unwrap();
        assert_eq!(c.lax_flow.max_abs(), 0.0);
        assert_eq!(c.von_neumann_flow.max_abs(), 0.0);
    }
}
