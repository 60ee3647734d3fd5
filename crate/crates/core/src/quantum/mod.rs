//! Density operators: construction, expectation values, unitary and
//! von Neumann evolution, entropies, entanglement tests, and the map from
//! population frequencies to density matrices.

mod bridge;
mod dynamics;
mod entanglement;
mod entropy;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, StateVector, HERMITIAN_TOL};

pub use bridge::{quantize_frequencies, quantum_replicator_correspondence, ReplicatorCorrespondence};
pub use dynamics::{
    evolve_unitary, evolve_von_neumann, unitary_propagator, von_neumann_rhs, QuantumTrajectory, DEFAULT_HBAR,
};
pub use entanglement::{separability_check, SchmidtReport, SEPARABILITY_TOL};
pub use entropy::{entropy_rate_series, quantum_conditional_entropy, von_neumann_entropy, EntropyRateReport};

/// Tolerance on trace, positivity and purity checks.
pub const DENSITY_TOL: f64 = 1e-10;
/// Tolerance on `Σ p_i = 1` for ensemble weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates `m`; a matrix Hermitian within tolerance is symmetrized.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let m = m.symmetrized()?;
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let spectrum = hermitian_eigenvalues(&m)?;
        if spectrum[0] < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {:e}", spectrum[0])));
        }
        let purity = (&m * &m).trace().re;
        if purity > 1.0 + DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("purity {purity} > 1")));
        }
        Ok(DensityMatrix(m))
    }

    pub fn pure(psi: &StateVector) -> Self {
        DensityMatrix(psi.projector())
    }

    /// `I/n`
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(n).scale_real(1.0 / n as f64))
    }

    /// Diagonal density matrix from a probability vector.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        crate::classical::check_simplex(p, DENSITY_TOL)?;
        Ok(DensityMatrix(ComplexMatrix::from_real_diagonal(p)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// Eigenvalues clamped to `[0, 1]`, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
            .expect("density matrices are Hermitian")
            .into_iter()
            .map(|l| l.clamp(0.0, 1.0))
            .collect()
    }

    /// Real diagonal: the probabilities of the basis states.
    pub fn populations(&self) -> Vec<f64> {
        self.0.diagonal().into_iter().map(|z| z.re).collect()
    }

    /// `Tr(ρA)` for a Hermitian observable.
    pub fn ensemble_average(&self, observable: &ComplexMatrix) -> Result<f64> {
        ensemble_average(self, observable)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// One pure state of a statistical mixture together with its weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureEnsembleMember {
    pub weight: f64,
    pub state: StateVector,
}

/// `ρ = Σ p_i |ψ_i⟩⟨ψ_i|`
pub fn density_from_ensemble(members: &[PureEnsembleMember]) -> Result<DensityMatrix> {
    let first = members.first().ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?;
    let n = first.state.dim();
    if let Some(m) = members.iter().find(|m| m.state.dim() != n) {
        return Err(Error::dims(n, m.state.dim()));
    }
    if let Some(m) = members.iter().find(|m| !(0.0..=1.0).contains(&m.weight)) {
        return Err(Error::InvalidProbability(m.weight));
    }
    let total: f64 = members.iter().map(|m| m.weight).sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidDistribution(format!("ensemble weights sum to {total}")));
    }
    let mut rho = ComplexMatrix::zeros(n);
    for m in members {
        rho = &rho + &m.state.projector().scale_real(m.weight);
    }
    DensityMatrix::new(rho)
}

/// `⟨A⟩ = Tr(ρA)`; the imaginary round-off is dropped.
pub fn ensemble_average(rho: &DensityMatrix, observable: &ComplexMatrix) -> Result<f64> {
    if observable.dim() != rho.dim() {
        return Err(Error::dims(rho.dim(), observable.dim()));
    }
    let deviation = observable.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok((rho.matrix() * observable).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates::*;
    use num_complex::Complex64 as C64;

    fn ket(v: &[f64]) -> StateVector {
        StateVector::normalized(v.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn single_pure_member() {
        let rho = density_from_ensemble(&[PureEnsembleMember { weight: 1.0, state: ket(&[1.0, 1.0]) }]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_mixture_is_maximally_mixed() {
        let rho = density_from_ensemble(&[
            PureEnsembleMember { weight: 0.5, state: ket(&[1.0, 0.0]) },
            PureEnsembleMember { weight: 0.5, state: ket(&[0.0, 1.0]) },
        ])
        .unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(2));
    }

    #[test]
    fn quarter_zero_three_quarter_plus() {
        let rho = density_from_ensemble(&[
            PureEnsembleMember { weight: 0.25, state: ket(&[1.0, 0.0]) },
            PureEnsembleMember { weight: 0.75, state: ket(&[1.0, 1.0]) },
        ])
        .unwrap();
        // 0.25·diag(1,0) + 0.75·[[.5,.5],[.5,.5]]
        let expected = ComplexMatrix::from_real_rows(&[vec![0.625, 0.375], vec![0.375, 0.375]]).unwrap();
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        let bad = [PureEnsembleMember { weight: 0.7, state: ket(&[1.0, 0.0]) }];
        assert!(density_from_ensemble(&bad).is_err());
        let mixed_dims = [
            PureEnsembleMember { weight: 0.5, state: ket(&[1.0, 0.0]) },
            PureEnsembleMember { weight: 0.5, state: ket(&[1.0, 0.0, 0.0]) },
        ];
        assert!(matches!(density_from_ensemble(&mixed_dims), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn averages() {
        assert_eq!(ensemble_average(&DensityMatrix::maximally_mixed(2), &pauli_z()).unwrap(), 0.0);
        assert_eq!(ensemble_average(&DensityMatrix::pure(&ket(&[1.0, 0.0])), &pauli_z()).unwrap(), 1.0);
        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        assert_eq!(rho.ensemble_average(&pauli_z()).unwrap(), -0.5);
        let skew = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(matches!(ensemble_average(&rho, &skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_validation() {
        let not_unit = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real_rows(&[vec![1.5, 0.0], vec![0.0, -0.5]]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let not_herm = ComplexMatrix::from_real_rows(&[vec![0.5, 0.2], vec![0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn json_round_trip_validates() {
        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert_eq!(serde_json::from_str::<DensityMatrix>(&s).unwrap(), rho);
        assert!(serde_json::from_str::<DensityMatrix>("[[[2,0],[0,0]],[[0,0],[0,0]]]").is_err());
    }
}
