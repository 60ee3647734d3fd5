use serde::Serialize;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, partial_trace, ComplexMatrix, Subsystem, HERMITIAN_TOL};

/// Eigenvalues at or below this are outside the support of ρ.
const SUPPORT_TOL: f64 = 1e-12;

/// `−Σ λ ln λ` over the spectrum of a Hermitian matrix; non-positive
/// eigenvalues contribute nothing.
pub(crate) fn spectral_entropy(m: &ComplexMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(-values.iter().filter(|&&l| l > 0.0).map(|&l| l.min(1.0) * l.min(1.0).ln()).sum::<f64>())
}

/// `S(ρ) = −Tr(ρ ln ρ)` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = -rho.spectrum().into_iter().filter(|&l| l > 0.0).map(|l| l * l.ln()).sum::<f64>();
    s.max(0.0)
}

/// `S(AB) − S(B)`; negative values flag entanglement.
pub fn quantum_conditional_entropy(rho_ab: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let rho_b = partial_trace(rho_ab.matrix(), dims, Subsystem::B)?;
    Ok(von_neumann_entropy(rho_ab) - spectral_entropy(&rho_b)?)
}

/// Entropy production along a flow `ρ̇`, evaluated two ways.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRateReport {
    /// Third-order series: `11/6 Tr ρ̇ − 6 Tr(ρρ̇) + 9/2 Tr(ρ²ρ̇) − 4/3 Tr(ρ³ρ̇)`.
    pub series_value: f64,
    /// `−Tr(ρ̇ ln ρ)` with the logarithm taken on the support of ρ.
    pub exact_value: f64,
    /// `series_value − exact_value`
    pub deviation: f64,
}

/// Evaluates the truncated-series entropy rate next to the exact spectral
/// rate. The two are reported side by side; they are not expected to agree
/// away from special cases.
pub fn entropy_rate_series(rho: &DensityMatrix, rho_dot: &ComplexMatrix) -> Result<EntropyRateReport> {
    if rho_dot.dim() != rho.dim() {
        return Err(Error::dims(rho.dim(), rho_dot.dim()));
    }
    let deviation = rho_dot.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let r = rho.matrix();
    let r2 = r * r;
    let r3 = &r2 * r;
    let tr = |m: &ComplexMatrix| (m * rho_dot).trace().re;
    let series_value = 11.0 / 6.0 * rho_dot.trace().re - 6.0 * tr(r) + 4.5 * tr(&r2) - 4.0 / 3.0 * tr(&r3);

    let (values, vectors) = hermitian_eigen(r)?;
    let logs: Vec<f64> = values.iter().map(|&l| if l > SUPPORT_TOL { l.min(1.0).ln() } else { 0.0 }).collect();
    let ln_rho = &(&vectors * &ComplexMatrix::from_real_diagonal(&logs)) * &vectors.adjoint();
    let exact_value = -(rho_dot * &ln_rho).trace().re;
    Ok(EntropyRateReport { series_value, exact_value, deviation: series_value - exact_value })
}
