use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, StateVector};

/// Second Schmidt coefficient below this means product state.
pub const SEPARABILITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtReport {
    pub separable: bool,
    /// Schmidt coefficients, largest first.
    pub coefficients: Vec<f64>,
}

/// Reshapes `psi` into a `dims.0 x dims.1` coefficient grid and reads off its
/// singular values.
pub fn separability_check(psi: &StateVector, dims: (usize, usize)) -> Result<SchmidtReport> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != psi.dim() {
        return Err(Error::dims(format!("{da}x{db}"), psi.dim()));
    }
    let coefficients = singular_values(da, db, &psi.amplitudes())?;
    let separable = coefficients.get(1).is_none_or(|&s| s < SEPARABILITY_TOL);
    Ok(SchmidtReport { separable, coefficients })
}
