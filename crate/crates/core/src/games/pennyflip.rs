//! Sequential coin game: Q moves, P flips with probability `p` or leaves
//! the coin, then Q moves again. Q wins on heads (`|0⟩`).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{gates::pauli_x, ComplexMatrix, UNITARY_TOL};
use crate::quantum::DensityMatrix;

/// `[[a, b], [b*, −a*]]`, requiring `|a|² + |b|² = 1`.
pub fn penny_unitary(a: C64, b: C64) -> Result<ComplexMatrix> {
    let norm_sq = a.norm_sqr() + b.norm_sqr();
    if (norm_sq - 1.0).abs() > UNITARY_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    ComplexMatrix::from_rows(&[vec![a, b], vec![b.conj(), -a.conj()]])
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.dim() != 2 {
        return Err(Error::dims(2, u.dim()));
    }
    let deviation = u.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Plays one round on `rho` and returns the final coin state.
pub fn pennyflip_round(
    rho: &DensityMatrix,
    q_moves: (&ComplexMatrix, &ComplexMatrix),
    p_flip_prob: f64,
) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::dims(2, rho.dim()));
    }
    if !(0.0..=1.0).contains(&p_flip_prob) {
        return Err(Error::InvalidProbability(p_flip_prob));
    }
    let (u1, u3) = q_moves;
    check_unitary(u1)?;
    check_unitary(u3)?;
    let conj = |u: &ComplexMatrix, m: &ComplexMatrix| &(u * m) * &u.adjoint();
    let rho1 = conj(u1, rho.matrix());
    let f = pauli_x();
    let rho2 = &conj(&f, &rho1).scale_real(p_flip_prob) + &rho1.scale_real(1.0 - p_flip_prob);
    DensityMatrix::new(conj(u3, &rho2))
}

/// Probability that the coin shows heads.
pub fn win_probability(rho: &DensityMatrix) -> f64 {
    rho.matrix().get(0, 0).re
}
