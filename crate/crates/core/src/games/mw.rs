//! Tactic-mixing (MW) scheme. Each player applies the identity to their own
//! qubit with probability `p` (A) or `q` (B) and the bit flip `σx`
//! otherwise; payoffs are read off the diagonal of the final state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gates::pauli_x, tensor_product, ComplexMatrix, StateVector};
use crate::quantum::DensityMatrix;

pub const MIN_MW_GRID: usize = 101;
/// Unilateral gains at or below this do not break an equilibrium.
pub const MW_SCAN_TOL: f64 = 1e-9;

/// Initial two-qubit state and the diagonal payoff operators, with
/// coefficients ordered `(|00⟩, |01⟩, |10⟩, |11⟩)` and A's qubit first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MwSpec {
    pub initial: StateVector,
    pub payoff_coeffs_a: [f64; 4],
    pub payoff_coeffs_b: [f64; 4],
}

impl MwSpec {
    pub fn new(initial: StateVector, payoff_coeffs_a: [f64; 4], payoff_coeffs_b: [f64; 4]) -> Result<Self> {
        if initial.dim() != 4 {
            return Err(Error::dims(4, initial.dim()));
        }
        Ok(MwSpec { initial, payoff_coeffs_a, payoff_coeffs_b })
    }

    /// Battle of the sexes: A prefers `|00⟩` (2 vs 1), B prefers `|11⟩`.
    pub fn battle_of_sexes(initial: StateVector) -> Result<Self> {
        Self::new(initial, [2.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 2.0])
    }
}

/// The four tactic pairs in the order `I⊗I, I⊗σx, σx⊗I, σx⊗σx`.
fn tactics() -> [ComplexMatrix; 4] {
    let (i, x) = (ComplexMatrix::identity(2), pauli_x());
    [tensor_product(&i, &i), tensor_product(&i, &x), tensor_product(&x, &i), tensor_product(&x, &x)]
}

fn weights(p: f64, q: f64) -> [f64; 4] {
    [p * q, p * (1.0 - q), q * (1.0 - p), (1.0 - p) * (1.0 - q)]
}

fn check_probabilities(p: f64, q: f64) -> Result<()> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(v));
        }
    }
    Ok(())
}

pub fn mw_final_state(spec: &MwSpec, p: f64, q: f64) -> Result<DensityMatrix> {
    check_probabilities(p, q)?;
    let rho0 = spec.initial.projector();
    let mut rho = ComplexMatrix::zeros(4);
    for (w, t) in weights(p, q).into_iter().zip(tactics()) {
        rho = &rho + &(&(&t * &rho0) * &t.adjoint()).scale_real(w);
    }
    DensityMatrix::new(rho)
}

fn diag_payoffs(spec: &MwSpec, rho: &DensityMatrix) -> (f64, f64) {
    let pop = rho.populations();
    let dot = |c: &[f64; 4]| c.iter().zip(&pop).map(|(a, b)| a * b).sum::<f64>();
    (dot(&spec.payoff_coeffs_a), dot(&spec.payoff_coeffs_b))
}

/// `(Tr P̂_A ρ_f, Tr P̂_B ρ_f)`
pub fn mw_payoffs(spec: &MwSpec, p: f64, q: f64) -> Result<(f64, f64)> {
    Ok(diag_payoffs(spec, &mw_final_state(spec, p, q)?))
}

/// Payoffs are bilinear in `(p, q)`; this caches the payoff of each tactic
/// pair so repeated evaluation is a four-term sum.
#[derive(Clone, Debug)]
pub struct MwGame {
    term_a: [f64; 4],
    term_b: [f64; 4],
}

impl MwGame {
    pub fn new(spec: &MwSpec) -> Self {
        let rho0 = spec.initial.projector();
        let mut term_a = [0.0; 4];
        let mut term_b = [0.0; 4];
        for (k, t) in tactics().iter().enumerate() {
            let m = &(t * &rho0) * &t.adjoint();
            let pop: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
            term_a[k] = spec.payoff_coeffs_a.iter().zip(&pop).map(|(a, b)| a * b).sum();
            term_b[k] = spec.payoff_coeffs_b.iter().zip(&pop).map(|(a, b)| a * b).sum();
        }
        MwGame { term_a, term_b }
    }

    pub fn payoffs(&self, p: f64, q: f64) -> (f64, f64) {
        let w = weights(p, q);
        let dot = |t: &[f64; 4]| t.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        (dot(&self.term_a), dot(&self.term_b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MwEquilibrium {
    pub p: f64,
    pub q: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

/// Grid cells `(p, q)` where neither player gains more than
/// [`MW_SCAN_TOL`] by moving along their own axis. `grid` counts points per
/// axis including both ends.
pub fn mw_nash_scan(spec: &MwSpec, grid: usize) -> Result<Vec<MwEquilibrium>> {
    if grid < MIN_MW_GRID {
        return Err(Error::InvalidParameter(format!("grid {grid} < {MIN_MW_GRID} points per axis")));
    }
    let game = MwGame::new(spec);
    let axis: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let table: Vec<Vec<(f64, f64)>> = axis.iter().map(|&p| axis.iter().map(|&q| game.payoffs(p, q)).collect()).collect();
    // best A payoff for each q, best B payoff for each p
    let best_a: Vec<f64> = (0..grid).map(|j| (0..grid).map(|i| table[i][j].0).fold(f64::NEG_INFINITY, f64::max)).collect();
    let best_b: Vec<f64> = table.iter().map(|row| row.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut out = Vec::new();
    for (i, row) in table.iter().enumerate() {
        for (j, &(pa, pb)) in row.iter().enumerate() {
            if best_a[j] - pa <= MW_SCAN_TOL && best_b[i] - pb <= MW_SCAN_TOL {
                out.push(MwEquilibrium { p: axis[i], q: axis[j], payoff_a: pa, payoff_b: pb });
            }
        }
    }
    Ok(out)
}
