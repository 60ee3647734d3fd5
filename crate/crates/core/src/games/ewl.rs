//! Entangled prisoner's dilemma.
//!
//! Both players start from `J|CC⟩` with `J = exp(iγ D⊗D / 2)`, apply local
//! unitaries `U(θ, φ)`, and the state is disentangled by `J†` before
//! measurement. Payoffs are the classical constants weighted by the four
//! outcome probabilities, with basis order `CC, CD, DC, DD` and A's qubit
//! first.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matrix_function_hermitian, tensor_product, ComplexMatrix, StateVector};

/// Classical prisoner's-dilemma constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdPayoffs {
    /// reward
    pub r: f64,
    /// sucker
    pub s: f64,
    /// temptation
    pub t: f64,
    /// punishment
    pub p: f64,
}

impl Default for PdPayoffs {
    fn default() -> Self {
        PdPayoffs { r: 3.0, s: 0.0, t: 5.0, p: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EwlSpec {
    pub payoffs: PdPayoffs,
    /// Entanglement, in `[0, π/2]`.
    pub gamma: f64,
}

impl EwlSpec {
    pub fn new(payoffs: PdPayoffs, gamma: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma {gamma} outside [0, π/2]")));
        }
        Ok(EwlSpec { payoffs, gamma: gamma.min(FRAC_PI_2) })
    }

    pub fn maximally_entangled(payoffs: PdPayoffs) -> Self {
        EwlSpec { payoffs, gamma: FRAC_PI_2 }
    }
}

/// Two-parameter local strategy `U(θ, φ)`, `θ ∈ [0, π]`, `φ ∈ [0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EwlStrategy {
    pub theta: f64,
    pub phi: f64,
}

impl EwlStrategy {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(Error::InvalidParameter(format!("strategy (θ={theta}, φ={phi}) out of range")));
        }
        Ok(EwlStrategy { theta, phi })
    }

    /// `Ĉ = U(0, 0)`
    pub fn cooperate() -> Self {
        EwlStrategy { theta: 0.0, phi: 0.0 }
    }

    /// `D̂ = U(π, 0)`
    pub fn defect() -> Self {
        EwlStrategy { theta: PI, phi: 0.0 }
    }

    /// `Q̂ = U(0, π/2)`
    pub fn quantum() -> Self {
        EwlStrategy { theta: 0.0, phi: FRAC_PI_2 }
    }

    fn entries(&self) -> [[C64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        [
            [C64::from_polar(c, self.phi), C64::new(s, 0.0)],
            [C64::new(-s, 0.0), C64::from_polar(c, -self.phi)],
        ]
    }

    /// `[[e^{iφ} cos θ/2, sin θ/2], [−sin θ/2, e^{−iφ} cos θ/2]]`
    pub fn unitary(&self) -> ComplexMatrix {
        let m = self.entries();
        ComplexMatrix::from_fn(2, |i, j| m[i][j])
    }
}

/// `J = exp(iγ D⊗D / 2)`
pub fn entangler(gamma: f64) -> ComplexMatrix {
    let d = EwlStrategy::defect().unitary();
    matrix_function_hermitian(&tensor_product(&d, &d), |l| C64::new(0.0, gamma * l / 2.0).exp())
        .expect("D⊗D is real symmetric")
}

/// Precomputed gate data for repeated payoff evaluation at one `γ`.
#[derive(Clone, Debug)]
pub struct EwlGame {
    spec: EwlSpec,
    j_dag: [[C64; 4]; 4],
    /// `J|CC⟩` reshaped to a 2x2 grid (A index, B index).
    psi0: [[C64; 2]; 2],
}

impl EwlGame {
    pub fn new(spec: EwlSpec) -> Self {
        let j = entangler(spec.gamma);
        let jd = j.adjoint();
        let mut j_dag = [[C64::new(0.0, 0.0); 4]; 4];
        for (r, row) in j_dag.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = jd.get(r, c);
            }
        }
        let psi0 = [[j.get(0, 0), j.get(1, 0)], [j.get(2, 0), j.get(3, 0)]];
        EwlGame { spec, j_dag, psi0 }
    }

    pub fn spec(&self) -> &EwlSpec {
        &self.spec
    }

    fn final_amplitudes(&self, ua: &[[C64; 2]; 2], ub: &[[C64; 2]; 2]) -> [C64; 4] {
        // (U_A ⊗ U_B) ψ₀ is U_A Ψ U_Bᵀ on the reshaped grid
        let w: [[C64; 2]; 2] =
            std::array::from_fn(|i| std::array::from_fn(|l| ua[i][0] * self.psi0[0][l] + ua[i][1] * self.psi0[1][l]));
        let mut v = [C64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for k in 0..2 {
                v[2 * i + k] = w[i][0] * ub[k][0] + w[i][1] * ub[k][1];
            }
        }
        let mut out = [C64::new(0.0, 0.0); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.j_dag[r][c] * v[c]).sum();
        }
        out
    }

    fn payoffs_from(&self, amp: &[C64; 4]) -> (f64, f64) {
        let [cc, cd, dc, dd] = amp.map(|z| z.norm_sqr());
        let PdPayoffs { r, s, t, p } = self.spec.payoffs;
        (r * cc + p * dd + t * dc + s * cd, r * cc + p * dd + t * cd + s * dc)
    }

    /// Outcome probabilities `(CC, CD, DC, DD)`.
    pub fn probabilities(&self, sa: &EwlStrategy, sb: &EwlStrategy) -> [f64; 4] {
        self.final_amplitudes(&sa.entries(), &sb.entries()).map(|z| z.norm_sqr())
    }

    pub fn final_state(&self, sa: &EwlStrategy, sb: &EwlStrategy) -> StateVector {
        let amp = self.final_amplitudes(&sa.entries(), &sb.entries());
        StateVector::normalized(amp.to_vec()).expect("unitary evolution of a unit vector")
    }

    pub fn payoffs(&self, sa: &EwlStrategy, sb: &EwlStrategy) -> (f64, f64) {
        self.payoffs_from(&self.final_amplitudes(&sa.entries(), &sb.entries()))
    }
}

/// `|Ψ_f⟩ = J†(U_A ⊗ U_B)J|CC⟩`, built from full 4x4 operators.
pub fn ewl_final_state(spec: &EwlSpec, sa: &EwlStrategy, sb: &EwlStrategy) -> StateVector {
    let j = entangler(spec.gamma);
    let local = tensor_product(&sa.unitary(), &sb.unitary());
    let op = &(&j.adjoint() * &local) * &j;
    let out = op.apply(&StateVector::basis(4, 0)).expect("4-dim operator");
    StateVector::normalized(out.amplitudes()).expect("unitary evolution of a unit vector")
}

/// Expected payoffs `(P_A, P_B)`; B's swaps the roles of `t` and `s`.
pub fn ewl_payoffs(spec: &EwlSpec, sa: &EwlStrategy, sb: &EwlStrategy) -> (f64, f64) {
    let psi = ewl_final_state(spec, sa, sb);
    let PdPayoffs { r, s, t, p } = spec.payoffs;
    let [cc, cd, dc, dd] = [0, 1, 2, 3].map(|k| psi.probability(k));
    (r * cc + p * dd + t * dc + s * cd, r * cc + p * dd + t * cd + s * dc)
}

/// Evenly spaced strategy grid: `resolution` values of θ in `[0, π]` times
/// `resolution` values of φ in `[0, π/2]`, θ-major.
pub fn strategy_grid(resolution: usize) -> Vec<EwlStrategy> {
    let step = |k: usize, hi: f64| if resolution == 1 { 0.0 } else { hi * k as f64 / (resolution - 1) as f64 };
    (0..resolution)
        .flat_map(|a| (0..resolution).map(move |b| EwlStrategy { theta: step(a, PI), phi: step(b, FRAC_PI_2) }))
        .collect()
}

/// Unilateral gains at or below this do not break an equilibrium.
pub const EWL_SCAN_TOL: f64 = 1e-6;
pub const MIN_EWL_RESOLUTION: usize = 32;

/// Equilibrium profile found on the grid. Grid points with the same operator
/// (every `U(π, φ)` equals `D̂`) are merged, and `cells` counts them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EwlEquilibrium {
    pub a: EwlStrategy,
    pub b: EwlStrategy,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub cells: usize,
}

/// Index of the first grid strategy with the same operator, per strategy.
fn operator_classes(grid: &[EwlStrategy]) -> Vec<usize> {
    let ops: Vec<[[C64; 2]; 2]> = grid.iter().map(EwlStrategy::entries).collect();
    let same = |x: &[[C64; 2]; 2], y: &[[C64; 2]; 2]| {
        (0..2).all(|i| (0..2).all(|j| (x[i][j] - y[i][j]).norm() < 1e-9))
    };
    let mut reps: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(grid.len());
    for (k, op) in ops.iter().enumerate() {
        match reps.iter().find(|&&r| same(&ops[r], op)) {
            Some(&r) => class.push(r),
            None => {
                reps.push(k);
                class.push(k);
            }
        }
    }
    class
}

/// Grid search for profiles where neither player gains more than
/// [`EWL_SCAN_TOL`] by any unilateral grid deviation.
///
/// The protocol is symmetric under exchanging the players (`J` and `|CC⟩`
/// are swap-invariant, and B's payoff is A's with `t` and `s` exchanged), so
/// `P_B(a, b) = P_A(b, a)` and one sweep over A's best replies determines
/// B's as well.
pub fn ewl_nash_scan(spec: &EwlSpec, resolution: usize) -> Result<Vec<EwlEquilibrium>> {
    if resolution < MIN_EWL_RESOLUTION {
        return Err(Error::InvalidParameter(format!("grid resolution {resolution} < {MIN_EWL_RESOLUTION}")));
    }
    let game = EwlGame::new(*spec);
    let grid = strategy_grid(resolution);
    let ops: Vec<[[C64; 2]; 2]> = grid.iter().map(EwlStrategy::entries).collect();
    // best_replies[b] = A's near-optimal replies to B playing grid[b]
    let best_replies: Vec<Vec<(usize, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|b| {
            let column: Vec<f64> =
                ops.iter().map(|ua| game.payoffs_from(&game.final_amplitudes(ua, &ops[b])).0).collect();
            let best = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            column.into_iter().enumerate().filter(|(_, v)| *v >= best - EWL_SCAN_TOL).collect()
        })
        .collect();
    let is_reply = |reply: usize, to: usize| best_replies[to].iter().any(|&(k, _)| k == reply);

    let class = operator_classes(&grid);
    let mut merged: Vec<((usize, usize), EwlEquilibrium)> = Vec::new();
    for (b, replies) in best_replies.iter().enumerate() {
        for &(a, _) in replies {
            if !is_reply(b, a) {
                continue;
            }
            let key = (class[a], class[b]);
            if let Some((_, eq)) = merged.iter_mut().find(|(k, _)| *k == key) {
                eq.cells += 1;
                continue;
            }
            let (sa, sb) = (grid[key.0], grid[key.1]);
            let (payoff_a, payoff_b) = game.payoffs(&sa, &sb);
            merged.push((key, EwlEquilibrium { a: sa, b: sb, payoff_a, payoff_b, cells: 1 }));
        }
    }
    merged.sort_by_key(|(k, _)| *k);
    Ok(merged.into_iter().map(|(_, e)| e).collect())
}

/// One row of a payoff surface over `(θ_A, θ_B)` at fixed phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

pub fn ewl_payoff_surface(spec: &EwlSpec, phi_a: f64, phi_b: f64, resolution: usize) -> Result<Vec<SurfacePoint>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("surface needs at least 2 points per axis".into()));
    }
    let game = EwlGame::new(*spec);
    let thetas: Vec<f64> = (0..resolution).map(|k| PI * k as f64 / (resolution - 1) as f64).collect();
    let mut out = Vec::with_capacity(resolution * resolution);
    for &ta in &thetas {
        for &tb in &thetas {
            let sa = EwlStrategy::new(ta, phi_a)?;
            let sb = EwlStrategy::new(tb, phi_b)?;
            let (payoff_a, payoff_b) = game.payoffs(&sa, &sb);
            out.push(SurfacePoint { x: ta, y: tb, payoff_a, payoff_b });
        }
    }
    Ok(out)
}

/// Population fitnesses `(W(incumbent), W(mutant))` when a fraction
/// `epsilon` of mutants enters, with `W(s) = (1−ε)P(s, incumbent) + εP(s, mutant)`.
pub fn ewl_invasion_fitness(
    spec: &EwlSpec,
    mutant: &EwlStrategy,
    incumbent: &EwlStrategy,
    epsilon: f64,
) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!("mutant fraction {epsilon} outside (0, 1/2)")));
    }
    let game = EwlGame::new(*spec);
    let w = |s: &EwlStrategy| {
        (1.0 - epsilon) * game.payoffs(s, incumbent).0 + epsilon * game.payoffs(s, mutant).0
    };
    Ok((w(incumbent), w(mutant)))
}

/// Bisects on `φ ∈ [lo, hi]` for the point where mutants `U(0, φ)` stop
/// losing against an incumbent `D̂` population.
pub fn invasion_threshold(spec: &EwlSpec, epsilon: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let advantage = |phi: f64| -> Result<f64> {
        let (wi, wm) = ewl_invasion_fitness(spec, &EwlStrategy::new(0.0, phi)?, &EwlStrategy::defect(), epsilon)?;
        Ok(wm - wi)
    };
    let (mut lo, mut hi) = (lo, hi);
    let (f_lo, f_hi) = (advantage(lo)?, advantage(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidParameter(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if advantage(mid)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
