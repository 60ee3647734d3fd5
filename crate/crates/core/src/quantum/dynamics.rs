use num_complex::Complex64 as C64;
use serde::Serialize;

use super::entropy::spectral_entropy;
use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::linalg::{commutator, matrix_function_hermitian, ComplexMatrix, HERMITIAN_TOL, UNITARY_TOL};

pub const DEFAULT_HBAR: f64 = 1.0;

fn check_hamiltonian(h: &ComplexMatrix, dim: usize, hbar: f64) -> Result<()> {
    if h.dim() != dim {
        return Err(Error::dims(dim, h.dim()));
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

fn rhs(h: &ComplexMatrix, rho: &ComplexMatrix, hbar: f64) -> ComplexMatrix {
    commutator(h, rho).expect("dimensions checked").scale(C64::new(0.0, -1.0 / hbar))
}

/// `dρ/dt = (−i/ℏ)[H, ρ]`
pub fn von_neumann_rhs(h: &ComplexMatrix, rho: &DensityMatrix, hbar: f64) -> Result<ComplexMatrix> {
    check_hamiltonian(h, rho.dim(), hbar)?;
    Ok(rhs(h, rho.matrix(), hbar))
}

/// `exp(−iHt/ℏ)`
pub fn unitary_propagator(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    check_hamiltonian(h, h.dim(), hbar)?;
    matrix_function_hermitian(h, |l| C64::new(0.0, -l * t / hbar).exp())
}

/// `UρU†`
pub fn evolve_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::dims(rho.dim(), u.dim()));
    }
    let deviation = u.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    DensityMatrix::new(&(u * rho.matrix()) * &u.adjoint())
}

/// Sampled solution of the von Neumann equation.
#[derive(Clone, Debug, Serialize)]
pub struct QuantumTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexMatrix>,
    /// von Neumann entropy per sample, nats.
    pub entropy: Vec<f64>,
    pub purity: Vec<f64>,
    pub trace: Vec<f64>,
}

impl QuantumTrajectory {
    /// CSV with columns `t,S,purity` followed by `re_i_j,im_i_j` for each
    /// requested entry.
    pub fn to_csv(&self, entries: &[(usize, usize)]) -> String {
        let mut out = String::from("t,S,purity");
        for (i, j) in entries {
            out.push_str(&format!(",re_{i}_{j},im_{i}_{j}"));
        }
        out.push('\n');
        for k in 0..self.times.len() {
            let mut cols = vec![fmt_f64(self.times[k]), fmt_f64(self.entropy[k]), fmt_f64(self.purity[k])];
            for &(i, j) in entries {
                let z = self.states[k].get(i, j);
                cols.push(fmt_f64(z.re));
                cols.push(fmt_f64(z.im));
            }
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    }

    /// Keeps every `stride`-th sample plus the final one.
    pub fn thinned(&self, stride: usize) -> Self {
        let stride = stride.max(1);
        let last = self.times.len() - 1;
        let keep: Vec<usize> = (0..=last).filter(|&k| k % stride == 0 || k == last).collect();
        QuantumTrajectory {
            times: keep.iter().map(|&k| self.times[k]).collect(),
            states: keep.iter().map(|&k| self.states[k].clone()).collect(),
            entropy: keep.iter().map(|&k| self.entropy[k]).collect(),
            purity: keep.iter().map(|&k| self.purity[k]).collect(),
            trace: keep.iter().map(|&k| self.trace[k]).collect(),
        }
    }
}

/// Fixed-step RK4 integration of the von Neumann equation over `[0, t_end]`.
pub fn evolve_von_neumann(
    h: &ComplexMatrix,
    rho0: &DensityMatrix,
    hbar: f64,
    t_end: f64,
    dt: f64,
) -> Result<QuantumTrajectory> {
    check_hamiltonian(h, rho0.dim(), hbar)?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("need dt > 0 and t_end >= 0, got dt={dt}, t_end={t_end}")));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut traj = QuantumTrajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        entropy: Vec::with_capacity(steps + 1),
        purity: Vec::with_capacity(steps + 1),
        trace: Vec::with_capacity(steps + 1),
    };
    let mut record = |t: f64, rho: &ComplexMatrix| -> Result<()> {
        traj.times.push(t);
        traj.entropy.push(spectral_entropy(rho)?);
        traj.purity.push((rho * rho).trace().re);
        traj.trace.push(rho.trace().re);
        traj.states.push(rho.clone());
        Ok(())
    };
    let mut rho = rho0.matrix().clone();
    record(0.0, &rho)?;
    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * dt;
        let dt_k = if step == steps { t_end - t_prev } else { dt };
        let k1 = rhs(h, &rho, hbar);
        let k2 = rhs(h, &(&rho + &k1.scale_real(dt_k / 2.0)), hbar);
        let k3 = rhs(h, &(&rho + &k2.scale_real(dt_k / 2.0)), hbar);
        let k4 = rhs(h, &(&rho + &k3.scale_real(dt_k)), hbar);
        let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_real(2.0);
        rho = &rho + &incr.scale_real(dt_k / 6.0);
        if rho.inner().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Unstable { step, reason: "non-finite density matrix".into() });
        }
        // keep exactly Hermitian; the deviation is pure round-off
        rho = (&rho + &rho.adjoint()).scale_real(0.5);
        record(if step == steps { t_end } else { step as f64 * dt }, &rho)?;
    }
    Ok(traj)
}
