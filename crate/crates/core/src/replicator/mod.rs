//! Replicator dynamics on the probability simplex.
//!
//! [`replicator_rhs`] is the vector field `ẋ_i = [(Ax)_i − xᵀAx] x_i`;
//! [`integrate`] runs it with fixed-step RK4. The commutator (Lax) form of
//! the same flow lives in [`lax`], and entropy measures over strategy
//! distributions in [`info`].

pub mod info;
pub mod lax;

use serde::{Deserialize, Serialize};

use crate::classical::check_simplex;
use crate::error::{Error, Result};
use crate::format::fmt_f64;

pub use info::{game_entropy_suite, relative_entropy, shannon_entropy, shannon_entropy_rate, GameEntropies};
pub use lax::{lax_decomposition, lax_rhs, FrequencyMatrix, LaxDecomposition};

/// Tolerance on `Σ x_i = 1` for frequency vectors.
pub const FREQUENCY_SUM_TOL: f64 = 1e-10;
/// Default RK4 step.
pub const DEFAULT_DT: f64 = 1e-3;
/// Negative components smaller than this in magnitude are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-9;
/// Largest `|Σ x − 1|` tolerated after a step before aborting.
pub const DRIFT_TOL: f64 = 1e-6;

/// Relative frequencies of the strategies in a population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>")]
pub struct FrequencyVector(Vec<f64>);

impl TryFrom<Vec<f64>> for FrequencyVector {
    type Error = Error;

    fn try_from(x: Vec<f64>) -> Result<Self> {
        FrequencyVector::new(x)
    }
}

impl FrequencyVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        check_simplex(&x, FREQUENCY_SUM_TOL)?;
        Ok(FrequencyVector(x))
    }

    pub fn vertex(n: usize, k: usize) -> Self {
        assert!(k < n, "vertex index out of range");
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        FrequencyVector(x)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        FrequencyVector(vec![1.0 / n as f64; n])
    }

    /// Two-strategy population `(x, 1 − x)`.
    pub fn binary(x: f64) -> Result<Self> {
        Self::new(vec![x, 1.0 - x])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn check_square(a: &[Vec<f64>], n: usize) -> Result<()> {
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::dims(format!("{n}x{n} payoff matrix"), format!("{} rows", a.len())));
    }
    Ok(())
}

fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum()).collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `f_i(x) = (Ax)_i`
pub fn fitness(a: &[Vec<f64>], x: &FrequencyVector) -> Result<Vec<f64>> {
    check_square(a, x.len())?;
    Ok(mat_vec(a, x.as_slice()))
}

/// `⟨f(x)⟩ = xᵀAx`
pub fn mean_fitness(a: &[Vec<f64>], x: &FrequencyVector) -> Result<f64> {
    Ok(dot(x.as_slice(), &fitness(a, x)?))
}

fn field(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let f = mat_vec(a, x);
    let mean = dot(x, &f);
    f.iter().zip(x).map(|(fi, xi)| (fi - mean) * xi).collect()
}

/// `ẋ_i = [(Ax)_i − xᵀAx] x_i`
pub fn replicator_rhs(a: &[Vec<f64>], x: &FrequencyVector) -> Result<Vec<f64>> {
    check_square(a, x.len())?;
    Ok(field(a, x.as_slice()))
}

/// Two-population field: `ẋ_i = [(Ay)_i − xᵀAy] x_i`, `ẏ_j = [(Bx)_j − yᵀBx] y_j`
/// with `A` of shape `n x m` and `B` of shape `m x n`.
pub fn asymmetric_rhs(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    x: &FrequencyVector,
    y: &FrequencyVector,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (n, m) = (x.len(), y.len());
    if a.len() != n || a.iter().any(|r| r.len() != m) {
        return Err(Error::dims(format!("A: {n}x{m}"), format!("{} rows", a.len())));
    }
    if b.len() != m || b.iter().any(|r| r.len() != n) {
        return Err(Error::dims(format!("B: {m}x{n}"), format!("{} rows", b.len())));
    }
    let (x, y) = (x.as_slice(), y.as_slice());
    let fa = mat_vec(a, y);
    let fb = mat_vec(b, x);
    let ma = dot(x, &fa);
    let mb = dot(y, &fb);
    Ok((
        fa.iter().zip(x).map(|(f, xi)| (f - ma) * xi).collect(),
        fb.iter().zip(y).map(|(f, yj)| (f - mb) * yj).collect(),
    ))
}

/// Sampled solution of the replicator equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicatorTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<FrequencyVector>,
    /// Shannon entropy of each state, in nats.
    pub entropy: Vec<f64>,
}

impl ReplicatorTrajectory {
    pub fn last(&self) -> &FrequencyVector {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV with header `t,x_1..x_n,entropy`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, FrequencyVector::len);
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x_{i}"));
        }
        out.push_str(",entropy\n");
        for ((t, x), h) in self.times.iter().zip(&self.states).zip(&self.entropy) {
            out.push_str(&fmt_f64(*t));
            for xi in x.as_slice() {
                out.push(',');
                out.push_str(&fmt_f64(*xi));
            }
            out.push(',');
            out.push_str(&fmt_f64(*h));
            out.push('\n');
        }
        out
    }

    /// Keeps every `stride`-th sample plus the final one.
    pub fn thinned(&self, stride: usize) -> Self {
        let stride = stride.max(1);
        let last = self.times.len() - 1;
        let keep: Vec<usize> = (0..=last).filter(|&k| k % stride == 0 || k == last).collect();
        ReplicatorTrajectory {
            times: keep.iter().map(|&k| self.times[k]).collect(),
            states: keep.iter().map(|&k| self.states[k].clone()).collect(),
            entropy: keep.iter().map(|&k| self.entropy[k]).collect(),
        }
    }
}

fn rk4_step(a: &[Vec<f64>], x: &[f64], h: f64) -> Vec<f64> {
    let axpy = |s: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + s * ki).collect() };
    let k1 = field(a, x);
    let k2 = field(a, &axpy(h / 2.0, &k1));
    let k3 = field(a, &axpy(h / 2.0, &k2));
    let k4 = field(a, &axpy(h, &k3));
    (0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// Projects an RK4 output back onto the simplex, or reports why it can't.
fn renormalize(mut x: Vec<f64>, step: usize) -> Result<Vec<f64>> {
    for (i, xi) in x.iter_mut().enumerate() {
        if !xi.is_finite() {
            return Err(Error::Unstable { step, reason: format!("component {i} is not finite") });
        }
        if *xi < 0.0 {
            if *xi < -CLAMP_TOL {
                return Err(Error::Unstable { step, reason: format!("component {i} = {xi:e} left the simplex") });
            }
            *xi = 0.0;
        }
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > DRIFT_TOL {
        return Err(Error::Unstable { step, reason: format!("simplex drift {:e}", sum - 1.0) });
    }
    x.iter_mut().for_each(|xi| *xi /= sum);
    Ok(x)
}

/// Fixed-step RK4 integration from `x0` over `[0, t_end]`. The last step is
/// shortened so the trajectory ends exactly at `t_end`.
pub fn integrate(a: &[Vec<f64>], x0: &FrequencyVector, t_end: f64, dt: f64) -> Result<ReplicatorTrajectory> {
    check_square(a, x0.len())?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be non-negative, got {t_end}")));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut entropy = Vec::with_capacity(steps + 1);
    let mut x = x0.as_slice().to_vec();
    times.push(0.0);
    entropy.push(shannon_entropy(&x));
    states.push(FrequencyVector(x.clone()));
    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * dt;
        let h = if step == steps { t_end - t_prev } else { dt };
        x = renormalize(rk4_step(a, &x, h), step)?;
        times.push(if step == steps { t_end } else { step as f64 * dt });
        entropy.push(shannon_entropy(&x));
        states.push(FrequencyVector(x.clone()));
    }
    Ok(ReplicatorTrajectory { times, states, entropy })
}
