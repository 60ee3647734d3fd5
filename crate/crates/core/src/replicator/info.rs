//! Entropy measures over strategy distributions.
//!
//! Shannon entropies and the joint/conditional/mutual family are in nats.
//! [`relative_entropy`] is in bits, as it is usually quoted for comparing two
//! observers' frequency estimates.

use serde::Serialize;

use super::{check_square, field, FrequencyVector};
use crate::error::{Error, Result};

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// `−Σ x_i ln x_i` with `0 ln 0 = 0`.
pub fn shannon_entropy(x: &[f64]) -> f64 {
    -x.iter().map(|&p| plogp(p)).sum::<f64>()
}

/// Entropies of a joint strategy distribution `x_ij` (A plays `i`, B plays
/// `j`), in nats.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameEntropies {
    pub h_a: f64,
    pub h_b: f64,
    pub joint: f64,
    pub a_given_b: f64,
    pub b_given_a: f64,
    pub mutual: f64,
    pub unit: &'static str,
}

pub fn game_entropy_suite(joint: &[Vec<f64>]) -> Result<GameEntropies> {
    let n = joint.len();
    let m = joint.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || joint.iter().any(|r| r.len() != m) {
        return Err(Error::dims("rectangular non-empty joint table", format!("{n} rows")));
    }
    if joint.iter().flatten().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidDistribution("joint table has negative or non-finite entries".into()));
    }
    let total: f64 = joint.iter().flatten().sum();
    if (total - 1.0).abs() > super::FREQUENCY_SUM_TOL {
        return Err(Error::InvalidDistribution(format!("joint table sums to {total}")));
    }
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let pb: Vec<f64> = (0..m).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let h_a = shannon_entropy(&pa);
    let h_b = shannon_entropy(&pb);
    let h_ab = -joint.iter().flatten().map(|&p| plogp(p)).sum::<f64>();
    Ok(GameEntropies {
        h_a,
        h_b,
        joint: h_ab,
        a_given_b: h_ab - h_b,
        b_given_a: h_ab - h_a,
        mutual: h_a + h_b - h_ab,
        unit: "nats",
    })
}

/// `Σ x_i log₂ x_i − Σ x_i log₂ y_i` in bits; `+∞` when `x` puts mass where
/// `y` has none.
pub fn relative_entropy(x: &FrequencyVector, y: &FrequencyVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::dims(x.len(), y.len()));
    }
    let mut d = 0.0;
    for (&xi, &yi) in x.as_slice().iter().zip(y.as_slice()) {
        if xi > 0.0 {
            if yi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += xi * (xi / yi).log2();
        }
    }
    Ok(d.max(0.0))
}

/// `dH/dt = −Σ (ln x_i + 1) ẋ_i` along the replicator flow, for interior `x`.
pub fn shannon_entropy_rate(a: &[Vec<f64>], x: &FrequencyVector) -> Result<f64> {
    check_square(a, x.len())?;
    if let Some(index) = x.as_slice().iter().position(|&v| v <= 0.0) {
        return Err(Error::Boundary { index });
    }
    let xs = x.as_slice();
    let v = field(a, xs);
    Ok(-xs.iter().zip(&v).map(|(xi, vi)| (xi.ln() + 1.0) * vi).sum::<f64>())
}
