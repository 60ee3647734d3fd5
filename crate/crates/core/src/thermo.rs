//! Canonical (Gibbs) ensembles over a discrete energy spectrum and the
//! entropy identities that follow from them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::replicator::{shannon_entropy, FrequencyVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct GibbsEnsemble {
    energies: Vec<f64>,
    beta: f64,
}

#[derive(Deserialize)]
struct RawEnsemble {
    energies: Vec<f64>,
    beta: f64,
}

impl TryFrom<RawEnsemble> for GibbsEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        GibbsEnsemble::new(raw.energies, raw.beta)
    }
}

impl GibbsEnsemble {
    pub fn new(energies: Vec<f64>, beta: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidParameter("need at least one energy level".into()));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter(format!("energy {e} is not finite")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
        }
        Ok(GibbsEnsemble { energies, beta })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `τ = 1/β`; infinite at `β = 0`.
    pub fn temperature(&self) -> f64 {
        if self.beta == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.beta
        }
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        GibbsEnsemble::new(self.energies.clone(), beta)
    }

    fn min_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Unnormalized weights `e^{−β(E_i − E_min)}` and their sum.
    fn shifted_weights(&self) -> (Vec<f64>, f64) {
        let e0 = self.min_energy();
        let w: Vec<f64> = self.energies.iter().map(|e| (-self.beta * (e - e0)).exp()).collect();
        let z = w.iter().sum();
        (w, z)
    }

    fn probabilities(&self) -> Vec<f64> {
        let (w, z) = self.shifted_weights();
        w.into_iter().map(|v| v / z).collect()
    }
}

/// Boltzmann weights `e^{−βE_i} / Z`.
pub fn gibbs_state(ens: &GibbsEnsemble) -> FrequencyVector {
    FrequencyVector::new(ens.probabilities()).expect("normalized Boltzmann weights")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionData {
    pub log_z: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
}

fn moments(p: &[f64], e: &[f64]) -> (f64, f64, f64) {
    let mean: f64 = p.iter().zip(e).map(|(p, e)| p * e).sum();
    let central = |k: i32| p.iter().zip(e).map(|(p, e)| p * (e - mean).powi(k)).sum::<f64>();
    (mean, central(2), central(3))
}

/// `ln Z`, `⟨E⟩` and `⟨ΔE²⟩`.
pub fn partition_data(ens: &GibbsEnsemble) -> PartitionData {
    let (w, z) = ens.shifted_weights();
    let log_z = z.ln() - ens.beta * ens.min_energy();
    let p: Vec<f64> = w.iter().map(|v| v / z).collect();
    let (mean_energy, energy_variance, _) = moments(&p, &ens.energies);
    PartitionData { log_z, mean_energy, energy_variance }
}

/// `(−Σ p ln p, ln Z + β⟨E⟩)`, in nats.
pub fn entropy_identity_check(ens: &GibbsEnsemble) -> (f64, f64) {
    let d = partition_data(ens);
    (shannon_entropy(&ens.probabilities()), d.log_z + ens.beta * d.mean_energy)
}

/// An exact value next to its finite-difference estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Derivative {
    pub analytic: f64,
    pub finite_difference: f64,
}

impl Derivative {
    pub fn error(&self) -> f64 {
        (self.analytic - self.finite_difference).abs()
    }
}

/// Entropy derivatives with respect to `⟨E⟩` and `β`. The `⟨E⟩` derivatives
/// go through `β` by the chain rule and are `None` when the energy variance
/// vanishes, since `⟨E⟩` then does not move with `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyDerivatives {
    /// `∂S/∂⟨E⟩ = β`
    pub ds_dmean: Option<Derivative>,
    /// `∂²S/∂⟨E⟩² = ∂β/∂⟨E⟩ = −1/⟨ΔE²⟩`
    pub d2s_dmean2: Option<Derivative>,
    /// `∂S/∂β = −β⟨ΔE²⟩`
    pub ds_dbeta: Derivative,
    /// `∂²S/∂β² = ∂⟨E⟩/∂β + β ∂²⟨E⟩/∂β² = −⟨ΔE²⟩ + β⟨ΔE³⟩`
    pub d2s_dbeta2: Derivative,
}

/// Variances below this count as a degenerate (fluctuation-free) spectrum.
pub const ZERO_VARIANCE_TOL: f64 = 1e-300;

/// `1e-4·max(β, 1)`, capped at `β/10`.
pub fn default_step(beta: f64) -> f64 {
    (1e-4 * beta.max(1.0)).min(beta / 10.0)
}

pub fn entropy_derivatives(ens: &GibbsEnsemble, h: f64) -> Result<EntropyDerivatives> {
    let beta = ens.beta;
    if beta <= 0.0 {
        return Err(Error::InvalidParameter("entropy derivatives need beta > 0".into()));
    }
    if !(h > 0.0 && h <= beta / 10.0) {
        return Err(Error::InvalidParameter(format!("step {h} outside (0, beta/10]")));
    }
    // S = ln Z' + β(⟨E⟩ − E_min) with Z' the shifted sum; avoids the
    // cancellation between ln Z and β⟨E⟩
    let e_min = ens.min_energy();
    let at = |b: f64| -> Result<(f64, f64)> {
        let (w, z) = ens.with_beta(b)?.shifted_weights();
        let mean: f64 = w.iter().zip(&ens.energies).map(|(w, e)| w * e).sum::<f64>() / z;
        Ok((z.ln() + b * (mean - e_min), mean))
    };
    let (s_m, e_m) = at(beta - h)?;
    let (s_0, e_0) = at(beta)?;
    let (s_p, e_p) = at(beta + h)?;
    let s1 = (s_p - s_m) / (2.0 * h);
    let s2 = (s_p - 2.0 * s_0 + s_m) / (h * h);
    let e1 = (e_p - e_m) / (2.0 * h);
    let e2 = (e_p - 2.0 * e_0 + e_m) / (h * h);

    let (_, var, mu3) = moments(&ens.probabilities(), &ens.energies);
    let ds_dbeta = Derivative { analytic: -beta * var, finite_difference: s1 };
    let d2s_dbeta2 = Derivative { analytic: -var + beta * mu3, finite_difference: s2 };
    let (ds_dmean, d2s_dmean2) = if var <= ZERO_VARIANCE_TOL || e1 == 0.0 {
        (None, None)
    } else {
        (
            Some(Derivative { analytic: beta, finite_difference: s1 / e1 }),
            Some(Derivative { analytic: -1.0 / var, finite_difference: (s2 - s1 * e2 / e1) / (e1 * e1) }),
        )
    };
    Ok(EntropyDerivatives { ds_dmean, d2s_dmean2, ds_dbeta, d2s_dbeta2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub log_z: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
    pub entropy: f64,
}

/// Partition data and entropy at each `β`, in input order.
pub fn beta_sweep(energies: &[f64], betas: &[f64]) -> Result<Vec<SweepRow>> {
    betas
        .par_iter()
        .map(|&beta| {
            let ens = GibbsEnsemble::new(energies.to_vec(), beta)?;
            let d = partition_data(&ens);
            Ok(SweepRow {
                beta,
                log_z: d.log_z,
                mean_energy: d.mean_energy,
                energy_variance: d.energy_variance,
                entropy: d.log_z + beta * d.mean_energy,
            })
        })
        .collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("beta,logZ,meanE,varE,S\n");
    for r in rows {
        let cols = [r.beta, r.log_z, r.mean_energy, r.energy_variance, r.entropy].map(fmt_f64);
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}
